"""Embedded transactional key-value store.

A thin namespaced layer over sqlite3: values are JSON documents keyed
by (namespace, key). Every mutation goes through an explicit batch that
commits atomically, so an acknowledged write is on disk before the
caller hears about it. Desk-scale deployments read whole namespaces;
there are no secondary indexes.
"""

from __future__ import annotations

import json
import os
import sqlite3
import threading
from contextlib import contextmanager
from typing import Any, Iterator

ENV_STORAGE_PATH = "CAUSEWAY_STORAGE_PATH"

_SYNCHRONOUS = {"full": "FULL", "normal": "NORMAL"}


def resolve_storage_path(configured: str) -> str:
    """Environment variable wins over the configured path."""
    return os.environ.get(ENV_STORAGE_PATH, configured)


class StorageUnavailableError(RuntimeError):
    pass


class Store:
    """Namespaced JSON documents with atomic multi-key batches.

    ``synchronous`` is "full" (fsync on every commit, the durability
    default) or "normal" (WAL-safe against process crash, faster; can
    lose the tail on power loss). Connections are per-instance and
    guarded by a lock; sqlite serializes writers, which provides the
    single-writer-per-task contract.
    """

    def __init__(self, path: str, synchronous: str = "full"):
        if synchronous not in _SYNCHRONOUS:
            raise ValueError(f"synchronous must be one of {sorted(_SYNCHRONOUS)}, got {synchronous!r}")
        self._path = path
        try:
            self._conn = sqlite3.connect(path, check_same_thread=False, timeout=30.0)
        except sqlite3.Error as exc:
            raise StorageUnavailableError(f"cannot open storage at {path!r}: {exc}") from exc
        self._lock = threading.Lock()
        try:
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute(f"PRAGMA synchronous={_SYNCHRONOUS[synchronous]}")
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS kv ("
                " ns TEXT NOT NULL, key TEXT NOT NULL, value TEXT NOT NULL,"
                " PRIMARY KEY (ns, key))"
            )
            self._conn.commit()
        except sqlite3.Error as exc:
            self._conn.close()
            raise StorageUnavailableError(f"cannot initialize storage at {path!r}: {exc}") from exc

    def close(self) -> None:
        self._conn.close()

    def get(self, ns: str, key: str) -> Any | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM kv WHERE ns = ? AND key = ?", (ns, key)
            ).fetchone()
        return None if row is None else json.loads(row[0])

    def exists(self, ns: str, key: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT 1 FROM kv WHERE ns = ? AND key = ?", (ns, key)
            ).fetchone()
        return row is not None

    def items(self, ns: str) -> list[tuple[str, Any]]:
        """All (key, value) pairs in a namespace, key-ordered."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT key, value FROM kv WHERE ns = ? ORDER BY key", (ns,)
            ).fetchall()
        return [(key, json.loads(value)) for key, value in rows]

    def items_prefix(self, ns: str, prefix: str) -> list[tuple[str, Any]]:
        """Key-ordered (key, value) pairs whose key starts with ``prefix``."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT key, value FROM kv WHERE ns = ? AND key >= ? AND key < ? ORDER BY key",
                (ns, prefix, prefix + "￿"),
            ).fetchall()
        return [(key, json.loads(value)) for key, value in rows]

    def keys(self, ns: str) -> list[str]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT key FROM kv WHERE ns = ? ORDER BY key", (ns,)
            ).fetchall()
        return [key for (key,) in rows]

    def count(self, ns: str) -> int:
        with self._lock:
            (n,) = self._conn.execute("SELECT COUNT(*) FROM kv WHERE ns = ?", (ns,)).fetchone()
        return n

    @contextmanager
    def batch(self) -> Iterator["Batch"]:
        """Atomic write scope; the context-manager exit is the commit point."""
        with self._lock:
            self._conn.execute("BEGIN IMMEDIATE")
            try:
                yield Batch(self._conn)
            except BaseException:
                self._conn.rollback()
                raise
            self._conn.commit()


class Batch:
    """Write handle inside an open transaction. Reads through the batch
    see the transaction's own uncommitted writes, so capacity checks and
    the writes they guard are atomic."""

    def __init__(self, conn: sqlite3.Connection):
        self._conn = conn

    def put(self, ns: str, key: str, value: Any) -> None:
        self._conn.execute(
            "INSERT INTO kv (ns, key, value) VALUES (?, ?, ?)"
            " ON CONFLICT (ns, key) DO UPDATE SET value = excluded.value",
            (ns, key, json.dumps(value, sort_keys=True)),
        )

    def delete(self, ns: str, key: str) -> None:
        self._conn.execute("DELETE FROM kv WHERE ns = ? AND key = ?", (ns, key))

    def get(self, ns: str, key: str) -> Any | None:
        row = self._conn.execute(
            "SELECT value FROM kv WHERE ns = ? AND key = ?", (ns, key)
        ).fetchone()
        return None if row is None else json.loads(row[0])

    def exists(self, ns: str, key: str) -> bool:
        row = self._conn.execute(
            "SELECT 1 FROM kv WHERE ns = ? AND key = ?", (ns, key)
        ).fetchone()
        return row is not None

    def items_prefix(self, ns: str, prefix: str) -> list[tuple[str, Any]]:
        rows = self._conn.execute(
            "SELECT key, value FROM kv WHERE ns = ? AND key >= ? AND key < ? ORDER BY key",
            (ns, prefix, prefix + "￿"),
        ).fetchall()
        return [(key, json.loads(value)) for key, value in rows]
