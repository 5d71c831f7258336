"""Shared fixtures: isolated platforms and the scripted funnel replay."""

from __future__ import annotations

import pytest

from causeway import Platform, parse_config

import fixturegen

SIX_TOPICS = [topic for topic, _ in fixturegen.TOPICS]


def make_config(tmp_path, **overrides):
    raw = {
        "storage_path": str(tmp_path / "causeway.db"),
        "synchronous": "normal",  # durability-specific tests opt back into full
        "ingestion": {"topics": SIX_TOPICS},
    }
    raw.update(overrides)
    return parse_config(raw)


@pytest.fixture
def config(tmp_path):
    return make_config(tmp_path)


@pytest.fixture
def platform(config):
    plat = Platform(config)
    yield plat
    plat.close()


def register_workers(platform, worker_ids):
    for worker_id in worker_ids:
        platform.workflow.register_worker(
            worker_id, acceptance_rate=0.99, approved_tasks=6000, quiz_score=0.9
        )


def replay_script(platform, script, corpus_path) -> str:
    """Drive a scripted run end to end through the public API and
    return the id of the funnel-bearing snapshot."""
    platform.ingest_corpus(str(corpus_path))
    register_workers(platform, script["workers"]["phase1"])
    register_workers(platform, script["workers"]["phase2"])
    platform.open_phase1_tasks(script["selected"])

    workflow = platform.workflow
    for pair in script["phase1"]:
        task_id = f"p1-{pair['argument']}"
        for resp in pair["responses"]:
            workflow.submit_phase1(
                task_id,
                resp["worker"],
                outcome_text=resp["outcome"],
                feasibility=resp["feasibility"],
                implicit_text=resp["implicit"],
                rel_ai=resp["rel_ai"],
                rel_io=resp["rel_io"],
                sanity_confirmed=True,
            )
    platform.aggregate_pending("phase1")
    platform.grant_bonuses_pending()
    platform.open_validity_tasks_for_keeps()

    for item in script["phase2_validity"]:
        task_id = f"v-{item['chain']}"
        for vote in item["votes"]:
            workflow.submit_validity(task_id, vote["worker"], vote["vote"])
    platform.aggregate_pending("validity")

    for item in script["phase2_scores"]:
        task_id = f"s-{item['chain']}"
        for entry in item["scores"]:
            workflow.submit_score(task_id, entry["worker"], entry["score"])
    platform.aggregate_pending("score")

    snapshot_id = platform.create_snapshot()
    platform.run_snapshot_funnel(snapshot_id)
    return snapshot_id


@pytest.fixture(scope="session")
def funnel_script():
    return fixturegen.load_script()


@pytest.fixture(scope="session")
def funnel_run(tmp_path_factory, funnel_script):
    """One full scripted run shared by every test that only reads it."""
    root = tmp_path_factory.mktemp("funnel")
    plat = Platform(make_config(root))
    snapshot_id = replay_script(plat, funnel_script, fixturegen.CORPUS_PATH)
    yield plat, snapshot_id
    plat.close()
