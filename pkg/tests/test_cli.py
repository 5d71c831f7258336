"""Command line: every subcommand, output formats, and exit codes.

All tests call main() in-process and drive real state through a shared
sqlite file, so each CLI invocation sees what the previous one wrote.
"""

import yaml
import pytest

from causeway import cli
from causeway.config import load_config
from causeway.platform import Platform

from conftest import register_workers

CSV = (
    "id,topic,claim,premise,stance_label,stance_conf,quality\n"
    "a1,Ban whaling,We should ban whaling,Whales are an endangered species.,Support,0.9,0.8\n"
    "a2,Ban whaling,We should ban whaling,Whaling ships damage marine habitats.,Support,0.9,0.8\n"
    "bad-q,Ban whaling,We should ban whaling,Too thin an argument.,Support,0.9,0.3\n"
    "bad-t,Ban plastic straws,We should ban plastic straws,Straws harm turtles.,Support,0.9,0.8\n"
)

P1 = [f"w{i}" for i in range(1, 6)]
P2 = [f"j{i}" for i in range(1, 6)]


def write_config(tmp_path, **overrides):
    raw = {
        "storage_path": str(tmp_path / "causeway.db"),
        "synchronous": "normal",
        "ingestion": {"topics": ["Ban whaling"]},
    }
    raw.update(overrides)
    path = tmp_path / "causeway.yaml"
    path.write_text(yaml.safe_dump(raw), encoding="utf-8")
    return str(path)


def write_corpus(tmp_path, text=CSV):
    path = tmp_path / "corpus.csv"
    path.write_text(text, encoding="utf-8")
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def open_platform(config_path):
    return Platform(load_config(config_path))


def drive_phase1(config_path, with_validity_votes=True, with_scores=True):
    """Populate the store behind config_path up to (optionally) scored
    chains: a1 feasible with two chains, a2 voted infeasible."""
    platform = open_platform(config_path)
    try:
        register_workers(platform, P1 + P2)
        platform.open_phase1_tasks(["a1", "a2"])
        implicits = [
            "whale stocks recover when hunting stops",
            "fishing fleets switch to other species",
        ]
        for i, worker in enumerate(P1):
            if i < len(implicits):
                platform.workflow.submit_phase1(
                    "p1-a1", worker,
                    outcome_text="the survival of endangered whales",
                    feasibility="CanWrite",
                    implicit_text=implicits[i],
                    rel_ai="cause", rel_io="cause",
                    sanity_confirmed=True,
                )
            else:
                platform.workflow.submit_phase1(
                    "p1-a1", worker,
                    outcome_text="the survival of endangered whales",
                    feasibility="CanWrite" if i == 2 else "CannotWrite",
                    implicit_text="ban enforcement reduces illegal catches" if i == 2 else None,
                    rel_ai="cause" if i == 2 else None,
                    rel_io="cause" if i == 2 else None,
                    sanity_confirmed=True,
                )
            platform.workflow.submit_phase1(
                "p1-a2", worker,
                outcome_text="healthier marine habitats",
                feasibility="CannotWrite",
                sanity_confirmed=True,
            )
        platform.aggregate_pending("phase1")
        platform.open_validity_tasks_for_keeps()
        if with_validity_votes:
            for chain, votes in (
                ("a1-c001", [True] * 5),
                ("a1-c002", [True, True, True, False, False]),
                ("a1-c003", [False] * 5),
            ):
                for judge, vote in zip(P2, votes):
                    platform.workflow.submit_validity(f"v-{chain}", judge, vote)
            platform.aggregate_pending("validity")
            if with_scores:
                for chain, scores in (
                    ("a1-c001", [5, 4, 4, 3, 2]),
                    ("a1-c002", [1, 2, 2, 4, 5]),
                ):
                    for judge, score in zip(P2, scores):
                        platform.workflow.submit_score(f"s-{chain}", judge, score)
                platform.aggregate_pending("score")
    finally:
        platform.close()


@pytest.fixture
def cfg(tmp_path):
    return write_config(tmp_path)


@pytest.fixture
def ingested(tmp_path, cfg, capsys):
    code, _, _ = run(capsys, "--config", cfg, "ingest", "--input", write_corpus(tmp_path))
    assert code == 0
    return cfg


class TestIngest:
    def test_counts_reasons_and_topic_summary(self, tmp_path, cfg, capsys):
        corpus = write_corpus(tmp_path)
        code, out, err = run(capsys, "--config", cfg, "ingest", "--input", corpus)
        assert code == 0 and err == ""
        lines = out.splitlines()
        assert "admitted 2" in lines
        assert "rejected 2" in lines
        assert "  QUALITY_BELOW_MIN 1" in lines
        assert "  TOPIC_NOT_ALLOWED 1" in lines
        assert "topic 'Ban whaling' 2" in lines

    def test_min_quality_override(self, tmp_path, cfg, capsys):
        corpus = write_corpus(tmp_path)
        code, out, _ = run(
            capsys, "--config", cfg, "ingest", "--input", corpus, "--min-quality", "0.9"
        )
        assert code == 0
        assert "admitted 0" in out.splitlines()
        # quality is checked before the topic allowlist, so even the
        # off-topic row reports the quality reason
        assert "  QUALITY_BELOW_MIN 4" in out.splitlines()

    def test_topics_file_override(self, tmp_path, cfg, capsys):
        corpus = write_corpus(tmp_path)
        allow = tmp_path / "topics.txt"
        allow.write_text("Ban plastic straws\n\n", encoding="utf-8")
        code, out, _ = run(
            capsys, "--config", cfg, "ingest", "--input", corpus, "--topics", str(allow)
        )
        assert code == 0
        assert "admitted 1" in out.splitlines()
        assert "topic 'Ban plastic straws' 1" in out.splitlines()

    def test_column_map_renames(self, tmp_path, cfg, capsys):
        renamed = CSV.replace("id,topic,claim", "key,subject,claim", 1)
        corpus = tmp_path / "renamed.csv"
        corpus.write_text(renamed, encoding="utf-8")
        code, out, _ = run(
            capsys, "--config", cfg, "ingest", "--input", str(corpus),
            "--column-map", "key=id", "subject=topic",
        )
        assert code == 0
        assert "admitted 2" in out.splitlines()

    def test_malformed_column_map_exits_2(self, tmp_path, cfg, capsys):
        code, _, err = run(
            capsys, "--config", cfg, "ingest", "--input", write_corpus(tmp_path),
            "--column-map", "keyid",
        )
        assert code == 2
        assert err.startswith("invalid arguments:")

    def test_bad_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.yaml"
        bad.write_text("ingestion:\n  min_quality: 1.5\n", encoding="utf-8")
        code, _, err = run(
            capsys, "--config", str(bad), "ingest", "--input", write_corpus(tmp_path)
        )
        assert code == 2
        assert err.startswith("config error:")

    def test_defaults_require_topic_allowlist(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        code, _, err = run(capsys, "ingest", "--input", write_corpus(tmp_path))
        assert code == 2
        assert "config error:" in err and "ingestion.topics" in err


class TestSnapshot:
    def test_create_prints_sequential_ids(self, ingested, capsys):
        code, out, _ = run(capsys, "--config", ingested, "snapshot")
        assert code == 0 and out.strip() == "snap-0001"
        code, out, _ = run(capsys, "--config", ingested, "snapshot")
        assert code == 0 and out.strip() == "snap-0002"

    def test_list_shows_all(self, ingested, capsys):
        run(capsys, "--config", ingested, "snapshot")
        run(capsys, "--config", ingested, "snapshot")
        code, out, _ = run(capsys, "--config", ingested, "snapshot", "--list")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("snap-0001 ")
        assert lines[1].startswith("snap-0002 ")


class TestAggregate:
    def test_phase1_aggregation_opens_validity_tasks(self, tmp_path, ingested, capsys):
        platform = open_platform(ingested)
        try:
            register_workers(platform, P1)
            platform.open_phase1_tasks(["a1"])
            for worker in P1:
                platform.workflow.submit_phase1(
                    "p1-a1", worker,
                    outcome_text="the survival of endangered whales",
                    feasibility="CanWrite",
                    implicit_text=f"a causal link written by {worker}",
                    rel_ai="cause", rel_io="cause",
                    sanity_confirmed=True,
                )
        finally:
            platform.close()
        code, out, _ = run(capsys, "--config", ingested, "aggregate", "--kind", "phase1")
        assert code == 0
        assert "phase1: aggregated 1, left open 0" in out
        assert "phase2: opened 5 validity tasks" in out

    def test_all_reports_each_kind(self, ingested, capsys):
        code, out, _ = run(capsys, "--config", ingested, "aggregate")
        assert code == 0
        for kind in ("phase1", "validity", "score"):
            assert f"{kind}: aggregated 0, left open 0" in out

    def test_snapshot_funnel_prints_rows(self, tmp_path, ingested, capsys):
        drive_phase1(ingested)
        run(capsys, "--config", ingested, "snapshot")
        code, out, _ = run(
            capsys, "--config", ingested, "aggregate", "--snapshot", "snap-0001"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "     2  claim-premise pairs annotated"
        assert lines[1] == "     1  pairs with majority feasibility"
        assert lines[2] == "     3  implicit reasonings collected"
        assert lines[3] == "     1  implicit reasonings with invalid outcome"
        assert lines[4] == "     2  implicit reasonings with valid outcome"
        assert lines[5] == "     1  kept after quality scoring"
        assert lines[6] == "     1  discarded after quality scoring"
        assert lines[7] == "     0  doubtful (no majority score)"

    def test_unknown_snapshot_exits_1(self, ingested, capsys):
        code, _, err = run(capsys, "--config", ingested, "aggregate", "--snapshot", "nope")
        assert code == 1
        assert err.startswith("error:")


@pytest.fixture
def funneled(tmp_path, ingested, capsys):
    drive_phase1(ingested)
    run(capsys, "--config", ingested, "snapshot")
    code, _, _ = run(capsys, "--config", ingested, "aggregate", "--snapshot", "snap-0001")
    assert code == 0
    return ingested


class TestReport:
    def test_no_flags_exits_2(self, funneled, capsys):
        code, _, err = run(capsys, "--config", funneled, "report", "--snapshot", "snap-0001")
        assert code == 2
        assert "nothing to report" in err

    def test_stats_prints_funnel_and_columns(self, funneled, capsys):
        code, out, _ = run(
            capsys, "--config", funneled, "report", "--snapshot", "snap-0001", "--stats"
        )
        assert code == 0
        lines = out.splitlines()
        assert "     3  implicit reasonings collected" in lines
        assert "[collected]" in lines and "[kept]" in lines
        assert "  n_chains 3" in lines
        assert "  pct_premise_with_chain 0.5000" in lines
        kept_block = lines[lines.index("[kept]"):]
        assert "  n_chains 1" in kept_block

    def test_coverage_prints_histograms(self, funneled, capsys):
        code, out, _ = run(
            capsys, "--config", funneled, "report", "--snapshot", "snap-0001", "--coverage"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines.count("k\tpairs") == 2
        collected = lines[lines.index("[collected]"):lines.index("[kept]")]
        assert "3\t1" in collected
        kept = lines[lines.index("[kept]"):]
        assert "1\t1" in kept

    def test_agreement_prints_alpha_lines(self, funneled, capsys):
        code, out, _ = run(
            capsys, "--config", funneled, "report", "--snapshot", "snap-0001", "--agreement"
        )
        assert code == 0
        lines = out.splitlines()
        validity = next(line for line in lines if line.startswith("validity:"))
        assert "items 3, raters 5, pairable 15" in validity
        assert "alpha undefined" not in validity
        scores = next(line for line in lines if line.startswith("scores:"))
        assert "items 2" in scores

    def test_agreement_without_votes_prints_undefined(self, tmp_path, ingested, capsys):
        drive_phase1(ingested, with_validity_votes=False)
        run(capsys, "--config", ingested, "snapshot")
        run(capsys, "--config", ingested, "aggregate", "--snapshot", "snap-0001")
        code, out, _ = run(
            capsys, "--config", ingested, "report", "--snapshot", "snap-0001", "--agreement"
        )
        assert code == 0
        assert "validity: alpha undefined, items 0" in out

    def test_report_before_funnel_exits_1(self, ingested, capsys):
        run(capsys, "--config", ingested, "snapshot")
        code, _, err = run(
            capsys, "--config", ingested, "report", "--snapshot", "snap-0001", "--stats"
        )
        assert code == 1
        assert err.startswith("error:")


class TestExport:
    HEADER = (
        "argument_id,action,rel_ai,implicit,rel_io,outcome,author,"
        "phase1_task_id,bucket,validity_decision,score_decision"
    )

    def test_kept_to_stdout(self, funneled, capsys):
        code, out, _ = run(capsys, "--config", funneled, "export", "--snapshot", "snap-0001")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == self.HEADER
        assert len(lines) == 2
        assert lines[1].startswith("a1,Banning whaling,cause,")

    def test_all_bucket_to_file(self, tmp_path, funneled, capsys):
        target = tmp_path / "dataset.csv"
        code, out, _ = run(
            capsys, "--config", funneled, "export", "--snapshot", "snap-0001",
            "--bucket", "all", "-o", str(target),
        )
        assert code == 0
        assert out.strip() == f"wrote {target}"
        lines = target.read_text(encoding="utf-8").splitlines()
        assert lines[0] == self.HEADER
        assert len(lines) == 4

    def test_file_matches_stdout(self, tmp_path, funneled, capsys):
        target = tmp_path / "dataset.csv"
        run(capsys, "--config", funneled, "export", "--snapshot", "snap-0001",
            "-o", str(target))
        code, out, _ = run(capsys, "--config", funneled, "export", "--snapshot", "snap-0001")
        assert code == 0
        assert target.read_text(encoding="utf-8") == out

    def test_unknown_snapshot_exits_1(self, ingested, capsys):
        code, _, err = run(capsys, "--config", ingested, "export", "--snapshot", "missing")
        assert code == 1
        assert err.startswith("error:")

    def test_invalid_bucket_rejected_by_parser(self, ingested, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--config", ingested, "export", "--snapshot", "s", "--bucket", "best"])
        assert exc.value.code == 2
