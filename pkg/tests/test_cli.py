import csv
import json

import pytest

from conftest import write_gt_csv, write_table_csv
from fuzzyjoin import generate_synthetic, generate_disjoint_tables, load_solution
from fuzzyjoin.cli import main


@pytest.fixture
def synthetic_csvs(tmp_path):
    L, R, gt = generate_synthetic(n_left=40, seed=2, unmatched_rate=0.2)
    left = write_table_csv(L, tmp_path / "left.csv")
    right = write_table_csv(R, tmp_path / "right.csv")
    gt_path = write_gt_csv(gt.matches, tmp_path / "gt.csv")
    return left, right, gt_path


def run_args(tmp_path, left, right, **extra):
    args = [
        "run",
        "--left", str(left),
        "--right", str(right),
        "--column", "name",
        "--out", str(tmp_path / "joins.csv"),
        "--solution", str(tmp_path / "solution.txt"),
    ]
    for key, value in extra.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    return args


def test_run_produces_artifacts(tmp_path, synthetic_csvs, capsys):
    left, right, _ = synthetic_csvs
    code = main(
        run_args(tmp_path, left, right, manifest=tmp_path / "m.json", seed=1)
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "joined" in out

    with open(tmp_path / "joins.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows
    assert set(rows[0]) == {
        "right_id", "left_id", "estimated_precision", "config_index"
    }
    solution = load_solution(tmp_path / "solution.txt")
    assert len(solution.configs) > 0
    manifest = json.loads((tmp_path / "m.json").read_text())
    assert manifest["config"]["seed"] == 1
    assert set(manifest["timings"]) >= {"ingest", "blocking", "distances", "greedy"}
    assert manifest["pair_counts"]["lr_pairs"] > 0


def test_run_deterministic_bytes(tmp_path, synthetic_csvs):
    left, right, _ = synthetic_csvs
    for suffix, threads in (("a", 1), ("b", 1), ("c", 8)):
        code = main(
            [
                "run",
                "--left", str(left),
                "--right", str(right),
                "--column", "name",
                "--seed", "4",
                "--threads", str(threads),
                "--out", str(tmp_path / f"joins_{suffix}.csv"),
                "--solution", str(tmp_path / f"sol_{suffix}.txt"),
            ]
        )
        assert code == 0
    j = [(tmp_path / f"joins_{s}.csv").read_bytes() for s in "abc"]
    s = [(tmp_path / f"sol_{s}.txt").read_bytes() for s in "abc"]
    assert j[0] == j[1] == j[2]
    assert s[0] == s[1] == s[2]


def test_unsatisfiable_target_warns_but_succeeds(tmp_path, capsys):
    # precision must strictly exceed the target, so tau = 1.0 joins nothing
    L, R = generate_disjoint_tables(20, 20, seed=3)
    left = write_table_csv(L, tmp_path / "l.csv")
    right = write_table_csv(R, tmp_path / "r.csv")
    code = main(run_args(tmp_path, left, right, precision=1.0))
    assert code == 0
    assert "warning" in capsys.readouterr().err
    with open(tmp_path / "joins.csv", newline="") as fh:
        assert list(csv.DictReader(fh)) == []


def test_bad_csv_exits_3(tmp_path, synthetic_csvs, capsys):
    left, right, _ = synthetic_csvs
    bad = tmp_path / "bad.csv"
    bad.write_text("id,name\n7,a\n7,b\n", encoding="utf-8")
    code = main(run_args(tmp_path, bad, right))
    assert code == 3
    assert "ingest" in capsys.readouterr().err


def test_config_error_exits_2(tmp_path, synthetic_csvs, capsys):
    left, right, _ = synthetic_csvs
    code = main(run_args(tmp_path, left, right, precision=1.5))
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_dump_negative_rules(tmp_path, synthetic_csvs):
    left, right, _ = synthetic_csvs
    rules_path = tmp_path / "rules.tsv"
    code = main(
        run_args(tmp_path, left, right) + ["--dump-negative-rules", str(rules_path)]
    )
    assert code == 0
    lines = rules_path.read_text().splitlines()
    assert lines == sorted(lines)
    assert all("\t" in line for line in lines)


def test_eval_subcommand(tmp_path, synthetic_csvs, capsys):
    left, right, gt_path = synthetic_csvs
    assert main(run_args(tmp_path, left, right)) == 0
    report_path = tmp_path / "report.json"
    code = main(
        [
            "eval",
            "--pred", str(tmp_path / "joins.csv"),
            "--gt", str(gt_path),
            "--json", str(report_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "precision:" in out
    payload = json.loads(report_path.read_text())
    assert 0.0 <= payload["precision"] <= 1.0
    assert payload["n_assigned"] > 0


def test_eval_with_scores_reports_pr_auc(tmp_path, synthetic_csvs):
    left, right, gt_path = synthetic_csvs
    assert main(run_args(tmp_path, left, right)) == 0
    scores_path = tmp_path / "scored.csv"
    with open(tmp_path / "joins.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    with open(scores_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["right_id", "left_id", "score"])
        for row in rows:
            writer.writerow([row["right_id"], row["left_id"], row["estimated_precision"]])
    report_path = tmp_path / "report.json"
    code = main(
        [
            "eval",
            "--pred", str(tmp_path / "joins.csv"),
            "--gt", str(gt_path),
            "--scores", str(scores_path),
            "--json", str(report_path),
        ]
    )
    assert code == 0
    payload = json.loads(report_path.read_text())
    assert payload["pr_auc"] is not None
    assert 0.0 <= payload["pr_auc"] <= 1.0


def test_run_multi_smoke(tmp_path, capsys):
    L, R, _ = generate_synthetic(n_left=25, seed=5, unmatched_rate=0.1)
    left = write_table_csv(L, tmp_path / "l.csv")
    right = write_table_csv(R, tmp_path / "r.csv")
    code = main(
        [
            "run-multi",
            "--left", str(left),
            "--right", str(right),
            "--out", str(tmp_path / "joins.csv"),
            "--solution", str(tmp_path / "sol.txt"),
            "--manifest", str(tmp_path / "m.json"),
        ]
    )
    assert code == 0
    assert "columns selected" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "m.json").read_text())
    assert manifest["selected_columns"] == ["name"]


def test_bench_synthetic_smoke(capsys):
    code = main(["bench", "--suite", "synthetic", "--n-left", "30", "--seed", "1"])
    assert code == 0
    assert "precision" in capsys.readouterr().out
