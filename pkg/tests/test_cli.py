"""Command-line behavior: subcommands, formats, exit codes."""
from __future__ import annotations

import json

import pytest

from nodeswarm.cli import main

from sample_problems import EIGHT_NODE_SP_TEXT


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "problem.txt"
    path.write_text(EIGHT_NODE_SP_TEXT, encoding="utf-8")
    return path


def test_solve_file_text_output(problem_file, capsys):
    code = main(["solve", "--file", str(problem_file), "--backend", "deterministic"])
    out = capsys.readouterr().out
    assert code == 0
    assert "Node 3: 14" in out


def test_solve_json_output(problem_file, capsys):
    code = main(["solve", "--file", str(problem_file), "--format", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["task"] == "shortest_path"
    assert payload["value"]["3"] == 14
    assert payload["termination"] == "converged"
    assert payload["supersteps"] >= 1


def test_solve_inline_text(capsys):
    code = main(["solve", "--text",
                 "Assess if two nodes 0 and 1 in a given graph are connected via a path. "
                 "The graph has 2 nodes, and the edges are: (0,1)"])
    assert code == 0
    assert "Yes" in capsys.readouterr().out


def test_solve_without_input_exits_2(monkeypatch):
    monkeypatch.setattr("sys.stdin.isatty", lambda: True)
    with pytest.raises(SystemExit) as excinfo:
        main(["solve"])
    assert excinfo.value.code == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["solve", "--nonsense"])
    assert excinfo.value.code == 2


def test_solver_error_exits_1(capsys):
    code = main(["solve", "--text", "Please alphabetize my groceries"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_trace_prints_round_log(problem_file, capsys):
    code = main(["trace", "--file", str(problem_file)])
    out = capsys.readouterr().out
    assert code == 0
    assert "Initialization:" in out
    assert "Node 1 Send Message to Node 7: 1. new_distance: 1" in out
    assert "All agents' state unchanged, terminating early..." in out
    assert "Node: 3  State: 1. distance: 14" in out


def test_bench_writes_csv_and_reports(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    code = main(["bench", "--task", "connectivity", "--count", "10",
                 "--sizes", "5,10", "--csv", str(csv_path), "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "10/10" in out
    assert csv_path.exists()
    assert len(csv_path.read_text().strip().splitlines()) == 11


def test_bench_json_format(capsys):
    code = main(["bench", "--task", "cycle", "--count", "4", "--sizes", "6",
                 "--format", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["task"] == "cycle"
    assert payload["accuracy"] == 1.0


def test_bench_seed_reproducibility(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    main(["bench", "--task", "bipartite", "--count", "6", "--sizes", "8",
          "--csv", str(a), "--seed", "9"])
    main(["bench", "--task", "bipartite", "--count", "6", "--sizes", "8",
          "--csv", str(b), "--seed", "9"])
    assert a.read_bytes() == b.read_bytes()


def test_templates_listing(capsys):
    code = main(["templates"])
    out = capsys.readouterr().out
    assert code == 0
    for name in ("shortest_path", "pagerank", "hamilton_heuristic"):
        assert name in out


def test_templates_print_one(capsys):
    code = main(["templates", "shortest_path"])
    out = capsys.readouterr().out
    assert code == 0
    for section in ("### State", "### Message", "### Initialization",
                    "### Send", "### Update", "### Termination"):
        assert section in out


def test_templates_unknown_name(capsys):
    code = main(["templates", "sorting_hat"])
    assert code == 2
    assert "unknown template" in capsys.readouterr().err


def test_no_color_honored(problem_file, capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    main(["bench", "--task", "cycle", "--count", "2", "--sizes", "5"])
    assert "\033[" not in capsys.readouterr().out


def test_batch_solve_jsonl(tmp_path, capsys):
    batch = tmp_path / "batch.jsonl"
    batch.write_text(
        json.dumps({"id": "a", "text": EIGHT_NODE_SP_TEXT}) + "\n"
        + json.dumps({
            "id": "b",
            "text": ("Assess if two nodes 0 and 1 in a given graph are connected "
                     "via a path. The graph has 2 nodes, and the edges are: (0,1)"),
        }) + "\n",
        encoding="utf-8",
    )
    code = main(["solve", "--batch", str(batch)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    first, second = (json.loads(line) for line in lines)
    assert first["id"] == "a" and first["task"] == "shortest_path"
    assert first["value"]["3"] == 14
    assert "supersteps" in first and "termination" in first
    assert second["id"] == "b" and second["value"] is True


def test_batch_task_hint_overrides_retrieval(tmp_path, capsys):
    batch = tmp_path / "batch.jsonl"
    batch.write_text(
        json.dumps({
            "id": "hinted",
            "text": "The graph has 3 nodes, and the edges are: (0,1) (1,2) (2,0)",
            "task_hint": "cycle",
        }) + "\n",
        encoding="utf-8",
    )
    code = main(["solve", "--batch", str(batch)])
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["task"] == "cycle" and record["value"] is True


def test_batch_reports_errors_per_line(tmp_path, capsys):
    batch = tmp_path / "batch.jsonl"
    batch.write_text(
        json.dumps({"id": "bad", "text": "please fold the laundry"}) + "\n",
        encoding="utf-8",
    )
    code = main(["solve", "--batch", str(batch)])
    assert code == 1
    record = json.loads(capsys.readouterr().out)
    assert record["id"] == "bad" and "error" in record


def test_llm_backend_without_endpoint_is_usage_error(capsys):
    code = main(["solve", "--text", "anything", "--backend", "llm"])
    assert code == 2
    assert "endpoint" in capsys.readouterr().err


def test_bench_with_worker_pool(capsys):
    code = main(["bench", "--task", "cycle", "--count", "4", "--sizes", "6",
                 "--workers", "2"])
    assert code == 0
    assert "4/4" in capsys.readouterr().out
