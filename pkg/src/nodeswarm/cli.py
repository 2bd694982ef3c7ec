"""Command-line front-end: solve problems, run benchmarks, print traces."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .backends import make_backend
from .engine import EngineConfig, render_final_states, render_trace_lines
from .errors import NodeswarmError
from .evaluation import run_suite, write_csv
from .orchestrator import Task, answer_to_jsonable, solve_detailed
from .programs import LIBRARY, serialize_template


def _use_color(stream) -> bool:
    return not os.environ.get("NO_COLOR") and stream.isatty()


def _paint(text: str, code: str, stream) -> str:
    if _use_color(stream):
        return f"\033[{code}m{text}\033[0m"
    return text


def _read_problem(args, parser) -> str:
    if args.file:
        return Path(args.file).read_text(encoding="utf-8")
    if args.text:
        return args.text
    if not sys.stdin.isatty():
        data = sys.stdin.read()
        if data.strip():
            return data
    parser.error("no problem input: pass --file, --text, or pipe text on stdin")


def _build_backend(args):
    return make_backend(
        args.backend,
        endpoint=args.endpoint or "",
        model_name=args.model or "",
        credential_env=args.credential_env,
        store_path=args.store,
        max_retries=args.max_retries,
    )


def _engine_config(args, trace: bool = False) -> EngineConfig:
    return EngineConfig(max_supersteps=args.max_supersteps, trace_enabled=trace)


def _add_backend_flags(sub):
    sub.add_argument("--backend", choices=("deterministic", "llm", "replay"),
                     default="deterministic")
    sub.add_argument("--endpoint", help="chat-completion base URL for llm mode")
    sub.add_argument("--model", help="model name for llm mode")
    sub.add_argument("--credential-env", default="NODESWARM_API_KEY",
                     help="environment variable holding the bearer credential")
    sub.add_argument("--store", help="transcript store directory (record in llm mode, source in replay mode)")
    sub.add_argument("--max-retries", type=int, default=2)


def _add_problem_flags(sub):
    sub.add_argument("--file", help="read the problem text from a file")
    sub.add_argument("--text", help="problem text inline")
    sub.add_argument("--batch", help="JSON-lines file of {id, text, task_hint?} problems")
    sub.add_argument("--directed", dest="directed", action="store_true", default=None)
    sub.add_argument("--undirected", dest="directed", action="store_false")
    sub.add_argument("--weighted", dest="weighted", action="store_true", default=None)
    sub.add_argument("--unweighted", dest="weighted", action="store_false")
    sub.add_argument("--max-supersteps", type=int, default=None)
    sub.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nodeswarm",
        description="Solve graph problems with per-node agents exchanging messages in rounds.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    solve_parser = subparsers.add_parser("solve", help="solve one problem")
    _add_problem_flags(solve_parser)
    _add_backend_flags(solve_parser)
    solve_parser.add_argument("--trace", action="store_true", help="print the round log too")

    bench_parser = subparsers.add_parser("bench", help="run an accuracy suite against the oracles")
    bench_parser.add_argument("--task", required=True,
                              choices=sorted(t.value for t in Task))
    bench_parser.add_argument("--count", type=int, required=True)
    bench_parser.add_argument("--sizes", default=None,
                              help="comma-separated node counts (default: task range sample)")
    bench_parser.add_argument("--seed", type=int, default=0)
    bench_parser.add_argument("--csv", help="write per-instance results to this CSV file")
    bench_parser.add_argument("--workers", type=int, default=1)
    bench_parser.add_argument("--max-supersteps", type=int, default=None)
    bench_parser.add_argument("--format", choices=("text", "json"), default="text")
    _add_backend_flags(bench_parser)

    trace_parser = subparsers.add_parser("trace", help="solve and print the full round log")
    _add_problem_flags(trace_parser)
    _add_backend_flags(trace_parser)

    templates_parser = subparsers.add_parser("templates", help="list or print algorithm templates")
    templates_parser.add_argument("name", nargs="?", help="template to print in full")
    return parser


def _cmd_batch(args) -> int:
    backend = _build_backend(args)
    cfg = _engine_config(args)
    failures = 0
    with open(args.batch, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            try:
                solution = solve_detailed(
                    record["text"], backend=backend, cfg=cfg,
                    directed=args.directed, weighted=args.weighted,
                    task_hint=record.get("task_hint"),
                )
                print(json.dumps({
                    "id": record.get("id"),
                    "task": solution.spec.task.value,
                    **answer_to_jsonable(solution.answer),
                    "supersteps": solution.result.supersteps_executed,
                    "termination": solution.result.termination.value,
                }))
            except NodeswarmError as exc:
                failures += 1
                print(json.dumps({"id": record.get("id"), "error": str(exc)}))
    return 1 if failures else 0


def _cmd_solve(args, parser, want_trace: bool) -> int:
    if args.batch:
        return _cmd_batch(args)
    text = _read_problem(args, parser)
    backend = _build_backend(args)
    cfg = _engine_config(args, trace=want_trace or getattr(args, "trace", False))
    solution = solve_detailed(
        text, backend=backend, cfg=cfg, directed=args.directed, weighted=args.weighted
    )
    if want_trace or getattr(args, "trace", False):
        for line in render_trace_lines(solution.result):
            print(line)
        for line in render_final_states(solution.result):
            print(line)
        if want_trace:
            return 0
    if args.format == "json":
        print(json.dumps({
            "task": solution.spec.task.value,
            **answer_to_jsonable(solution.answer),
            "supersteps": solution.result.supersteps_executed,
            "termination": solution.result.termination.value,
        }))
    else:
        print(solution.answer.narrative)
    return 0


def _default_sizes(task: Task) -> list[int]:
    from .evaluation import NODE_RANGES

    lo, hi = NODE_RANGES[task]
    hi = min(hi, 100)
    step = max(1, (hi - lo) // 9)
    return list(range(lo, hi + 1, step))


def _cmd_bench(args) -> int:
    task = Task(args.task)
    sizes = (
        [int(s) for s in args.sizes.split(",")] if args.sizes else _default_sizes(task)
    )
    backend = _build_backend(args)
    cfg = EngineConfig(max_supersteps=args.max_supersteps)
    report = run_suite(task, args.count, sizes, backend=backend, cfg=cfg,
                       seed=args.seed, workers=args.workers)
    if args.csv:
        write_csv([report], args.csv)
    if args.format == "json":
        from .evaluation import report_to_jsonable

        print(json.dumps(report_to_jsonable(report)))
    else:
        status = "PASS" if report.correct == report.total else "FAIL"
        status = _paint(status, "32" if status == "PASS" else "31", sys.stdout)
        print(f"{task.value}: {report.correct}/{report.total} correct "
              f"(accuracy {report.accuracy:.4f}) [{status}]")
        for size, acc in report.size_accuracy().items():
            print(f"  size {size}: {acc:.4f}")
        for failure in report.failures[:10]:
            print(f"  failed seed={failure.seed} size={failure.size}: "
                  f"{failure.error or failure.got}")
    return 0


def _cmd_templates(args) -> int:
    if args.name:
        if args.name not in LIBRARY:
            print(f"unknown template {args.name!r}; available: {', '.join(sorted(LIBRARY))}",
                  file=sys.stderr)
            return 2
        print(serialize_template(LIBRARY[args.name]()))
        return 0
    for name in sorted(LIBRARY):
        program = LIBRARY[name]()
        first_line = program.section("State").splitlines()[0] if program.section("State") else ""
        print(f"{name}: {first_line}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "solve":
            return _cmd_solve(args, parser, want_trace=False)
        if args.subcommand == "trace":
            return _cmd_solve(args, parser, want_trace=True)
        if args.subcommand == "bench":
            return _cmd_bench(args)
        if args.subcommand == "templates":
            return _cmd_templates(args)
        parser.error(f"unknown subcommand {args.subcommand}")
    except NodeswarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
