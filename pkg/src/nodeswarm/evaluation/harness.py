"""Accuracy harness: generate instances, solve, score against oracles."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..backends import AgentBackend, DeterministicBackend
from ..engine import EngineConfig
from ..orchestrator import Answer, AnswerKind, Task, solve_detailed
from . import oracles
from .generators import InstanceSpec, generate_instance

RANK_TOLERANCE = 1e-8


@dataclass
class InstanceOutcome:
    task: Task
    size: int
    seed: int
    correct: bool
    expected: str
    got: str
    supersteps: int
    error: str | None = None


@dataclass
class SuiteReport:
    task: Task
    total: int = 0
    correct: int = 0
    per_size: dict[int, tuple[int, int]] = field(default_factory=dict)
    failures: list[InstanceOutcome] = field(default_factory=list)
    outcomes: list[InstanceOutcome] = field(default_factory=list)

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def record(self, outcome: InstanceOutcome) -> None:
        self.total += 1
        done, right = self.per_size.get(outcome.size, (0, 0))
        self.per_size[outcome.size] = (done + 1, right + (1 if outcome.correct else 0))
        if outcome.correct:
            self.correct += 1
        else:
            self.failures.append(outcome)
        self.outcomes.append(outcome)

    def size_accuracy(self) -> dict[int, float]:
        return {s: right / done for s, (done, right) in sorted(self.per_size.items())}


def score_answer(task: Task, expected: Answer, got: Answer, instance: InstanceSpec) -> bool:
    """Task-aware comparison; topological orders go through the validity verifier."""
    if task is Task.TOPO_SORT:
        return got.kind is AnswerKind.ORDERING and oracles.is_valid_topo_order(
            instance.graph, got.value
        )
    if task is Task.PAGERANK:
        if got.kind is not AnswerKind.RANKING or len(got.value) != len(expected.value):
            return False
        got_ranks = dict(got.value)
        expected_ranks = dict(expected.value)
        return all(
            abs(got_ranks[v] - expected_ranks[v]) <= RANK_TOLERANCE for v in expected_ranks
        )
    if expected.kind is not got.kind:
        return False
    if task is Task.SHORTEST_PATH:
        return expected.value == got.value
    return expected.value == got.value


def run_instance(instance: InstanceSpec, backend: AgentBackend, cfg: EngineConfig) -> InstanceOutcome:
    try:
        solution = solve_detailed(instance.rendered_text, backend=backend, cfg=cfg)
    except Exception as exc:
        return InstanceOutcome(
            task=instance.task, size=instance.size, seed=instance.seed,
            correct=False, expected=instance.oracle_answer.narrative,
            got="", supersteps=0, error=f"{type(exc).__name__}: {exc}",
        )
    correct = score_answer(instance.task, instance.oracle_answer, solution.answer, instance)
    return InstanceOutcome(
        task=instance.task, size=instance.size, seed=instance.seed,
        correct=correct, expected=instance.oracle_answer.narrative,
        got=solution.answer.narrative, supersteps=solution.result.supersteps_executed,
    )


def run_suite(
    task: Task,
    count: int,
    sizes: Sequence[int],
    backend: AgentBackend | None = None,
    cfg: EngineConfig = EngineConfig(),
    seed: int = 0,
    workers: int = 1,
) -> SuiteReport:
    """Spread ``count`` instances round-robin over ``sizes`` and score them."""
    backend = backend or DeterministicBackend()
    report = SuiteReport(task=task)
    if count <= 0:
        return report
    jobs = [
        (sizes[i % len(sizes)], seed + i)
        for i in range(count)
    ]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_job, [(task, s, sd) for s, sd in jobs]))
    else:
        outcomes = [
            run_instance(generate_instance(task, s, sd), backend, cfg) for s, sd in jobs
        ]
    for outcome in outcomes:
        report.record(outcome)
    return report


def _run_job(job: tuple) -> InstanceOutcome:
    task, size, seed = job
    return run_instance(generate_instance(task, size, seed), DeterministicBackend(), EngineConfig())


CSV_COLUMNS = ("task", "size", "seed", "expected", "got", "correct", "supersteps")


def write_csv(reports: Iterable[SuiteReport], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            for o in report.outcomes:
                writer.writerow(
                    [o.task.value, o.size, o.seed, o.expected, o.got, int(o.correct), o.supersteps]
                )


def write_accuracy_csv(reports: Iterable[SuiteReport], path: str | Path) -> None:
    """Accuracy-vs-size curve data, one row per (task, size)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(("task", "size", "accuracy"))
        for report in reports:
            for size, accuracy in report.size_accuracy().items():
                writer.writerow((report.task.value, size, accuracy))


def dump_instances(task: Task, sizes: Sequence[int], count: int, path: str | Path, seed: int = 0) -> None:
    """JSON-lines dump of generated instances for external benchmarking."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for i in range(count):
            instance = generate_instance(task, sizes[i % len(sizes)], seed + i)
            handle.write(json.dumps({
                "task": task.value,
                "size": instance.size,
                "seed": instance.seed,
                "text": instance.rendered_text,
                "oracle": instance.oracle_answer.narrative,
            }) + "\n")


def report_to_jsonable(report: SuiteReport) -> dict[str, Any]:
    return {
        "task": report.task.value,
        "total": report.total,
        "correct": report.correct,
        "accuracy": report.accuracy,
        "per_size": {str(s): acc for s, acc in report.size_accuracy().items()},
        "failures": [
            {"seed": f.seed, "size": f.size, "expected": f.expected, "got": f.got, "error": f.error}
            for f in report.failures
        ],
    }
