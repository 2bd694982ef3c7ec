"""Instance generators, classical oracles, and the accuracy harness."""
from .generators import NODE_RANGES, InstanceSpec, generate_instance
from .harness import (
    InstanceOutcome,
    SuiteReport,
    dump_instances,
    report_to_jsonable,
    run_instance,
    run_suite,
    score_answer,
    write_accuracy_csv,
    write_csv,
)
from .oracles import oracle_solve

__all__ = [
    "InstanceOutcome",
    "InstanceSpec",
    "NODE_RANGES",
    "SuiteReport",
    "dump_instances",
    "generate_instance",
    "report_to_jsonable",
    "run_instance",
    "run_suite",
    "oracle_solve",
    "score_answer",
    "write_accuracy_csv",
    "write_csv",
]
