"""The distributed algorithm library: one six-component template per task."""
from __future__ import annotations

from ..program import (
    MasterCoordinated,
    NodeContext,
    VertexProgram,
    serialize_template,
)
from .bipartite import BipartiteSolver, bipartite_program
from .connectivity import connectivity_program
from .cycle import cycle_detection_program
from .hamilton import hamilton_heuristic_program
from .maxflow import MaxFlowSolver, residual_bfs_program
from .pagerank import pagerank_program
from .shortest_path import shortest_path_program
from .toposort import topological_sort_program
from .triangle import triangle_sum_program

# Library entries browsable from the CLI: name -> zero/few-arg sample builder.
LIBRARY = {
    "shortest_path": lambda: shortest_path_program(source=0),
    "connectivity": lambda: connectivity_program(source=0, target=1),
    "cycle_detection": cycle_detection_program,
    "bipartite": lambda: bipartite_program(seed=0),
    "topological_sort": topological_sort_program,
    "triangle_sum": triangle_sum_program,
    "residual_bfs": lambda: residual_bfs_program(source=0, sink=1),
    "pagerank": pagerank_program,
    "hamilton_heuristic": hamilton_heuristic_program,
}

__all__ = [
    "BipartiteSolver",
    "LIBRARY",
    "MasterCoordinated",
    "MaxFlowSolver",
    "NodeContext",
    "VertexProgram",
    "bipartite_program",
    "connectivity_program",
    "cycle_detection_program",
    "hamilton_heuristic_program",
    "pagerank_program",
    "residual_bfs_program",
    "serialize_template",
    "shortest_path_program",
    "topological_sort_program",
    "triangle_sum_program",
]
