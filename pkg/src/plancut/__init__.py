"""Shortest cycles and global minimum cuts in weighted undirected planar graphs."""

from .core import (
    INF,
    LABEL_INF,
    LABEL_REAL,
    LABEL_ZERO,
    Cycle,
    DualMap,
    PlanarGraph,
    build_graph,
    contract_degree2,
    decode,
    dual,
    encode,
    generate,
    normalize,
    split_by_cycle,
)
from .paths import ShortestPathTree, fundamental_cycle, sssp
from .partition import DenseDistanceGraph, Piece, RDivision, build_ddg, multipart_dijkstra, r_division, skeleton
from .flowcut import FlowStructure, build_flow_structure, fs_query, max_flow_value, min_separating_cycle
from .static_solver import RunStats, min_cut, shortest_cycle_batched, shortest_cycle_cfn
from .ddg_solver import shortest_cycle_ddg
from .dynamic_solver import (
    DynamicStructure,
    dyn_cycle_through_edge,
    dyn_delete,
    dyn_insert,
    dyn_new,
    dyn_shortest_cycle,
    normalize_for_dynamic,
)
from .ddg_solver import (
    NoncrossingTree,
    RecursionGraph,
    Region,
    build_noncrossing_tree,
    divide_region,
    reduce_region,
    terminal_solve,
)
from .oracles import oracle_min_cut, oracle_separating_cycle, oracle_shortest_cycle
from .static_solver import divide_balanced

__version__ = "0.1.0"

__all__ = [
    "INF",
    "LABEL_INF",
    "LABEL_REAL",
    "LABEL_ZERO",
    "Cycle",
    "DualMap",
    "PlanarGraph",
    "build_graph",
    "contract_degree2",
    "decode",
    "dual",
    "encode",
    "generate",
    "normalize",
    "split_by_cycle",
    "ShortestPathTree",
    "fundamental_cycle",
    "sssp",
    "DenseDistanceGraph",
    "Piece",
    "RDivision",
    "build_ddg",
    "multipart_dijkstra",
    "r_division",
    "skeleton",
    "FlowStructure",
    "build_flow_structure",
    "fs_query",
    "max_flow_value",
    "min_separating_cycle",
    "RunStats",
    "min_cut",
    "shortest_cycle_batched",
    "shortest_cycle_cfn",
    "shortest_cycle_ddg",
    "DynamicStructure",
    "dyn_cycle_through_edge",
    "dyn_delete",
    "dyn_insert",
    "dyn_new",
    "dyn_shortest_cycle",
    "normalize_for_dynamic",
    "NoncrossingTree",
    "RecursionGraph",
    "Region",
    "build_noncrossing_tree",
    "divide_region",
    "reduce_region",
    "terminal_solve",
    "divide_balanced",
    "oracle_min_cut",
    "oracle_separating_cycle",
    "oracle_shortest_cycle",
]
