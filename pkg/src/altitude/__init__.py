"""Monotone paths in edge-ordered graphs.

A totally ordered graph carries a vertex order and an edge order; the
package builds height tables over such graphs, extends monotone paths
against the height budget, simulates the pedestrian swap walk, plays the
token game that caps how much an edge's height can drop under vertex
deletion, and provides exact oracles (longest monotone trail and path for
a fixed ordering, exact altitude by enumerating all orderings of small
graphs, annealing for adversarial orderings).  The ``altitude`` command
line ties these into reproducible experiments.
"""

from .errors import (
    AltitudeError,
    BudgetError,
    EnumerationLimitError,
    GameRuleError,
    GraphError,
    InternalInvariantError,
)
from .graph import (
    FAMILIES,
    GraphStats,
    TotallyOrderedGraph,
    build_graph,
    delete_vertices,
    generate,
    girth,
    graph_from_json,
    graph_stats,
    graph_to_json,
    greedy_edge_coloring,
    matching_interval_ordering,
    read_graph,
    reorder_edges,
    write_graph,
)
from .heights import HeightTable, build_height_table, edge_height, max_height_edge
from .holes import (
    DropReport,
    HoleArraySequence,
    PipelineResult,
    deletion_pipeline,
    hole_sequence,
    measure_drop,
    transcript_from_holes,
)
from .oracle import (
    AltitudeReport,
    adversarial_ordering,
    altitude_exact,
    edge_orbit_representatives,
    longest_monotone_path,
    longest_monotone_trail,
    random_ordering_stats,
)
from .paths import (
    BoundReport,
    DeleteRunLog,
    DeletionRound,
    MonotonePath,
    MonotoneTrail,
    extend_iterated,
    extend_once,
    girth_altitude_bound,
    guaranteed_bounds,
    long_path_delete,
    long_path_rodl,
    pedestrian_trails,
    validate_path,
    validate_trail,
)
from .rng import SplitMix64
from .tokens import (
    GameMove,
    GameTranscript,
    PASS,
    SubgameWitness,
    TokenBoard,
    TransferEvent,
    apply_step,
    board_from_heights,
    check_net_gain_bound,
    column_gain_bound,
    corollary_drop_bound,
    extract_subgame,
    play,
    random_game,
    transfer_budget_log,
    triangular_k,
    triangular_strategy,
)

__version__ = "0.1.0"
