"""Monotone path machinery.

A path of length k and height r (the row of its last edge) always extends
by one vertex while k < r: the k cells directly below row r in the last
vertex's column hold distinct larger edges, at most k-1 of which can lead
back into the path.  Iterating spends C(t,2) of the height budget to reach
length t.  When extension gets too expensive, deleting the oldest path
vertices refreshes the budget at the cost of the height drop the last edge
suffers in the reduced graph; the run log records each observed drop.

Also here: the pedestrian simulation (n walkers swap along edges called in
rank order, each tracing a monotone trail), the girth-capped path
certificate built from it, and the closed-form bound calculators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, sqrt
from typing import Iterable

from .errors import BudgetError, GraphError, InternalInvariantError
from .graph import TotallyOrderedGraph, girth
from .heights import HeightTable, build_height_table, edge_height, max_height_edge


@dataclass(frozen=True)
class MonotonePath:
    """Vertex-disjoint walk whose edge ranks strictly increase.

    ``height`` is the row of the last edge in the table the path was built
    from; None for witnesses that were not produced by table extension.
    """

    vertices: tuple[int, ...]
    ranks: tuple[int, ...]
    height: int | None = None

    @property
    def length(self) -> int:
        return len(self.ranks)

    @property
    def last_vertex(self) -> int:
        return self.vertices[-1]

    @property
    def last_rank(self) -> int:
        return self.ranks[-1]


@dataclass(frozen=True)
class MonotoneTrail:
    """Walk with strictly increasing edge ranks; vertices may repeat."""

    vertices: tuple[int, ...]
    ranks: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.ranks)


def validate_path(g: TotallyOrderedGraph, path: MonotonePath, table: HeightTable | None = None) -> None:
    """Re-check a path against the graph, independent of how it was built."""
    _validate_walk(g, path.vertices, path.ranks)
    if len(set(path.vertices)) != len(path.vertices):
        raise InternalInvariantError("path revisits a vertex")
    if table is not None and path.ranks and path.height is not None:
        if table.heights.get(path.last_rank) != path.height:
            raise InternalInvariantError("stored path height disagrees with the table")


def validate_trail(g: TotallyOrderedGraph, trail: MonotoneTrail) -> None:
    _validate_walk(g, trail.vertices, trail.ranks)


def _validate_walk(g, vertices, ranks):
    if len(vertices) != len(ranks) + 1 or not vertices:
        raise InternalInvariantError("walk shape is inconsistent")
    for i, rank in enumerate(ranks):
        if i > 0 and rank <= ranks[i - 1]:
            raise InternalInvariantError("edge ranks do not strictly increase")
        u, v = g.endpoints(rank)
        if {u, v} != {vertices[i], vertices[i + 1]}:
            raise InternalInvariantError(f"rank {rank} does not join step {i}")


def extend_once(g: TotallyOrderedGraph, table: HeightTable, path: MonotonePath) -> MonotonePath:
    """Extend a path of length k < r by one vertex, landing at height >= r - k.

    Candidates are the cells of the last vertex's column in rows r-k..r-1;
    all are filled with edges larger than the path's last edge.  We take
    the highest-height candidate that avoids the path, which retains the
    most budget for further extension.
    """
    k = path.length
    if k < 1:
        raise BudgetError("path must contain at least one edge")
    r = path.height
    if r is None:
        raise BudgetError("path height unknown; extend paths built from a table")
    if k >= r:
        raise BudgetError("height budget exhausted")
    x = path.last_vertex
    col = table.columns[x]
    if len(col) < r - 1:
        raise InternalInvariantError("column shorter than the height budget implies")
    exclude = set(path.vertices)
    last = path.last_rank
    for row in range(r - 1, r - k - 1, -1):
        rank = col[row - 1]
        u, v = g.endpoints(rank)
        other = v if u == x else u
        if other in exclude:
            continue
        if rank <= last:
            raise InternalInvariantError("candidate edge is not larger than the path's last edge")
        return MonotonePath(path.vertices + (other,), path.ranks + (rank,), row)
    raise InternalInvariantError("every candidate cell led back into the path")


def extend_iterated(
    g: TotallyOrderedGraph,
    table: HeightTable,
    start_rank: int,
    t: int,
    last: int | None = None,
) -> MonotonePath:
    """Grow a path of length t from a starting edge of height r, C(t,2) < r.

    The final height is at least r - C(t,2): step k costs at most k rows.
    ``last`` picks which endpoint of the starting edge the path leaves
    from; default is the larger vertex id.
    """
    if t < 1:
        raise GraphError("target length must be at least 1")
    r = edge_height(table, start_rank)
    if comb(t, 2) >= r:
        raise BudgetError("height budget exhausted: need C(t,2) < starting height")
    u, v = g.endpoints(start_rank)
    if last is None:
        last = max(u, v)
    if last not in (u, v):
        raise GraphError("orientation vertex is not an endpoint of the starting edge")
    first = u if last == v else v
    path = MonotonePath((first, last), (start_rank,), r)
    while path.length < t:
        path = extend_once(g, table, path)
    if path.height < r - comb(t, 2):
        raise InternalInvariantError("final height fell below r - C(t,2)")
    return path


def long_path_rodl(g: TotallyOrderedGraph, table: HeightTable | None = None) -> MonotonePath:
    """Monotone path of length at least floor(1/2 + sqrt(d)), d the average degree.

    Starts at a maximum-height edge (height >= m/n = d/2) and extends
    iteratively; floor(1/2 + sqrt(d)) steps fit inside that budget.
    """
    if g.m == 0:
        raise GraphError("graph has no edges")
    if table is None:
        table = build_height_table(g)
    rank, _r = max_height_edge(table)
    d = g.average_degree
    t = max(1, math.floor(0.5 + sqrt(d)))
    path = extend_iterated(g, table, rank, t)
    if path.length < math.floor(0.5 + sqrt(d)):
        raise InternalInvariantError("guaranteed path length not reached")
    return path


@dataclass(frozen=True)
class DeletionRound:
    index: int
    start_height: int
    deleted: tuple[int, ...]
    drop: int
    height_after: int


@dataclass(frozen=True)
class DeleteRunLog:
    start_height: int
    block_size: int
    rounds: tuple[DeletionRound, ...]

    @property
    def drops(self) -> tuple[int, ...]:
        return tuple(r.drop for r in self.rounds)

    @property
    def guarantee(self) -> int | None:
        """Run-specific floor on the final length, from the observed drops.

        With starting height r, block size s, and worst observed drop D,
        every full round costs at most C(s+1,2) + D height and adds s
        edges, so the path reaches length s * floor((r-1)/(C(s+1,2)+D)) + 1.
        """
        c = comb(self.block_size + 1, 2)
        d = max(self.drops, default=0)
        denom = c + d
        if denom <= 0:
            return None
        return self.block_size * ((self.start_height - 1) // denom) + 1


def long_path_delete(g: TotallyOrderedGraph, s: int) -> tuple[MonotonePath, DeleteRunLog]:
    """Extend-then-delete: grow s+1 edges, retire the oldest s vertices, repeat.

    After each deletion the height table of the reduced graph is rebuilt
    from scratch and the recorded drop is the height the last edge lost.
    Stops when a full round no longer fits the budget, then spends any
    leftover budget on a final shorter extension.
    """
    if not 1 <= s <= g.n - 2:
        raise GraphError("deletion block size must satisfy 1 <= s <= n - 2")
    if g.m == 0:
        raise GraphError("graph has no edges")
    alive = set(range(g.n))
    table = build_height_table(g)
    cur_rank, start_height = max_height_edge(table)
    cost = comb(s + 1, 2)

    vertices: list[int] = []
    ranks: list[int] = []
    rounds: list[DeletionRound] = []

    def absorb(seg: MonotonePath) -> None:
        nonlocal vertices, ranks
        if not ranks:
            vertices = list(seg.vertices)
            ranks = list(seg.ranks)
            return
        if seg.vertices[:2] != tuple(vertices[-2:]) or seg.ranks[0] != ranks[-1]:
            raise InternalInvariantError("continuation segment does not splice onto the path")
        vertices.extend(seg.vertices[2:])
        ranks.extend(seg.ranks[1:])

    while True:
        r_cur = table.heights[cur_rank]
        if cost < r_cur:
            seg = extend_iterated(g, table, cur_rank, s + 1, last=vertices[-1] if ranks else None)
            absorb(seg)
            doomed = seg.vertices[:s]
            alive.difference_update(doomed)
            table = build_height_table(g, alive)
            cur_rank = seg.ranks[-1]
            h_after = table.heights[cur_rank]
            rounds.append(
                DeletionRound(
                    index=len(rounds),
                    start_height=r_cur,
                    deleted=doomed,
                    drop=seg.height - h_after,
                    height_after=h_after,
                )
            )
        else:
            t_final = next(t for t in range(s + 1, 0, -1) if comb(t, 2) < r_cur)
            if t_final >= 2:
                absorb(extend_iterated(g, table, cur_rank, t_final, last=vertices[-1] if ranks else None))
            elif not ranks:
                u, v = g.endpoints(cur_rank)
                vertices, ranks = [u, v], [cur_rank]
            break

    path = MonotonePath(tuple(vertices), tuple(ranks), table.heights[ranks[-1]])
    log = DeleteRunLog(start_height=start_height, block_size=s, rounds=tuple(rounds))
    guarantee = log.guarantee
    if guarantee is not None and path.length < guarantee:
        raise InternalInvariantError(
            f"length {path.length} broke the run guarantee {guarantee}"
        )
    return path, log


def pedestrian_trails(g: TotallyOrderedGraph) -> list[MonotoneTrail]:
    """One walker per vertex; both walkers at an edge's endpoints swap when
    it is called in rank order.  Each walker traces a monotone trail, each
    edge is walked exactly twice, so lengths sum to 2m and the longest is
    at least the average degree.
    """
    walker_at = list(range(g.n))  # vertex -> walker currently standing there
    verts = [[v] for v in range(g.n)]
    ranks: list[list[int]] = [[] for _ in range(g.n)]
    for rank, (u, v) in enumerate(g.edges, start=1):
        wu, wv = walker_at[u], walker_at[v]
        verts[wu].append(v)
        ranks[wu].append(rank)
        verts[wv].append(u)
        ranks[wv].append(rank)
        walker_at[u], walker_at[v] = wv, wu
    trails = [MonotoneTrail(tuple(vs), tuple(rs)) for vs, rs in zip(verts, ranks)]
    total = sum(t.length for t in trails)
    if total != 2 * g.m:
        raise InternalInvariantError("trail lengths do not sum to twice the edge count")
    if g.m and max(t.length for t in trails) < math.ceil(g.average_degree):
        raise InternalInvariantError("no trail reached the average degree")
    return trails


def girth_altitude_bound(g: TotallyOrderedGraph) -> tuple[int, MonotonePath | None]:
    """Certified path length min(girth - 1, longest pedestrian trail).

    Any trail shorter than the girth repeats no vertex, so truncating the
    longest trail at its first repetition leaves a path at least that long.
    """
    if g.n == 0:
        return 0, None
    trails = pedestrian_trails(g)
    best = max(trails, key=lambda t: t.length)
    seen = set()
    cut = len(best.vertices)
    for idx, v in enumerate(best.vertices):
        if v in seen:
            cut = idx
            break
        seen.add(v)
    witness = MonotonePath(best.vertices[:cut], best.ranks[: cut - 1])
    gg = girth(g)
    certified = best.length if gg is None else min(gg - 1, best.length)
    if witness.length < certified:
        raise InternalInvariantError("truncated trail is shorter than the certified length")
    validate_path(g, witness)
    return certified, witness


@dataclass(frozen=True)
class BoundReport:
    """Closed-form guarantees evaluated at (n, d); None marks an undefined field."""

    n: int
    d: float
    rodl_floor: int
    s: float
    ghat_upper: float
    dense_bound: float | None
    dense_positive: bool | None
    clique_bound: float


def guaranteed_bounds(n: int, d: float) -> BoundReport:
    """Evaluate the guaranteed lower-bound formulas exactly as written.

    The dense-graph bound d/(4s) * (1 - 2/d)(1 - 1/s)(1 - 4s^2/(d-2)) uses
    s = n^(1/3) * (11 lg n)^(2/3) and is meaningful only when d > 4s^2 + 2;
    below that it is reported as-is and flagged non-positive.  The bound
    needs astronomically large n to go positive on complete graphs.
    """
    if n < 2:
        raise GraphError("bounds need n >= 2")
    if d < 0:
        raise GraphError("average degree cannot be negative")
    lg = math.log2(n)
    rodl_floor = math.floor(0.5 + sqrt(d))
    s = n ** (1.0 / 3.0) * (11.0 * lg) ** (2.0 / 3.0)
    ghat_upper = 11.0 * sqrt(n * s) * lg
    if d > 2:
        dense = (d / (4.0 * s)) * (1.0 - 2.0 / d) * (1.0 - 1.0 / s) * (1.0 - 4.0 * s * s / (d - 2.0))
        dense_positive = dense > 0
    else:
        dense, dense_positive = None, None
    clique = (n / lg) ** (2.0 / 3.0) / 20.0
    return BoundReport(
        n=n,
        d=d,
        rodl_floor=rodl_floor,
        s=s,
        ghat_upper=ghat_upper,
        dense_bound=dense,
        dense_positive=dense_positive,
        clique_bound=clique,
    )
