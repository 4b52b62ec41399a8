"""Hole arrays: from a graph's height table to the deleted graph's table.

Deleting a vertex set S from a totally ordered graph G changes edge
heights.  To bound the change, start from G's height table restricted to
the surviving columns, replace every edge into S by a *hole*, and then
repair the array cell by cell in row-major order: each step swaps the
current cell with the cell holding the edge the deleted graph's table
wants there (or bubbles a hole up past an empty cell).  The swap target
always lies inside the column's *critical interval* — the run of holes
from the current cell up to the first non-hole — so an edge's height drop
is at most the critical interval's height.

Reading only the holes off these arrays, shifted down past the repaired
region, yields a legal token game on the surviving columns with at most
|S| tokens per column.  That reduction is what connects height drops to
the token-game bounds, and it is re-checked move by move here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GraphError, InternalInvariantError
from .graph import TotallyOrderedGraph
from .heights import HeightTable, build_height_table
from .tokens import GameMove, GameTranscript, PASS, board_from_heights, corollary_drop_bound, play


@dataclass(frozen=True)
class Hole:
    ident: int


Cell = None | int | Hole  # empty, edge rank, or hole


@dataclass(frozen=True, eq=False)
class HoleArraySequence:
    alive: tuple[int, ...]
    deleted: tuple[int, ...]
    betas: tuple[tuple[int, int], ...]  # processed cell indices (row, vertex)
    criticals: tuple[tuple[int, int], ...]  # (i, j) rows of each critical interval
    snapshots: tuple  # per beta and one final: dict vertex -> tuple of cells
    table_full: HeightTable  # table of the whole graph (holes source)
    table_deleted: HeightTable  # table of the graph minus the deleted set
    row_stop: int

    @property
    def s(self) -> int:
        return len(self.deleted)

    def initial_holes_per_column(self) -> dict:
        first = self.snapshots[0]
        return {u: sum(isinstance(c, Hole) for c in first[u]) for u in self.alive}

    def beta_index(self, row: int, vertex: int) -> int:
        try:
            return self.betas.index((row, vertex))
        except ValueError:
            raise GraphError(f"cell ({row}, {vertex}) was not materialized") from None

    def critical_at(self, row: int, vertex: int) -> tuple[int, int]:
        return self.criticals[self.beta_index(row, vertex)]


def _zkey(row: int, vertex_pos: int) -> tuple[int, int]:
    return (row, vertex_pos)


def hole_sequence(g: TotallyOrderedGraph, deleted: Iterable[int], validate: bool = True) -> HoleArraySequence:
    """Materialize the repair sequence, checking its guarantees at every step.

    The guarantees: cells before the current one already match the deleted
    graph's table; cells from the current one on that are not holes still
    match the original table; and each step is a single swap inside the
    critical interval, crossing columns only when the swapped edge joins
    the two columns involved.
    """
    gone = sorted(set(deleted))
    if any(not 0 <= v < g.n for v in gone):
        raise GraphError("vertex to delete out of range")
    if len(gone) > g.n - 2:
        raise GraphError("can delete at most n - 2 vertices")
    goneset = set(gone)
    alive = tuple(v for v in range(g.n) if v not in goneset)
    pos = {u: i for i, u in enumerate(alive)}

    full = build_height_table(g)
    reduced = build_height_table(g, alive)
    row_stop = 1 + max(
        [len(full.columns[u]) for u in alive] + [reduced.row_count] + [0]
    )

    # initial array: the full table's surviving columns, edges into the
    # deleted set replaced by holes
    arr: dict[int, list[Cell]] = {}
    loc: dict[int, tuple[int, int]] = {}
    hole_id = 0
    for u in alive:
        col: list[Cell] = []
        for idx, rank in enumerate(full.columns[u]):
            a, b = g.endpoints(rank)
            if a in goneset or b in goneset:
                col.append(Hole(hole_id))
                hole_id += 1
            else:
                col.append(rank)
                loc[rank] = (idx + 1, u)
        while len(col) < row_stop:
            col.append(None)
        arr[u] = col
    for u in alive:
        holes = sum(isinstance(c, Hole) for c in arr[u])
        if holes > len(gone):
            raise InternalInvariantError("a column starts with more holes than deleted vertices")
    if set(loc) != set(reduced.heights):
        raise InternalInvariantError("surviving edges differ between the two tables")

    def freeze() -> dict:
        return {u: tuple(arr[u]) for u in alive}

    def cell_at(row: int, vertex: int) -> Cell:
        col = arr[vertex]
        return col[row - 1] if row <= len(col) else None

    def put(row: int, vertex: int, value: Cell) -> None:
        col = arr[vertex]
        while len(col) < row:
            col.append(None)
        col[row - 1] = value
        if isinstance(value, int):
            loc[value] = (row, vertex)

    def check_properties(boundary: tuple[int, int]) -> None:
        # boundary is the next unprocessed cell; earlier cells must match
        # the deleted graph's table, later non-hole cells the original one
        for u in alive:
            col = arr[u]
            for idx, cell in enumerate(col):
                row = idx + 1
                before = _zkey(row, pos[u]) < boundary
                if before:
                    want = reduced.columns[u][idx] if idx < len(reduced.columns[u]) else None
                    if cell != want:
                        raise InternalInvariantError(
                            f"repaired cell ({row}, {u}) holds {cell!r}, wanted {want!r}"
                        )
                elif not isinstance(cell, Hole):
                    want = full.columns[u][idx] if idx < len(full.columns[u]) else None
                    if cell != want:
                        raise InternalInvariantError(
                            f"untouched cell ({row}, {u}) holds {cell!r}, wanted {want!r}"
                        )

    betas: list[tuple[int, int]] = []
    criticals: list[tuple[int, int]] = []
    snapshots = [freeze()]

    for row in range(1, row_stop + 1):
        for u in alive:
            beta = (row, u)
            betas.append(beta)
            # critical interval: holes from (row, u) up to the first non-hole
            j = row
            while isinstance(cell_at(j, u), Hole):
                j += 1
            criticals.append((row, j))

            want = reduced.columns[u][row - 1] if row - 1 < len(reduced.columns[u]) else None
            if want is not None:
                drow, dcol = loc[want]
                here = _zkey(row, pos[u])
                there = _zkey(drow, pos[dcol])
                if not (here <= there <= _zkey(j, pos[u])):
                    raise InternalInvariantError(
                        f"edge {want} sits outside the critical interval of ({row}, {u})"
                    )
                if dcol != u:
                    a, b = g.endpoints(want)
                    if {a, b} != {u, dcol}:
                        raise InternalInvariantError(
                            "cross-column swap of an edge not joining the two columns"
                        )
                moved = cell_at(row, u)
                put(drow, dcol, moved)
                put(row, u, want)
            else:
                moved = cell_at(row, u)
                if isinstance(moved, Hole):
                    other = cell_at(j, u)
                    if other is not None:
                        raise InternalInvariantError(
                            "first non-hole cell above a doomed hole is not empty"
                        )
                    put(j, u, moved)
                    put(row, u, None)
                elif isinstance(moved, int):
                    raise InternalInvariantError(
                        f"cell ({row}, {u}) holds edge {moved} but the deleted table wants it empty"
                    )
            snapshots.append(freeze())
            if validate:
                nxt = betas_next(row, u, pos, alive)
                check_properties(nxt)

    return HoleArraySequence(
        alive=alive,
        deleted=tuple(gone),
        betas=tuple(betas),
        criticals=tuple(criticals),
        snapshots=tuple(snapshots),
        table_full=full,
        table_deleted=reduced,
        row_stop=row_stop,
    )


def betas_next(row: int, u: int, pos: dict, alive: tuple[int, ...]) -> tuple[int, int]:
    """Z-order key of the successor cell of (row, u)."""
    if pos[u] + 1 < len(alive):
        return _zkey(row, pos[u] + 1)
    return _zkey(row + 1, 0)


def _board_heights(snapshot: dict, beta: tuple[int, int], alive: Sequence[int], pos: dict) -> list[list[int]]:
    """Token board occupancy for one array: holes, shifted past the repaired part."""
    row, u = beta
    cols = []
    for v in alive:
        base = row if pos[v] < pos[u] else row - 1
        heights = []
        for idx, cell in enumerate(snapshot[v]):
            if isinstance(cell, Hole):
                h = (idx + 1) - base
                if h < 1:
                    raise InternalInvariantError("hole found inside the repaired region")
                heights.append(h)
        cols.append(sorted(heights))
    return cols


def transcript_from_holes(seq: HoleArraySequence, cross_check: bool = True) -> GameTranscript:
    """Play the repair sequence as a token game and validate every move.

    Holes become tokens, the repaired lower region is discarded, and the
    active column follows the repair order.  Moves are inferred from the
    occupancy difference of consecutive arrays and pushed through the rule
    engine; any illegality means the reduction (or the sequence) is broken,
    so it raises InternalInvariantError rather than a user-facing error.
    """
    alive = seq.alive
    pos = {u: i for i, u in enumerate(alive)}
    n_steps = len(seq.betas)

    boards = []
    for t in range(n_steps):
        boards.append(_board_heights(seq.snapshots[t], seq.betas[t], alive, pos))
    last_row, last_u = seq.betas[-1]
    successor = (last_row + 1, alive[0]) if pos[last_u] == len(alive) - 1 else (last_row, alive[pos[last_u] + 1])
    boards.append(_board_heights(seq.snapshots[n_steps], successor, alive, pos))

    moves: list[GameMove] = []
    for t in range(n_steps):
        _row, u = seq.betas[t]
        ui = pos[u]
        before, after = boards[t], boards[t + 1]
        gain = None
        for vi in range(len(alive)):
            if vi == ui:
                continue
            extra = set(after[vi]) - set(before[vi])
            lost = set(before[vi]) - set(after[vi])
            if lost:
                raise InternalInvariantError("a non-active column lost a token")
            if extra:
                if gain is not None or len(extra) != 1:
                    raise InternalInvariantError("more than one column gained a token in one step")
                gain = (vi, extra.pop())
        moves.append(GameMove.transfer(*gain) if gain else PASS)

    initial = board_from_heights(boards[0], active=0)
    try:
        transcript = play(initial, moves, s=seq.s)
    except Exception as exc:  # the reduction guarantees legality
        raise InternalInvariantError(f"hole-derived game is illegal: {exc}") from exc

    if cross_check:
        for t, board in enumerate(transcript.boards()):
            if board.occupancy() != boards[t]:
                raise InternalInvariantError(f"board {t} diverges from the hole arrays")
    return transcript


@dataclass(frozen=True)
class DropReport:
    rank: int
    height_full: int
    height_deleted: int
    drop: int
    critical_height: int
    game_bound: float | None

    @property
    def edge(self) -> int:
        return self.rank


@dataclass(frozen=True)
class PipelineResult:
    sequence: HoleArraySequence
    transcript: GameTranscript
    drops: tuple[DropReport, ...]

    @property
    def max_drop(self) -> int:
        return max((d.drop for d in self.drops), default=0)


def _drop_report(g: TotallyOrderedGraph, seq: HoleArraySequence, rank: int) -> DropReport:
    h_full = seq.table_full.heights[rank]
    h_red = seq.table_deleted.heights[rank]
    drop = h_full - h_red
    column = next(u for u in seq.alive if rank in seq.table_deleted.columns[u])
    i, j = seq.critical_at(h_red, column)
    crit = j - i
    if drop > crit:
        raise InternalInvariantError(
            f"drop {drop} of edge {rank} exceeds its critical interval height {crit}"
        )
    n_left = len(seq.alive)
    s = seq.s
    bound = None
    if s >= 1 and n_left >= max(2, s):
        bound = corollary_drop_bound(n_left, s)
        if drop > bound:
            raise InternalInvariantError(
                f"drop {drop} of edge {rank} exceeds the game bound {bound:.1f}"
            )
    return DropReport(rank, h_full, h_red, drop, crit, bound)


def measure_drop(g: TotallyOrderedGraph, deleted: Iterable[int], rank: int) -> DropReport:
    """Height lost by one edge when a vertex set is deleted.

    Both heights come from freshly built tables; the result is cross-checked
    against the critical-interval cap and the closed-form game bound.
    """
    gone = set(deleted)
    u, v = g.endpoints(rank)
    if u in gone or v in gone:
        raise GraphError(f"edge {rank} touches the deleted set")
    seq = hole_sequence(g, gone, validate=False)
    return _drop_report(g, seq, rank)


def deletion_pipeline(g: TotallyOrderedGraph, deleted: Iterable[int], validate: bool = True) -> PipelineResult:
    """Full run: repair sequence, induced token game, and every edge's drop."""
    seq = hole_sequence(g, deleted, validate=validate)
    transcript = transcript_from_holes(seq, cross_check=validate)
    drops = tuple(_drop_report(g, seq, rank) for rank in sorted(seq.table_deleted.heights))
    return PipelineResult(seq, transcript, drops)
