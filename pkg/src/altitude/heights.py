"""Height tables.

The table has one column per vertex and rows indexed from 1.  Cells are
filled in row-major order (row, then column); each cell receives the
largest-rank edge incident to its column vertex that no earlier cell took,
or stays empty.  Every edge lands in exactly one cell, and the row of that
cell is the edge's height.

Tables can be built for the whole graph or for an induced subgraph given
by a set of surviving vertices.  In the induced case, columns are the
surviving vertices (in vertex order) and only edges with both endpoints
surviving are placed; original ranks are kept, since heights depend only
on the relative edge order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Iterable

from .errors import GraphError, InternalInvariantError
from .graph import TotallyOrderedGraph


@dataclass(frozen=True, eq=False)
class HeightTable:
    vertices: tuple[int, ...]
    columns: dict  # vertex -> tuple of edge ranks, index row-1
    heights: dict  # edge rank -> row
    row_count: int

    @property
    def edge_count(self) -> int:
        return len(self.heights)

    def cell(self, row: int, vertex: int) -> int | None:
        col = self.columns[vertex]
        return col[row - 1] if 1 <= row <= len(col) else None

    def column(self, vertex: int) -> tuple[int, ...]:
        return self.columns[vertex]


def build_height_table(g: TotallyOrderedGraph, alive: Iterable[int] | None = None) -> HeightTable:
    verts = tuple(range(g.n)) if alive is None else tuple(sorted(set(alive)))
    if alive is not None:
        if verts and not (0 <= verts[0] and verts[-1] < g.n):
            raise GraphError("alive vertex out of range")
        aliveset = set(verts)
        stacks = {
            u: sorted((r for v, r in g.adjacency[u] if v in aliveset), reverse=True)
            for u in verts
        }
    else:
        stacks = {u: sorted((r for _, r in g.adjacency[u]), reverse=True) for u in verts}

    ptr = {u: 0 for u in verts}
    placed = set()
    columns = {u: [] for u in verts}
    heights: dict[int, int] = {}
    row = 0
    while True:
        row += 1
        placed_any = False
        for u in verts:
            s = stacks[u]
            i = ptr[u]
            while i < len(s) and s[i] in placed:
                i += 1
            ptr[u] = i
            if i < len(s):
                rank = s[i]
                ptr[u] = i + 1
                placed.add(rank)
                columns[u].append(rank)
                heights[rank] = row
                placed_any = True
        if not placed_any:
            row_count = row - 1
            break
    return HeightTable(
        vertices=verts,
        columns={u: tuple(c) for u, c in columns.items()},
        heights=heights,
        row_count=row_count,
    )


def edge_height(table: HeightTable, rank: int) -> int:
    try:
        return table.heights[rank]
    except KeyError:
        raise GraphError(f"edge rank {rank} is not in the table") from None


def max_height_edge(table: HeightTable) -> tuple[int, int]:
    """An edge of maximum height; ties go to the smaller rank.

    The returned height is at least ceil(m / n): each row has one cell per
    column, so m edges cannot all fit below that row.
    """
    if not table.heights:
        raise GraphError("graph has no edges")
    best_rank, best_row = None, 0
    for rank, row in table.heights.items():
        if row > best_row or (row == best_row and rank < best_rank):
            best_rank, best_row = rank, row
    floor_needed = ceil(len(table.heights) / len(table.vertices))
    if best_row < floor_needed:
        raise InternalInvariantError(
            f"max height {best_row} fell below ceil(m/n) = {floor_needed}"
        )
    return best_rank, best_row


def table_to_json_dict(table: HeightTable) -> dict:
    """Row-major listing with nulls for empty cells, plus the height map."""
    rows = []
    for row in range(1, table.row_count + 1):
        rows.append([table.cell(row, u) for u in table.vertices])
    return {
        "columns": list(table.vertices),
        "rows": rows,
        "heights": {str(rank): row for rank, row in sorted(table.heights.items())},
    }
