"""Totally ordered graphs.

Vertices are 0..n-1 and the numeric order is the vertex order.  The edge
list fixes the edge order: ``edges[i]`` has rank ``i + 1``, so every
"larger edge" comparison is an integer comparison on ranks.  Graphs are
immutable values; every operation returns a new graph.

The on-disk format is JSON, ``{"n": <int>, "edges": [[u, v], ...]}``,
with list position (0-based) + 1 equal to the edge rank.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GraphError
from .rng import SplitMix64

FAMILIES = ("complete", "hypercube", "gnp", "path", "cycle", "cycle_join", "star")


@dataclass(frozen=True)
class TotallyOrderedGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    family: str | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex: (neighbor, edge rank) pairs in increasing rank order."""
        adj = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i + 1))
            adj[v].append((u, i + 1))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def rank_of(self) -> dict:
        return {pair: i + 1 for i, pair in enumerate(self.edges)}

    def endpoints(self, rank: int) -> tuple[int, int]:
        if not 1 <= rank <= self.m:
            raise GraphError(f"edge rank {rank} out of range 1..{self.m}")
        return self.edges[rank - 1]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def average_degree(self) -> float:
        return 2 * self.m / self.n if self.n else 0.0

    @property
    def graph_id(self) -> str:
        if self.family:
            return f"{self.family}-n{self.n}-m{self.m}"
        return f"graph-n{self.n}-m{self.m}"


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    average_degree: float
    max_degree: int
    girth: int | None  # None marks an acyclic graph (infinite girth)
    chi_prime_bound: int


def build_graph(n: int, edge_list: Sequence[Iterable[int]], family: str | None = None) -> TotallyOrderedGraph:
    """Build a totally ordered graph; list order is the edge order.

    Rejects self-loops, duplicate edges, and out-of-range vertices,
    reporting the offending list position.
    """
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    seen = set()
    edges = []
    for i, pair in enumerate(edge_list):
        u, v = pair
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range in edge at position {i}", index=i)
        if u == v:
            raise GraphError(f"self-loop at position {i}", index=i)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge at position {i}", index=i)
        seen.add(key)
        edges.append(key)
    return TotallyOrderedGraph(n, tuple(edges), family)


def _lexicographic(pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    return sorted((min(p), max(p)) for p in pairs)


def generate(family: str, n: int | None = None, *, p: float | None = None, seed: int = 0) -> TotallyOrderedGraph:
    """Generate a named family with lexicographic initial edge order.

    ``n`` is the vertex count, except for ``hypercube`` where it is the
    dimension.  ``gnp`` keeps each pair independently with probability
    ``p``, drawing from the seeded generator in lexicographic pair order,
    so the same seed reproduces the same graph everywhere.
    """
    if family not in FAMILIES:
        raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if n is None or n < 1:
        raise GraphError("family generators need a positive size parameter")

    if family == "complete":
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return build_graph(n, pairs, family)
    if family == "path":
        return build_graph(n, [(i, i + 1) for i in range(n - 1)], family)
    if family == "cycle":
        if n < 3:
            raise GraphError("cycle needs at least 3 vertices")
        pairs = _lexicographic([(i, (i + 1) % n) for i in range(n)])
        return build_graph(n, pairs, family)
    if family == "star":
        if n < 2:
            raise GraphError("star needs at least 2 vertices")
        return build_graph(n, [(0, i) for i in range(1, n)], family)
    if family == "cycle_join":
        # n-cycle joined to two extra vertices that stay non-adjacent
        if n < 3:
            raise GraphError("cycle_join needs a cycle on at least 3 vertices")
        pairs = [(i, (i + 1) % n) for i in range(n)]
        pairs += [(i, n) for i in range(n)]
        pairs += [(i, n + 1) for i in range(n)]
        return build_graph(n + 2, _lexicographic(pairs), family)
    if family == "hypercube":
        dim = n
        size = 1 << dim
        pairs = []
        for v in range(size):
            for b in range(dim):
                w = v ^ (1 << b)
                if v < w:
                    pairs.append((v, w))
        return build_graph(size, _lexicographic(pairs), family)
    # gnp
    if p is None or not 0.0 <= p <= 1.0:
        raise GraphError("gnp needs a probability p in [0, 1]")
    rng = SplitMix64(seed)
    pairs = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.unit() < p:
                pairs.append((u, v))
    return build_graph(n, pairs, family)


def reorder_edges(g: TotallyOrderedGraph, permutation: Sequence[int] | None = None, *, seed: int | None = None) -> TotallyOrderedGraph:
    """Permute the edge order; the underlying graph is unchanged.

    ``permutation[i]`` is the new rank of the edge whose old rank is
    ``i + 1``.  With ``seed`` instead, a uniform random permutation is
    drawn from the seeded generator.
    """
    if (permutation is None) == (seed is None):
        raise GraphError("pass exactly one of permutation or seed")
    m = g.m
    if permutation is None:
        perm = [i + 1 for i in SplitMix64(seed).permutation(m)]
    else:
        perm = list(permutation)
        if sorted(perm) != list(range(1, m + 1)):
            raise GraphError("permutation must be a bijection on 1..m")
    new_edges: list = [None] * m
    for old_idx, new_rank in enumerate(perm):
        new_edges[new_rank - 1] = g.edges[old_idx]
    return TotallyOrderedGraph(g.n, tuple(new_edges), g.family)


def greedy_edge_coloring(g: TotallyOrderedGraph) -> tuple[int, ...]:
    """Color each edge, in rank order, with the smallest class free at both ends.

    Classes are proper matchings, so the number of classes used is an
    upper bound on the edge-chromatic number.
    """
    used = [set() for _ in range(g.n)]
    colors = []
    for u, v in g.edges:
        c = 1
        while c in used[u] or c in used[v]:
            c += 1
        used[u].add(c)
        used[v].add(c)
        colors.append(c)
    return tuple(colors)


def matching_interval_ordering(g: TotallyOrderedGraph) -> TotallyOrderedGraph:
    """Reorder edges so each greedy color class occupies a contiguous rank interval.

    A monotone trail uses at most one edge per matching interval, so the
    longest monotone trail of the result is at most the number of classes.
    """
    colors = greedy_edge_coloring(g)
    order = sorted(range(g.m), key=lambda i: (colors[i], i))
    perm = [0] * g.m
    for new_idx, old_idx in enumerate(order):
        perm[old_idx] = new_idx + 1
    return reorder_edges(g, perm)


def girth(g: TotallyOrderedGraph) -> int | None:
    """Length of a shortest cycle, or None for an acyclic graph.

    BFS from every vertex; a non-tree edge seen at distance d1/d2 closes a
    cycle of length d1 + d2 + 1, and scanning all roots attains the minimum.
    """
    best = None
    adj = g.adjacency
    for root in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        q = deque([root])
        while q:
            x = q.popleft()
            if best is not None and dist[x] * 2 >= best:
                continue
            for y, _rank in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    q.append(y)
                elif y != parent[x]:
                    cyc = dist[x] + dist[y] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best


def graph_stats(g: TotallyOrderedGraph) -> GraphStats:
    max_degree = max((g.degree(v) for v in range(g.n)), default=0)
    colors = greedy_edge_coloring(g)
    return GraphStats(
        n=g.n,
        m=g.m,
        average_degree=g.average_degree,
        max_degree=max_degree,
        girth=girth(g),
        chi_prime_bound=max(colors, default=0),
    )


def delete_vertices(g: TotallyOrderedGraph, remove: Iterable[int]) -> tuple[TotallyOrderedGraph, tuple[int, ...], tuple[int, ...]]:
    """Induced subgraph on the surviving vertices, relabeled densely.

    Surviving vertices keep their relative order and surviving edges keep
    their relative rank order.  Returns (subgraph, old vertex id per new
    id, old rank per new rank).
    """
    gone = set(remove)
    if not all(0 <= v < g.n for v in gone):
        raise GraphError("vertex to delete out of range")
    keep = [v for v in range(g.n) if v not in gone]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = []
    old_ranks = []
    for i, (u, v) in enumerate(g.edges):
        if u in gone or v in gone:
            continue
        edges.append((new_id[u], new_id[v]))
        old_ranks.append(i + 1)
    sub = build_graph(len(keep), edges)
    return sub, tuple(keep), tuple(old_ranks)


def graph_to_json(g: TotallyOrderedGraph) -> str:
    payload = {"n": g.n, "edges": [[u, v] for u, v in g.edges]}
    return json.dumps(payload, separators=(",", ":")) + "\n"


def graph_from_json(text: str) -> TotallyOrderedGraph:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "n" not in payload or "edges" not in payload:
        raise GraphError('graph JSON must be {"n": ..., "edges": [[u, v], ...]}')
    return build_graph(payload["n"], payload["edges"])


def write_graph(g: TotallyOrderedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_json(g))


def read_graph(path) -> TotallyOrderedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GraphError(f"cannot read graph file {path}: {exc}") from exc
    return graph_from_json(text)
