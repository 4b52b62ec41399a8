"""Ground truth for monotone walks.

For a fixed ordering, the longest monotone trail comes from a single pass
over the edges in rank order: strict rank increase already forbids edge
reuse, so walk lengths per endpoint are exact.  The longest monotone path
is found by depth-first search over edges in increasing rank with the
visited set as state, pruned by remaining-edge counts and by trail-length
upper bounds.

Minimizing over all m! orderings gives the exact altitude for small m.
For edge-transitive named families the rank-1 edge can be pinned to one
representative per automorphism orbit without changing the minimum, which
divides the work by the orbit size.  Larger instances fall back to
simulated annealing over rank transpositions, which produces verified
upper-bound witnesses.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from statistics import mean, quantiles
from typing import Sequence

from .errors import EnumerationLimitError, GraphError, InternalInvariantError
from .graph import TotallyOrderedGraph, graph_stats, reorder_edges
from .heights import build_height_table
from .paths import MonotonePath, MonotoneTrail, long_path_rodl, validate_path, validate_trail
from .rng import SplitMix64


def _trail_value(edge_seq: Sequence[tuple[int, int]], n: int) -> int:
    best = [0] * n
    for u, v in edge_seq:
        lu = best[u]
        lv = best[v]
        if lv + 1 > lu:
            best[u] = lv + 1
        if lu + 1 > lv:
            best[v] = lu + 1
    return max(best, default=0)


def longest_monotone_trail(g: TotallyOrderedGraph) -> tuple[int, MonotoneTrail]:
    """Exact longest monotone trail plus a witness.

    Per vertex, keep the best walk ending there; edge uv extends the best
    walk ending at u to one ending at v and vice versa, both updates
    reading the values from before the edge.
    """
    if g.n == 0:
        return 0, MonotoneTrail((), ())
    best = [0] * g.n
    back: list = [None] * g.n  # (rank, tail vertex, tail link)
    for rank, (u, v) in enumerate(g.edges, start=1):
        lu, lv = best[u], best[v]
        bu, bv = back[u], back[v]
        if lv + 1 > lu:
            best[u] = lv + 1
            back[u] = (rank, v, bv)
        if lu + 1 > lv:
            best[v] = lu + 1
            back[v] = (rank, u, bu)
    end = max(range(g.n), key=lambda v: best[v])
    verts = [end]
    ranks: list[int] = []
    node = back[end]
    while node is not None:
        rank, tail, node = node
        ranks.append(rank)
        verts.append(tail)
    verts.reverse()
    ranks.reverse()
    trail = MonotoneTrail(tuple(verts), tuple(ranks))
    validate_trail(g, trail)
    if trail.length != best[end]:
        raise InternalInvariantError("trail witness length disagrees with the DP value")
    return best[end], trail


def _suffix_trail_bounds(edge_seq: Sequence[tuple[int, int]], n: int) -> list[list[int]]:
    """suffix[i][v] = longest monotone trail starting at v using edges i.. (0-based)."""
    m = len(edge_seq)
    suffix = [[0] * n for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        row = suffix[i]
        nxt = suffix[i + 1]
        row[:] = nxt
        u, v = edge_seq[i]
        if 1 + nxt[v] > row[u]:
            row[u] = 1 + nxt[v]
        if 1 + nxt[u] > row[v]:
            row[v] = 1 + nxt[u]
    return suffix


def _path_search(edge_seq: Sequence[tuple[int, int]], n: int, budget: int | None = None):
    """Longest monotone path by branch and bound.

    Returns (length, vertices, edge positions (0-based), exact flag).
    """
    m = len(edge_seq)
    if m == 0:
        return 0, (0,) if n else (), (), True
    suffix = _suffix_trail_bounds(edge_seq, n)
    trail_cap = max(suffix[0])
    best = 0
    best_verts: tuple[int, ...] = ()
    best_edges: tuple[int, ...] = ()
    nodes = 0
    exact = True

    verts: list[int] = []
    idxs: list[int] = []

    def dfs(last: int, last_idx: int, length: int, mask: int) -> None:
        nonlocal best, best_verts, best_edges, nodes, exact
        if length > best:
            best = length
            best_verts = tuple(verts)
            best_edges = tuple(idxs)
        if best >= trail_cap:
            return
        nodes += 1
        if budget is not None and nodes > budget:
            exact = False
            return
        remaining = m - 1 - last_idx
        if length + remaining <= best:
            return
        if length + suffix[last_idx + 1][last] <= best:
            return
        for j in range(last_idx + 1, m):
            u, v = edge_seq[j]
            if u == last and not mask & (1 << v):
                nxt = v
            elif v == last and not mask & (1 << u):
                nxt = u
            else:
                continue
            verts.append(nxt)
            idxs.append(j)
            dfs(nxt, j, length + 1, mask | (1 << nxt))
            verts.pop()
            idxs.pop()

    for j, (u, v) in enumerate(edge_seq):
        if best >= trail_cap:
            break
        if 1 + (m - 1 - j) <= best:
            break  # later first edges cannot beat the incumbent
        for a, bvert in ((u, v), (v, u)):
            verts[:] = [a, bvert]
            idxs[:] = [j]
            dfs(bvert, j, 1, (1 << a) | (1 << bvert))
    return best, best_verts, best_edges, exact


def longest_monotone_path(g: TotallyOrderedGraph, budget: int | None = None) -> tuple[int, MonotonePath, bool]:
    """Longest monotone path; exact when the search finishes within budget."""
    if g.m == 0:
        path = MonotonePath((0,), ()) if g.n else MonotonePath((), ())
        return 0, path, True
    length, verts, idxs, exact = _path_search(g.edges, g.n, budget)
    path = MonotonePath(tuple(verts), tuple(i + 1 for i in idxs))
    validate_path(g, path)
    return length, path, exact


@dataclass(frozen=True)
class AltitudeReport:
    graph_id: str
    mode: str
    value: int | None
    lower: int
    upper: int
    witness: tuple[int, ...] | None  # original edge ranks in witness order
    orderings: int
    seconds: float
    exact: bool

    def to_json_dict(self) -> dict:
        return {
            "graph": self.graph_id,
            "mode": self.mode,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "witness": list(self.witness) if self.witness is not None else None,
            "orderings": self.orderings,
            "seconds": round(self.seconds, 6),
            "exact": self.exact,
        }


def edge_orbit_representatives(g: TotallyOrderedGraph) -> list[int] | None:
    """First-edge representatives (0-based) under known symmetry, else None.

    Complete graphs, cycles, stars, and hypercubes are edge-transitive.  A
    path graph only has the end-to-end reflection, pairing edge i with
    m - 1 - i.  Other graphs are enumerated without pruning.
    """
    if g.family in ("complete", "cycle", "star", "hypercube") and g.m >= 1:
        return [0]
    if g.family == "path" and g.m >= 1:
        return list(range((g.m + 1) // 2))
    return None


def _ordering_value(edge_seq, n: int, mode: str) -> int:
    if mode == "trail":
        return _trail_value(edge_seq, n)
    return _path_search(edge_seq, n)[0]


def _enumerate_partition(args) -> tuple[int, tuple[int, ...], int]:
    """Minimize over all orderings whose rank-1 edge is fixed; one worker task.

    permutations() yields in lexicographic order, so the first ordering
    attaining the minimum is the lexicographically smallest witness of the
    partition, which keeps results deterministic under any job count.
    """
    edges, n, first, mode = args
    rest = [i for i in range(len(edges)) if i != first]
    best_value = None
    best_witness = None
    count = 0
    seq = [edges[first]] + [None] * len(rest)
    trail_mode = mode == "trail"
    for perm in permutations(rest):
        for slot, idx in enumerate(perm, start=1):
            seq[slot] = edges[idx]
        value = _trail_value(seq, n) if trail_mode else _path_search(seq, n)[0]
        count += 1
        if best_value is None or value < best_value:
            best_value, best_witness = value, (first,) + perm
    return best_value, best_witness, count


def altitude_exact(
    g: TotallyOrderedGraph,
    mode: str = "trail",
    max_edges: int = 10,
    prune: bool = True,
    jobs: int = 1,
) -> AltitudeReport:
    """Exact altitude by enumerating all edge orderings (small m only).

    The witness is the minimizing ordering, reported as original ranks in
    their new order, and is re-verified before the report is returned.
    """
    if mode not in ("trail", "path"):
        raise GraphError("mode must be 'trail' or 'path'")
    if g.m > max_edges:
        raise EnumerationLimitError(
            f"{g.m} edges means {g.m}! orderings; raise max_edges or use adversarial_ordering"
        )
    start = time.monotonic()
    if g.m == 0:
        return AltitudeReport(g.graph_id, mode, 0, 0, 0, (), 0, time.monotonic() - start, True)

    reps = edge_orbit_representatives(g) if prune else None
    firsts = reps if reps is not None else list(range(g.m))
    tasks = [(g.edges, g.n, first, mode) for first in firsts]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_enumerate_partition, tasks))
    else:
        results = [_enumerate_partition(t) for t in tasks]

    best_value, best_witness, total = None, None, 0
    for value, witness, count in results:
        total += count
        if best_value is None or (value, witness) < (best_value, best_witness):
            best_value, best_witness = value, witness

    check_seq = [g.edges[i] for i in best_witness]
    if _ordering_value(check_seq, g.n, mode) != best_value:
        raise InternalInvariantError("witness ordering does not reproduce the reported value")
    _check_altitude_invariants(g, mode, best_value)
    witness_ranks = tuple(i + 1 for i in best_witness)
    return AltitudeReport(
        graph_id=g.graph_id,
        mode=mode,
        value=best_value,
        lower=best_value,
        upper=best_value,
        witness=witness_ranks,
        orderings=total,
        seconds=time.monotonic() - start,
        exact=True,
    )


def _check_altitude_invariants(g: TotallyOrderedGraph, mode: str, value: int) -> None:
    stats = graph_stats(g)
    if mode == "trail":
        if value > stats.chi_prime_bound:
            raise InternalInvariantError("trail altitude exceeds the greedy coloring bound")
        if g.m and value < math.ceil(stats.average_degree):
            raise InternalInvariantError("trail altitude fell below the average degree")
    else:
        floor_bound = math.floor(0.5 + math.sqrt(stats.average_degree))
        if value < floor_bound:
            raise InternalInvariantError("path altitude fell below its guaranteed floor")
        if value > stats.max_degree + 1:
            raise InternalInvariantError("path altitude exceeds max degree + 1")


def adversarial_ordering(
    g: TotallyOrderedGraph,
    iterations: int = 10_000,
    seed: int = 0,
    t0: float = 2.0,
    cooling: float = 0.9995,
    path_budget: int = 500_000,
) -> AltitudeReport:
    """Search for an ordering with a short longest monotone path.

    Simulated annealing over rank transpositions; the cheap trail length
    steers the walk and candidate improvements are certified by the exact
    path search, so the reported upper bound is a verified value of a
    concrete ordering.  Deterministic for a fixed seed.
    """
    if g.m == 0:
        return AltitudeReport(g.graph_id, "path", None, 0, 0, (), 0, 0.0, False)
    start = time.monotonic()
    rng = SplitMix64(seed)
    m = g.m
    order = list(range(m))
    seq = [g.edges[i] for i in order]
    proxy = _trail_value(seq, g.n)

    def exact_path(sequence) -> tuple[int, bool]:
        length, _verts, _idxs, exact = _path_search(sequence, g.n, path_budget)
        return length, exact

    best_upper, exact0 = exact_path(seq)
    if not exact0:
        raise EnumerationLimitError("path search budget too small to certify the initial ordering")
    best_witness = tuple(order)
    best_proxy = proxy
    temp = t0
    for _ in range(iterations):
        i = rng.below(m)
        j = rng.below(m)
        if i == j:
            temp *= cooling
            continue
        order[i], order[j] = order[j], order[i]
        seq[i], seq[j] = g.edges[order[i]], g.edges[order[j]]
        cand = _trail_value(seq, g.n)
        accept = cand <= proxy or rng.unit() < math.exp((proxy - cand) / max(temp, 1e-9))
        if accept:
            proxy = cand
            if cand < best_proxy:
                best_proxy = cand
                value, exact = exact_path(seq)
                if exact and value < best_upper:
                    best_upper = value
                    best_witness = tuple(order)
        else:
            order[i], order[j] = order[j], order[i]
            seq[i], seq[j] = g.edges[order[i]], g.edges[order[j]]
        temp *= cooling
    lower = max(1, math.floor(0.5 + math.sqrt(g.average_degree)))
    check_seq = [g.edges[i] for i in best_witness]
    check_value, check_exact = exact_path(check_seq)
    if not check_exact or check_value != best_upper:
        raise InternalInvariantError("adversarial witness failed re-verification")
    return AltitudeReport(
        graph_id=g.graph_id,
        mode="path",
        value=None,
        lower=lower,
        upper=best_upper,
        witness=tuple(i + 1 for i in best_witness),
        orderings=iterations,
        seconds=time.monotonic() - start,
        exact=False,
    )


def random_ordering_stats(
    g: TotallyOrderedGraph,
    trials: int,
    seed: int = 0,
    path_budget: int = 20_000,
) -> dict:
    """Observed trail lengths and path lower bounds over random orderings.

    Per trial: exact longest trail, plus the better of the table-extension
    path and the budgeted path search (both genuine paths of the sampled
    ordering, hence lower bounds).  Purely observational output.
    """
    if trials < 1:
        raise GraphError("need at least one trial")
    rng = SplitMix64(seed)
    trail_lengths = []
    path_bounds = []
    for _ in range(trials):
        if g.m:
            perm = [i + 1 for i in rng.permutation(g.m)]
            h = reorder_edges(g, perm)
        else:
            h = g
        trail_lengths.append(_trail_value(h.edges, h.n))
        if h.m:
            guided = long_path_rodl(h).length
            searched = _path_search(h.edges, h.n, path_budget)[0]
            path_bounds.append(max(guided, searched))
        else:
            path_bounds.append(0)

    def summary(xs: list[int]) -> dict:
        out = {
            "mean": mean(xs),
            "min": min(xs),
            "max": max(xs),
        }
        if len(xs) >= 2:
            q = quantiles(xs, n=4, method="inclusive")
            out.update({"p25": q[0], "p50": q[1], "p75": q[2]})
        return out

    return {
        "graph": g.graph_id,
        "trials": trials,
        "seed": seed,
        "trail": summary(trail_lengths),
        "path_lower_bound": summary(path_bounds),
    }
