"""Single-player token game on a column array.

Cells sit at heights 1, 2, ... in each of n columns.  A token is grounded
when every cell below it in its column is occupied, so the grounded tokens
of a column always form a full prefix of heights.  One column is active.
A step, in order:

1. optionally move the active column's highest grounded token to an empty
   cell no higher than its own, in a column this column has never traded
   with before (each unordered column pair supports at most one transfer
   in a whole game);
2. every ungrounded token of the active column falls one cell;
3. the active column advances cyclically.

An (n, s)-game starts with at most s tokens per column.  The interesting
quantity is how many tokens one column can accumulate; the triangular
strategy below realizes s * k of them with k the largest integer such that
s * C(k+1, 2) <= n, and the net-gain bound caps any column's gain at
1 + 2 * L * ceil(sqrt(2m)) when the game has at most 2^L transfers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import isqrt, sqrt
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import GameRuleError, GraphError, InternalInvariantError
from .rng import SplitMix64

PASS_KIND = "pass"
TRANSFER_KIND = "transfer"
DROP_KIND = "drop"


@dataclass(frozen=True)
class GameMove:
    """Pass, a cross-column transfer, or an in-column drop.

    The moved token is always the active column's highest grounded token,
    so a move only names the target cell.  In-column drops are part of the
    move grammar but can never be legal: every cell below the highest
    grounded token is occupied.
    """

    kind: str = PASS_KIND
    to_column: int | None = None
    to_height: int | None = None

    @staticmethod
    def transfer(column: int, height: int) -> "GameMove":
        return GameMove(TRANSFER_KIND, column, height)

    @staticmethod
    def drop(height: int) -> "GameMove":
        return GameMove(DROP_KIND, None, height)


PASS = GameMove()


class TransferEvent(NamedTuple):
    step: int
    token: int
    source: int
    target: int
    height: int


@dataclass(frozen=True)
class TokenBoard:
    """Immutable board snapshot; cells are (height, token id) per column."""

    n_columns: int
    columns: tuple[tuple[tuple[int, int], ...], ...]
    active_column: int = 0
    used_pairs: frozenset = frozenset()

    def heights(self, column: int) -> tuple[int, ...]:
        return tuple(h for h, _ in self.columns[column])

    def count(self, column: int) -> int:
        return len(self.columns[column])

    @property
    def token_count(self) -> int:
        return sum(len(c) for c in self.columns)

    def grounded_prefix(self, column: int) -> int:
        g = 0
        for h, _ in self.columns[column]:
            if h == g + 1:
                g += 1
            else:
                break
        return g

    def occupancy(self) -> list[list[int]]:
        return [sorted(h for h, _ in col) for col in self.columns]


def board_from_heights(columns: Sequence[Iterable[int]], active: int = 0) -> TokenBoard:
    """Board with fresh token ids, assigned column-major bottom-up."""
    cols = []
    tid = 0
    for hs in columns:
        hs = sorted(hs)
        if any(h < 1 for h in hs):
            raise GameRuleError("token heights start at 1")
        if len(set(hs)) != len(hs):
            raise GameRuleError("at most one token per cell")
        cells = []
        for h in hs:
            cells.append((h, tid))
            tid += 1
        cols.append(tuple(cells))
    if not cols:
        raise GameRuleError("a board needs at least one column")
    if not 0 <= active < len(cols):
        raise GameRuleError("active column out of range")
    return TokenBoard(len(cols), tuple(cols), active)


class _Engine:
    """Mutable game state; all rule checks live here.

    Per column the grounded tokens are a list (index + 1 = height) and the
    ungrounded ones a height -> id dict, which keeps passes over settled
    columns O(1).
    """

    __slots__ = (
        "n", "active", "grounded", "airborne", "airborne_total",
        "used", "step_index", "moves", "transfers",
    )

    def __init__(self, board: TokenBoard):
        self.n = board.n_columns
        self.active = board.active_column
        self.grounded: list[list[int]] = []
        self.airborne: list[dict[int, int]] = []
        for cells in board.columns:
            g: list[int] = []
            air: dict[int, int] = {}
            for h, tid in sorted(cells):
                if h == len(g) + 1 and not air:
                    g.append(tid)
                else:
                    air[h] = tid
            self.grounded.append(g)
            self.airborne.append(air)
        self.airborne_total = sum(len(a) for a in self.airborne)
        self.used = set(board.used_pairs)
        self.step_index = 0
        self.moves: dict[int, GameMove] = {}
        self.transfers: list[TransferEvent] = []

    def step(self, move: GameMove) -> None:
        u = self.active
        if move.kind != PASS_KIND:
            self._apply_move(u, move)
        air = self.airborne[u]
        if air:
            g = self.grounded[u]
            fallen = sorted((h - 1, tid) for h, tid in air.items())
            air.clear()
            landed = 0
            for h, tid in fallen:
                if h == len(g) + 1:
                    g.append(tid)
                    landed += 1
                else:
                    air[h] = tid
            self.airborne_total -= landed
        self.active = (u + 1) % self.n
        self.step_index += 1

    def _apply_move(self, u: int, move: GameMove) -> None:
        g = self.grounded[u]
        if not g:
            raise GameRuleError("active column has no grounded token to move")
        h = move.to_height
        if h is None or h < 1:
            raise GameRuleError("move needs a target height of at least 1")
        src_h = len(g)
        if h > src_h:
            raise GameRuleError("target cell is above the moved token")
        v = u if move.kind == DROP_KIND else move.to_column
        if v is None or not 0 <= v < self.n:
            raise GameRuleError("target column out of range")
        if v == u:
            # every cell at or below the highest grounded token is full
            raise GameRuleError("target cell is occupied")
        if h <= len(self.grounded[v]) or h in self.airborne[v]:
            raise GameRuleError("target cell is occupied")
        pair = (u, v) if u < v else (v, u)
        if pair in self.used:
            raise GameRuleError("column pair already used by an earlier transfer")
        tid = g.pop()
        gv, av = self.grounded[v], self.airborne[v]
        if h == len(gv) + 1:
            gv.append(tid)
            # tokens hovering right above the new top are grounded now
            while len(gv) + 1 in av:
                gv.append(av.pop(len(gv) + 1))
                self.airborne_total -= 1
        else:
            av[h] = tid
            self.airborne_total += 1
        self.used.add(pair)
        self.transfers.append(TransferEvent(self.step_index, tid, u, v, h))
        self.moves[self.step_index] = move

    def skip_quiet_cycle(self) -> None:
        # with nothing airborne, a full cycle of passes changes nothing
        if self.airborne_total:
            raise InternalInvariantError("quiet cycle requested while tokens are falling")
        self.step_index += self.n

    def snapshot(self) -> TokenBoard:
        cols = []
        for g, air in zip(self.grounded, self.airborne):
            cells = [(i + 1, tid) for i, tid in enumerate(g)]
            cells.extend(sorted(air.items()))
            cols.append(tuple(cells))
        return TokenBoard(self.n, tuple(cols), self.active, frozenset(self.used))

    def transcript(self, initial: TokenBoard) -> "GameTranscript":
        return GameTranscript(
            initial=initial,
            final=self.snapshot(),
            n_steps=self.step_index,
            moves=dict(self.moves),
            transfers=tuple(self.transfers),
        )


def apply_step(board: TokenBoard, move: GameMove) -> TokenBoard:
    """One validated game step as a pure function on board snapshots."""
    eng = _Engine(board)
    eng.step(move)
    return eng.snapshot()


def play(board: TokenBoard, moves: Iterable[GameMove | None], s: int | None = None) -> "GameTranscript":
    """Run a move sequence (None means pass), validating every step.

    With ``s`` given, the initial board must satisfy the (n, s) start
    condition of at most s tokens per column.
    """
    if s is not None:
        for c in range(board.n_columns):
            if board.count(c) > s:
                raise GameRuleError(f"column {c} starts with more than {s} tokens")
    eng = _Engine(board)
    for idx, mv in enumerate(moves):
        try:
            eng.step(mv if mv is not None else PASS)
        except GameRuleError as exc:
            raise GameRuleError(f"illegal move at step {idx}: {exc}") from exc
    return eng.transcript(board)


@dataclass(frozen=True)
class GameTranscript:
    """A finished game: initial and final boards plus the sparse move list.

    Pass steps are implicit; replaying the moves from the initial board
    reproduces every intermediate board, which keeps long games cheap to
    store while leaving full snapshots available on demand.
    """

    initial: TokenBoard
    final: TokenBoard
    n_steps: int
    moves: dict
    transfers: tuple

    @property
    def n_columns(self) -> int:
        return self.initial.n_columns

    @property
    def transfer_count(self) -> int:
        return len(self.transfers)

    @property
    def token_count(self) -> int:
        return self.initial.token_count

    def boards(self) -> Iterator[TokenBoard]:
        """All n_steps + 1 boards, replayed from the start."""
        eng = _Engine(self.initial)
        yield eng.snapshot()
        for step in range(self.n_steps):
            eng.step(self.moves.get(step, PASS))
            yield eng.snapshot()

    def board_at(self, step: int) -> TokenBoard:
        if not 0 <= step <= self.n_steps:
            raise GraphError(f"step {step} outside 0..{self.n_steps}")
        eng = _Engine(self.initial)
        for i in range(step):
            eng.step(self.moves.get(i, PASS))
        return eng.snapshot()

    def initial_counts(self) -> list[int]:
        return [self.initial.count(c) for c in range(self.n_columns)]

    def final_counts(self) -> list[int]:
        return [self.final.count(c) for c in range(self.n_columns)]

    def net_gains(self) -> list[int]:
        return [f - i for i, f in zip(self.initial_counts(), self.final_counts())]

    def validate(self, s: int | None = None) -> None:
        """Re-run the whole game through the rule checker."""
        replayed = play(self.initial, (self.moves.get(i) for i in range(self.n_steps)), s=s)
        if replayed.final != self.final:
            raise InternalInvariantError("replay does not reproduce the final board")
        if replayed.transfers != self.transfers:
            raise InternalInvariantError("replay does not reproduce the transfer log")

    def check_heights_nonincreasing(self) -> None:
        """No token ever gains height over the course of the game."""
        last: dict[int, int] = {}
        for board in self.boards():
            for col in board.columns:
                for h, tid in col:
                    if tid in last and h > last[tid]:
                        raise InternalInvariantError(f"token {tid} rose from {last[tid]} to {h}")
                    last[tid] = h

    def to_json_dict(self) -> dict:
        return {
            "n_columns": self.n_columns,
            "n_steps": self.n_steps,
            "initial": [list(map(list, col)) for col in self.initial.columns],
            "final": [list(map(list, col)) for col in self.final.columns],
            "moves": [
                {"step": step, "kind": mv.kind, "to_column": mv.to_column, "to_height": mv.to_height}
                for step, mv in sorted(self.moves.items())
            ],
            "transfers": [list(ev) for ev in self.transfers],
        }


def ceil_sqrt(x: int) -> int:
    r = isqrt(x)
    return r if r * r == x else r + 1


def column_gain_bound(m: int, ell: int) -> int:
    """Max net tokens any column gains in a game with m tokens, <= 2^ell transfers."""
    if m < 0 or ell < 0:
        raise GraphError("token count and transfer exponent must be non-negative")
    return 1 + 2 * ell * ceil_sqrt(2 * m)


def corollary_drop_bound(n: int, s: int) -> float:
    """Closed-form cap 11 * sqrt(n s) * lg n, valid for n >= max(2, s)."""
    if n < max(2, s):
        raise GraphError("bound needs n >= max(2, s)")
    return 11.0 * sqrt(n * s) * math.log2(n)


def transfer_budget_log(transcript: GameTranscript) -> int:
    """Smallest L with transfer_count <= 2^L."""
    t = transcript.transfer_count
    return max(0, (t - 1).bit_length()) if t else 0


def check_net_gain_bound(transcript: GameTranscript, ell: int | None = None) -> int:
    """Assert every column's net gain respects the transfer-budget bound.

    Default ell = floor(2 lg n): a game on n columns has at most C(n, 2)
    transfers, which 2^ell covers.  Returns the bound used.
    """
    n = transcript.n_columns
    if ell is None:
        if n < 2:
            ell = 0
        else:
            ell = math.floor(2 * math.log2(n))
    if transcript.transfer_count > 2**ell:
        raise InternalInvariantError("transfer count exceeds the 2^ell budget")
    bound = column_gain_bound(transcript.token_count, ell)
    for col, gain in enumerate(transcript.net_gains()):
        if gain > bound:
            raise InternalInvariantError(
                f"column {col} gained {gain} tokens, above the bound {bound}"
            )
    return bound


def triangular_k(n: int, s: int) -> int:
    """Largest k with s * C(k+1, 2) <= n."""
    k = 0
    while s * (k + 1) * (k + 2) // 2 <= n:
        k += 1
    return k


def triangular_strategy(n: int, s: int) -> GameTranscript:
    """Pile s * k tokens into one column of an (n, s)-game.

    Disjoint column blocks M_1..M_k with |M_j| = s*j each carry a staircase
    (column i of M_j ends holding i tokens).  Block j is built by peeling
    the highest grounded token off every column of M_{j-1}, one target
    column at a time from the right, so each column pair transfers at most
    once; the staircase is then topped off by tokens that started floating
    high in M_j and sink one cell per cycle until they land.

    Float heights are scheduled so a column's floaters stay above its
    landing zone until its inbound transfers finish and touch down on the
    next cycle; the whole construction is replayed through the rule engine,
    so any scheduling error would surface as an illegal move.
    """
    if s < 1 or n < s:
        raise GraphError("triangular strategy needs n >= s >= 1")
    k = triangular_k(n, s)

    bases = []
    b = 0
    for j in range(1, k + 1):
        bases.append(b)
        b += s * j

    phase_start: dict[int, int] = {}
    cycles = 0
    for j in range(2, k + 1):
        phase_start[j] = cycles
        cycles += s * (j - 1) + 1  # inbound rounds plus one settle cycle
    total_cycles = cycles

    plan_by_cycle: dict[int, dict[int, GameMove]] = {}
    for j in range(2, k + 1):
        start = phase_start[j]
        for t in range(1, s * (j - 1) + 1):
            cyc = start + t - 1
            dst = bases[j - 1] + (s * j - t)
            cplan = plan_by_cycle.setdefault(cyc, {})
            for q, src_i in enumerate(range(t, s * (j - 1) + 1), start=1):
                src = bases[j - 2] + (src_i - 1)
                cplan[src] = GameMove.transfer(dst, q)

    cols: list[list[int]] = [[] for _ in range(n)]
    for j in range(1, k + 1):
        for i in range(1, s * j + 1):
            col = bases[j - 1] + i - 1
            if i <= s:
                cols[col] = list(range(1, i + 1))  # never receives transfers
            else:
                round_cycle = phase_start[j] + s * j - i
                bottom = round_cycle + (i - s) + 2
                cols[col] = list(range(bottom, bottom + s))

    board = board_from_heights(cols, active=0)
    eng = _Engine(board)
    for cyc in range(total_cycles):
        cplan = plan_by_cycle.get(cyc)
        if cplan is None and eng.airborne_total == 0:
            eng.skip_quiet_cycle()
            continue
        for col in range(n):
            eng.step(cplan.get(col, PASS) if cplan else PASS)
    transcript = eng.transcript(board)

    final_col = bases[k - 1] + s * k - 1
    got = transcript.final.count(final_col)
    if got != s * k:
        raise InternalInvariantError(f"final column holds {got} tokens, wanted {s * k}")
    if got < sqrt(2 * n * s) - 1.5 * s:
        raise InternalInvariantError("final column fell below sqrt(2ns) - 3s/2")
    return transcript


def random_game(n: int, s: int, seed: int, steps: int | None = None, move_prob: float = 0.6) -> GameTranscript:
    """Seeded random legal play of an (n, s)-game.

    Starts from a random board with at most s tokens per column, then at
    each step either passes or transfers the active column's highest
    grounded token to a random legal cell.
    """
    if n < 1 or s < 0:
        raise GraphError("random game needs n >= 1 columns and s >= 0")
    rng = SplitMix64(seed)
    span = 2 * s + 4
    cols = []
    for _ in range(n):
        cnt = rng.below(s + 1)
        cols.append([h + 1 for h in rng.sample(span, cnt)])
    board = board_from_heights(cols, active=0)
    eng = _Engine(board)
    total = steps if steps is not None else 4 * n
    for _ in range(total):
        u = eng.active
        move = PASS
        g = eng.grounded[u]
        if g and rng.unit() < move_prob:
            src_h = len(g)
            for v in rng.permutation(n):
                if v == u:
                    continue
                pair = (u, v) if u < v else (v, u)
                if pair in eng.used:
                    continue
                gv, av = eng.grounded[v], eng.airborne[v]
                free = [h for h in range(len(gv) + 1, src_h + 1) if h not in av]
                if free:
                    move = GameMove.transfer(v, rng.choice(free))
                    break
        eng.step(move)
    return eng.transcript(board)


@dataclass(frozen=True)
class SubgameWitness:
    start_step: int
    end_step: int
    column: int
    start_count: int
    end_count: int
    transfer_count: int
    transcript: GameTranscript


def extract_subgame(transcript: GameTranscript, column: int, a_prime: int, r: int) -> SubgameWitness:
    """Find a half-transfer-budget subgame in which some column grows a lot.

    Given a column that went from a to b tokens in a game with m tokens and
    at most 2^L transfers, and parameters with m < (a' + 1) * r / 2, the
    returned subinterval has at most 2^(L-1) transfers and contains a
    column that starts with at most a' tokens yet reaches at least
    b - a - r + 1.  Construction: take the r highest-finishing tokens that
    ever entered the column, split the game at the median transfer, keep
    the half containing at least half of their final arrivals, and
    pigeonhole over their (all distinct) source columns.
    """
    if not 0 <= column < transcript.n_columns:
        raise GraphError("column out of range")
    if r < 1 or a_prime < 0:
        raise GraphError("need r >= 1 and a' >= 0")
    m = transcript.token_count
    if not m < (a_prime + 1) * r / 2:
        raise GraphError("parameters must satisfy m < (a' + 1) * r / 2")

    a = transcript.initial.count(column)
    b = transcript.final.count(column)
    b_prime = b - a - r + 1

    def trivial() -> SubgameWitness:
        sub = GameTranscript(
            initial=transcript.initial,
            final=transcript.initial,
            n_steps=0,
            moves={},
            transfers=(),
        )
        return SubgameWitness(0, 0, column, a, a, 0, sub)

    ever_moved = {ev.token for ev in transcript.transfers}
    initially_here = {tid for _, tid in transcript.initial.columns[column]}
    stayed = initially_here - ever_moved
    movers = [(h, tid) for h, tid in transcript.final.columns[column] if tid not in stayed]
    if transcript.transfer_count == 0 or len(movers) < r:
        return trivial()

    movers.sort(reverse=True)
    top = movers[:r]
    if any(h < b_prime for h, _ in top):
        raise InternalInvariantError("a top mover finished below b - a - r + 1")

    arrival: dict[int, TransferEvent] = {}
    for ev in transcript.transfers:
        if ev.target == column:
            arrival[ev.token] = ev  # keep the last arrival
    try:
        events = [arrival[tid] for _, tid in top]
    except KeyError:
        raise InternalInvariantError("a mover has no recorded arrival") from None
    sources = [ev.source for ev in events]
    if len(set(sources)) != len(sources):
        raise InternalInvariantError("arrival sources are not distinct")

    steps = sorted(ev.step for ev in transcript.transfers)
    mid = steps[len(steps) // 2]
    first = [ev for ev in events if ev.step + 1 <= mid]
    second = [ev for ev in events if ev.step >= mid]
    if len(first) >= len(second):
        lo, chosen = 0, first
    else:
        lo, chosen = mid, second
    if 2 * len(chosen) < r:
        raise InternalInvariantError("neither half holds half of the arrivals")

    budget = transfer_budget_log(transcript)
    start_board = transcript.board_at(lo)
    chosen.sort(key=lambda ev: (ev.step, ev.source))
    witness_ev = None
    for ev in chosen:
        if start_board.count(ev.source) <= a_prime:
            witness_ev = ev
            break
    if witness_ev is None:
        raise InternalInvariantError("pigeonhole failed: every source column started large")

    hi = witness_ev.step
    end_board = transcript.board_at(hi)
    sub_moves = {i - lo: mv for i, mv in transcript.moves.items() if lo <= i < hi}
    sub_transfers = tuple(
        TransferEvent(ev.step - lo, ev.token, ev.source, ev.target, ev.height)
        for ev in transcript.transfers
        if lo <= ev.step < hi
    )
    if len(sub_transfers) > 2 ** max(0, budget - 1):
        raise InternalInvariantError("subinterval exceeds half the transfer budget")
    sub = GameTranscript(
        initial=start_board,
        final=end_board,
        n_steps=hi - lo,
        moves=sub_moves,
        transfers=sub_transfers,
    )
    end_count = end_board.count(witness_ev.source)
    if end_count < b_prime:
        raise InternalInvariantError("witness column did not reach b - a - r + 1 tokens")
    return SubgameWitness(
        start_step=lo,
        end_step=hi,
        column=witness_ev.source,
        start_count=start_board.count(witness_ev.source),
        end_count=end_count,
        transfer_count=len(sub_transfers),
        transcript=sub,
    )
