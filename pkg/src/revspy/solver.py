"""Ground truth for small instances: exact game solving and strategy closure.

The infinite-horizon game is a safety game: the spies win from a state iff
they can avoid unguarded-meeting states forever.  We enumerate all count
vectors per team, precompute each team's one-move successor relation (count
vectors reachable by moving every unit at most one edge), and run a backward
attractor fixed point over (rev config) x (spy config) x (side to move).
Successor tables are built once per (graph, team size) and shared across a
sigma probe sequence; the attractor itself runs in a compiled kernel with a
NumPy fallback (see `revspy._core`).

`verify_strategy` certifies a deterministic spy strategy on an instance by
breadth-first closure over (rev config, strategy internal state), expanding
every legal revolutionary move and the strategy's unique reply, over every
initial revolutionary placement.
"""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ._core import BACKEND, attractor
from .engine import GameConfig, Position, Team, Transcript, unguarded_meetings, validate_team_move
from .graphs import Graph, GraphClass, classify, find_cycle

DEFAULT_MAX_STATES = 5_000_000


class StateSpaceTooLarge(Exception):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"estimated {estimate} states exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


class UnsupportedClass(Exception):
    pass


class AssumptionViolated(Exception):
    pass


def enumerate_counts(n: int, total: int):
    """All vectors of n nonnegative ints summing to total, lexicographic."""
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in enumerate_counts(n - 1, total - first):
            yield (first,) + rest


def _compositions(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


class ConfigSpace:
    """Indexed count vectors for one team plus the one-move successor relation."""

    def __init__(self, g: Graph, total: int):
        self.g = g
        self.total = total
        self.config_tuples = list(enumerate_counts(g.n, total))
        self.configs = np.array(self.config_tuples, dtype=np.int16)
        self.size = len(self.configs)
        self._powers = (total + 1) ** np.arange(g.n, dtype=np.int64)
        keys = self.configs.astype(np.int64) @ self._powers
        self._order = np.argsort(keys)
        self._sorted_keys = keys[self._order]
        self.indptr: np.ndarray | None = None
        self.indices: np.ndarray | None = None

    def index_of(self, counts) -> int:
        key = int(np.dot(np.asarray(counts, dtype=np.int64), self._powers))
        pos = int(np.searchsorted(self._sorted_keys, key))
        cid = int(self._order[pos])
        assert tuple(self.configs[cid]) == tuple(counts), f"unknown config {counts}"
        return cid

    def _arrival_options(self, v: int, count: int) -> np.ndarray:
        """Arrival-count deltas for `count` units leaving v (stay or one edge)."""
        slots = [v, *self.g.adjacency[v]]
        out = np.zeros((comb(count + len(slots) - 1, len(slots) - 1), self.g.n), dtype=np.int16)
        for i, split in enumerate(_compositions(count, len(slots))):
            for slot, c in zip(slots, split):
                out[i, slot] += c
        return out

    def successor_rows(self, counts) -> np.ndarray:
        """Distinct reachable count vectors from `counts` (rows, unsorted ids)."""
        arr = np.zeros((1, self.g.n), dtype=np.int16)
        for v, c in enumerate(counts):
            if c == 0:
                continue
            opts = self._arrival_options(v, int(c))
            arr = (arr[:, None, :] + opts[None, :, :]).reshape(-1, self.g.n)
            keys = arr.astype(np.int64) @ self._powers
            _, first = np.unique(keys, return_index=True)
            arr = arr[first]
        return arr

    def ids_of_rows(self, rows: np.ndarray) -> np.ndarray:
        keys = rows.astype(np.int64) @ self._powers
        pos = np.searchsorted(self._sorted_keys, keys)
        ids = self._order[pos]
        assert np.array_equal(self._sorted_keys[pos], keys), "successor outside config space"
        return ids

    def build_successors(self) -> None:
        if self.indptr is not None:
            return
        indptr = np.zeros(self.size + 1, dtype=np.int64)
        chunks = []
        for cid in range(self.size):
            ids = np.sort(self.ids_of_rows(self.successor_rows(self.configs[cid])))
            chunks.append(ids.astype(np.int32))
            indptr[cid + 1] = indptr[cid] + len(ids)
        self.indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int32)
        self.indptr = indptr

    def successors_of(self, cid: int) -> np.ndarray:
        assert self.indptr is not None and self.indices is not None
        return self.indices[self.indptr[cid] : self.indptr[cid + 1]]


def team_successors(g: Graph, counts: tuple[int, ...]) -> set[tuple[int, ...]]:
    """All count vectors reachable by moving each unit at most one edge."""
    space = ConfigSpace(g, sum(counts))
    return {tuple(int(x) for x in row) for row in space.successor_rows(counts)}


def _bad_matrix(rev_cfgs: np.ndarray, spy_cfgs: np.ndarray, m: int) -> np.ndarray:
    """bad[rev, spy] = some vertex has >= m revolutionaries and no spy."""
    meets = rev_cfgs >= m
    nospy = spy_cfgs == 0
    nr = len(rev_cfgs)
    out = np.empty((nr, len(spy_cfgs)), dtype=np.uint8)
    block = max(1, 2**22 // max(1, len(spy_cfgs) * rev_cfgs.shape[1]))
    for lo in range(0, nr, block):
        hi = min(nr, lo + block)
        out[lo:hi] = (meets[lo:hi, None, :] & nospy[None, :, :]).any(axis=2)
    return out.reshape(-1)


@dataclass
class WinSet:
    """Losing-for-spies sets with ranks (forced rounds to win) and policies."""

    rev_space: ConfigSpace
    spy_space: ConfigSpace
    m: int
    bad: np.ndarray
    losing_r: np.ndarray
    losing_s: np.ndarray
    rank_r: np.ndarray
    rank_s: np.ndarray

    def _idx(self, rev_id: int, spy_id: int) -> int:
        return rev_id * self.spy_space.size + spy_id

    def rev_to_move_losing(self, rev_id: int, spy_id: int) -> bool:
        return bool(self.losing_r[self._idx(rev_id, spy_id)])

    def revolutionaries_win(self) -> bool:
        """Placement phase: some rev placement defeats every spy placement."""
        ns = self.spy_space.size
        grid = (self.bad | self.losing_r).reshape(-1, ns)
        return bool(grid.all(axis=1).any())

    def rev_placement(self) -> int:
        ns = self.spy_space.size
        grid = (self.bad | self.losing_r).reshape(-1, ns)
        wins = np.flatnonzero(grid.all(axis=1))
        return int(wins[0]) if len(wins) else 0

    def spy_placement(self, rev_id: int) -> int:
        ns = self.spy_space.size
        row = slice(rev_id * ns, (rev_id + 1) * ns)
        safe = np.flatnonzero((self.bad[row] == 0) & (self.losing_r[row] == 0))
        if len(safe):
            return int(safe[0])
        ok = np.flatnonzero(self.bad[row] == 0)
        if len(ok):
            return int(ok[np.argmax(self.rank_r[row][ok])])
        return 0

    def rev_policy(self, rev_id: int, spy_id: int) -> int:
        """Successor rev config: decrease rank when winning, else stay."""
        if not self.rev_to_move_losing(rev_id, spy_id):
            return rev_id
        succ = self.rev_space.successors_of(rev_id)
        idxs = succ.astype(np.int64) * self.spy_space.size + spy_id
        mask = self.losing_s[idxs] == 1
        cand = succ[mask]
        ranks = self.rank_s[idxs[mask]]
        best = np.lexsort((cand, ranks))[0]
        return int(cand[best])

    def spy_policy(self, rev_id: int, spy_id: int) -> int:
        """Successor spy config: stay safe if possible, otherwise delay longest."""
        succ = self.spy_space.successors_of(spy_id)
        idxs = rev_id * self.spy_space.size + succ.astype(np.int64)
        safe = (self.bad[idxs] == 0) & (self.losing_r[idxs] == 0)
        if safe.any():
            return int(succ[safe][0])
        ok = self.bad[idxs] == 0
        if ok.any():
            cand = succ[ok]
            ranks = self.rank_r[idxs[ok]]
            best = np.lexsort((cand, -ranks))[0]
            return int(cand[best])
        return int(succ[0])


@dataclass
class SolveResult:
    winner: Team
    winset: WinSet
    states: int
    millis: float
    backend: str = BACKEND


def solve_safety(g: Graph, cfg: GameConfig, max_states: int | None = None) -> SolveResult:
    """Decide the infinite-horizon game exactly; see module docstring."""
    budget = DEFAULT_MAX_STATES if max_states is None else max_states
    nr = comb(cfg.r + g.n - 1, g.n - 1)
    ns = comb(cfg.s + g.n - 1, g.n - 1)
    estimate = 2 * nr * ns
    if estimate > budget:
        raise StateSpaceTooLarge(estimate, budget)
    t0 = time.perf_counter()
    rev_space = ConfigSpace(g, cfg.r)
    spy_space = ConfigSpace(g, cfg.s)
    rev_space.build_successors()
    spy_space.build_successors()
    bad = _bad_matrix(rev_space.configs, spy_space.configs, cfg.m)
    losing_r, losing_s, rank_r, rank_s = attractor(
        rev_space.indptr,
        rev_space.indices,
        spy_space.indptr,
        spy_space.indices,
        bad,
        rev_space.size,
        spy_space.size,
    )
    ws = WinSet(rev_space, spy_space, cfg.m, bad, losing_r, losing_s, rank_r, rank_s)
    winner = Team.REVOLUTIONARIES if ws.revolutionaries_win() else Team.SPIES
    millis = (time.perf_counter() - t0) * 1000.0
    return SolveResult(winner=winner, winset=ws, states=estimate, millis=millis)


class PolicySpyStrategy:
    """Plays the solver-extracted spy policy: stay safe, else delay longest."""

    team = Team.SPIES

    def __init__(self, winset: WinSet):
        self.ws = winset

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        assert observed is not None
        rev_id = self.ws.rev_space.index_of(observed.rev)
        return self.ws.spy_space.config_tuples[self.ws.spy_placement(rev_id)]

    def respond(self, pos: Position) -> tuple[int, ...]:
        rev_id = self.ws.rev_space.index_of(pos.rev)
        spy_id = self.ws.spy_space.index_of(pos.spy)
        return self.ws.spy_space.config_tuples[self.ws.spy_policy(rev_id, spy_id)]

    def state_key(self) -> tuple:
        return ()


class PolicyRevStrategy:
    """Plays the solver-extracted revolutionary policy: decrease rank to the win."""

    team = Team.REVOLUTIONARIES

    def __init__(self, winset: WinSet):
        self.ws = winset

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        return self.ws.rev_space.config_tuples[self.ws.rev_placement()]

    def respond(self, pos: Position) -> tuple[int, ...]:
        rev_id = self.ws.rev_space.index_of(pos.rev)
        spy_id = self.ws.spy_space.index_of(pos.spy)
        return self.ws.rev_space.config_tuples[self.ws.rev_policy(rev_id, spy_id)]

    def state_key(self) -> tuple:
        return ()


def trivial_bounds(g: Graph, m: int, r: int) -> tuple[int, int]:
    return min(g.n, r // m), min(g.n, r - m + 1)


@dataclass
class SigmaResult:
    graph_label: str
    m: int
    r: int
    sigma: int
    method: str
    verdicts: dict[int, str] = field(default_factory=dict)
    states: int = 0
    millis: float = 0.0


def sigma_exact(
    g: Graph, m: int, r: int, max_states: int | None = None, graph_label: str = "-"
) -> SigmaResult:
    """Smallest s with a spy win, by ascending probes from the trivial bound."""
    lower, upper = trivial_bounds(g, m, r)
    verdicts: dict[int, str] = {}
    states = 0
    millis = 0.0
    for s in range(lower, upper + 1):
        res = solve_safety(g, GameConfig(m=m, r=r, s=s), max_states=max_states)
        verdicts[s] = res.winner.value
        states += res.states
        millis += res.millis
        if res.winner is Team.SPIES:
            sigma = s
            break
    else:
        raise AssertionError(f"spies lost at the trivial upper bound s={upper}")
    assert lower <= sigma <= upper, "sigma escaped the trivial bounds"
    return SigmaResult(graph_label, m, r, sigma, "Exact", verdicts, states, millis)


def sigma_formula(g: Graph, m: int, r: int, graph_label: str = "-") -> SigmaResult:
    """Closed-form threshold for trees, forests, cycles, and unicyclic graphs."""
    cls = classify(g)
    if cls is GraphClass.OTHER:
        raise UnsupportedClass("no closed form beyond unicyclic graphs")
    if r > m * g.n:
        raise AssumptionViolated(f"requires r/m <= |V|, got r={r} m={m} n={g.n}")
    fl = r // m
    if cls in (GraphClass.TREE, GraphClass.FOREST) or r % m == 0 or r < m:
        sigma = fl
    else:
        cyc = find_cycle(g)
        assert cyc is not None
        length = len(cyc)
        if cls is GraphClass.CYCLE:
            sigma = fl if length <= fl + 2 else fl + 1
        else:
            t = g.n - length
            sigma = fl if length <= max(fl - t + 2, 3) else fl + 1
    return SigmaResult(graph_label, m, r, sigma, "Formula")


@dataclass
class VerifyResult:
    ok: bool
    counterexample: Transcript | None
    states_explored: int


def verify_strategy(
    g: Graph,
    cfg: GameConfig,
    strategy_factory,
    max_states: int | None = None,
    graph_label: str = "-",
) -> VerifyResult:
    """Adversarial closure over every revolutionary behavior vs one spy strategy.

    Explores (rev config, strategy state) breadth-first from every initial
    revolutionary placement; Ok iff no reachable post-spy position has an
    unguarded meeting.  On failure returns a minimal-length losing transcript.
    """
    budget = DEFAULT_MAX_STATES if max_states is None else max_states
    rev_space = ConfigSpace(g, cfg.r)
    rev_space.build_successors()
    zero = tuple(0 for _ in range(g.n))

    nodes: list[tuple[int, tuple[int, ...], object, int]] = []  # (rev_id, spy_vec, strategy, parent)
    visited: dict[tuple, int] = {}

    def make_transcript(node_idx: int, final_rev: tuple[int, ...] | None, final_spy) -> Transcript:
        chain = []
        idx = node_idx
        while idx != -1:
            rev_id, spy_vec, _, parent = nodes[idx]
            chain.append((rev_space.config_tuples[rev_id], spy_vec))
            idx = parent
        chain.reverse()
        if final_rev is not None:
            chain.append((final_rev, final_spy))
        tr = Transcript(graph_label=graph_label, m=cfg.m, r=cfg.r, s=cfg.s)
        for rnd, (rv, sv) in enumerate(chain):
            tr.record(rnd, Team.REVOLUTIONARIES, rv)
            if sv is not None:
                tr.record(rnd, Team.SPIES, sv)
        return tr

    if rev_space.size > budget:
        raise StateSpaceTooLarge(rev_space.size, budget)
    # placement phase: all initial revolutionary configurations
    for rev_id in range(rev_space.size):
        rev_vec = rev_space.config_tuples[rev_id]
        strategy = strategy_factory()
        spy_vec = tuple(strategy.place(g, cfg, Position(rev=rev_vec, spy=zero)))
        assert sum(spy_vec) == cfg.s and all(c >= 0 for c in spy_vec), "bad spy placement"
        nodes.append((rev_id, spy_vec, strategy, -1))
        node_idx = len(nodes) - 1
        if unguarded_meetings(Position(rev=rev_vec, spy=spy_vec), cfg.m):
            return VerifyResult(False, make_transcript(node_idx, None, None), len(nodes))
        visited[(rev_id, strategy.state_key())] = node_idx

    head = 0
    while head < len(nodes):
        rev_id, spy_vec, strategy, _ = nodes[head]
        for rev_next in rev_space.successors_of(rev_id):
            rev_next = int(rev_next)
            nxt_vec = rev_space.config_tuples[rev_next]
            stepped = strategy.clone() if hasattr(strategy, "clone") else copy.deepcopy(strategy)
            new_spy = tuple(stepped.respond(Position(rev=nxt_vec, spy=spy_vec)))
            validate_team_move(g, spy_vec, new_spy)
            assert sum(new_spy) == cfg.s
            if unguarded_meetings(Position(rev=nxt_vec, spy=new_spy), cfg.m):
                return VerifyResult(False, make_transcript(head, nxt_vec, new_spy), len(nodes))
            key = (rev_next, stepped.state_key())
            if key not in visited:
                nodes.append((rev_next, new_spy, stepped, head))
                visited[key] = len(nodes) - 1
                if len(nodes) > budget:
                    raise StateSpaceTooLarge(len(nodes), budget)
        head += 1
    return VerifyResult(True, None, len(nodes))
