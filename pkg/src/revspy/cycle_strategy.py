"""Spy strategies on cycles and unicyclic graphs.

Three layers:

* ``CycleUnits`` is the follower ledger: every unit on the cycle (actual
  revolutionaries, fake revolutionaries banked at tree mates, stationary pad
  units topping the count up to spies*m) occupies a slot of a cyclically
  sorted sequence, and spy i stands with the unit at slot i*m.  After a
  revolutionary move the sequence is realigned by rotation search: among the
  <= len(units) cyclic alignments of the old and new sequences, take the
  first in which every slot is displaced at most one edge.  One must exist;
  if not, NoValidReindexing surfaces rather than being patched over.

* Hole retargeting for the floor(r/m) regime on short cycles: spies occupy
  all but at most two cycle vertices and shift one step along arcs each
  round so that only meeting-free (or otherwise covered) vertices stay
  unguarded.  Realized as a min-cost assignment with per-spy moves capped at
  one edge.

* The composite strategy on unicyclic graphs.  Mode Large (ceil(r/m) spies)
  runs the follower on the cycle and the tree strategy inside each attached
  tree, trading units at the mates: a revolutionary stepping into a tree
  leaves a fake behind, and whenever a tree's count crosses a multiple of m
  a block of m units is deleted from (or inserted into) the mate's run
  together with the spy it carries.  The floor(r/m) modes split on t: with
  more spies than off-cycle vertices each attached tree parks a reserve of
  |V(T)| spies at its mate and the s-t roaming cycle spies run hole
  retargeting, with the single-mate emergency lending one reserve to a
  neighboring meeting; on a triangle the graph splits into three root trees
  that trade freed spies across the pairwise-adjacent roots.

Initial positions go through the shadow start: the spies imagine every
revolutionary projected onto the cycle at its tree's mate, then replay
virtual rounds in which the projected units walk their tree paths to the
actual start while the strategy responds; the spy configuration after the
walk is the real placement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .engine import GameConfig, IllegalMove, Position, Team, unguarded_meetings, validate_team_move
from .graphs import (
    Graph,
    GraphClass,
    RootedTree,
    UnicyclicDecomposition,
    classify,
    decompose_unicyclic,
    find_cycle,
    root_tree,
)
from .tree_strategy import IllegalRevMove, TreeSpyState


class RevOffCycle(Exception):
    pass


class NoValidReindexing(AssertionError):
    pass


class PreconditionViolated(Exception):
    pass


class CycleConditionBroken(AssertionError):
    pass


class InvariantBroken(AssertionError):
    pass


def _cyc_dist(a: int, b: int, length: int) -> int:
    d = (a - b) % length
    return min(d, length - d)


@dataclass
class CycleUnits:
    """Cyclically sorted unit slots on a cycle; spy i rides the unit at slot i*m.

    Slots hold cycle positions (indices into the cycle sequence), not vertex
    labels.  The list is always a rotation of its ascending sort, so units on
    one vertex are cyclically contiguous and any m consecutive slots contain
    exactly one spy slot.  Deletions and insertions work in blocks whose size
    is a multiple of m, which shifts later slots by a multiple of m and so
    keeps the remaining spy slots aligned.
    """

    length: int
    m: int
    slots: list[int] = field(default_factory=list)

    @property
    def spy_count(self) -> int:
        return len(self.slots) // self.m

    def spy_slots(self) -> list[int]:
        return [self.slots[i * self.m] for i in range(self.spy_count)]

    def check_sorted(self) -> None:
        n = len(self.slots)
        descents = sum(1 for i in range(n) if self.slots[i] > self.slots[(i + 1) % n])
        assert descents <= 1, f"unit sequence lost cyclic order: {self.slots}"

    def _rotate(self, t: int) -> None:
        assert t % self.m == 0, "rotations must preserve the spy slot pattern"
        if t:
            self.slots = self.slots[t:] + self.slots[:t]

    def delete_at(self, pos: int, count: int) -> int:
        """Delete `count` units (a multiple of m) at pos; return departing spies."""
        if count == 0:
            return 0
        m, n = self.m, len(self.slots)
        assert count % m == 0
        have = sum(1 for p in self.slots if p == pos)
        assert have >= count, f"only {have} units at position {pos}, need {count}"
        if count == n:
            self.slots = []
            return count // m
        # pick `count` linearly consecutive slots of the run, rotating by a
        # multiple of m when the run spans the list cut
        if self.slots[0] == pos and self.slots[-1] == pos and have < n:
            i = 0
            while self.slots[i] == pos:
                i += 1
            j = n - 1
            while self.slots[j] == pos:
                j -= 1
            j += 1  # suffix run is [j, n)
            if n - j >= count:
                a = j
            elif i >= count:
                a = 0
            else:
                t = -(-(j + count - n) // m) * m
                assert t <= j, "no m-aligned rotation exposes the run"
                self._rotate(t)
                a = j - t
        else:
            a = next(k for k, p in enumerate(self.slots) if p == pos)
        assert all(p == pos for p in self.slots[a : a + count])
        del self.slots[a : a + count]
        self.check_sorted()
        return count // m

    def insert_at(self, pos: int, count: int) -> int:
        """Insert `count` units (a multiple of m) at pos; return arriving spies."""
        if count == 0:
            return 0
        assert count % self.m == 0
        if not self.slots:
            self.slots = [pos] * count
            return count // self.m
        n = len(self.slots)
        if pos in self.slots:
            if self.slots[0] == pos and self.slots[-1] == pos and any(p != pos for p in self.slots):
                i = 0
                while self.slots[i] == pos:
                    i += 1
                a = i  # end of the prefix part of the wrapped run
            else:
                a = next(k for k, p in enumerate(self.slots) if p == pos)
        else:
            a = None
            for i in range(1, n + 1):
                left = self.slots[i - 1]
                right = self.slots[i % n]
                gap = (right - left) % self.length
                if i == n and gap == 0:
                    gap = self.length  # all units on one vertex: the gap is the whole circle
                if gap and 0 < (pos - left) % self.length < gap:
                    a = i
                    break
            assert a is not None, f"position {pos} fits no gap of {self.slots}"
        self.slots[a:a] = [pos] * count
        self.check_sorted()
        return count // self.m

    def realign(self, new_multiset: list[int]) -> tuple[list[tuple[int, int]], int]:
        """Rotation search mapping old slots onto the new unit multiset.

        Returns (spy moves as (old_pos, new_pos) pairs, max displacement over
        all slots).  Raises NoValidReindexing when no cyclic alignment moves
        every slot at most one edge; that would contradict the follower
        argument and must surface.
        """
        n = len(self.slots)
        assert len(new_multiset) == n, f"unit count changed {n} -> {len(new_multiset)}"
        if n == 0:
            return [], 0
        new_sorted = sorted(new_multiset)
        for k in range(n):
            worst = 0
            ok = True
            for j in range(n):
                d = _cyc_dist(self.slots[j], new_sorted[(j + k) % n], self.length)
                if d > 1:
                    ok = False
                    break
                worst = max(worst, d)
            if ok:
                old_spies = self.spy_slots()
                self.slots = [new_sorted[(j + k) % n] for j in range(n)]
                return list(zip(old_spies, self.spy_slots())), worst
        raise NoValidReindexing(
            f"no alignment of {sorted(self.slots)} onto {new_sorted} moves every slot <= 1 edge"
        )


def cycle_initial_placement(
    cycle: tuple[int, ...], rev: tuple[int, ...], m: int, s: int
) -> tuple[dict[int, int], CycleUnits, int]:
    """Follower placement: spies on every m-th unit, pads filling s*m - r.

    `rev` is a full count vector with support on the cycle.  Returns spy
    counts per vertex, the unit ledger, and the pad anchor position (the
    smallest-label occupied vertex, where the stationary pads live).
    """
    length = len(cycle)
    pos_of = {v: i for i, v in enumerate(cycle)}
    r = sum(rev)
    for v, c in enumerate(rev):
        if c and v not in pos_of:
            raise RevOffCycle(f"revolutionary at {v} is off the cycle")
    assert s * m >= r, "follower placement needs s >= ceil(r/m)"
    units = CycleUnits(length=length, m=m)
    if r == 0:
        return {}, units, 0
    occupied = [v for v in cycle if rev[v] > 0]
    anchor = pos_of[min(occupied)]
    positions = sorted(
        (pos_of[v] for v in occupied for _ in range(rev[v])),
        key=lambda p: (p - anchor) % length,
    )
    units.slots = [anchor] * (s * m - r) + positions
    units.check_sorted()
    spies: dict[int, int] = {}
    for p in units.spy_slots():
        spies[cycle[p]] = spies.get(cycle[p], 0) + 1
    return spies, units, anchor


def cycle_reindex(
    units: CycleUnits,
    cycle: tuple[int, ...],
    new_rev: tuple[int, ...],
    pads: int = 0,
    pad_anchor: int = 0,
) -> tuple[list[tuple[int, int]], int]:
    """Realign the ledger after a revolutionary move on a bare cycle."""
    pos_of = {v: i for i, v in enumerate(cycle)}
    for v, c in enumerate(new_rev):
        if c and v not in pos_of:
            raise RevOffCycle(f"revolutionary at {v} is off the cycle")
    multiset = [pos_of[v] for v, c in enumerate(new_rev) for _ in range(c)]
    multiset += [pad_anchor] * pads
    return units.realign(multiset)


_BIG = 10**6


def retarget_distinct(
    length: int,
    old_positions: list[int] | None,
    allowed_holes: set[int],
    num_holes: int,
) -> tuple[tuple[int, ...], list[tuple[int, int]]] | None:
    """Choose a hole set and one-edge spy moves onto all other cycle vertices.

    Spies sit on distinct cycle positions; the new spy set is the complement
    of the holes.  Candidates are scanned and the cheapest feasible
    assignment wins (ties by hole labels).  `old_positions=None` means free
    placement.  Returns None when no candidate admits one-edge moves.
    """
    candidates = [tuple(sorted(c)) for c in itertools.combinations(sorted(allowed_holes), num_holes)]
    if old_positions is None:
        if not candidates:
            return None
        holes = candidates[0]
        return holes, [(p, p) for p in range(length) if p not in holes]
    best = None
    for holes in candidates:
        targets = [p for p in range(length) if p not in holes]
        if len(targets) != len(old_positions):
            continue
        k = len(targets)
        cost = np.full((k, k), _BIG, dtype=np.int64)
        for i, a in enumerate(old_positions):
            for j, b in enumerate(targets):
                d = _cyc_dist(a, b, length)
                if d <= 1:
                    cost[i, j] = d
        rows, cols = linear_sum_assignment(cost)
        total = int(cost[rows, cols].sum())
        if total >= _BIG:
            continue
        if best is None or total < best[0]:
            best = (total, holes, [(old_positions[i], targets[j]) for i, j in zip(rows, cols)])
    if best is None:
        return None
    return best[1], best[2]


class ShortCycleSpyStrategy:
    """floor(r/m) spies on a cycle of length <= floor(r/m)+2: hole shifting."""

    team = Team.SPIES

    def __init__(self) -> None:
        self.g: Graph | None = None
        self.m = 0
        self.cycle: tuple[int, ...] = ()
        self.spy_positions: list[int] = []
        self.parked: dict[int, int] = {}  # vertex label -> stationary spies
        self._last_rev: tuple[int, ...] | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        assert observed is not None
        if classify(g) is not GraphClass.CYCLE:
            raise PreconditionViolated("short-cycle strategy runs on cycle graphs")
        if cfg.s < g.n and g.n > cfg.s + 2:
            raise PreconditionViolated(f"needs cycle length <= s+2, got l={g.n} s={cfg.s}")
        self.g, self.m = g, cfg.m
        self.cycle = tuple(find_cycle(g))
        length = len(self.cycle)
        pos_of = {v: i for i, v in enumerate(self.cycle)}
        if cfg.s >= length:
            self.spy_positions = list(range(length))
            if cfg.s > length:
                self.parked = {self.cycle[0]: cfg.s - length}
        else:
            meetings = {pos_of[v] for v in self.cycle if observed.rev[v] >= cfg.m}
            res = retarget_distinct(length, None, set(range(length)) - meetings, length - cfg.s)
            if res is None:
                raise InvariantBroken("no hole set available at placement")
            self.spy_positions = sorted(b for _, b in res[1])
        self._last_rev = observed.rev
        return self._spy_vector()

    def _spy_vector(self) -> tuple[int, ...]:
        assert self.g is not None
        vec = [0] * self.g.n
        for p in self.spy_positions:
            vec[self.cycle[p]] += 1
        for v, c in self.parked.items():
            vec[v] += c
        return tuple(vec)

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.g is not None and self._last_rev is not None
        try:
            validate_team_move(self.g, self._last_rev, pos.rev)
        except IllegalMove as e:
            raise IllegalRevMove(str(e)) from e
        length = len(self.cycle)
        num_holes = length - len(self.spy_positions)
        if num_holes > 0:
            pos_of = {v: i for i, v in enumerate(self.cycle)}
            meetings = {pos_of[v] for v in self.cycle if pos.rev[v] >= self.m}
            res = retarget_distinct(length, self.spy_positions, set(range(length)) - meetings, num_holes)
            if res is None:
                raise InvariantBroken("hole shifting found no reachable target set")
            self.spy_positions = sorted(b for _, b in res[1])
        self._last_rev = pos.rev
        return self._spy_vector()

    def state_key(self) -> tuple:
        return (tuple(self.spy_positions), tuple(sorted(self.parked.items())))


class Mode:
    LARGE = "Large"
    CASE1 = "Case1"
    CASE2 = "Case2"
    IDLE = "Idle"


@dataclass
class _AttachedTree:
    tree: RootedTree
    mate: int
    state: TreeSpyState


class UnicyclicSpyStrategy:
    """Composite spy strategy on cycles, unicyclic graphs, and their forests.

    Mode selection at placement: Large whenever the cycle component's budget
    reaches ceil(r/m); otherwise the floor-budget characterization cases
    (Case1 for s > t with a short cycle, Case2 for triangles).  Components
    disconnected from the cycle play independent capped tree games.
    """

    team = Team.SPIES

    def __init__(self) -> None:
        self.g: Graph | None = None
        self.cfg: GameConfig | None = None
        self.dec: UnicyclicDecomposition | None = None
        self.mode = Mode.IDLE
        self.cycle: tuple[int, ...] = ()
        self.pos_of: dict[int, int] = {}
        self.attached: list[_AttachedTree] = []
        self.off_components: list[TreeSpyState] = []
        self.parked: dict[int, int] = {}
        # Large mode
        self.units: CycleUnits | None = None
        self.pads = 0
        self.pad_anchor = 0
        self.fakes: dict[int, int] = {}
        # Case 1
        self.reserves: dict[int, int] = {}
        self.cycle_spy_positions: list[int] = []
        self.lent: tuple[int, int, int] | None = None  # (tree index, at pos, home pos)
        self._s_cyc = 0
        # Case 2
        self.groups: list[TreeSpyState] = []
        self.extras: dict[int, int] = {}
        self._last_rev: tuple[int, ...] | None = None
        self.last_max_displacement = 0

    # ----- placement -----

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        assert observed is not None
        cls = classify(g)
        if cls not in (GraphClass.CYCLE, GraphClass.UNICYCLIC, GraphClass.UNICYCLIC_FOREST):
            raise PreconditionViolated(f"composite strategy needs a unicyclic graph, got {cls.value}")
        self.g, self.cfg = g, cfg
        self.dec = decompose_unicyclic(g)
        self.cycle = self.dec.cycle
        self.pos_of = {v: i for i, v in enumerate(self.cycle)}

        budget_off = 0
        self.off_components = []
        off_vertices: set[int] = set()
        for tr, mate in zip(self.dec.attached_trees, self.dec.mates):
            if mate is None:
                st = TreeSpyState(tree=tr, m=cfg.m, capped=True)
                st.place({v: observed.rev[v] for v in tr.postorder})
                budget_off += st.budget
                self.off_components.append(st)
                off_vertices.update(tr.postorder)
        self.attached = [
            _AttachedTree(tree=tr, mate=mate, state=TreeSpyState(tree=tr, m=cfg.m))
            for tr, mate in zip(self.dec.attached_trees, self.dec.mates)
            if mate is not None
        ]
        r_c = cfg.r - sum(observed.rev[v] for v in off_vertices)
        s_c = cfg.s - budget_off
        assert s_c >= 0, "off-cycle components exceeded the spy supply"
        t_c = sum(len(a.tree.postorder) for a in self.attached)

        # Mode selection: Large whenever the ceil budget is granted; the floor
        # modes only where the characterization says the spies can win.  With
        # an unwinnable budget the spies park and lose honestly, so fuzzing
        # matches keep running.
        if r_c < cfg.m:
            self.mode = Mode.IDLE
        elif s_c >= -(-r_c // cfg.m):
            self.mode = Mode.LARGE
        elif s_c == r_c // cfg.m and s_c > t_c and len(self.cycle) <= s_c - t_c + 2:
            self.mode = Mode.CASE1
        elif s_c == r_c // cfg.m and s_c <= t_c and len(self.cycle) == 3:
            self.mode = Mode.CASE2
        else:
            self.mode = Mode.IDLE

        self._init_cycle_component(observed.rev, r_c, s_c, t_c)
        self._last_rev = observed.rev
        vec = self._spy_vector()
        assert sum(vec) == cfg.s, f"placement used {sum(vec)} spies, have {cfg.s}"
        return vec

    def _walk_schedule(self, rev: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Shadow start: projected position on the cycle, then one-edge walks."""
        assert self.g is not None and self.dec is not None
        paths = []
        for v in range(self.g.n):
            for _ in range(rev[v]):
                if v in self.pos_of:
                    paths.append([v])
                    continue
                idx = self.dec.tree_of(v)
                assert idx is not None
                tr = self.dec.attached_trees[idx]
                mate = self.dec.mates[idx]
                if mate is None:
                    continue  # off-cycle component, independent game
                chain = [v]
                while chain[-1] != tr.root:
                    chain.append(tr.parent[chain[-1]])
                chain.append(mate)
                paths.append(chain[::-1])
        horizon = max((len(p) for p in paths), default=1)
        schedule = []
        for k in range(horizon):
            vec = [0] * self.g.n
            for p in paths:
                vec[p[min(k, len(p) - 1)]] += 1
            schedule.append(tuple(vec))
        return schedule

    def _init_cycle_component(self, rev: tuple[int, ...], r_c: int, s_c: int, t_c: int) -> None:
        assert self.g is not None and self.cfg is not None
        m = self.cfg.m
        self.fakes = {i: 0 for i in range(len(self.attached))}
        for a in self.attached:
            # a reserve of |V(T)| spies caps what a Case-1 tree may demand
            a.state.capped = self.mode == Mode.CASE1
            a.state.place({v: 0 for v in a.tree.postorder})
        self.parked = {}

        if self.mode == Mode.IDLE:
            if s_c:
                self.parked = {0: s_c}
            return

        schedule = self._walk_schedule(rev)
        virtual0 = schedule[0]
        if self.mode == Mode.LARGE:
            follow = -(-r_c // m)
            if s_c > follow:
                self.parked[self.cycle[0]] = s_c - follow
            _, self.units, self.pad_anchor = cycle_initial_placement(
                self.cycle, self._cycle_only(virtual0), m, follow
            )
            self.pads = follow * m - r_c
        elif self.mode == Mode.CASE1:
            self.reserves = {i: len(a.tree.postorder) for i, a in enumerate(self.attached)}
            self.lent = None
            self._s_cyc = s_c - t_c
            self._case1_retarget(virtual0, initial=True)
        elif self.mode == Mode.CASE2:
            self.groups = []
            used = 0
            for v_i in self.cycle:
                territory = {v_i}
                for a in self.attached:
                    if a.mate == v_i:
                        territory.update(a.tree.postorder)
                st = TreeSpyState(tree=root_tree(self.g, v_i, restrict=territory), m=m)
                st.place({u: virtual0[u] for u in territory})
                used += st.budget
                self.groups.append(st)
            self.extras = {min(self.cycle): s_c - used} if s_c > used else {}

        for step in schedule[1:]:
            self._respond_cycle_component(step)
            self._check_master(step)
        self._check_master(schedule[-1])

    # ----- responding -----

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.g is not None and self._last_rev is not None
        try:
            validate_team_move(self.g, self._last_rev, pos.rev)
        except IllegalMove as e:
            raise IllegalRevMove(str(e)) from e
        for st in self.off_components:
            upd = st.update({v: pos.rev[v] for v in st.tree.postorder})
            assert upd.external_in == 0 and upd.external_out == 0
        self._respond_cycle_component(pos.rev)
        self._last_rev = pos.rev
        vec = self._spy_vector()
        if self.mode is not Mode.IDLE:
            self._check_master(pos.rev, vec)
        return vec

    def _cycle_only(self, rev: tuple[int, ...]) -> tuple[int, ...]:
        assert self.g is not None
        return tuple(rev[v] if v in self.pos_of else 0 for v in range(self.g.n))

    def _respond_cycle_component(self, rev: tuple[int, ...]) -> None:
        if self.mode == Mode.LARGE:
            self._large_respond(rev)
        elif self.mode == Mode.CASE1:
            self._case1_respond(rev)
        elif self.mode == Mode.CASE2:
            self._case2_respond(rev)

    def _large_respond(self, rev: tuple[int, ...]) -> None:
        assert self.units is not None and self.cfg is not None
        m = self.cfg.m
        deltas = [
            sum(rev[v] for v in a.tree.postorder) // m - a.state.budget for a in self.attached
        ]
        # blocks of m leave a mate together with their spy before anything else
        for i, a in enumerate(self.attached):
            if deltas[i] > 0:
                gone = self.units.delete_at(self.pos_of[a.mate], m * deltas[i])
                assert gone == deltas[i]
        for i, a in enumerate(self.attached):
            upd = a.state.update({v: rev[v] for v in a.tree.postorder})
            assert upd.external_in == max(deltas[i], 0), f"tree {i} in-flux mismatch"
            assert upd.external_out == max(-deltas[i], 0), f"tree {i} out-flux mismatch"
            self.fakes[i] = sum(rev[v] for v in a.tree.postorder) % m
        # realign the surviving units onto the new multiset MINUS the blocks
        # about to be inserted: a spy returning from a tree spends its one
        # edge on z -> z*, so its block may not drift during the realignment
        multiset = [self.pos_of[v] for v in self.cycle for _ in range(rev[v])]
        for i, a in enumerate(self.attached):
            multiset += [self.pos_of[a.mate]] * self.fakes[i]
        multiset += [self.pad_anchor] * self.pads
        for i, a in enumerate(self.attached):
            if deltas[i] < 0:
                p = self.pos_of[a.mate]
                for _ in range(m * -deltas[i]):
                    multiset.remove(p)
        _, self.last_max_displacement = self.units.realign(multiset)
        for i, a in enumerate(self.attached):
            if deltas[i] < 0:
                back = self.units.insert_at(self.pos_of[a.mate], m * -deltas[i])
                assert back == -deltas[i]
        if len(self.units.slots) != m * self.units.spy_count:
            raise CycleConditionBroken("units on the cycle are not m times its spies")

    def _case1_retarget(self, rev: tuple[int, ...], initial: bool = False) -> None:
        """Re-aim the roaming cycle spies; lend a reserve only when forced."""
        assert self.cfg is not None
        length = len(self.cycle)
        m = self.cfg.m
        meetings = {self.pos_of[v] for v in self.cycle if rev[v] >= m}
        num_holes = length - self._s_cyc
        old = None if initial else list(self.cycle_spy_positions)
        prev = self.lent

        def coverage(lend: tuple[int, int, int] | None) -> set[int] | None:
            """Mate positions retaining spies after the hypothetical lend."""
            res2 = dict(self.reserves)
            if prev is not None and lend != prev:
                res2[prev[0]] += 1  # lent spy returns home, stands at its mate
            if lend is not None and lend != prev:
                if self.reserves[lend[0]] < 1:
                    return None  # the fresh lender must not be the returning spy
                res2[lend[0]] -= 1
            covered = set()
            for i, a in enumerate(self.attached):
                if res2[i] > 0:
                    covered.add(self.pos_of[a.mate])
            if lend is not None:
                covered.add(lend[1])
            return covered

        options: list[tuple[int, int, int] | None] = [None]
        for i, a in enumerate(self.attached):
            p = self.pos_of[a.mate]
            for q in sorted({(p - 1) % length, (p + 1) % length}):
                if q in meetings:
                    options.append((i, q, p))
        options.sort(key=lambda o: (0,) if o is None else (1, o[2], o[1], o[0]))

        for lend in options:
            covered = coverage(lend)
            if covered is None:
                continue
            allowed = (set(range(length)) - meetings) | covered
            res = retarget_distinct(length, old, allowed, num_holes)
            if res is not None:
                if prev is not None and lend != prev:
                    self.reserves[prev[0]] += 1
                if lend is not None and lend != prev:
                    self.reserves[lend[0]] -= 1
                self.lent = lend
                self.cycle_spy_positions = sorted(b for _, b in res[1])
                return
        raise InvariantBroken(
            f"cycle spies cannot cover meetings {sorted(meetings)} "
            f"(reserves={self.reserves}, lent={prev})"
        )

    def _case1_respond(self, rev: tuple[int, ...]) -> None:
        for i, a in enumerate(self.attached):
            upd = a.state.update({v: rev[v] for v in a.tree.postorder})
            if upd.external_in:
                self.reserves[i] -= upd.external_in
                if self.reserves[i] < 0:
                    raise InvariantBroken(f"tree {i} reserve exhausted (lent={self.lent})")
            if upd.external_out:
                self.reserves[i] += upd.external_out
        self._case1_retarget(rev)

    def _case2_respond(self, rev: tuple[int, ...]) -> None:
        demands: dict[int, int] = {}
        releases: dict[int, int] = {}
        for st in self.groups:
            upd = st.update({v: rev[v] for v in st.tree.postorder})
            if upd.external_in:
                demands[st.tree.root] = upd.external_in
            if upd.external_out:
                releases[st.tree.root] = upd.external_out
        pool = dict(self.extras)
        for root, c in releases.items():
            pool[root] = pool.get(root, 0) + c
        for root in sorted(demands):
            need = demands[root]
            take = min(need, pool.get(root, 0))
            if take:
                pool[root] -= take
                need -= take
            for donor in sorted(pool):
                if need == 0:
                    break
                if donor == root or pool[donor] == 0:
                    continue
                take = min(need, pool[donor])
                pool[donor] -= take
                need -= take
            if need:
                raise InvariantBroken(f"no freed spies reach root {root} (pool={pool})")
        self.extras = {v: c for v, c in pool.items() if c > 0}

    # ----- bookkeeping -----

    def _spy_vector(self) -> tuple[int, ...]:
        assert self.g is not None
        vec = [0] * self.g.n
        for st in self.off_components:
            for v, c in st.spies.items():
                vec[v] += c
        for v, c in self.parked.items():
            vec[v] += c
        if self.mode == Mode.LARGE and self.units is not None:
            for p in self.units.spy_slots():
                vec[self.cycle[p]] += 1
            for a in self.attached:
                for v, c in a.state.spies.items():
                    vec[v] += c
        elif self.mode == Mode.CASE1:
            for p in self.cycle_spy_positions:
                vec[self.cycle[p]] += 1
            for i, a in enumerate(self.attached):
                vec[a.mate] += self.reserves[i]
                for v, c in a.state.spies.items():
                    vec[v] += c
            if self.lent is not None:
                vec[self.cycle[self.lent[1]]] += 1
        elif self.mode == Mode.CASE2:
            for st in self.groups:
                for v, c in st.spies.items():
                    vec[v] += c
            for v, c in self.extras.items():
                vec[v] += c
        return tuple(vec)

    def _check_master(self, rev: tuple[int, ...], vec: tuple[int, ...] | None = None) -> None:
        """No unguarded meeting after any spy action, in any non-idle mode."""
        assert self.cfg is not None
        if self.mode is Mode.IDLE:
            return
        if vec is None:
            vec = self._spy_vector()
        bad = unguarded_meetings(Position(rev=rev, spy=vec), self.cfg.m)
        if bad:
            raise InvariantBroken(f"unguarded meeting at {sorted(bad)} (mode={self.mode})")

    def clone(self) -> "UnicyclicSpyStrategy":
        """Copy mutable state; graph, decomposition, and trees are shared."""
        out = type(self)()
        out.g, out.cfg, out.dec = self.g, self.cfg, self.dec
        out.mode, out.cycle, out.pos_of = self.mode, self.cycle, self.pos_of
        out.attached = [
            _AttachedTree(tree=a.tree, mate=a.mate, state=a.state.clone()) for a in self.attached
        ]
        out.off_components = [st.clone() for st in self.off_components]
        out.parked = dict(self.parked)
        out.units = CycleUnits(self.units.length, self.units.m, list(self.units.slots)) if self.units else None
        out.pads, out.pad_anchor = self.pads, self.pad_anchor
        out.fakes = dict(self.fakes)
        out.reserves = dict(self.reserves)
        out.cycle_spy_positions = list(self.cycle_spy_positions)
        out.lent = self.lent
        out._s_cyc = self._s_cyc
        out.groups = [st.clone() for st in self.groups]
        out.extras = dict(self.extras)
        out._last_rev = self._last_rev
        out.last_max_displacement = self.last_max_displacement
        return out

    def state_key(self) -> tuple:
        return (
            self.mode,
            tuple(self.units.slots) if self.units is not None else None,
            tuple(sorted(self.fakes.items())),
            tuple(a.state.state_key() for a in self.attached),
            tuple(st.state_key() for st in self.off_components),
            tuple(sorted(self.parked.items())),
            tuple(sorted(self.reserves.items())),
            tuple(self.cycle_spy_positions),
            self.lent,
            tuple(st.state_key() for st in self.groups),
            tuple(sorted(self.extras.items())),
        )

    def annotation(self) -> str:
        fake_txt = ",".join(
            f"{self.attached[i].mate}:{c}" for i, c in sorted(self.fakes.items()) if c
        )
        idx_txt = ",".join(str(p) for p in self.units.slots) if self.units is not None else ""
        return f"fake={fake_txt or '-'} mode={self.mode} indices={idx_txt or '-'}"
