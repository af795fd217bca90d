"""Scripted revolutionary strategies realizing the lower-bound constructions.

Three playbooks:

* Flooding: open with floor(r/m) meetings of exactly m on distinct vertices
  (capped at |V|), remainder on the next vertex.  Beats any spy placement
  with fewer spies than meetings.

* The long-cycle win (cycle length >= s+3, r = s*m+1): designate the spy S
  guarding the fewest revolutionaries and distract it, splitting the group
  it guards in half each round (neighbors cascade outward, never exceeding m
  per vertex) until S guards at most one revolutionary; then shorten the
  occupied arc away from S until s consecutive meetings are one move away;
  strike the moment the observed spy positions cannot cover all of them, so
  the formation round itself wins.  If S picks up a group again the script
  re-enters distraction.

* The unicyclic lower bound (l >= max(s-t+3, 4), m not dividing r,
  s = floor(r/m)): flood k = min(t, s-1) permanent meetings on off-cycle
  vertices, pinning k spies, and run the cycle script with the remaining
  r - k*m revolutionaries against the remaining spies.

These scripts demonstrate the bounds against the spy strategies and
solver-extracted policies in this package; they are not certified universal
winners outside their preconditions (certification is the solver's job).
"""

from __future__ import annotations

import random

from .engine import GameConfig, MoveFlow, Position, Team, validate_team_move
from .graphs import Graph, GraphClass, classify, decompose_unicyclic, find_cycle


class PreconditionViolated(Exception):
    pass


def flood_placement(g: Graph, m: int, r: int) -> tuple[int, ...]:
    """floor(r/m) meetings of exactly m on the smallest labels, remainder next."""
    vec = [0] * g.n
    meetings = min(g.n, r // m)
    for v in range(meetings):
        vec[v] = m
    vec[meetings % g.n] += r - meetings * m
    return tuple(vec)


class FloodRevStrategy:
    """Place the flood and never move."""

    team = Team.REVOLUTIONARIES

    def __init__(self) -> None:
        self._vec: tuple[int, ...] | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        self._vec = flood_placement(g, cfg.m, cfg.r)
        return self._vec

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self._vec is not None
        return self._vec

    def state_key(self) -> tuple:
        return (self._vec,)


class RandomRevStrategy:
    """Seeded fuzzer: every unit stays or steps to a uniform random neighbor."""

    team = Team.REVOLUTIONARIES

    def __init__(self, seed: int = 0) -> None:
        self.rng = random.Random(seed)
        self.g: Graph | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        self.g = g
        vec = [0] * g.n
        for _ in range(cfg.r):
            vec[self.rng.randrange(g.n)] += 1
        return tuple(vec)

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.g is not None
        vec = [0] * self.g.n
        for v, c in enumerate(pos.rev):
            for _ in range(c):
                vec[self.rng.choice([v, *self.g.adjacency[v]])] += 1
        return tuple(vec)


class RandomSpyStrategy:
    """Seeded fuzzer for the spy side."""

    team = Team.SPIES

    def __init__(self, seed: int = 0) -> None:
        self.rng = random.Random(seed)
        self.g: Graph | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        self.g = g
        vec = [0] * g.n
        for _ in range(cfg.s):
            vec[self.rng.randrange(g.n)] += 1
        return tuple(vec)

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.g is not None
        vec = [0] * self.g.n
        for v, c in enumerate(pos.spy):
            for _ in range(c):
                vec[self.rng.choice([v, *self.g.adjacency[v]])] += 1
        return tuple(vec)


class _SpyTracker:
    """Follows the designated spy S through the spies' move-flow witnesses."""

    def __init__(self, vertex: int) -> None:
        self.vertex = vertex

    def advance(self, g: Graph, before: tuple[int, ...], after: tuple[int, ...]) -> None:
        flow: MoveFlow = validate_team_move(g, before, after)
        v = self.vertex
        if flow.stay[v] > 0:
            return
        for u, w, c in flow.traverse:
            if u == v and c > 0:
                self.vertex = w
                return
        raise AssertionError(f"designated spy lost at vertex {v}")


class _CycleScript:
    """Distract / shorten / strike on the cycle of g; off-cycle units are pinned.

    The script owns the revolutionaries on the cycle (`crowd` plus a decoy
    group of fewer than m units it keeps at one vertex); pinned off-cycle
    meetings never move.  Spies anywhere on the graph take part in the cover
    check that gates the strike.
    """

    def __init__(self, g: Graph, cycle: tuple[int, ...], m: int, s_meetings: int, pinned: dict[int, int]):
        self.g = g
        self.cycle = cycle
        self.length = len(cycle)
        self.pos_of = {v: i for i, v in enumerate(cycle)}
        self.m = m
        self.s_meetings = s_meetings  # consecutive meetings to form at the strike
        self.pinned = pinned
        self.phase = "Flood"
        self.tracker: _SpyTracker | None = None
        self._last_spy: tuple[int, ...] | None = None
        self._rev: tuple[int, ...] | None = None
        self._pending_guard: int | None = None
        self.halving_log: list[tuple[int, int]] = []
        self.distract_spells: list[int] = []
        self._spell = 0

    # -- placement ----------------------------------------------------------

    def initial_rev(self, r_cycle: int) -> tuple[int, ...]:
        """Pinned meetings plus an arc of at-most-m groups on the cycle."""
        vec = [0] * self.g.n
        for v, c in self.pinned.items():
            vec[v] = c
        full, rest = divmod(r_cycle, self.m)
        assert full + (1 if rest else 0) <= self.length, "cycle cannot host the crowd"
        for i in range(full):
            vec[self.cycle[i]] += self.m
        if rest:
            vec[self.cycle[full]] += rest
        self._rev = tuple(vec)
        return self._rev

    # -- per-round ----------------------------------------------------------

    def step(self, pos: Position) -> tuple[int, ...]:
        assert self._rev is not None
        if self.tracker is None:
            self._designate(pos.spy)
        elif self._last_spy is not None:
            self.tracker.advance(self.g, self._last_spy, pos.spy)
        self._last_spy = pos.spy

        guarded = self._rev[self.tracker.vertex] if self.tracker else 0
        if self._pending_guard is not None:
            self.halving_log.append((self._pending_guard, guarded))
            self._pending_guard = None

        if guarded > 1:
            # S holds a group: split it (re-entering distraction if S ever
            # picks up guard duty again)
            if self.phase != "Distract":
                self._spell = 0
            self.phase = "Distract"
            new_rev = self._distract(guarded)
            self._pending_guard = guarded
            self._spell += 1
        else:
            if self.phase == "Distract":
                self.distract_spells.append(self._spell)
                self._spell = 0
            if self.phase != "Strike":
                self.phase = "Shorten"
            new_rev = self._shorten_or_strike(pos.spy)
        self._rev = new_rev
        return new_rev

    def _designate(self, spy: tuple[int, ...]) -> None:
        assert self._rev is not None
        occupied = [v for v, c in enumerate(spy) if c > 0]
        if not occupied:
            self.tracker = None
            self.phase = "Shorten"
            return
        on_cycle = [v for v in occupied if v in self.pos_of]
        pool = on_cycle or occupied
        best = min(pool, key=lambda v: (self._rev[v], v))
        self.tracker = _SpyTracker(best)

    def _by_pos(self, vec: tuple[int, ...]) -> list[int]:
        out = [0] * self.length
        for v, c in enumerate(vec):
            if v in self.pos_of:
                out[self.pos_of[v]] = c
        return out

    def _emit(self, by_pos: list[int]) -> tuple[int, ...]:
        vec = [0] * self.g.n
        for v, c in self.pinned.items():
            vec[v] = c
        for p, c in enumerate(by_pos):
            vec[self.cycle[p]] += c
        return tuple(vec)

    def _distract(self, guarded: int) -> tuple[int, ...]:
        """Split S's group in half outward; neighbors vacate, staying <= m.

        Whatever S does next it can cover only one of the two halves, so its
        guard count drops to at most ceil(x/2): the vertex it sat on empties
        and each neighbor ends holding exactly its arriving half, because the
        neighbors' previous occupants all step one vertex farther out (their
        own overflow cascades onward, drawn from units that started there).
        """
        assert self.tracker is not None and self._rev is not None
        m, length = self.m, self.length
        originals = self._by_pos(self._rev)
        p0 = self.pos_of.get(self.tracker.vertex)
        if p0 is None or guarded == 0:
            return self._rev
        new = list(originals)
        x = new[p0]
        new[p0] = 0
        halves = {-1: -(-x // 2), 1: x // 2}
        for direction in (-1, 1):
            p1 = (p0 + direction) % length
            carry = originals[p1]  # the neighbor vacates entirely
            new[p1] = halves[direction]
            step = 2
            while carry > 0:
                p = (p0 + direction * step) % length
                assert p != p0, "distraction wave wrapped the whole cycle"
                total = new[p] + carry
                keep = min(m, total)
                pushed = total - keep
                # only units that started here may continue outward
                assert pushed <= originals[p], f"wave at {p} would move a unit twice"
                new[p] = keep
                carry = pushed
                step += 1
        assert all(c <= m for c in new), f"distraction cascade overflowed: {new}"
        return self._emit(new)

    def _shorten_or_strike(self, spy: tuple[int, ...]) -> tuple[int, ...]:
        assert self._rev is not None
        cur = self._by_pos(self._rev)
        p_s = self.pos_of.get(self.tracker.vertex) if self.tracker else None

        crowd = list(cur)
        decoy_pos = None
        decoy_count = 0
        if p_s is not None and crowd[p_s]:
            decoy_pos = p_s
            decoy_count = min(crowd[p_s], self.m - 1)
            crowd[p_s] -= decoy_count

        target = self._strike_formation(crowd, p_s)
        if target is not None and self._covers_fail(target, decoy_pos, decoy_count, spy):
            self.phase = "Strike"
            new = target
        else:
            new = self._compress(crowd, p_s)
        if decoy_pos is not None:
            new[decoy_pos] += decoy_count
        return self._emit(new)

    def _strike_formation(self, crowd: list[int], p_s: int | None) -> list[int] | None:
        """A one-move arrangement of s_meetings consecutive meetings, if any."""
        m, s = self.m, self.s_meetings
        total = sum(crowd)
        if s == 0 or total < s * m:
            return None
        extra = total - s * m
        for start in range(self.length):
            arc = [(start + i) % self.length for i in range(s)]
            if p_s is not None and p_s in arc:
                continue
            for dump in arc:
                target = [0] * self.length
                for p in arc:
                    target[p] = m
                target[dump] += extra
                if self._one_move(crowd, target):
                    return target
        return None

    def _covers_fail(
        self, target: list[int], decoy_pos: int | None, decoy_count: int, spy: tuple[int, ...]
    ) -> bool:
        """True when no spy assignment can guard every planned meeting."""
        meeting_vertices = [self.cycle[p] for p, c in enumerate(target) if c >= self.m]
        if decoy_pos is not None and target[decoy_pos] + decoy_count >= self.m:
            v = self.cycle[decoy_pos]
            if v not in meeting_vertices:
                meeting_vertices.append(v)
        for v, c in self.pinned.items():
            if c >= self.m:
                meeting_vertices.append(v)
        spies = [v for v, c in enumerate(spy) for _ in range(c)]
        match: dict[int, int] = {}  # spy index -> meeting index

        def reaches(sp: int, mv: int) -> bool:
            return sp == mv or mv in self.g.adjacency[sp]

        def assign(mi: int, seen: set[int]) -> bool:
            for si, sp in enumerate(spies):
                if si in seen or not reaches(sp, meeting_vertices[mi]):
                    continue
                seen.add(si)
                if si not in match or assign(match[si], seen):
                    match[si] = mi
                    return True
            return False

        return any(not assign(mi, set()) for mi in range(len(meeting_vertices)))

    def _one_move(self, before: list[int], after: list[int]) -> bool:
        try:
            validate_team_move(self.g, tuple(self._emit(before)), tuple(self._emit(after)))
            return True
        except Exception:
            return False

    def _compress(self, crowd: list[int], p_s: int | None) -> list[int]:
        """Slide the crowd heads nearest S one step away from S, capped at m."""
        m, length = self.m, self.length
        new = list(crowd)
        if p_s is None:
            return new
        for direction in (1, -1):
            for step in range(1, length):
                p = (p_s + direction * step) % length
                if new[p] > 0:
                    q = (p + direction) % length
                    if q != p_s and new[q] < m:
                        moved = min(new[p], m - new[q])
                        new[p] -= moved
                        new[q] += moved
                    break
        return new

    def annotation(self) -> str:
        s_v = self.tracker.vertex if self.tracker else -1
        guarded = self._rev[s_v] if (self.tracker and self._rev) else 0
        return f"phase={self.phase} S={s_v} guarded={guarded}"

    def state_key(self) -> tuple:
        return (self.phase, self._rev, self.tracker.vertex if self.tracker else None)


class LongCycleRevStrategy:
    """The distract/shorten/strike script on a bare cycle (l >= s+3, r = s*m+1)."""

    team = Team.REVOLUTIONARIES

    def __init__(self) -> None:
        self.script: _CycleScript | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        if classify(g) is not GraphClass.CYCLE:
            raise PreconditionViolated("long-cycle script needs a cycle graph")
        if g.n < cfg.s + 3:
            raise PreconditionViolated(f"needs cycle length >= s+3, got l={g.n} s={cfg.s}")
        if cfg.r != cfg.s * cfg.m + 1:
            raise PreconditionViolated(f"needs r = s*m+1, got r={cfg.r} s={cfg.s} m={cfg.m}")
        cycle = tuple(find_cycle(g))
        self.script = _CycleScript(g, cycle, cfg.m, cfg.s, pinned={})
        return self.script.initial_rev(cfg.r)

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.script is not None
        return self.script.step(pos)

    @property
    def halving_log(self) -> list[tuple[int, int]]:
        assert self.script is not None
        return self.script.halving_log

    @property
    def distract_spells(self) -> list[int]:
        assert self.script is not None
        return self.script.distract_spells

    def annotation(self) -> str:
        return self.script.annotation() if self.script else "phase=Flood"

    def state_key(self) -> tuple:
        return self.script.state_key() if self.script else ()


class UnicyclicRevStrategy:
    """Pin k = min(t, s-1) off-cycle meetings, then play the cycle script."""

    team = Team.REVOLUTIONARIES

    def __init__(self) -> None:
        self.script: _CycleScript | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        if cfg.r % cfg.m == 0:
            raise PreconditionViolated("needs m not dividing r")
        dec = decompose_unicyclic(g)
        length, t = len(dec.cycle), dec.t
        if length < max(cfg.s - t + 3, 4):
            raise PreconditionViolated(f"needs l >= max(s-t+3, 4), got l={length} s={cfg.s} t={t}")
        k = min(t, cfg.s - 1)
        off = sorted(v for v in range(g.n) if v not in set(dec.cycle))
        pinned = {v: cfg.m for v in off[:k]}
        self.script = _CycleScript(g, dec.cycle, cfg.m, cfg.s - k, pinned=pinned)
        return self.script.initial_rev(cfg.r - k * cfg.m)

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.script is not None
        return self.script.step(pos)

    def annotation(self) -> str:
        return self.script.annotation() if self.script else "phase=Flood"

    def state_key(self) -> tuple:
        return self.script.state_key() if self.script else ()
