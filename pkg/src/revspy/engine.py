"""Rules of the pursuit game: positions, legal team moves, rounds, matches.

A team move is legal when every unit travels along at most one edge.  That is
decided by integral flow feasibility on the bipartite graph pairing departure
vertices with arrival vertices (identity and adjacency arcs only); the flow
witness doubles as the per-unit move assignment recorded in transcripts.

Round structure: revolutionaries place, spies place, then the teams alternate
rev-move / spy-move.  The unguarded-meeting check runs after every spy action
including placement, so a meeting that appears mid-round but is covered by
the spy half-move does not end the game.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Protocol

from .graphs import Graph


class Team(Enum):
    REVOLUTIONARIES = "Revolutionaries"
    SPIES = "Spies"


class IllegalMove(Exception):
    pass


class SumMismatch(IllegalMove):
    pass


@dataclass(frozen=True)
class GameConfig:
    m: int
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.r < 1 or self.s < 0:
            raise ValueError(f"invalid game config m={self.m} r={self.r} s={self.s}")


@dataclass(frozen=True)
class Position:
    rev: tuple[int, ...]
    spy: tuple[int, ...]


@dataclass(frozen=True)
class MoveFlow:
    """Unit flows realizing a team move: stay counts plus directed edge traversals."""

    stay: tuple[int, ...]
    traverse: tuple[tuple[int, int, int], ...]  # (u, v, count), u -> v along one edge

    def apply(self, before: tuple[int, ...]) -> tuple[int, ...]:
        after = list(self.stay)
        for _, v, c in self.traverse:
            after[v] += c
        return tuple(after)

    def total_displacement(self) -> int:
        return sum(c for _, _, c in self.traverse)


def unguarded_meetings(pos: Position, m: int) -> set[int]:
    """Vertices holding at least m revolutionaries and no spy."""
    return {v for v, rc in enumerate(pos.rev) if rc >= m and pos.spy[v] == 0}


@lru_cache(maxsize=1 << 18)
def _flow_witness(g: Graph, before: tuple[int, ...], after: tuple[int, ...]) -> MoveFlow | None:
    """Deterministic witness flow for a team move, or None when infeasible.

    Max-flow on source -> departure vertices -> arrival vertices -> sink with
    identity/adjacency arcs; feasible iff the full supply routes.  Flat
    capacity matrix and BFS augmentation over a fixed node order keep it
    fast and deterministic on these tiny instances.
    """
    n = g.n
    total = sum(before)
    if total == 0:
        return MoveFlow(stay=tuple(0 for _ in range(n)), traverse=())
    # Node ids: 0 = source, 1..n = departures, n+1..2n = arrivals, 2n+1 = sink.
    size = 2 * n + 2
    src, sink = 0, size - 1
    cap = [[0] * size for _ in range(size)]
    nbrs: list[list[int]] = [[] for _ in range(size)]

    def arc(a: int, b: int, c: int) -> None:
        if cap[a][b] == 0 and cap[b][a] == 0:
            nbrs[a].append(b)
            nbrs[b].append(a)
        cap[a][b] += c

    for u in range(n):
        if before[u]:
            arc(src, 1 + u, before[u])
            arc(1 + u, n + 1 + u, before[u])
            for w in g.adjacency[u]:
                arc(1 + u, n + 1 + w, before[u])
    for v in range(n):
        if after[v]:
            arc(n + 1 + v, sink, after[v])

    pushed = 0
    prev = [-1] * size
    while pushed < total:
        for i in range(size):
            prev[i] = -1
        prev[src] = src
        queue = [src]
        qi = 0
        while qi < len(queue) and prev[sink] < 0:
            a = queue[qi]
            qi += 1
            row = cap[a]
            for b in nbrs[a]:
                if row[b] > 0 and prev[b] < 0:
                    prev[b] = a
                    queue.append(b)
        if prev[sink] < 0:
            return None
        path = [sink]
        while path[-1] != src:
            path.append(prev[path[-1]])
        path.reverse()
        bottleneck = total - pushed
        for a, b in zip(path, path[1:]):
            if cap[a][b] < bottleneck:
                bottleneck = cap[a][b]
        for a, b in zip(path, path[1:]):
            cap[a][b] -= bottleneck
            cap[b][a] += bottleneck
        pushed += bottleneck

    stay = [0] * n
    traverse = []
    for u in range(n):
        if not before[u]:
            continue
        c = cap[n + 1 + u][1 + u]  # residual on the identity arc equals its flow
        if c:
            stay[u] += c
        for w in g.adjacency[u]:
            c = cap[n + 1 + w][1 + u]
            if c:
                traverse.append((u, w, c))
    return MoveFlow(stay=tuple(stay), traverse=tuple(sorted(traverse)))


def validate_team_move(g: Graph, before: tuple[int, ...], after: tuple[int, ...]) -> MoveFlow:
    """Return a witness flow for a legal team move, or raise IllegalMove."""
    n = g.n
    if len(before) != n or len(after) != n:
        raise IllegalMove(f"count vector length mismatch (n={n})")
    if any(c < 0 for c in before) or any(c < 0 for c in after):
        raise IllegalMove("negative counts")
    if sum(before) != sum(after):
        raise SumMismatch(f"team size changed: {sum(before)} -> {sum(after)}")
    flow = _flow_witness(g, tuple(before), tuple(after))
    if flow is None:
        raise IllegalMove("no unit assignment moves every unit at most one edge")
    return flow


def team_move_feasible(g: Graph, before: tuple[int, ...], after: tuple[int, ...]) -> bool:
    try:
        validate_team_move(g, before, after)
        return True
    except IllegalMove:
        return False


class OutcomeReason(Enum):
    UNGUARDED_MEETING = "UnguardedMeeting"
    HORIZON_SURVIVED = "HorizonSurvived"
    ILLEGAL_STRATEGY_MOVE = "IllegalStrategyMove"


@dataclass(frozen=True)
class Outcome:
    winner: Team
    reason: OutcomeReason
    round: int
    vertex: int | None = None
    offender: Team | None = None

    def __str__(self) -> str:
        if self.reason is OutcomeReason.UNGUARDED_MEETING:
            return f"{self.winner.value}:{self.reason.value}(vertex={self.vertex},round={self.round})"
        if self.reason is OutcomeReason.ILLEGAL_STRATEGY_MOVE:
            return f"{self.winner.value}:{self.reason.value}(team={self.offender.value},round={self.round})"
        return f"{self.winner.value}:{self.reason.value}(rounds={self.round})"


@dataclass
class TranscriptEntry:
    round: int
    team: Team
    counts: tuple[int, ...]
    note: str = ""


@dataclass
class Transcript:
    graph_label: str
    m: int
    r: int
    s: int
    seed: int | None = None
    entries: list[TranscriptEntry] = field(default_factory=list)
    outcome: Outcome | None = None

    def record(self, round_idx: int, team: Team, counts: tuple[int, ...], note: str = "") -> None:
        self.entries.append(TranscriptEntry(round_idx, team, counts, note))

    def to_text(self) -> str:
        lines = [f"graph={self.graph_label} m={self.m} r={self.r} s={self.s} seed={self.seed if self.seed is not None else '-'}"]
        for e in self.entries:
            tag = "R" if e.team is Team.REVOLUTIONARIES else "S"
            line = f"{e.round} {tag} {' '.join(str(c) for c in e.counts)}"
            if e.note:
                line += f" note={e.note}"
            lines.append(line)
        if self.outcome is not None:
            lines.append(f"outcome={self.outcome}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Transcript":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = dict(part.split("=", 1) for part in lines[0].split())
        tr = Transcript(
            graph_label=header["graph"],
            m=int(header["m"]),
            r=int(header["r"]),
            s=int(header["s"]),
            seed=None if header.get("seed", "-") == "-" else int(header["seed"]),
        )
        for ln in lines[1:]:
            if ln.startswith("outcome="):
                continue
            note = ""
            if " note=" in ln:
                ln, note = ln.split(" note=", 1)
            parts = ln.split()
            rnd, tag, counts = int(parts[0]), parts[1], tuple(int(x) for x in parts[2:])
            team = Team.REVOLUTIONARIES if tag == "R" else Team.SPIES
            tr.record(rnd, team, counts, note)
        return tr

    def replay(self, g: Graph) -> bool:
        """Re-validate every recorded half-round as a legal team move."""
        last: dict[Team, tuple[int, ...]] = {}
        for e in self.entries:
            if e.note.startswith("rejected"):
                continue
            if e.team in last:
                validate_team_move(g, last[e.team], e.counts)
            last[e.team] = e.counts
        return True


class Strategy(Protocol):
    """One side's state machine: sees the full position, emits its count vector."""

    team: Team

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        ...

    def respond(self, pos: Position) -> tuple[int, ...]:
        ...


def default_max_rounds(g: Graph, cfg: GameConfig) -> int:
    """Conservative horizon: four times the number of revolutionary configurations."""
    return 4 * comb(cfg.r + g.n - 1, g.n - 1)


def _strategy_note(strategy) -> str:
    fn = getattr(strategy, "annotation", None)
    return fn() if callable(fn) else ""


def play_match(
    g: Graph,
    cfg: GameConfig,
    rev_strategy,
    spy_strategy,
    max_rounds: int | None = None,
    graph_label: str = "-",
    seed: int | None = None,
) -> tuple[Outcome, Transcript]:
    """Run one match; illegal strategy output forfeits rather than aborting."""
    if max_rounds is None:
        max_rounds = default_max_rounds(g, cfg)
    tr = Transcript(graph_label=graph_label, m=cfg.m, r=cfg.r, s=cfg.s, seed=seed)

    def finish(outcome: Outcome) -> tuple[Outcome, Transcript]:
        tr.outcome = outcome
        return outcome, tr

    def forfeit(team: Team, round_idx: int, bad_counts) -> tuple[Outcome, Transcript]:
        winner = Team.SPIES if team is Team.REVOLUTIONARIES else Team.REVOLUTIONARIES
        if bad_counts is not None:
            tr.record(round_idx, team, tuple(bad_counts), note="rejected")
        return finish(Outcome(winner, OutcomeReason.ILLEGAL_STRATEGY_MOVE, round_idx, offender=team))

    rev = tuple(rev_strategy.place(g, cfg, None))
    if sum(rev) != cfg.r or any(c < 0 for c in rev) or len(rev) != g.n:
        return forfeit(Team.REVOLUTIONARIES, 0, rev)
    tr.record(0, Team.REVOLUTIONARIES, rev, note=_strategy_note(rev_strategy))

    spy = tuple(spy_strategy.place(g, cfg, Position(rev=rev, spy=tuple(0 for _ in range(g.n)))))
    if sum(spy) != cfg.s or any(c < 0 for c in spy) or len(spy) != g.n:
        return forfeit(Team.SPIES, 0, spy)
    tr.record(0, Team.SPIES, spy, note=_strategy_note(spy_strategy))

    pos = Position(rev=rev, spy=spy)
    meetings = unguarded_meetings(pos, cfg.m)
    if meetings:
        return finish(Outcome(Team.REVOLUTIONARIES, OutcomeReason.UNGUARDED_MEETING, 0, vertex=min(meetings)))

    for rnd in range(1, max_rounds + 1):
        new_rev = tuple(rev_strategy.respond(pos))
        try:
            validate_team_move(g, pos.rev, new_rev)
        except IllegalMove:
            return forfeit(Team.REVOLUTIONARIES, rnd, new_rev)
        pos = Position(rev=new_rev, spy=pos.spy)
        tr.record(rnd, Team.REVOLUTIONARIES, new_rev, note=_strategy_note(rev_strategy))

        new_spy = tuple(spy_strategy.respond(pos))
        try:
            validate_team_move(g, pos.spy, new_spy)
        except IllegalMove:
            return forfeit(Team.SPIES, rnd, new_spy)
        pos = Position(rev=pos.rev, spy=new_spy)
        tr.record(rnd, Team.SPIES, new_spy, note=_strategy_note(spy_strategy))

        meetings = unguarded_meetings(pos, cfg.m)
        if meetings:
            return finish(Outcome(Team.REVOLUTIONARIES, OutcomeReason.UNGUARDED_MEETING, rnd, vertex=min(meetings)))

    return finish(Outcome(Team.SPIES, OutcomeReason.HORIZON_SURVIVED, max_rounds))
