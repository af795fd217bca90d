"""Spy strategy on rooted trees: invariant placement and leaf-to-root repair.

The spies hold, at the end of every round, exactly

    s(v) = floor(w(v)/m) - sum over children u of floor(w(u)/m)

spies on each vertex v, where w(v) is the number of revolutionaries in the
subtree below v.  The per-subtree totals telescope to floor(w(v)/m), so the
whole tree uses floor(r/m) spies and every vertex holding m revolutionaries
keeps at least one spy.  After the revolutionaries move, the repair works
leaf-to-root: each vertex u exchanges d(u) = floor(w'(u)/m) - floor(w(u)/m)
spies with its parent, pulls drawing on spies that started the round at the
parent and pushes drawing on spies that started the round at u, which keeps
every spy's travel within one edge.

The `capped` variant replaces floor(w(v)/m) by min(floor(w(v)/m), |D(v)|)
where |D(v)| is the subtree size.  That caps a tree's total demand at its
vertex count (needed when the tree's spy supply is a fixed reserve) while
preserving nonnegativity, the guarding property, and both repair
inequalities; with an ample budget it coincides with the plain rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph, RootedTree, classify, GraphClass, root_tree
from .engine import GameConfig, MoveFlow, Position, Team, validate_team_move, IllegalMove


class IllegalRevMove(Exception):
    pass


def subtree_weights(tree: RootedTree, rev: dict[int, int]) -> dict[int, int]:
    """w(v) = revolutionaries in the subtree rooted at v (postorder accumulation)."""
    w = {}
    for v in tree.postorder:
        w[v] = rev.get(v, 0) + sum(w[u] for u in tree.children[v])
    return w


def _subtree_sizes(tree: RootedTree) -> dict[int, int]:
    size = {}
    for v in tree.postorder:
        size[v] = 1 + sum(size[u] for u in tree.children[v])
    return size


def _floors(tree: RootedTree, w: dict[int, int], m: int, cap: dict[int, int] | None) -> dict[int, int]:
    if cap is None:
        return {v: w[v] // m for v in w}
    return {v: min(w[v] // m, cap[v]) for v in w}


def eq1_targets(tree: RootedTree, f: dict[int, int]) -> dict[int, int]:
    return {v: f[v] - sum(f[u] for u in tree.children[v]) for v in tree.postorder}


@dataclass
class TreeUpdate:
    """One round of spy repair: internal moves plus the flux at the root.

    `external_in` spies appear at the root from outside the tree (the caller
    must source them from a root neighbor); `external_out` spies leave the
    root, all of them guaranteed to have started the round at the root.
    """

    moves: list[tuple[int, int, int]] = field(default_factory=list)
    external_in: int = 0
    external_out: int = 0


@dataclass
class TreeSpyState:
    """Per-tree strategy ledger: weights, targets, and current spy counts."""

    tree: RootedTree
    m: int
    capped: bool = False
    w: dict[int, int] = field(default_factory=dict)
    f: dict[int, int] = field(default_factory=dict)
    target: dict[int, int] = field(default_factory=dict)
    spies: dict[int, int] = field(default_factory=dict)
    last_rev: dict[int, int] = field(default_factory=dict)
    _cap: dict[int, int] | None = None

    @property
    def budget(self) -> int:
        return self.f[self.tree.root]

    def clone(self) -> "TreeSpyState":
        """Copy the mutable ledgers; the tree and caps are shared read-only."""
        return TreeSpyState(
            tree=self.tree,
            m=self.m,
            capped=self.capped,
            w=dict(self.w),
            f=dict(self.f),
            target=dict(self.target),
            spies=dict(self.spies),
            last_rev=dict(self.last_rev),
            _cap=self._cap,
        )

    def state_key(self) -> tuple:
        return (
            tuple(sorted(self.spies.items())),
            tuple(sorted(self.last_rev.items())),
        )

    def place(self, rev: dict[int, int]) -> dict[int, int]:
        self._cap = _subtree_sizes(self.tree) if self.capped else None
        self.last_rev = {v: rev.get(v, 0) for v in self.tree.postorder}
        self.w = subtree_weights(self.tree, self.last_rev)
        self.f = _floors(self.tree, self.w, self.m, self._cap)
        self.target = eq1_targets(self.tree, self.f)
        self.spies = dict(self.target)
        return dict(self.spies)

    def update(self, new_rev: dict[int, int]) -> TreeUpdate:
        """Repair the invariant after a revolutionary move; leaf-to-root order."""
        tree, m = self.tree, self.m
        new_rev = {v: new_rev.get(v, 0) for v in tree.postorder}
        w2 = subtree_weights(tree, new_rev)
        f2 = _floors(tree, w2, m, self._cap)
        target2 = eq1_targets(tree, f2)
        delta = {v: f2[v] - self.f[v] for v in tree.postorder}

        # Both repair inequalities, per sibling group (root flux drawn from the
        # round-start root spies is checked the same way below).
        for v in tree.postorder:
            kids = tree.children[v]
            if not kids:
                continue
            pulls = sum(delta[u] for u in kids if delta[u] > 0)
            pushes = sum(-delta[u] for u in kids if delta[u] < 0)
            assert pulls <= self.spies[v], f"pull overload at {v}: {pulls} > {self.spies[v]}"
            assert pushes <= target2[v], f"push overload at {v}: {pushes} > {target2[v]}"

        start_here = dict(self.spies)
        arrived = {v: 0 for v in tree.postorder}
        upd = TreeUpdate()
        for u in tree.postorder:
            d = delta[u]
            if d == 0:
                continue
            if u == tree.root:
                if d > 0:
                    upd.external_in = d
                    arrived[u] += d
                else:
                    upd.external_out = -d
                    start_here[u] += d
                    assert start_here[u] >= 0, "root released spies that already moved"
            else:
                p = tree.parent[u]
                if d > 0:
                    upd.moves.append((p, u, d))
                    start_here[p] -= d
                    arrived[u] += d
                    assert start_here[p] >= 0, f"parent {p} out of round-start spies"
                else:
                    upd.moves.append((u, p, -d))
                    start_here[u] += d
                    arrived[p] += -d
                    assert start_here[u] >= 0, f"vertex {u} pushed spies that already moved"

        self.spies = {v: start_here[v] + arrived[v] for v in tree.postorder}
        assert self.spies == target2, "repair did not restore the invariant"
        self.w, self.f, self.target, self.last_rev = w2, f2, target2, new_rev
        return upd

    def check_invariants(self) -> None:
        """Assert the placement equation at every vertex and its subtree sums."""
        w = subtree_weights(self.tree, self.last_rev)
        f = _floors(self.tree, w, self.m, self._cap)
        total = {}
        for v in self.tree.postorder:
            expect = f[v] - sum(f[u] for u in self.tree.children[v])
            assert self.spies[v] == expect, f"placement equation broken at {v}"
            total[v] = self.spies[v] + sum(total[u] for u in self.tree.children[v])
            assert total[v] == f[v], f"subtree sum broken at {v}"
            if self.last_rev[v] >= self.m:
                assert self.spies[v] >= 1, f"unguarded meeting at {v}"


def forest_allocate(
    g: Graph, rev: tuple[int, ...], m: int, s: int | None = None
) -> tuple[tuple[int, ...], list[TreeSpyState], dict[int, int]]:
    """Independent per-component tree states with floor(r_i/m) spies each.

    Returns the full spy vector, the component states, and the parked surplus
    (spies beyond the per-component budgets sit on the first component's root
    and never move).  With s below the total budget the allocation is
    truncated vertex-by-vertex, which simply leaves later meetings unguarded.
    """
    if classify(g) not in (GraphClass.TREE, GraphClass.FOREST):
        raise ValueError("forest allocation requires an acyclic graph")
    states = []
    spy_vec = [0] * g.n
    placed = 0
    for comp in g.components():
        tree = root_tree(g, min(comp))
        st = TreeSpyState(tree=tree, m=m)
        for v, c in st.place({v: rev[v] for v in comp}).items():
            spy_vec[v] = c
            placed += c
        states.append(st)
    surplus: dict[int, int] = {}
    if s is not None:
        if placed < s:
            root0 = states[0].tree.root
            surplus[root0] = s - placed
            spy_vec[root0] += s - placed
        elif placed > s:
            overflow = placed - s
            for v in reversed(range(g.n)):
                take = min(overflow, spy_vec[v])
                spy_vec[v] -= take
                overflow -= take
                if overflow == 0:
                    break
    return tuple(spy_vec), states, surplus


class TreeSpyStrategy:
    """Match-ready spy strategy for trees and forests."""

    team = Team.SPIES

    def __init__(self) -> None:
        self.g: Graph | None = None
        self.cfg: GameConfig | None = None
        self.states: list[TreeSpyState] = []
        self.surplus: dict[int, int] = {}
        self._last_rev: tuple[int, ...] | None = None
        self._spy_vec: tuple[int, ...] | None = None

    def place(self, g: Graph, cfg: GameConfig, observed: Position | None) -> tuple[int, ...]:
        assert observed is not None
        self.g, self.cfg = g, cfg
        spy_vec, self.states, self.surplus = forest_allocate(g, observed.rev, cfg.m, cfg.s)
        self._last_rev = observed.rev
        self._spy_vec = spy_vec
        return spy_vec

    def respond(self, pos: Position) -> tuple[int, ...]:
        assert self.g is not None and self._last_rev is not None and self._spy_vec is not None
        try:
            validate_team_move(self.g, self._last_rev, pos.rev)
        except IllegalMove as e:
            raise IllegalRevMove(str(e)) from e
        spy_vec = list(self._spy_vec)
        for st in self.states:
            comp = set(st.tree.postorder)
            before = {v: st.spies[v] for v in comp}
            upd = st.update({v: pos.rev[v] for v in comp})
            assert upd.external_in == 0 and upd.external_out == 0, "component total changed"
            for v in comp:
                spy_vec[v] += st.spies[v] - before[v]
        self._last_rev = pos.rev
        self._spy_vec = tuple(spy_vec)
        return self._spy_vec

    def clone(self) -> "TreeSpyStrategy":
        out = type(self)()
        out.g, out.cfg = self.g, self.cfg
        out.states = [st.clone() for st in self.states]
        out.surplus = dict(self.surplus)
        out._last_rev = self._last_rev
        out._spy_vec = self._spy_vec
        return out

    def state_key(self) -> tuple:
        return tuple(st.state_key() for st in self.states)

    def annotation(self) -> str:
        if not self.states or self.g is None:
            return ""
        w = [0] * self.g.n
        t = [0] * self.g.n
        for st in self.states:
            for v in st.tree.postorder:
                w[v] = st.w[v]
                t[v] = st.target[v]
        return f"w={','.join(map(str, w))} target={','.join(map(str, t))}"

    def invariants_ok(self) -> bool:
        for st in self.states:
            st.check_invariants()
        return True
