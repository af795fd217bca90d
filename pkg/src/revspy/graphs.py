"""Graph representation, classification, and structural decompositions.

Everything downstream (strategies, solver) consumes the three shapes built
here: plain undirected graphs, rooted trees (parent/children/postorder), and
the cycle-plus-attached-trees decomposition of unicyclic graphs.  All
operations are read-only after construction and fully deterministic: cycles
are reported starting at their smallest label and oriented toward that
vertex's smaller cycle neighbor, children are ordered by label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class GraphError(Exception):
    """Base class for structural errors."""


class MalformedGraphText(GraphError):
    pass


class MultipleCycles(GraphError):
    pass


class NotUnicyclic(GraphError):
    pass


class ComponentHasCycle(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 with sorted adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(n: int, edges: list[tuple[int, int]] | set[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise MalformedGraphText(f"negative vertex count {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedGraphText(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise MalformedGraphText(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise MalformedGraphText(f"duplicate edge ({u},{v})")
            seen.add(key)
            adj[u].add(v)
            adj[v].add(u)
        return Graph(n, tuple(tuple(sorted(s)) for s in adj))

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest member."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


class GraphClass(Enum):
    TREE = "Tree"
    FOREST = "Forest"
    CYCLE = "Cycle"
    UNICYCLIC = "Unicyclic"
    UNICYCLIC_FOREST = "UnicyclicForest"
    OTHER = "Other"


def parse_graph(text: str) -> Graph:
    """Parse the graph file format: first line n, then one "u v" edge per line.

    Blank lines are skipped and '#' begins a comment line.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedGraphText("empty graph text")
    try:
        n = int(lines[0])
    except ValueError:
        raise MalformedGraphText(f"first line must be the vertex count, got {lines[0]!r}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise MalformedGraphText(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedGraphText(f"malformed edge line {ln!r}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def classify(g: Graph) -> GraphClass:
    """Classify by cyclomatic number and connectivity.

    |E| - n + c counts independent cycles (c = number of components), so 0
    means acyclic and 1 means exactly one cycle in the whole graph.
    """
    c = len(g.components())
    mu = g.num_edges - g.n + c
    if mu == 0:
        return GraphClass.TREE if c == 1 else GraphClass.FOREST
    if mu == 1:
        if c > 1:
            return GraphClass.UNICYCLIC_FOREST
        if all(g.degree(v) == 2 for v in range(g.n)):
            return GraphClass.CYCLE
        return GraphClass.UNICYCLIC
    return GraphClass.OTHER


def find_cycle(g: Graph) -> list[int] | None:
    """Return the unique cycle in canonical orientation, or None if acyclic.

    Canonical: start at the smallest cycle label, step toward its
    smaller-labeled cycle neighbor.  Raises MultipleCycles when the graph
    has two or more cycles; the caller must not guess.
    """
    c = len(g.components())
    mu = g.num_edges - g.n + c
    if mu == 0:
        return None
    if mu > 1:
        raise MultipleCycles(f"graph has {mu} independent cycles")
    # Strip leaves until only the cycle remains.
    deg = [g.degree(v) for v in range(g.n)]
    stack = [v for v in range(g.n) if deg[v] == 1]
    alive = [deg[v] > 0 for v in range(g.n)]
    while stack:
        u = stack.pop()
        alive[u] = False
        for w in g.adjacency[u]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    cyc_vertices = [v for v in range(g.n) if alive[v] and deg[v] >= 2]
    start = min(cyc_vertices)
    nbrs_on_cycle = [w for w in g.adjacency[start] if w in set(cyc_vertices)]
    order = [start, min(nbrs_on_cycle)]
    while True:
        prev, cur = order[-2], order[-1]
        nxt = [w for w in g.adjacency[cur] if w != prev and alive[w] and deg[w] >= 2]
        assert len(nxt) == 1
        if nxt[0] == start:
            break
        order.append(nxt[0])
    return order


@dataclass(frozen=True)
class RootedTree:
    """A tree component rooted at z, with label-ordered children and postorder."""

    root: int
    vertices: tuple[int, ...]
    parent: dict[int, int]
    children: dict[int, tuple[int, ...]]
    postorder: tuple[int, ...]

    def subtree_size(self, v: int) -> int:
        size = 1
        for u in self.children[v]:
            size += self.subtree_size(u)
        return size


def root_tree(g: Graph, z: int, restrict: set[int] | None = None) -> RootedTree:
    """Root the tree component containing z.

    `restrict` limits the traversal to a vertex subset (used to root the
    off-cycle pieces of a unicyclic graph without copying the graph).
    """
    parent: dict[int, int] = {}
    children: dict[int, list[int]] = {z: []}
    order = [z]
    seen = {z}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for w in g.adjacency[u]:
            if restrict is not None and w not in restrict:
                continue
            if w == parent.get(u):
                continue
            if w in seen:
                raise ComponentHasCycle(f"component of {z} contains a cycle")
            seen.add(w)
            parent[w] = u
            children.setdefault(u, []).append(w)
            children.setdefault(w, [])
            order.append(w)
    post: list[int] = []

    def visit(u: int) -> None:
        for w in sorted(children[u]):
            visit(w)
        post.append(u)

    visit(z)
    return RootedTree(
        root=z,
        vertices=tuple(sorted(seen)),
        parent=parent,
        children={u: tuple(sorted(ws)) for u, ws in children.items()},
        postorder=tuple(post),
    )


@dataclass(frozen=True)
class UnicyclicDecomposition:
    """Cycle vertex sequence plus the trees hanging off it.

    Each attached tree is rooted at its unique vertex adjacent to the cycle;
    that cycle neighbor is the tree's mate.  Components disconnected from the
    cycle carry mate None and are rooted at their smallest label.
    """

    cycle: tuple[int, ...]
    attached_trees: tuple[RootedTree, ...]
    mates: tuple[int | None, ...]
    t: int = field(default=0)

    @property
    def length(self) -> int:
        return len(self.cycle)

    def tree_of(self, v: int) -> int | None:
        """Index of the attached tree containing v, or None for cycle vertices."""
        for i, tr in enumerate(self.attached_trees):
            if v in tr.parent or v == tr.root:
                return i
        return None


def decompose_unicyclic(g: Graph) -> UnicyclicDecomposition:
    cls = classify(g)
    if cls not in (GraphClass.CYCLE, GraphClass.UNICYCLIC, GraphClass.UNICYCLIC_FOREST):
        raise NotUnicyclic(f"graph class {cls.value} has no unique cycle decomposition")
    cycle = find_cycle(g)
    assert cycle is not None
    on_cycle = set(cycle)
    off = [v for v in range(g.n) if v not in on_cycle]
    trees: list[RootedTree] = []
    mates: list[int | None] = []
    seen: set[int] = set()
    for v in sorted(off):
        if v in seen:
            continue
        # component of v in G - V(C)
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w not in on_cycle and w not in comp:
                    comp.add(w)
                    stack.append(w)
        roots = [
            (u, w)
            for u in sorted(comp)
            for w in g.adjacency[u]
            if w in on_cycle
        ]
        if roots:
            # connected to the cycle: unique attachment in a unicyclic graph
            assert len(roots) == 1, "off-cycle component attached twice would add a cycle"
            root, mate = roots[0]
        else:
            root, mate = min(comp), None
        trees.append(root_tree(g, root, restrict=comp))
        mates.append(mate)
        seen |= comp
    order = sorted(range(len(trees)), key=lambda i: trees[i].root)
    return UnicyclicDecomposition(
        cycle=tuple(cycle),
        attached_trees=tuple(trees[i] for i in order),
        mates=tuple(mates[i] for i in order),
        t=len(off),
    )
