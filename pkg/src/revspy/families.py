"""Instance families for sweeps: trees, cycles, and small unicyclic graphs.

Tree enumeration grows each tree by one leaf and dedupes by AHU canonical
form (rooted encodings minimized over the tree's centers), which is exact
and fast at the desk scales used here (n <= 8: 1, 1, 1, 2, 3, 6, 11, 23
trees).  Unicyclic graphs with cycle length l and t attached vertices are
generated by attaching every rooted forest on t vertices to the cycle in
every position pattern, deduped by a canonical form that minimizes over the
dihedral symmetries of the cycle.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement

from .graphs import Graph


# ----- trees -----------------------------------------------------------------


def _ahu_root(adj: list[list[int]], root: int, parent: int) -> str:
    subs = sorted(_ahu_root(adj, w, root) for w in adj[root] if w != parent)
    return "(" + "".join(subs) + ")"


def _centers(adj: list[list[int]], n: int) -> list[int]:
    if n == 1:
        return [0]
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] == 1]
    removed = len(layer)
    while removed < n:
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        if not nxt:
            break
        removed += len(nxt)
        layer = nxt
    return sorted(layer)


def tree_canonical(g: Graph) -> str:
    adj = [list(a) for a in g.adjacency]
    return min(_ahu_root(adj, c, -1) for c in _centers(adj, g.n))


def nonisomorphic_trees(n: int) -> list[Graph]:
    """All non-isomorphic trees on n vertices (labeled canonically by growth)."""
    if n < 1:
        return []
    trees = [Graph.from_edges(1, [])]
    for size in range(2, n + 1):
        seen: dict[str, Graph] = {}
        for t in trees:
            for attach in range(t.n):
                g = Graph.from_edges(size, t.edges() + [(attach, size - 1)])
                seen.setdefault(tree_canonical(g), g)
        trees = [seen[k] for k in sorted(seen)]
    return trees


def all_trees_up_to(n: int) -> list[Graph]:
    out = []
    for k in range(1, n + 1):
        out.extend(nonisomorphic_trees(k))
    return out


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labeled tree from a random Pruefer sequence."""
    if n == 1:
        return Graph.from_edges(1, [])
    if n == 2:
        return Graph.from_edges(2, [(0, 1)])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = sorted(v for v in range(n) if degree[v] == 1)
    import heapq

    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = (v for v in range(n) if degree[v] == 1)
    edges.append((u, w))
    return Graph.from_edges(n, edges)


# ----- rooted forests (attachments) ------------------------------------------


@lru_cache(maxsize=None)
def rooted_trees(k: int) -> tuple[tuple, ...]:
    """Shapes of rooted trees on k vertices, as nested child tuples."""
    if k == 1:
        return ((),)
    shapes: set[tuple] = set()
    for forest in rooted_forests(k - 1):
        shapes.add(forest)
    return tuple(sorted(shapes))


@lru_cache(maxsize=None)
def rooted_forests(k: int) -> tuple[tuple, ...]:
    """Multisets of rooted trees totalling k vertices, as sorted tuples."""
    if k == 0:
        return ((),)
    out: set[tuple] = set()

    def extend(remaining: int, max_first: int, acc: tuple) -> None:
        if remaining == 0:
            out.add(tuple(sorted(acc)))
            return
        for size in range(1, min(remaining, max_first) + 1):
            for shape in rooted_trees(size):
                extend(remaining - size, size, acc + ((size, shape),))

    extend(k, k, ())
    return tuple(sorted(out))


def _forest_edges(forest: tuple, base_vertex: int, next_label: int) -> tuple[list[tuple[int, int]], int]:
    """Edges attaching a rooted forest under base_vertex; returns next label."""
    edges = []

    def build_tree(shape: tuple, parent: int, label: int) -> int:
        me = label
        edges.append((parent, me))
        label += 1
        for _, child in shape:
            label = build_tree(child, me, label)
        return label

    for _, shape in forest:
        next_label = build_tree(shape, base_vertex, next_label)
    return edges, next_label


# ----- cycles and unicyclic graphs --------------------------------------------


def cycle_graph(length: int) -> Graph:
    return Graph.from_edges(length, [(i, (i + 1) % length) for i in range(length)])


def _unicyclic_canonical(length: int, attachments: tuple[tuple, ...]) -> str:
    """Minimize the per-position forest encodings over rotations/reflections."""
    labels = [repr(f) for f in attachments]
    best = None
    seqs = [labels[i:] + labels[:i] for i in range(length)]
    rev = labels[::-1]
    seqs += [rev[i:] + rev[:i] for i in range(length)]
    for s in seqs:
        key = "|".join(s)
        if best is None or key < best:
            best = key
    return best or ""


def unicyclic_graphs(length: int, t: int) -> list[Graph]:
    """Non-isomorphic connected unicyclic graphs: cycle length plus t extras."""
    if t == 0:
        return [cycle_graph(length)]
    out: dict[str, Graph] = {}

    def assign(pos: int, remaining: int, acc: list[tuple]) -> None:
        if pos == length:
            if remaining:
                return
            key = _unicyclic_canonical(length, tuple(acc))
            if key in out:
                return
            edges = [(i, (i + 1) % length) for i in range(length)]
            label = length
            for i, forest in enumerate(acc):
                extra, label = _forest_edges(forest, i, label)
                edges.extend(extra)
            out[key] = Graph.from_edges(length + t, edges)
            return
        for take in range(remaining + 1):
            for forest in rooted_forests(take):
                assign(pos + 1, remaining - take, acc + [forest])

    assign(0, t, [])
    return [out[k] for k in sorted(out)]


def disjoint_union(a: Graph, b: Graph) -> Graph:
    edges = a.edges() + [(u + a.n, v + a.n) for u, v in b.edges()]
    return Graph.from_edges(a.n + b.n, edges)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
