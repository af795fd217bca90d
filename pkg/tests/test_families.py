import random

from revspy.families import (
    all_trees_up_to,
    cycle_graph,
    disjoint_union,
    nonisomorphic_trees,
    path_graph,
    random_tree,
    tree_canonical,
    unicyclic_graphs,
)
from revspy.graphs import GraphClass, classify, decompose_unicyclic


class TestTrees:
    def test_known_counts(self):
        # unlabeled trees on n vertices: 1, 1, 1, 2, 3, 6, 11, 23
        assert [len(nonisomorphic_trees(n)) for n in range(1, 9)] == [1, 1, 1, 2, 3, 6, 11, 23]

    def test_all_are_trees(self):
        for g in all_trees_up_to(7):
            assert classify(g) in (GraphClass.TREE,)

    def test_pairwise_nonisomorphic(self):
        keys = [tree_canonical(g) for g in nonisomorphic_trees(7)]
        assert len(keys) == len(set(keys))

    def test_random_tree_is_tree(self):
        rng = random.Random(0)
        for _ in range(50):
            g = random_tree(rng.randrange(1, 10), rng)
            assert classify(g) is GraphClass.TREE


class TestUnicyclic:
    def test_shapes(self):
        for length in (3, 4, 5):
            for t in (0, 1, 2):
                for g in unicyclic_graphs(length, t):
                    assert classify(g) in (GraphClass.CYCLE, GraphClass.UNICYCLIC)
                    d = decompose_unicyclic(g)
                    assert d.length == length and d.t == t

    def test_counts_small(self):
        assert len(unicyclic_graphs(3, 0)) == 1
        assert len(unicyclic_graphs(3, 1)) == 1
        assert len(unicyclic_graphs(3, 2)) == 3
        assert len(unicyclic_graphs(4, 2)) == 4

    def test_union(self):
        g = disjoint_union(cycle_graph(5), path_graph(2))
        assert classify(g) is GraphClass.UNICYCLIC_FOREST
