import itertools

import pytest

from revspy.graphs import (
    ComponentHasCycle,
    GraphClass,
    MalformedGraphText,
    MultipleCycles,
    NotUnicyclic,
    classify,
    decompose_unicyclic,
    find_cycle,
    parse_graph,
    root_tree,
)

from conftest import cycle, path, star


class TestParse:
    def test_path(self):
        g = parse_graph("3\n0 1\n1 2")
        assert g.n == 3 and g.edges() == [(0, 1), (1, 2)]

    def test_cycle_listing(self):
        g = parse_graph("5\n0 1\n1 2\n2 3\n3 4\n4 0")
        assert classify(g) is GraphClass.CYCLE

    def test_comments_and_blanks(self):
        g = parse_graph("# a path\n3\n\n0 1\n# middle\n1 2\n")
        assert g.num_edges == 2

    def test_duplicate_edge_rejected(self):
        with pytest.raises(MalformedGraphText):
            parse_graph("3\n0 1\n0 1")

    def test_duplicate_edge_reversed_rejected(self):
        with pytest.raises(MalformedGraphText):
            parse_graph("3\n0 1\n1 0")

    def test_self_loop_rejected(self):
        with pytest.raises(MalformedGraphText):
            parse_graph("3\n1 1")

    def test_out_of_range_rejected(self):
        with pytest.raises(MalformedGraphText):
            parse_graph("3\n0 3")

    def test_malformed_line_rejected(self):
        with pytest.raises(MalformedGraphText):
            parse_graph("3\n0 1 2")


class TestClassify:
    def test_tree(self, p3):
        assert classify(p3) is GraphClass.TREE

    def test_forest(self):
        g = parse_graph("4\n0 1\n2 3")
        assert classify(g) is GraphClass.FOREST

    def test_cycle(self, c5):
        assert classify(c5) is GraphClass.CYCLE

    def test_unicyclic(self, triangle_pendant):
        assert classify(triangle_pendant) is GraphClass.UNICYCLIC

    def test_unicyclic_forest(self, c5_plus_p2):
        assert classify(c5_plus_p2) is GraphClass.UNICYCLIC_FOREST

    def test_chorded_cycle_is_other(self):
        g = parse_graph("5\n0 1\n1 2\n2 3\n3 4\n4 0\n0 2")
        assert classify(g) is GraphClass.OTHER


class TestFindCycle:
    def test_path_has_none(self):
        assert find_cycle(path(4)) is None

    def test_c4_canonical(self, c4):
        assert find_cycle(c4) == [0, 1, 2, 3]

    def test_triangle_pendant(self, triangle_pendant):
        # DFS-style extraction on the 4-vertex instance: only 0,1,2 survive
        # leaf stripping, started at 0 toward its smaller neighbor 1
        assert find_cycle(triangle_pendant) == [0, 1, 2]

    def test_orientation_toward_smaller_neighbor(self):
        g = parse_graph("4\n0 2\n2 1\n1 3\n3 0")
        cyc = find_cycle(g)
        assert cyc[0] == 0 and cyc[1] == min(cyc[1], cyc[-1])

    def test_multiple_cycles_reported(self):
        g = parse_graph("6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3")
        with pytest.raises(MultipleCycles):
            find_cycle(g)

    def test_invariant_under_edge_order(self, c5):
        base = find_cycle(c5)
        for perm in itertools.permutations(c5.edges()):
            g = parse_graph("5\n" + "\n".join(f"{u} {v}" for u, v in perm))
            assert find_cycle(g) == base


class TestRootTree:
    def test_p3_rooted_at_end(self):
        tree = root_tree(path(3), 2)
        assert tree.parent == {0: 1, 1: 2}
        assert tree.postorder == (0, 1, 2)

    def test_star_children(self):
        tree = root_tree(star(3), 0)
        assert tree.children[0] == (1, 2, 3)
        assert all(tree.children[leaf] == () for leaf in (1, 2, 3))

    def test_cycle_component_rejected(self, c4):
        with pytest.raises(ComponentHasCycle):
            root_tree(c4, 0)

    def test_postorder_children_first(self):
        tree = root_tree(path(5), 0)
        seen = set()
        for v in tree.postorder:
            assert all(u in seen for u in tree.children[v])
            seen.add(v)
        assert len(tree.postorder) == 5


class TestDecompose:
    def test_triangle_pendant(self, triangle_pendant):
        d = decompose_unicyclic(triangle_pendant)
        assert d.cycle == (0, 1, 2)
        assert len(d.attached_trees) == 1
        assert d.attached_trees[0].root == 3 and d.mates[0] == 0
        assert d.t == 1

    def test_c5_plus_p2(self, c5_plus_p2):
        d = decompose_unicyclic(c5_plus_p2)
        assert len(d.cycle) == 5 and d.t == 2
        assert len(d.attached_trees) == 1
        assert d.mates[0] is None
        assert d.attached_trees[0].vertices == (5, 6)

    def test_bare_cycle(self, c4):
        d = decompose_unicyclic(c4)
        assert d.length == 4 and d.t == 0 and not d.attached_trees

    def test_partition_and_counts(self):
        g = parse_graph("8\n0 1\n1 2\n2 3\n3 0\n0 4\n4 5\n1 6\n6 7")
        d = decompose_unicyclic(g)
        assert d.length + d.t == g.n
        off = [v for tr in d.attached_trees for v in tr.vertices]
        assert sorted(off) == [4, 5, 6, 7]
        assert len(off) == len(set(off))

    def test_tree_rejected(self, p3):
        with pytest.raises(NotUnicyclic):
            decompose_unicyclic(p3)
