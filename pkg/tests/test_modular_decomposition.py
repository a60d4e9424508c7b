"""
Unit tests for modular decomposition and its JSON/DOT exports.
"""

import itertools

import pytest

from src.decomposition.export import md_tree_report, md_tree_to_dot
from src.decomposition.modular import NodeKind, modular_decomposition, strong_module_sets
from src.errors import PreconditionError
from src.graphs.core import Graph, complete_graph, empty_graph, is_prime
from src.oracle.brute import strong_modules


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield Graph(n, [p for i, p in enumerate(pairs) if bits >> i & 1])


def check_node_shapes(tree):
    for node in tree.nodes():
        if node.kind is NodeKind.LEAF:
            assert len(node.vertices) == 1
            assert node.height == 0
            continue
        rep = node.representative
        k = len(node.children)
        assert rep.n == k
        assert frozenset().union(*(c.vertices for c in node.children)) == node.vertices
        assert node.height == 1 + max(c.height for c in node.children)
        if node.kind is NodeKind.SERIES:
            assert rep == complete_graph(k)
        elif node.kind is NodeKind.PARALLEL:
            assert rep == empty_graph(k)
        else:
            assert k >= 4
            assert is_prime(rep)


class TestModularDecomposition:
    """Test cases for the modular decomposition tree."""

    def test_single_vertex(self):
        tree = modular_decomposition(Graph(1))
        assert tree.root.kind is NodeKind.LEAF
        assert tree.root.vertex == 0

    def test_empty_graph_rejected(self):
        with pytest.raises(PreconditionError):
            modular_decomposition(Graph(0))

    def test_clique_is_series(self, k3):
        tree = modular_decomposition(k3)
        assert tree.root.kind is NodeKind.SERIES
        assert [c.vertex for c in tree.root.children] == [0, 1, 2]

    def test_independent_set_is_parallel(self):
        tree = modular_decomposition(empty_graph(2))
        assert tree.root.kind is NodeKind.PARALLEL
        assert len(tree.root.children) == 2

    def test_p4_is_prime(self, p4):
        tree = modular_decomposition(p4)
        assert tree.root.kind is NodeKind.PRIME
        assert tree.prime_nodes() == [tree.root]
        assert tree.root.representative == p4

    def test_nested_modules(self):
        # P4 with vertex 3 blown up into an independent pair {3, 4}
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (2, 4)])
        tree = modular_decomposition(g)
        assert tree.root.kind is NodeKind.PRIME
        assert [c.vertices for c in tree.root.children] == [
            frozenset({0}), frozenset({1}), frozenset({2}), frozenset({3, 4})]
        assert tree.root.children[3].kind is NodeKind.PARALLEL
        assert tree.root.height == 2
        assert sorted(tree.by_height()) == [0, 1, 2]

    def test_postorder_children_first(self, p4):
        tree = modular_decomposition(p4)
        order = tree.postorder()
        assert order[-1] is tree.root
        assert len(order) == 5

    def test_node_shapes(self, c5):
        g = Graph(7, list(c5.edges) + [(0, 5), (1, 5), (0, 6), (1, 6), (5, 6)])
        check_node_shapes(modular_decomposition(g))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_matches_subset_enumeration(self, n):
        for g in all_graphs(n):
            tree = modular_decomposition(g)
            assert strong_module_sets(tree) == strong_modules(g), g.edges
            check_node_shapes(tree)

    @pytest.mark.slow
    def test_matches_subset_enumeration_six_vertices(self):
        for g in all_graphs(6):
            assert strong_module_sets(modular_decomposition(g)) == strong_modules(g), g.edges


class TestExport:
    """Test cases for MD tree rendering."""

    def test_report(self, p4):
        report = md_tree_report(modular_decomposition(p4.with_names(["a", "b", "c", "d"])))
        assert report.root == 0
        root = report.nodes[0]
        assert root.kind == "prime"
        assert root.vertices == ["a", "b", "c", "d"]
        assert root.children == [1, 2, 3, 4]
        assert sorted(root.representative_edges) == [(0, 1), (1, 2), (2, 3)]
        assert all(node.kind == "leaf" for node in report.nodes[1:])

    def test_dot(self, k3):
        dot = md_tree_to_dot(modular_decomposition(k3))
        assert dot.startswith("digraph MDTree {")
        assert "n0 -> n1;" in dot
        assert 'label="series (3)"' in dot
        assert dot.endswith("}")
