"""
Unit tests for the graph container and its primitives.

Tests cover:
- Graph / LabeledGraph / ColoredGraph construction and equality
- Complements, components and co-components
- Module, primality and l-primality checks
- Label partitions and bicliques between label classes
"""

import itertools

import pytest

from src.errors import PreconditionError
from src.graphs.core import (
    ColoredGraph,
    Graph,
    LabeledGraph,
    coconnected_components,
    complement,
    complete_graph,
    connected_components,
    cycle_graph,
    empty_graph,
    induced_subgraph,
    is_biclique_between,
    is_connected,
    is_l_prime,
    is_module,
    is_prime,
    label_partition,
    path_graph,
    star_graph,
)
from src.oracle.brute import all_modules


class TestGraph:
    """Test cases for the Graph container."""

    def test_edges_are_normalized_and_sorted(self):
        g = Graph(4, [(3, 2), (1, 0), (2, 0)])
        assert g.edges == ((0, 1), (0, 2), (2, 3))
        assert g.m == 3

    def test_default_names(self):
        assert Graph(3).names == ("0", "1", "2")

    def test_equality_ignores_names(self):
        assert Graph(2, [(0, 1)], ["a", "b"]) == Graph(2, [(0, 1)], ["x", "y"])

    def test_rejects_self_loop(self):
        with pytest.raises(PreconditionError):
            Graph(2, [(1, 1)])

    def test_rejects_out_of_range_edge(self):
        with pytest.raises(PreconditionError):
            Graph(2, [(0, 2)])

    def test_permuted_preserves_structure(self, c5):
        rotated = c5.permuted([1, 2, 3, 4, 0])
        assert rotated.m == 5
        assert all(rotated.has_edge((u + 1) % 5, (v + 1) % 5) for u, v in c5.edges)

    def test_induced_subgraph(self, p4):
        sub, order = induced_subgraph(p4, [1, 2, 3])
        assert order == [1, 2, 3]
        assert sub.edges == ((0, 1), (1, 2))


class TestComplement:
    """Test cases for graph complements."""

    def test_complement_of_clique_is_empty(self, k3):
        assert complement(k3) == empty_graph(3)

    def test_single_vertex_is_fixed(self):
        assert complement(empty_graph(1)) == empty_graph(1)

    def test_complement_of_p4_is_p4(self, p4):
        # a-b-c-d complements to b-d-a-c
        assert set(complement(p4).edges) == {(0, 2), (0, 3), (1, 3)}

    def test_double_complement(self, c5):
        assert complement(complement(c5)) == c5


class TestComponents:
    """Test cases for connected and co-connected components."""

    def test_p4_is_one_component(self, p4):
        assert connected_components(p4) == [frozenset(range(4))]

    def test_isolated_vertices(self):
        assert connected_components(empty_graph(2)) == [frozenset({0}), frozenset({1})]

    def test_components_ordered_by_min_vertex(self):
        g = Graph(5, [(3, 4), (1, 2)])
        assert connected_components(g) == [frozenset({0}), frozenset({1, 2}), frozenset({3, 4})]

    def test_cocomponents_of_clique_are_singletons(self, k3):
        assert coconnected_components(k3) == [frozenset({0}), frozenset({1}), frozenset({2})]

    def test_cocomponents_of_two_isolated_vertices(self):
        assert coconnected_components(empty_graph(2)) == [frozenset({0, 1})]

    def test_cocomponents_of_p4(self, p4):
        assert coconnected_components(p4) == [frozenset(range(4))]

    def test_cocomponents_within_scope(self, p4):
        assert coconnected_components(p4, [0, 1]) == [frozenset({0}), frozenset({1})]

    def test_is_connected(self, p4):
        assert is_connected(p4)
        assert not is_connected(empty_graph(2))


class TestModules:
    """Test cases for modules and primality."""

    def test_trivial_modules(self, p4):
        assert is_module(p4, [2])
        assert is_module(p4, range(4))

    def test_edge_of_p4_is_not_module(self, p4):
        assert not is_module(p4, [0, 1])

    def test_is_module_agrees_with_definition(self):
        g = Graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
        expected = set(all_modules(g))
        for size in range(1, 6):
            for members in itertools.combinations(range(5), size):
                assert is_module(g, members) == (frozenset(members) in expected)

    def test_p4_is_prime(self, p4):
        assert is_prime(p4)

    def test_k3_is_not_prime(self, k3):
        assert not is_prime(k3)

    def test_c5_uniform_labels_is_l_prime(self, c5):
        assert is_l_prime(LabeledGraph(c5, [1] * 5))

    def test_claw_leaves_form_labeled_module(self, claw):
        assert not is_l_prime(LabeledGraph(claw, [1, 2, 2, 2]))
        assert is_l_prime(LabeledGraph(claw, [1, 2, 3, 4]))


class TestLabeledGraphs:
    """Test cases for labeled and colored graphs."""

    def test_labels_in_use(self, p4):
        lg = LabeledGraph(p4, [2, 1, 1, 2])
        assert lg.labels_in_use() == (1, 2)
        assert lg.is_bilabeled
        assert not lg.is_trilabeled

    def test_relabeled(self, p4):
        lg = LabeledGraph(p4, [1, 1, 1, 1]).relabeled([0, 3], 2)
        assert lg.labels == (2, 1, 1, 2)

    def test_label_partition_star(self, claw):
        va, vs, vn = label_partition(LabeledGraph(claw, [1, 2, 2, 2]), 1)
        assert va == frozenset({0})
        assert vs == frozenset()
        assert vn == frozenset()

    def test_label_partition_without_cross_edges(self):
        g = Graph(4, [(0, 1), (2, 3)])
        va, vs, vn = label_partition(LabeledGraph(g, [1, 1, 2, 2]), 1)
        assert vn == frozenset({0, 1})
        assert not va and not vs

    def test_label_partition_covers_class(self, c5):
        lg = LabeledGraph(c5, [1, 2, 1, 2, 2])
        va, vs, vn = label_partition(lg, 2)
        assert va | vs | vn == frozenset({1, 3, 4})
        assert not (va & vs) and not (va & vn) and not (vs & vn)

    def test_label_partition_needs_two_labels(self, p4):
        with pytest.raises(PreconditionError):
            label_partition(LabeledGraph(p4, [1, 2, 3, 1]), 1)

    def test_biclique_between(self):
        lg = LabeledGraph(complete_graph(3), [1, 2, 2])
        assert is_biclique_between(lg, 1, 2)
        assert not is_biclique_between(lg, 1, 3)

    def test_colored_graph_histogram(self):
        cg = ColoredGraph(path_graph(3), [0, 1, 0])
        assert cg.color_histogram() == {0: 2, 1: 1}

    def test_colored_graph_needs_one_color_per_vertex(self):
        with pytest.raises(PreconditionError):
            ColoredGraph(path_graph(3), [0, 1])


class TestBuilders:
    """Test cases for the small graph builders."""

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_cycle(self, n):
        g = cycle_graph(n)
        assert g.m == n
        assert all(g.degree(v) == 2 for v in g.vertices())

    def test_star(self):
        g = star_graph(4)
        assert g.degree(0) == 4
        assert g.m == 4
