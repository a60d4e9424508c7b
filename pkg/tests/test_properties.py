"""
Property tests: the decision procedure and the decompositions against the
brute-force oracles on random inputs.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.chlrr.expression import graph_to_expression
from src.decomposition.modular import modular_decomposition, strong_module_sets
from src.decomposition.split import find_proper_split
from src.graphs.core import ColoredGraph, Graph, is_connected
from src.isomorphism.engine import EngineConfig, iso_cw3
from src.kexpr.tree import evaluate
from src.models.reports import Verdict
from src.oracle.brute import Witness, all_proper_splits, brute_cwd_le3, brute_iso, strong_modules
from tests.strategies import PROPERTY_SETTINGS, expression_graphs, small_graphs


@st.composite
def graph_and_permutation(draw, graphs=expression_graphs()):
    g = draw(graphs)
    return g, draw(st.permutations(range(g.n)))


@st.composite
def graph_pairs(draw, max_n: int = 6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(small_graphs(n, n)), draw(small_graphs(n, n))


def check(g, h, result):
    if result.is_isomorphic:
        assert Witness(tuple(sorted(result.witness.items()))).validate(g, h)
    else:
        assert result.verdict is Verdict.NON_ISOMORPHIC


@pytest.mark.property
class TestDecisionProcedure:
    """Property tests for iso_cw3."""

    @PROPERTY_SETTINGS
    @given(graph_and_permutation())
    def test_permuted_copies_are_isomorphic(self, case):
        g, perm = case
        h = g.permuted(perm)
        result = iso_cw3(g, h)
        assert result.verdict is Verdict.ISOMORPHIC
        check(g, h, result)

    @PROPERTY_SETTINGS
    @given(graph_and_permutation(small_graphs(2, 6)))
    def test_pendant_reduction_matches(self, case):
        g, perm = case
        h = g.permuted(perm)
        result = iso_cw3(g, h, config=EngineConfig(reduction="pendant"))
        assert result.verdict is Verdict.ISOMORPHIC
        check(g, h, result)

    @PROPERTY_SETTINGS
    @given(graph_pairs())
    def test_agrees_with_brute_force(self, pair):
        g, h = pair
        result = iso_cw3(g, h)
        assert result.is_isomorphic == (brute_iso(g, h) is not None)
        check(g, h, result)

    @PROPERTY_SETTINGS
    @given(graph_pairs(max_n=5), st.lists(st.integers(0, 1), min_size=5, max_size=5))
    def test_colored_agrees_with_brute_force(self, pair, palette):
        g, h = pair
        colors_g = palette[:g.n]
        colors_h = list(reversed(colors_g))
        result = iso_cw3(g, h, colors_g, colors_h)
        expected = brute_iso(ColoredGraph(g, colors_g), ColoredGraph(h, colors_h)) is not None
        assert result.is_isomorphic == expected


@pytest.mark.property
class TestDecompositionProperties:
    """Property tests for expressions and decompositions."""

    @PROPERTY_SETTINGS
    @given(expression_graphs())
    def test_expression_round_trip(self, g):
        outcome = graph_to_expression(g)
        assert not outcome.exceeded
        lg = evaluate(outcome.tree)
        assert lg.graph == g
        assert set(lg.labels) == {1}

    @PROPERTY_SETTINGS
    @given(small_graphs(min_n=4, max_n=7))
    def test_expression_exists_whenever_clique_width_allows(self, g):
        if not brute_cwd_le3(g):
            return
        outcome = graph_to_expression(g)
        assert not outcome.exceeded, outcome.reason
        assert evaluate(outcome.tree).graph == g

    @PROPERTY_SETTINGS
    @given(small_graphs(max_n=6))
    def test_strong_modules_match(self, g):
        assert strong_module_sets(modular_decomposition(g)) == strong_modules(g)

    @PROPERTY_SETTINGS
    @given(small_graphs(min_n=4, max_n=6))
    def test_split_found_iff_one_exists(self, g: Graph):
        if not is_connected(g):
            return
        split = find_proper_split(g)
        if split is None:
            assert all_proper_splits(g) == []
        else:
            assert split.is_proper
            assert split.is_valid(g)
