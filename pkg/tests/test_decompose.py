"""
Unit tests for parse-tree construction of labeled prime graphs and whole-graph
expressions.
"""

import pytest

from src.chlrr.decompose import (
    DecomposeConfig,
    DecomposeOutcome,
    build_parse_trees,
    decompose,
    decompose_leaf_BI,
    decompose_leaf_TI,
    family_memberships,
    membership_D,
    membership_U,
)
from src.chlrr.expression import graph_to_expression, substitute
from src.chlrr.labg import build_labg
from src.chlrr.memo import MemoConfig, memo_manager
from src.errors import InvariantError, PreconditionError
from src.graphs.core import Graph, LabeledGraph, complete_graph, cycle_graph, empty_graph, path_graph
from src.kexpr.grammar import parse_text
from src.kexpr.tree import Leaf, evaluate, labels_used
from tests.conftest import PRISM_EDGES
from tests.test_labg import BULL

# class 1 splits into coconnected parts {0, 1, 2} and {3, 4}; vertex 0 sees all of class 2
TWO_FAMILIES = LabeledGraph(
    Graph(8, [(1, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (0, 5), (0, 6), (0, 7), (5, 6), (6, 7)]),
    [1, 1, 1, 1, 1, 2, 2, 2],
)


class TestDecompose:
    """Test cases for decompose."""

    def test_c5_single_vertex_labeling(self, c5):
        lg = LabeledGraph(c5, [1, 2, 2, 2, 2])
        outcome = decompose(lg)
        assert not outcome.exceeded
        assert evaluate(outcome.tree) == lg
        assert labels_used(outcome.tree) <= {1, 2, 3, 4}

    def test_p4_split_labeling(self, p4):
        lg = LabeledGraph(p4, [3, 1, 2, 3])
        outcome = decompose(lg)
        assert evaluate(outcome.tree) == lg

    def test_single_vertex(self):
        lg = LabeledGraph(Graph(1), [2])
        outcome = decompose(lg)
        assert isinstance(outcome.tree, Leaf)
        assert outcome.tree.label == 2

    def test_keeps_vertex_names(self, c5):
        g = c5.with_names(["a", "b", "c", "d", "e"])
        tree = decompose(LabeledGraph(g, [1, 2, 2, 2, 2])).tree
        assert evaluate(tree).graph.names == ("a", "b", "c", "d", "e")

    def test_disconnected_rejected(self):
        with pytest.raises(PreconditionError, match="connected"):
            decompose(LabeledGraph(empty_graph(2), [1, 2]))

    def test_one_label_rejected(self, p4):
        with pytest.raises(PreconditionError, match="labels"):
            decompose(LabeledGraph(p4, [1, 1, 1, 1]))

    def test_labeled_module_rejected(self, claw):
        with pytest.raises(PreconditionError, match="l-prime"):
            decompose(LabeledGraph(claw, [1, 2, 2, 2]))

    def test_outcome_flags(self):
        assert DecomposeOutcome(None, "clique-width > 3").exceeded
        assert not DecomposeOutcome(Leaf(0, 1)).exceeded

    def test_config_to_dict(self):
        config = DecomposeConfig(threads=2)
        assert config.to_dict() == {
            "strict_disjointness": True,
            "use_shared_memo": True,
            "threads": 2,
            "search_limit": 7,
        }

    def test_shared_memo_is_reused(self, c5):
        store = memo_manager.initialize(MemoConfig(max_entries=1000))
        lg = LabeledGraph(c5, [1, 2, 2, 2, 2])
        first = decompose(lg).tree
        assert len(store) > 0
        hits = store.hits
        assert decompose(lg).tree == first
        assert store.hits > hits


class TestLeafDecompositions:
    """Test cases for the single-step entry points."""

    def test_trilabeled_step(self, p4):
        step = decompose_leaf_TI(LabeledGraph(p4, [3, 1, 2, 3]))
        assert step is not None
        assert sorted(v for piece in step.pieces() for v in piece.vertices()) == [0, 1, 2, 3]

    def test_trilabeled_needs_three_labels(self, p4):
        with pytest.raises(PreconditionError):
            decompose_leaf_TI(LabeledGraph(p4, [1, 2, 2, 2]))

    def test_bilabeled_step(self, c5):
        step = decompose_leaf_BI(LabeledGraph(c5, [1, 2, 2, 2, 2]))
        assert step is not None

    def test_bilabeled_needs_two_labels(self, p4):
        with pytest.raises(PreconditionError):
            decompose_leaf_BI(LabeledGraph(p4, [3, 1, 2, 3]))

    def test_membership_needs_bilabeled(self, p4):
        with pytest.raises(PreconditionError):
            membership_U(LabeledGraph(p4, [3, 1, 2, 3]), 1)
        with pytest.raises(PreconditionError):
            membership_D(LabeledGraph(p4, [1, 1, 2, 2]), 3)

    def test_overlapping_families_raise_in_strict_mode(self):
        with pytest.raises(InvariantError, match="overlapping memberships"):
            family_memberships(TWO_FAMILIES)

    def test_overlapping_families_listed_when_lenient(self):
        config = DecomposeConfig(strict_disjointness=False)
        assert family_memberships(TWO_FAMILIES, config) == [("U", 1), ("D", 1)]

    def test_single_family(self, c5):
        assert family_memberships(LabeledGraph(c5, [1, 1, 2, 2, 2])) == [("D", 2)]

    def test_family_memberships_needs_bilabeled(self, p4):
        with pytest.raises(PreconditionError):
            family_memberships(LabeledGraph(p4, [3, 1, 2, 3]))


class TestSearch:
    """Test cases for pieces no named rule settles."""

    def test_prism_single_vertex_labeling(self, prism):
        lg = LabeledGraph(prism, [1, 2, 2, 2, 2, 2])
        outcome = decompose(lg)
        assert not outcome.exceeded
        assert evaluate(outcome.tree) == lg
        assert labels_used(outcome.tree) <= {1, 2, 3, 4}

    def test_every_prism_candidate_decomposes(self, prism):
        cands = build_labg(prism)
        assert len(build_parse_trees(cands)) == len(cands)

    def test_crossed_square(self):
        # 4-cycle 0-1-3-2 whose label classes are the opposite edges 0-1 and 2-3
        lg = LabeledGraph(Graph(4, [(0, 1), (1, 3), (3, 2), (2, 0)]), [3, 3, 2, 2])
        outcome = decompose(lg)
        assert not outcome.exceeded
        assert evaluate(outcome.tree) == lg

    def test_crossed_square_needs_the_search(self):
        lg = LabeledGraph(Graph(4, [(0, 1), (1, 3), (3, 2), (2, 0)]), [3, 3, 2, 2])
        assert decompose(lg, config=DecomposeConfig(search_limit=0)).exceeded


class TestBuildParseTrees:
    """Test cases for decomposing every candidate labeling."""

    def test_p4(self, p4):
        cands = build_labg(p4)
        trees = build_parse_trees(cands)
        assert trees
        for tree in trees:
            assert evaluate(tree).graph == p4

    def test_bull_threads(self):
        cands = build_labg(BULL)
        serial = build_parse_trees(cands)
        threaded = build_parse_trees(cands, DecomposeConfig(threads=4))
        assert serial == threaded
        labelings = {c.graph.labels for c in cands}
        for tree in serial:
            assert evaluate(tree).labels in labelings


class TestGraphToExpression:
    """Test cases for whole-graph expressions along the modular decomposition."""

    @pytest.mark.parametrize(
        "g",
        [
            Graph(1),
            empty_graph(3),
            complete_graph(4),
            path_graph(4),
            cycle_graph(5),
            cycle_graph(6),
            BULL,
            Graph(6, PRISM_EDGES),
            Graph(5, [(0, 1), (1, 2), (2, 3), (2, 4)]),
        ],
    )
    def test_evaluates_back_with_label_one(self, g):
        outcome = graph_to_expression(g)
        assert not outcome.exceeded
        lg = evaluate(outcome.tree)
        assert lg.graph == g
        assert set(lg.labels) == {1}
        assert labels_used(outcome.tree) <= {1, 2, 3, 4}

    def test_leaves_keep_names(self, p4):
        g = p4.with_names(["w", "x", "y", "z"])
        assert evaluate(graph_to_expression(g).tree).graph.names == ("w", "x", "y", "z")

    def test_substitute_moves_children_onto_leaf_labels(self):
        tree = parse_text("join(1,2; u(a:1, b:2))")
        replaced = substitute(tree, {0: Leaf(0, 1), 1: Leaf(1, 1)})
        lg = evaluate(replaced)
        assert lg.graph.edges == ((0, 1),)
        assert lg.labels == (1, 2)
