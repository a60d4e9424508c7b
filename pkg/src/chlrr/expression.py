"""
Whole-graph k-expressions assembled along the modular decomposition.

Every subtree expression ends with all of its vertices on label 1:
- a leaf is ``v:1``
- a Parallel node is the union of its children
- a Series node folds its children into a label-1 accumulator, joining each
  new child while it sits on label 2
- a Prime node substitutes every child expression, moved onto the leaf's
  label, into a parse tree of its representative graph
"""

import logging
from typing import Dict, Optional

from ..decomposition.modular import MDNode, NodeKind, modular_decomposition
from ..graphs.core import Graph
from ..kexpr.tree import Join, Leaf, ParseTree, Rename, Union, labels_used, postorder, union
from .decompose import DecomposeConfig, DecomposeOutcome, decompose
from .labg import build_labg

logger = logging.getLogger(__name__)


def substitute(tree: ParseTree, replacements: Dict[int, ParseTree]) -> ParseTree:
    """Replace the leaf of vertex ``i`` by ``ren(1 -> label; replacements[i])``."""
    rebuilt: Dict[int, ParseTree] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            inner = replacements[node.vertex]
            rebuilt[id(node)] = inner if node.label == 1 else Rename(1, node.label, inner)
        elif isinstance(node, Union):
            rebuilt[id(node)] = union(*(rebuilt[id(c)] for c in node.children))
        elif isinstance(node, Join):
            rebuilt[id(node)] = Join(node.i, node.j, rebuilt[id(node.child)])
        else:
            rebuilt[id(node)] = Rename(node.i, node.j, rebuilt[id(node.child)])
    return rebuilt[id(tree)]


def _series(children) -> ParseTree:
    acc = children[0]
    for child in children[1:]:
        acc = Rename(2, 1, Join(1, 2, union(acc, Rename(1, 2, child))))
    return acc


def _prime(node: MDNode, children, config: Optional[DecomposeConfig]) -> Optional[ParseTree]:
    rep = node.representative
    for cand in build_labg(rep):
        outcome = decompose(cand.graph, check_preconditions=False, config=config)
        if outcome.tree is None:
            continue
        tree = substitute(outcome.tree, dict(enumerate(children)))
        for label in sorted(set(cand.graph.labels) - {1}):
            tree = Rename(label, 1, tree)
        logger.debug(f"Prime node with {len(node.children)} children expressed via {cand.provenance.describe()}")
        return tree
    return None


def graph_to_expression(g: Graph, config: Optional[DecomposeConfig] = None) -> DecomposeOutcome:
    """
    Build a k-expression (k <= 4) for ``g`` with every vertex on label 1.

    Returns:
        DecomposeOutcome whose tree evaluates to ``g`` with all labels 1, or
        the exceeded verdict when some prime node has no parse tree
    """
    tree = modular_decomposition(g)
    built: Dict[int, ParseTree] = {}
    for node in tree.postorder():
        if node.kind is NodeKind.LEAF:
            v = node.vertex
            built[id(node)] = Leaf(v, 1, g.name(v))
            continue
        children = [built.pop(id(child)) for child in node.children]
        if node.kind is NodeKind.PARALLEL:
            built[id(node)] = union(*children)
        elif node.kind is NodeKind.SERIES:
            built[id(node)] = _series(children)
        else:
            expr = _prime(node, children, config)
            if expr is None:
                return DecomposeOutcome(None, f"prime node on {len(node.vertices)} vertices has no parse tree")
            built[id(node)] = expr
    result = built[id(tree.root)]
    logger.debug(f"Expression for n={g.n} uses labels {sorted(labels_used(result))}")
    return DecomposeOutcome(result)
