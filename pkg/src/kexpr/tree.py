"""
Parse-tree AST for clique-width expressions and its evaluator.

This module provides:
- Leaf / Union / Join / Rename nodes (immutable, structurally comparable)
- Union flattening so that levels of a tree correspond to Union nodes
- ``evaluate`` producing a LabeledGraph, and ``generate`` for subtrees whose
  vertex ids are not dense
- Immediate significant descendants of Union nodes with their op paths
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

from ..errors import MalformedExpressionError
from ..graphs.core import MAX_LABEL, MIN_LABEL, Graph, LabeledGraph

logger = logging.getLogger(__name__)


def _check_label(label: int) -> None:
    if not isinstance(label, int) or not MIN_LABEL <= label <= MAX_LABEL:
        raise MalformedExpressionError(f"label {label!r} outside {MIN_LABEL}..{MAX_LABEL}")


@dataclass(frozen=True)
class Leaf:
    """Vertex creation ``v(label)``."""

    vertex: int
    label: int
    name: Optional[str] = None

    def __post_init__(self):
        _check_label(self.label)
        if self.vertex < 0:
            raise MalformedExpressionError(f"negative vertex id {self.vertex}")

    @property
    def display_name(self) -> str:
        return self.name if self.name is not None else str(self.vertex)


@dataclass(frozen=True)
class Union:
    """Disjoint union of two or more subtrees."""

    children: Tuple["ParseTree", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise MalformedExpressionError("a union needs at least two children")


@dataclass(frozen=True)
class Join:
    """``eta_{i,j}``: connect every i-labelled vertex to every j-labelled vertex."""

    i: int
    j: int
    child: "ParseTree"

    def __post_init__(self):
        _check_label(self.i)
        _check_label(self.j)
        if self.i == self.j:
            raise MalformedExpressionError(f"join needs distinct labels, got ({self.i},{self.j})")


@dataclass(frozen=True)
class Rename:
    """``rho_{i->j}``: relabel every i-labelled vertex to j."""

    i: int
    j: int
    child: "ParseTree"

    def __post_init__(self):
        _check_label(self.i)
        _check_label(self.j)


ParseTree = Leaf | Union | Join | Rename
Operation = Join | Rename


class GeneratedGraph(NamedTuple):
    """Labelled graph produced by a (sub)tree, keyed by the tree's own vertex ids."""

    labels: Dict[int, int]
    edges: FrozenSet[Tuple[int, int]]


def union(*children: ParseTree) -> ParseTree:
    """Build a Union, merging Union children into it (the operation is associative)."""
    flat: List[ParseTree] = []
    for child in children:
        if isinstance(child, Union):
            flat.extend(child.children)
        else:
            flat.append(child)
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def wrap(ops: Iterable[Tuple[str, int, int]], inner: ParseTree) -> ParseTree:
    """Apply ``("join"|"ren", i, j)`` operations, listed outermost first, above ``inner``."""
    tree = inner
    for kind, i, j in reversed(list(ops)):
        tree = Join(i, j, tree) if kind == "join" else Rename(i, j, tree)
    return tree


def postorder(tree: ParseTree) -> List[ParseTree]:
    """
    All nodes, children before parents.

    Raises:
        MalformedExpressionError: If one node object occurs twice in the tree
    """
    out: List[ParseTree] = []
    seen: Set[int] = set()
    stack: List[Tuple[ParseTree, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            if id(node) in seen:
                raise MalformedExpressionError(f"{type(node).__name__} node occurs twice in the tree")
            seen.add(id(node))
        if expanded or isinstance(node, Leaf):
            out.append(node)
            continue
        stack.append((node, True))
        if isinstance(node, Union):
            for child in reversed(node.children):
                stack.append((child, False))
        else:
            stack.append((node.child, False))
    return out


def normalize(tree: ParseTree) -> ParseTree:
    """Flatten Union-of-Union chains everywhere in the tree."""
    rebuilt: Dict[int, ParseTree] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            rebuilt[id(node)] = node
        elif isinstance(node, Union):
            rebuilt[id(node)] = union(*(rebuilt[id(c)] for c in node.children))
        elif isinstance(node, Join):
            rebuilt[id(node)] = Join(node.i, node.j, rebuilt[id(node.child)])
        else:
            rebuilt[id(node)] = Rename(node.i, node.j, rebuilt[id(node.child)])
    return rebuilt[id(tree)]


def leaves(tree: ParseTree) -> List[Leaf]:
    return [node for node in postorder(tree) if isinstance(node, Leaf)]


def labels_used(tree: ParseTree) -> Set[int]:
    used: Set[int] = set()
    for node in postorder(tree):
        if isinstance(node, Leaf):
            used.add(node.label)
        elif isinstance(node, (Join, Rename)):
            used.update((node.i, node.j))
    return used


def generate(tree: ParseTree) -> GeneratedGraph:
    """
    Apply the four operations bottom-up.

    Raises:
        MalformedExpressionError: If a vertex id occurs in two leaves, or a
            join would connect a pair that is already adjacent
    """
    states: Dict[int, Tuple[Dict[int, int], Set[Tuple[int, int]]]] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            states[id(node)] = ({node.vertex: node.label}, set())
        elif isinstance(node, Union):
            parts = [states.pop(id(c)) for c in node.children]
            parts.sort(key=lambda p: len(p[0]), reverse=True)
            labels, edges = parts[0]
            for other_labels, other_edges in parts[1:]:
                clash = labels.keys() & other_labels.keys()
                if clash:
                    raise MalformedExpressionError(f"vertex {min(clash)} appears in more than one leaf")
                labels.update(other_labels)
                edges |= other_edges
            states[id(node)] = (labels, edges)
        elif isinstance(node, Join):
            labels, edges = states.pop(id(node.child))
            side_i = [v for v, lab in labels.items() if lab == node.i]
            side_j = [v for v, lab in labels.items() if lab == node.j]
            for u in side_i:
                for v in side_j:
                    pair = (u, v) if u < v else (v, u)
                    if pair in edges:
                        raise MalformedExpressionError(
                            f"join({node.i},{node.j}) repeats existing edge {pair[0]}-{pair[1]}")
                    edges.add(pair)
            states[id(node)] = (labels, edges)
        else:
            labels, edges = states.pop(id(node.child))
            for v, lab in labels.items():
                if lab == node.i:
                    labels[v] = node.j
            states[id(node)] = (labels, edges)
    labels, edges = states[id(tree)]
    return GeneratedGraph(labels, frozenset(edges))


def evaluate(tree: ParseTree) -> LabeledGraph:
    """
    Evaluate a parse tree whose leaves carry the vertex ids ``0..n-1``.

    Vertex names are taken from the leaves.

    Raises:
        MalformedExpressionError: On duplicate or non-dense vertex ids, or a
            join that repeats an edge
    """
    result = generate(tree)
    n = len(result.labels)
    if set(result.labels) != set(range(n)):
        raise MalformedExpressionError(f"leaf vertex ids must be exactly 0..{n - 1}")
    names = [""] * n
    for leaf in leaves(tree):
        names[leaf.vertex] = leaf.display_name
    graph = Graph(n, result.edges, names)
    return LabeledGraph(graph, [result.labels[v] for v in range(n)])


def path_to_significant(node: ParseTree) -> Tuple[ParseTree, Tuple[Operation, ...]]:
    """
    Walk down through Join/Rename nodes to the first Leaf or Union.

    Returns:
        The reached node and the operations passed, ordered bottom-up
        (nearest to the reached node first).
    """
    path: List[Operation] = []
    while isinstance(node, (Join, Rename)):
        path.append(node)
        node = node.child
    path.reverse()
    return node, tuple(path)


def immediate_significant_descendants(node: Union) -> List[Tuple[ParseTree, Tuple[Operation, ...]]]:
    """
    Maximal Leaf/Union descendants of a Union reachable through Join/Rename only.

    Each entry carries its op path, ordered bottom-up toward ``node``.
    """
    if not isinstance(node, Union):
        raise MalformedExpressionError("immediate significant descendants are defined for union nodes")
    return [path_to_significant(child) for child in node.children]


def apply_path(generated: GeneratedGraph, path: Iterable[Operation]) -> GeneratedGraph:
    """Replay an op path (bottom-up order) on a generated graph."""
    labels = dict(generated.labels)
    edges = set(generated.edges)
    for op in path:
        if isinstance(op, Join):
            for u in [v for v, lab in labels.items() if lab == op.i]:
                for v in [w for w, lab in labels.items() if lab == op.j]:
                    edges.add((u, v) if u < v else (v, u))
        else:
            for v, lab in labels.items():
                if lab == op.i:
                    labels[v] = op.j
    return GeneratedGraph(labels, frozenset(edges))


def count_leaves(tree: ParseTree) -> int:
    return len(leaves(tree))
