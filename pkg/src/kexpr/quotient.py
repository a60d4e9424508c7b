"""
Colored quotient graphs between a Union node and one of its significant descendants.

The quotient has one vertex per label of the descendant's generated graph.
Vertex ``a`` starts with color ``a``; replaying the op path bottom-up adds
edges for joins between current colors and recolors for renames.
"""

import logging
from typing import Dict, FrozenSet, Iterable, Tuple

from ..graphs.core import ColoredGraph, Graph
from .tree import Join, Operation

logger = logging.getLogger(__name__)


class QuotientGraph:
    """A ColoredGraph whose vertex ``i`` stands for label ``labels[i]``."""

    __slots__ = ("labels", "colored", "_index")

    def __init__(self, labels: Tuple[int, ...], colored: ColoredGraph):
        self.labels = labels
        self.colored = colored
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def color_of(self, label: int) -> int:
        """Current color of the quotient vertex standing for ``label``."""
        return self.colored.colors[self._index[label]]

    def adjacent(self, a: int, b: int) -> bool:
        return self.colored.graph.has_edge(self._index[a], self._index[b])

    def colors(self) -> FrozenSet[int]:
        return frozenset(self.colored.colors)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{lab}->{self.color_of(lab)}" for lab in self.labels)
        return f"QuotientGraph([{pairs}], m={self.colored.graph.m})"


def quotient_graph(labels_of_subtree: Iterable[int], op_path: Iterable[Operation]) -> QuotientGraph:
    """
    Build the colored quotient graph for a descendant.

    Args:
        labels_of_subtree: Labels present in the descendant's generated graph
        op_path: Join/Rename operations between the descendant and its Union
            ancestor, bottom-up

    Returns:
        QuotientGraph with exactly one vertex per label
    """
    labels = tuple(sorted(set(labels_of_subtree)))
    color: Dict[int, int] = {lab: lab for lab in labels}
    edges = set()
    for op in op_path:
        if isinstance(op, Join):
            side_i = [lab for lab in labels if color[lab] == op.i]
            side_j = [lab for lab in labels if color[lab] == op.j]
            for a in side_i:
                for b in side_j:
                    edges.add((a, b) if a < b else (b, a))
        else:
            for lab in labels:
                if color[lab] == op.i:
                    color[lab] = op.j
    index = {lab: i for i, lab in enumerate(labels)}
    graph = Graph(len(labels), ((index[a], index[b]) for a, b in edges))
    return QuotientGraph(labels, ColoredGraph(graph, [color[lab] for lab in labels]))
