"""
Modular decomposition by iterative refinement.

This module provides:
- MDNode / MDTree with Leaf, Series, Parallel and Prime node kinds
- ``modular_decomposition``: disconnected scopes become Parallel nodes,
  co-disconnected scopes Series nodes, and the remaining scopes Prime nodes
  whose children are the maximal modules found by minimal-module closure
- Representative graphs on the children of every internal node

Children are ordered by their minimum vertex id.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from ..errors import PreconditionError
from ..graphs.core import Graph, cocomponent_masks, component_masks, iter_bits, lowest_bit, minimal_module

logger = logging.getLogger(__name__)


class NodeKind(str, Enum):
    LEAF = "leaf"
    SERIES = "series"
    PARALLEL = "parallel"
    PRIME = "prime"


@dataclass(eq=False)
class MDNode:
    """A strong module; ``representative`` is the graph G_h on the children."""

    kind: NodeKind
    vertices: FrozenSet[int]
    children: List["MDNode"] = field(default_factory=list)
    representative: Optional[Graph] = None
    height: int = 0

    @property
    def vertex(self) -> int:
        if self.kind is not NodeKind.LEAF:
            raise PreconditionError("only leaf nodes carry a single vertex")
        return next(iter(self.vertices))

    @property
    def min_vertex(self) -> int:
        return min(self.vertices)

    def __repr__(self) -> str:
        return f"MDNode({self.kind.value}, size={len(self.vertices)}, children={len(self.children)})"


@dataclass(eq=False)
class MDTree:
    graph: Graph
    root: MDNode

    def nodes(self) -> Iterator[MDNode]:
        """Pre-order traversal."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def postorder(self) -> List[MDNode]:
        return list(reversed(list(self._reverse_preorder())))

    def _reverse_preorder(self) -> Iterator[MDNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def prime_nodes(self) -> List[MDNode]:
        return [node for node in self.nodes() if node.kind is NodeKind.PRIME]

    def by_height(self) -> Dict[int, List[MDNode]]:
        levels: Dict[int, List[MDNode]] = {}
        for node in self.nodes():
            levels.setdefault(node.height, []).append(node)
        return levels


def _representative(g: Graph, parts: List[int]) -> Graph:
    picks = [lowest_bit(p) for p in parts]
    edges = [(a, b) for a in range(len(parts)) for b in range(a + 1, len(parts))
             if g.has_edge(picks[a], picks[b])]
    return Graph(len(parts), edges)


def _maximal_modules(g: Graph, scope: int) -> List[int]:
    """
    Partition of a connected and co-connected scope into its maximal proper modules.

    The maximal module holding ``v`` is the union of the minimal modules
    M(v, u) that stay proper.
    """
    parts = []
    remaining = scope
    while remaining:
        v = lowest_bit(remaining)
        part = 1 << v
        for u in iter_bits(scope & ~(1 << v)):
            if part >> u & 1:
                continue
            module = minimal_module(g, (1 << v) | (1 << u), scope)
            if module != scope:
                part |= module
        parts.append(part)
        remaining &= ~part
    return sorted(parts, key=lowest_bit)


def _split_scope(g: Graph, scope: int) -> Tuple[NodeKind, List[int]]:
    comps = component_masks(g, scope)
    if len(comps) > 1:
        return NodeKind.PARALLEL, comps
    cocomps = cocomponent_masks(g, scope)
    if len(cocomps) > 1:
        return NodeKind.SERIES, sorted(cocomps, key=lowest_bit)
    return NodeKind.PRIME, _maximal_modules(g, scope)


def modular_decomposition(g: Graph) -> MDTree:
    """
    Build the modular decomposition tree of ``g``.

    Raises:
        PreconditionError: If ``g`` has no vertices
    """
    if g.n < 1:
        raise PreconditionError("modular decomposition needs at least one vertex")

    root: Optional[MDNode] = None
    # (scope, parent, slot in parent's children)
    stack: List[Tuple[int, Optional[MDNode], int]] = [(g.full_mask, None, 0)]
    built: List[MDNode] = []
    while stack:
        scope, parent, slot = stack.pop()
        vertices = frozenset(iter_bits(scope))
        if len(vertices) == 1:
            node = MDNode(NodeKind.LEAF, vertices)
        else:
            kind, parts = _split_scope(g, scope)
            node = MDNode(kind, vertices, [None] * len(parts), _representative(g, parts))
            for index, part in enumerate(parts):
                stack.append((part, node, index))
        if parent is None:
            root = node
        else:
            parent.children[slot] = node
        built.append(node)

    for node in reversed(built):
        if node.children:
            node.height = 1 + max(child.height for child in node.children)

    tree = MDTree(g, root)
    logger.debug(f"Modular decomposition: n={g.n}, root={root.kind.value}, "
                 f"prime nodes={len(tree.prime_nodes())}")
    return tree


def strong_module_sets(tree: MDTree) -> FrozenSet[FrozenSet[int]]:
    """Vertex sets of all tree nodes (exactly the strong modules of the graph)."""
    return frozenset(node.vertices for node in tree.nodes())
