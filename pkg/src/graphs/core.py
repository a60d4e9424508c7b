"""
Simple undirected graphs and the primitives every other package consumes.

This module provides:
- Graph with dense integer vertices, bitset adjacency rows and an edge list
- LabeledGraph (labels 1..4) and ColoredGraph (unbounded colors)
- Complement, induced subgraphs, (co)connected components
- Module tests, minimal-module closure, primality and l-primality
- Label partitions V_l^a / V_l^s / V_l^n and biclique tests

Vertex sets are passed around either as iterables of ints or as int bitmasks;
helpers ``mask_of`` and ``iter_bits`` convert between the two.
"""

import logging
from collections import Counter
from typing import FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..errors import PreconditionError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

MIN_LABEL = 1
MAX_LABEL = 4


def mask_of(vertices: Iterable[int]) -> int:
    """Pack a vertex collection into a bitmask."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the vertices of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Graph:
    """
    Immutable simple undirected graph on vertices ``0..n-1``.

    Adjacency is kept twice: as bitset rows (``row(v)``) for word-parallel
    neighbourhood comparisons, and as a sorted edge list. External vertex
    names live in a side table and never take part in equality.
    """

    __slots__ = ("_n", "_rows", "_edges", "_names", "_hash")

    def __init__(self, n: int, edges: Iterable[Edge] = (), names: Optional[Sequence[str]] = None):
        if n < 0:
            raise PreconditionError(f"vertex count must be non-negative, got {n}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if names is not None and len(names) != n:
            raise PreconditionError(f"expected {n} vertex names, got {len(names)}")
        self._n = n
        self._rows = tuple(rows)
        self._edges = tuple((u, v) for u in range(n) for v in iter_bits(rows[u] >> (u + 1) << (u + 1)))
        self._names = tuple(names) if names is not None else tuple(str(v) for v in range(n))
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[int], names: Optional[Sequence[str]] = None) -> "Graph":
        n = len(rows)
        return cls(n, ((u, v) for u in range(n) for v in iter_bits(rows[u]) if u < v), names)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return self._edges

    @property
    def names(self) -> Tuple[str, ...]:
        return self._names

    @property
    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def vertices(self) -> range:
        return range(self._n)

    def name(self, v: int) -> str:
        return self._names[v]

    def row(self, v: int) -> int:
        """Open neighbourhood of ``v`` as a bitmask."""
        return self._rows[v]

    def closed_row(self, v: int) -> int:
        return self._rows[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self._rows[v])

    def degree_sequence(self) -> List[int]:
        return sorted(self.degree(v) for v in range(self._n))

    def with_names(self, names: Sequence[str]) -> "Graph":
        return Graph(self._n, self._edges, names)

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Return the image of this graph under the vertex map ``v -> perm[v]``."""
        names = [""] * self._n
        for v in range(self._n):
            names[perm[v]] = self._names[v]
        return Graph(self._n, ((perm[u], perm[v]) for u, v in self._edges), names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


class LabeledGraph:
    """Graph plus one label in ``{1..4}`` per vertex."""

    __slots__ = ("graph", "labels")

    def __init__(self, graph: Graph, labels: Sequence[int]):
        if len(labels) != graph.n:
            raise PreconditionError(f"expected {graph.n} labels, got {len(labels)}")
        for v, label in enumerate(labels):
            if not MIN_LABEL <= label <= MAX_LABEL:
                raise PreconditionError(f"label {label} of vertex {v} outside {MIN_LABEL}..{MAX_LABEL}")
        self.graph = graph
        self.labels = tuple(labels)

    @property
    def n(self) -> int:
        return self.graph.n

    def label(self, v: int) -> int:
        return self.labels[v]

    def labels_in_use(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.labels)))

    def class_mask(self, label: int) -> int:
        return mask_of(v for v, lab in enumerate(self.labels) if lab == label)

    def vertices_with_label(self, label: int) -> FrozenSet[int]:
        return frozenset(v for v, lab in enumerate(self.labels) if lab == label)

    @property
    def is_bilabeled(self) -> bool:
        return len(set(self.labels)) == 2

    @property
    def is_trilabeled(self) -> bool:
        return len(set(self.labels)) == 3

    def relabeled(self, vertices: Iterable[int], label: int) -> "LabeledGraph":
        labels = list(self.labels)
        for v in vertices:
            labels[v] = label
        return LabeledGraph(self.graph, labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.graph == other.graph and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((self.graph, self.labels))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.graph.m}, labels={self.labels_in_use()})"


class ColoredGraph:
    """Graph plus one integer color per vertex."""

    __slots__ = ("graph", "colors")

    def __init__(self, graph: Graph, colors: Optional[Sequence[int]] = None):
        colors = tuple(colors) if colors is not None else (0,) * graph.n
        if len(colors) != graph.n:
            raise PreconditionError(f"expected {graph.n} colors, got {len(colors)}")
        self.graph = graph
        self.colors = colors

    @property
    def n(self) -> int:
        return self.graph.n

    def color(self, v: int) -> int:
        return self.colors[v]

    def color_histogram(self) -> Counter:
        return Counter(self.colors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.graph == other.graph and self.colors == other.colors

    def __hash__(self) -> int:
        return hash((self.graph, self.colors))

    def __repr__(self) -> str:
        return f"ColoredGraph(n={self.n}, m={self.graph.m}, colors={len(set(self.colors))})"


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph.from_rows([full & ~g.closed_row(v) for v in g.vertices()], g.names)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Tuple[Graph, List[int]]:
    """
    Induced subgraph renumbered densely.

    Returns:
        The subgraph and the list mapping new vertex ids to original ids
        (in increasing original order).
    """
    order = sorted(set(vertices))
    index = {v: i for i, v in enumerate(order)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(order), edges, [g.name(v) for v in order]), order


def open_neighborhood(g: Graph, v: int) -> FrozenSet[int]:
    return frozenset(iter_bits(g.row(v)))


def closed_neighborhood(g: Graph, v: int) -> FrozenSet[int]:
    return frozenset(iter_bits(g.closed_row(v)))


def is_universal_vertex(g: Graph, v: int, scope: Optional[int] = None) -> bool:
    """True iff ``v`` is adjacent to every other vertex of ``scope`` (default: all)."""
    scope = g.full_mask if scope is None else scope
    return scope & ~g.closed_row(v) == 0


def _components_masked(g: Graph, scope: int, complemented: bool) -> List[int]:
    comps = []
    remaining = scope
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            v = lowest_bit(frontier)
            frontier &= frontier - 1
            if complemented:
                reach = scope & ~g.closed_row(v)
            else:
                reach = scope & g.row(v)
            fresh = reach & ~comp
            comp |= fresh
            frontier |= fresh
        comps.append(comp)
        remaining &= ~comp
    return comps


def component_masks(g: Graph, scope: Optional[int] = None) -> List[int]:
    """Connected components of ``g[scope]`` as bitmasks, ordered by minimum vertex."""
    return _components_masked(g, g.full_mask if scope is None else scope, complemented=False)


def cocomponent_masks(g: Graph, scope: Optional[int] = None) -> List[int]:
    """Connected components of the complement of ``g[scope]`` as bitmasks."""
    return _components_masked(g, g.full_mask if scope is None else scope, complemented=True)


def connected_components(g: Graph, scope: Optional[Iterable[int]] = None) -> List[FrozenSet[int]]:
    """Partition of ``scope`` (default: all vertices) into maximal connected sets, ordered by min vertex id."""
    mask = g.full_mask if scope is None else mask_of(scope)
    return [frozenset(iter_bits(c)) for c in component_masks(g, mask)]


def coconnected_components(g: Graph, scope: Optional[Iterable[int]] = None) -> List[FrozenSet[int]]:
    """Connected components of the complement of the subgraph induced on ``scope``."""
    mask = g.full_mask if scope is None else mask_of(scope)
    if mask & ~g.full_mask:
        raise PreconditionError("scope is not a subset of the vertex set")
    return [frozenset(iter_bits(c)) for c in cocomponent_masks(g, mask)]


def is_connected(g: Graph, scope: Optional[int] = None) -> bool:
    scope = g.full_mask if scope is None else scope
    return len(component_masks(g, scope)) <= 1


def is_module_mask(g: Graph, module: int, scope: Optional[int] = None) -> bool:
    scope = g.full_mask if scope is None else scope
    outside = scope & ~module
    first = None
    for v in iter_bits(module):
        sig = g.row(v) & outside
        if first is None:
            first = sig
        elif sig != first:
            return False
    return True


def is_module(g: Graph, m: Iterable[int]) -> bool:
    """True iff all vertices of ``m`` have identical neighbourhoods outside ``m``."""
    mask = mask_of(m)
    if mask == 0:
        raise PreconditionError("a module must be non-empty")
    if mask & ~g.full_mask:
        raise PreconditionError("module is not a subset of the vertex set")
    return is_module_mask(g, mask)


def minimal_module(g: Graph, seed: int, scope: Optional[int] = None) -> int:
    """
    Smallest module of ``g[scope]`` containing the vertex bitmask ``seed``.

    Repeatedly absorbs distinguishers: vertices outside the current set that
    see some but not all of it.
    """
    scope = g.full_mask if scope is None else scope
    module = seed
    changed = True
    while changed:
        changed = False
        for w in iter_bits(scope & ~module):
            seen = g.row(w) & module
            if seen and seen != module:
                module |= 1 << w
                changed = True
    return module


def is_prime(g: Graph) -> bool:
    """True iff every module of ``g`` is trivial (a singleton or the whole vertex set)."""
    full = g.full_mask
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if minimal_module(g, (1 << u) | (1 << v)) != full:
                return False
    return True


def is_l_prime(lg: LabeledGraph) -> bool:
    """True iff every module with uniform label is trivial."""
    g = lg.graph
    full = g.full_mask
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if lg.labels[u] != lg.labels[v]:
                continue
            module = minimal_module(g, (1 << u) | (1 << v))
            if module != full and len({lg.labels[w] for w in iter_bits(module)}) == 1:
                return False
    return True


def label_partition(lg: LabeledGraph, label: int) -> Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]:
    """
    Split the ``label`` class of a bilabeled graph by adjacency to the other class.

    Returns:
        ``(Va, Vs, Vn)``: vertices adjacent to all, some, and none of the
        vertices carrying the other label.

    Raises:
        PreconditionError: If ``lg`` is not bilabeled or ``label`` is not in use.
    """
    in_use = lg.labels_in_use()
    if len(in_use) != 2 or label not in in_use:
        raise PreconditionError(f"label_partition needs a bilabeled graph using label {label}, got {in_use}")
    other = lg.class_mask(in_use[0] if in_use[1] == label else in_use[1])
    va, vs, vn = [], [], []
    for v in iter_bits(lg.class_mask(label)):
        seen = lg.graph.row(v) & other
        if seen == other:
            va.append(v)
        elif seen:
            vs.append(v)
        else:
            vn.append(v)
    return frozenset(va), frozenset(vs), frozenset(vn)


def is_biclique_between(lg: LabeledGraph, a: int, b: int) -> bool:
    """True iff both label classes are non-empty and every a-b pair is adjacent (E_ab complete)."""
    if a == b:
        return False
    side_a, side_b = lg.class_mask(a), lg.class_mask(b)
    if not side_a or not side_b:
        return False
    return all(lg.graph.row(v) & side_b == side_b for v in iter_bits(side_a))


def degree_signature(g: Graph, colors: Optional[Mapping[int, int]] = None) -> Counter:
    """Multiset of (color, degree) pairs; an isomorphism invariant used for quick rejects."""
    return Counter(((colors[v] if colors is not None else 0), g.degree(v)) for v in g.vertices())


def graph_from_adjacency(adjacency: Mapping[int, Iterable[int]], n: Optional[int] = None) -> Graph:
    n = n if n is not None else (max(adjacency) + 1 if adjacency else 0)
    return Graph(n, {(min(u, v), max(u, v)) for u, vs in adjacency.items() for v in vs})


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def empty_graph(n: int) -> Graph:
    return Graph(n)
