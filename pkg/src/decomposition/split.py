"""
Split decomposition and the canonical skeleton.

This module provides:
- Split: a vertex bipartition (A, B) whose crossing edges form the biclique
  between the frontiers Ã = A ∩ N(B) and B̃ = B ∩ N(A)
- ``find_proper_split``: closure from every seed (a1, b1, x)
- ``skeleton``: recursive splitting with marker vertices, followed by the
  clique/clique and star center-to-extremity recombination
- ``special_centers``: real centers of star components

Marker vertices are numbered ``n, n + 1, ...`` after the real vertices.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from ..errors import InvariantError, PreconditionError
from ..graphs.core import Graph, is_connected, iter_bits, mask_of, popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Split:
    a: FrozenSet[int]
    b: FrozenSet[int]
    a_tilde: FrozenSet[int]
    b_tilde: FrozenSet[int]

    @classmethod
    def of(cls, g: Graph, side: Iterable[int]) -> "Split":
        a = frozenset(side)
        b = frozenset(g.vertices()) - a
        a_mask, b_mask = mask_of(a), mask_of(b)
        a_tilde = frozenset(v for v in a if g.row(v) & b_mask)
        b_tilde = frozenset(v for v in b if g.row(v) & a_mask)
        return cls(a, b, a_tilde, b_tilde)

    @property
    def is_proper(self) -> bool:
        return len(self.a) >= 2 and len(self.b) >= 2

    def is_valid(self, g: Graph) -> bool:
        """Both sides non-empty and the crossing edges are exactly Ã × B̃."""
        if not self.a or not self.b or self.a & self.b:
            return False
        if self.a | self.b != frozenset(g.vertices()):
            return False
        b_mask, bt_mask = mask_of(self.b), mask_of(self.b_tilde)
        for v in self.a:
            seen = g.row(v) & b_mask
            if seen and seen != bt_mask:
                return False
        return True

    def sorted_sides(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return tuple(sorted(self.a)), tuple(sorted(self.b))


def _split_closure(g: Graph, a1: int, b1: int, x: int) -> Optional[int]:
    """Smallest A containing a1 and x with b1 ∈ B; None when none is proper."""
    full = g.full_mask
    side = (1 << a1) | (1 << x)
    changed = True
    while changed:
        changed = False
        rest = full & ~side
        frontier = g.row(a1) & rest
        for v in iter_bits(side):
            if g.row(v) >> b1 & 1:
                forced = rest & (g.row(v) ^ frontier)
            else:
                forced = rest & g.row(v)
            if forced:
                if forced >> b1 & 1:
                    return None
                side |= forced
                rest &= ~forced
                frontier &= rest
                changed = True
    if popcount(full & ~side) < 2:
        return None
    return side


def find_proper_split(g: Graph) -> Optional[Split]:
    """
    Find a proper split of a connected graph.

    The choice is deterministic: the lexicographically least sorted Ã, with
    ties broken by the sorted A side.

    Raises:
        PreconditionError: If ``g`` is disconnected
    """
    if not is_connected(g):
        raise PreconditionError("find_proper_split needs a connected graph")
    if g.n < 4:
        return None
    best: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    seen: Set[int] = set()
    for a1, b1 in g.edges:
        for u, w in ((a1, b1), (b1, a1)):
            for x in g.vertices():
                if x == u or x == w:
                    continue
                side = _split_closure(g, u, w, x)
                if side is None or side in seen:
                    continue
                seen.add(side)
                rest = g.full_mask & ~side
                tilde = tuple(v for v in iter_bits(side) if g.row(v) & rest)
                key = (tilde, tuple(iter_bits(side)))
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return Split.of(g, best[1])


class ComponentKind(str, Enum):
    PRIME = "prime"
    CLIQUE = "clique"
    STAR = "star"


@dataclass
class SkeletonComponent:
    id: int
    vertices: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]
    kind: ComponentKind = ComponentKind.PRIME
    center: Optional[int] = None

    def neighbors(self, v: int) -> Set[int]:
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out


def _classify(vertices: Tuple[int, ...], edges: FrozenSet[Tuple[int, int]]) -> Tuple[ComponentKind, Optional[int]]:
    size = len(vertices)
    if len(edges) == size * (size - 1) // 2:
        return ComponentKind.CLIQUE, None
    if size >= 3 and len(edges) == size - 1:
        degree: Dict[int, int] = {v: 0 for v in vertices}
        for a, b in edges:
            degree[a] += 1
            degree[b] += 1
        centers = [v for v in vertices if degree[v] == size - 1]
        if centers:
            return ComponentKind.STAR, centers[0]
    return ComponentKind.PRIME, None


@dataclass
class Skeleton:
    """Split tree of a connected graph; components are prime, clique or star."""

    n: int
    components: List[SkeletonComponent]
    special_edges: List[Tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self._partner: Dict[int, int] = {}
        for p, q in self.special_edges:
            self._partner[p] = q
            self._partner[q] = p
        self._owner: Dict[int, SkeletonComponent] = {}
        for comp in self.components:
            for v in comp.vertices:
                self._owner[v] = comp

    def is_marker(self, v: int) -> bool:
        return v >= self.n

    def partner(self, marker: int) -> int:
        return self._partner[marker]

    def component_of(self, v: int) -> SkeletonComponent:
        return self._owner[v]

    def accessible(self, marker: int) -> FrozenSet[int]:
        """Real vertices reached from ``marker`` by alternating component and special edges."""
        out: Set[int] = set()
        stack = [marker]
        while stack:
            current = stack.pop()
            for w in self._owner[current].neighbors(current):
                if self.is_marker(w):
                    stack.append(self._partner[w])
                else:
                    out.add(w)
        return frozenset(out)

    def represented(self, marker: int) -> FrozenSet[int]:
        """Real vertices on the far side of ``marker``'s special edge."""
        out: Set[int] = set()
        start = self._owner[self._partner[marker]]
        stack, visited = [start], {start.id}
        while stack:
            comp = stack.pop()
            for v in comp.vertices:
                if not self.is_marker(v):
                    out.add(v)
                elif v != self._partner[marker]:
                    nxt = self._owner[self._partner[v]]
                    if nxt.id not in visited:
                        visited.add(nxt.id)
                        stack.append(nxt)
        return frozenset(out)

    def splits(self) -> List[Split]:
        """One split per special edge: A is the real side behind ``p``, B behind ``q``."""
        out = []
        for p, q in self.special_edges:
            b = self.represented(p)
            a = self.represented(q)
            out.append(Split(a, b, self.accessible(p), self.accessible(q)))
        return out

    def contract(self) -> Graph:
        """Contract every special edge; reproduces the decomposed graph."""
        adj: Dict[int, Set[int]] = {}
        for comp in self.components:
            for v in comp.vertices:
                adj.setdefault(v, set())
            for a, b in comp.edges:
                adj[a].add(b)
                adj[b].add(a)
        for p, q in self.special_edges:
            _merge_markers(adj, p, q)
        return Graph(self.n, {(min(a, b), max(a, b)) for a, nbrs in adj.items() for b in nbrs})


def _merge_markers(adj: Dict[int, Set[int]], p: int, q: int) -> None:
    left, right = adj.pop(p), adj.pop(q)
    for x in left:
        adj[x].discard(p)
    for y in right:
        adj[y].discard(q)
    for x in left:
        for y in right:
            adj[x].add(y)
            adj[y].add(x)


def _local_graph(vertices: Tuple[int, ...], edges: Iterable[Tuple[int, int]]) -> Graph:
    index = {v: i for i, v in enumerate(vertices)}
    return Graph(len(vertices), [(index[a], index[b]) for a, b in edges])


def _norm(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


def skeleton(g: Graph) -> Skeleton:
    """
    Build the canonical split-decomposition skeleton of a connected graph.

    Raises:
        PreconditionError: If ``g`` is disconnected
    """
    if g.n < 1 or not is_connected(g):
        raise PreconditionError("skeleton needs a connected graph")

    next_marker = g.n
    special: List[Tuple[int, int]] = []
    done: List[Tuple[Tuple[int, ...], FrozenSet[Tuple[int, int]]]] = []
    work = [(tuple(g.vertices()), frozenset(g.edges))]
    while work:
        vertices, edges = work.pop()
        local = _local_graph(vertices, edges)
        found = find_proper_split(local) if local.n >= 4 else None
        if found is None:
            done.append((vertices, edges))
            continue
        p, q = next_marker, next_marker + 1
        next_marker += 2
        special.append((p, q))
        side_a = {vertices[i] for i in found.a}
        side_b = {vertices[i] for i in found.b}
        a_edges = {e for e in edges if e[0] in side_a and e[1] in side_a}
        b_edges = {e for e in edges if e[0] in side_b and e[1] in side_b}
        a_edges |= {_norm(vertices[i], p) for i in found.a_tilde}
        b_edges |= {_norm(vertices[i], q) for i in found.b_tilde}
        work.append((tuple(sorted(side_b | {q})), frozenset(b_edges)))
        work.append((tuple(sorted(side_a | {p})), frozenset(a_edges)))

    components = _recombine(done, special)
    sk = Skeleton(g.n, components, sorted(special))
    logger.debug(f"Skeleton: n={g.n}, components={len(components)}, special edges={len(sk.special_edges)}")
    return sk


def _recombine(parts: List[Tuple[Tuple[int, ...], FrozenSet[Tuple[int, int]]]],
               special: List[Tuple[int, int]]) -> List[SkeletonComponent]:
    """Merge clique-clique neighbours and star pairs joined center-to-extremity."""
    comps: Dict[int, Tuple[Set[int], Set[Tuple[int, int]]]] = {
        i: (set(vs), set(es)) for i, (vs, es) in enumerate(parts)}
    owner = {v: i for i, (vs, _) in comps.items() for v in vs}

    merged = True
    while merged:
        merged = False
        for index, (p, q) in enumerate(special):
            cp, cq = owner[p], owner[q]
            kind_p, center_p = _classify(tuple(sorted(comps[cp][0])), frozenset(comps[cp][1]))
            kind_q, center_q = _classify(tuple(sorted(comps[cq][0])), frozenset(comps[cq][1]))
            both_cliques = kind_p is ComponentKind.CLIQUE and kind_q is ComponentKind.CLIQUE
            both_stars = kind_p is ComponentKind.STAR and kind_q is ComponentKind.STAR
            center_to_extremity = both_stars and ((center_p == p) != (center_q == q))
            if not (both_cliques or center_to_extremity):
                continue
            adj: Dict[int, Set[int]] = {v: set() for v in comps[cp][0] | comps[cq][0]}
            for a, b in comps[cp][1] | comps[cq][1]:
                adj[a].add(b)
                adj[b].add(a)
            _merge_markers(adj, p, q)
            vertices = set(adj)
            edges = {_norm(a, b) for a, nbrs in adj.items() for b in nbrs}
            comps[cp] = (vertices, edges)
            del comps[cq]
            for v in vertices:
                owner[v] = cp
            special.pop(index)
            merged = True
            break

    ordered = sorted(comps.values(), key=lambda c: min(c[0]))
    out = []
    for cid, (vs, es) in enumerate(ordered):
        vertices = tuple(sorted(vs))
        edges = frozenset(es)
        kind, center = _classify(vertices, edges)
        if kind is ComponentKind.PRIME and len(vertices) < 4:
            raise InvariantError(f"skeleton component {vertices} is neither degenerate nor prime")
        out.append(SkeletonComponent(cid, vertices, edges, kind, center))
    return out


def special_centers(sk: Skeleton) -> List[Tuple[SkeletonComponent, int]]:
    """Star components whose center is a real vertex, with that center."""
    return [(comp, comp.center) for comp in sk.components
            if comp.kind is ComponentKind.STAR and not sk.is_marker(comp.center)]
