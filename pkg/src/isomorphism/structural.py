"""
Structural isomorphism of parse trees.

This module provides:
- LabelBijection: an injective map between label sets
- ``quotient_iso``: isomorphisms between colored quotient graphs
- IsoTable: per (g, h) Union pair, the admissible label maps with one
  witness vertex bijection each
- ``structurally_isomorphic``: the bottom-up matching over Union nodes,
  returning a label map and a vertex bijection, verified at the root

Descendants of a Union pair are matched greedily: for every candidate label
map, each descendant of ``g`` takes the first unmatched descendant of ``h``
admitting a compatible quotient isomorphism.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from ..errors import InvariantError
from ..kexpr.quotient import QuotientGraph, quotient_graph
from ..kexpr.tree import (
    Join,
    Leaf,
    Operation,
    ParseTree,
    Union,
    generate,
    immediate_significant_descendants,
    path_to_significant,
    postorder,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabelBijection:
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        sources = [a for a, _ in self.pairs]
        targets = [b for _, b in self.pairs]
        if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
            raise ValueError(f"not a bijection: {self.pairs}")

    @classmethod
    def from_dict(cls, mapping: Mapping[int, int]) -> "LabelBijection":
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def identity(cls, labels: Iterable[int]) -> "LabelBijection":
        return cls(tuple((a, a) for a in sorted(set(labels))))

    def __call__(self, label: int) -> int:
        for a, b in self.pairs:
            if a == label:
                return b
        raise KeyError(label)

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> FrozenSet[int]:
        return frozenset(b for _, b in self.pairs)

    def restrict(self, labels: Iterable[int]) -> "LabelBijection":
        keep = set(labels)
        return LabelBijection(tuple(p for p in self.pairs if p[0] in keep))

    def compose(self, after: "LabelBijection") -> "LabelBijection":
        """The map ``a -> after(self(a))``."""
        return LabelBijection(tuple(sorted((a, after(b)) for a, b in self.pairs)))

    def inverse(self) -> "LabelBijection":
        return LabelBijection(tuple(sorted((b, a) for a, b in self.pairs)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.pairs)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{a}->{b}" for a, b in self.pairs) + "}"


def quotient_iso(q1: QuotientGraph, q2: QuotientGraph) -> List[LabelBijection]:
    """
    All bijections between the quotient vertices that preserve adjacency and
    induce a well-defined injective map between colors.
    """
    if q1.size != q2.size or q1.colored.graph.m != q2.colored.graph.m:
        return []
    out = []
    for image in itertools.permutations(q2.labels):
        sigma = dict(zip(q1.labels, image))
        colors: Dict[int, int] = {}
        ok = True
        for a in q1.labels:
            ca, cb = q1.color_of(a), q2.color_of(sigma[a])
            if colors.setdefault(ca, cb) != cb:
                ok = False
                break
        if not ok or len(set(colors.values())) != len(colors):
            continue
        if all(q1.adjacent(a, b) == q2.adjacent(sigma[a], sigma[b])
               for a, b in itertools.combinations(q1.labels, 2)):
            out.append(LabelBijection.from_dict(sigma))
    return out


class IsoTable:
    """(g, h) -> {label map: witness vertex bijection}."""

    def __init__(self):
        self._rows: Dict[Tuple[int, int], Dict[LabelBijection, Dict[int, int]]] = {}

    def get(self, g: ParseTree, h: ParseTree) -> Optional[Dict[LabelBijection, Dict[int, int]]]:
        return self._rows.get((id(g), id(h)))

    def put(self, g: ParseTree, h: ParseTree, entry: Dict[LabelBijection, Dict[int, int]]) -> None:
        self._rows[(id(g), id(h))] = entry

    def __len__(self) -> int:
        return len(self._rows)


def _label_sets(tree: ParseTree) -> Dict[int, FrozenSet[int]]:
    sets: Dict[int, FrozenSet[int]] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            sets[id(node)] = frozenset((node.label,))
        elif isinstance(node, Union):
            sets[id(node)] = frozenset().union(*(sets[id(c)] for c in node.children))
        elif isinstance(node, Join):
            sets[id(node)] = sets[id(node.child)]
        else:
            child = sets[id(node.child)]
            sets[id(node)] = (child - {node.i}) | {node.j} if node.i in child else child
    return sets


def _leaf_counts(tree: ParseTree) -> Dict[int, int]:
    counts: Dict[int, int] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            counts[id(node)] = 1
        elif isinstance(node, Union):
            counts[id(node)] = sum(counts[id(c)] for c in node.children)
        else:
            counts[id(node)] = counts[id(node.child)]
    return counts


class _Matcher:
    def __init__(self, tg: ParseTree, th: ParseTree,
                 colors_g: Optional[Mapping[int, int]], colors_h: Optional[Mapping[int, int]]):
        self.colors_g = colors_g
        self.colors_h = colors_h
        self.labels_g = _label_sets(tg)
        self.labels_h = _label_sets(th)
        self.size_g = _leaf_counts(tg)
        self.size_h = _leaf_counts(th)
        self.table = IsoTable()

    def _color_g(self, v: int) -> int:
        return self.colors_g.get(v, 0) if self.colors_g is not None else 0

    def _color_h(self, v: int) -> int:
        return self.colors_h.get(v, 0) if self.colors_h is not None else 0

    def quotient_g(self, node: ParseTree, path: Tuple[Operation, ...]) -> QuotientGraph:
        return quotient_graph(self.labels_g[id(node)], path)

    def quotient_h(self, node: ParseTree, path: Tuple[Operation, ...]) -> QuotientGraph:
        return quotient_graph(self.labels_h[id(node)], path)

    def relation(self, g: ParseTree, h: ParseTree) -> Dict[LabelBijection, Dict[int, int]]:
        """R^{g,h}: label maps under which G_g and H_h are structurally isomorphic."""
        cached = self.table.get(g, h)
        if cached is not None:
            return cached
        if self.size_g[id(g)] != self.size_h[id(h)]:
            entry: Dict[LabelBijection, Dict[int, int]] = {}
        elif isinstance(g, Leaf) or isinstance(h, Leaf):
            entry = {}
            if isinstance(g, Leaf) and isinstance(h, Leaf) and self._color_g(g.vertex) == self._color_h(h.vertex):
                entry[LabelBijection(((g.label, h.label),))] = {g.vertex: h.vertex}
        else:
            entry = self._union_relation(g, h)
        self.table.put(g, h, entry)
        return entry

    def _union_relation(self, g: Union, h: Union) -> Dict[LabelBijection, Dict[int, int]]:
        dg = immediate_significant_descendants(g)
        dh = immediate_significant_descendants(h)
        lab_g, lab_h = sorted(self.labels_g[id(g)]), sorted(self.labels_h[id(h)])
        if len(dg) != len(dh) or len(lab_g) != len(lab_h):
            return {}
        qg = [self.quotient_g(node, path) for node, path in dg]
        qh = [self.quotient_h(node, path) for node, path in dh]
        # candidate quotient maps for each descendant pair, independent of the outer label map
        options: Dict[Tuple[int, int], List[Tuple[LabelBijection, Dict[int, int]]]] = {}
        for i, (gi, _) in enumerate(dg):
            for j, (hj, _) in enumerate(dh):
                if self.size_g[id(gi)] != self.size_h[id(hj)]:
                    continue
                inner = self.relation(gi, hj)
                if not inner:
                    continue
                found = [(sigma, inner[sigma]) for sigma in quotient_iso(qg[i], qh[j]) if sigma in inner]
                if found:
                    options[(i, j)] = found

        entry: Dict[LabelBijection, Dict[int, int]] = {}
        for image in itertools.permutations(lab_h):
            pi = dict(zip(lab_g, image))
            matched: Set[int] = set()
            witness: Dict[int, int] = {}
            for i in range(len(dg)):
                hit = None
                for j in range(len(dh)):
                    if j in matched or (i, j) not in options:
                        continue
                    for sigma, f in options[(i, j)]:
                        if all(pi[qg[i].color_of(a)] == qh[j].color_of(sigma(a)) for a in qg[i].labels):
                            hit = (j, f)
                            break
                    if hit is not None:
                        break
                if hit is None:
                    break
                matched.add(hit[0])
                witness.update(hit[1])
            else:
                entry[LabelBijection.from_dict(pi)] = witness
        return entry


def _verify(tg: ParseTree, th: ParseTree, pi: LabelBijection, f: Dict[int, int],
            colors_g: Optional[Mapping[int, int]], colors_h: Optional[Mapping[int, int]]) -> bool:
    gen_g, gen_h = generate(tg), generate(th)
    if set(f) != set(gen_g.labels) or set(f.values()) != set(gen_h.labels):
        return False
    for v, w in f.items():
        if pi(gen_g.labels[v]) != gen_h.labels[w]:
            return False
        if colors_g is not None or colors_h is not None:
            if (colors_g or {}).get(v, 0) != (colors_h or {}).get(w, 0):
                return False
    mapped = {(min(f[u], f[v]), max(f[u], f[v])) for u, v in gen_g.edges}
    return mapped == set(gen_h.edges)


def structurally_isomorphic(tg: ParseTree, th: ParseTree,
                            colors_g: Optional[Mapping[int, int]] = None,
                            colors_h: Optional[Mapping[int, int]] = None,
                            ) -> Optional[Tuple[LabelBijection, Dict[int, int]]]:
    """
    Decide whether two parse trees are structurally isomorphic.

    Args:
        tg: Parse tree of G (Union-normalized)
        th: Parse tree of H (Union-normalized)
        colors_g: Optional leaf colors of G; leaves pair only with equal colors
        colors_h: Optional leaf colors of H

    Returns:
        ``(pi, f)`` with ``pi`` a map lab(G) -> lab(H) and ``f`` a vertex
        bijection that is a label-respecting isomorphism, or None

    Raises:
        InvariantError: If a returned witness fails direct verification
    """
    matcher = _Matcher(tg, th, colors_g, colors_h)
    g0, path_g = path_to_significant(tg)
    h0, path_h = path_to_significant(th)
    relation = matcher.relation(g0, h0)
    if not relation:
        logger.debug(f"Parse trees not structurally isomorphic ({len(matcher.table)} table entries)")
        return None
    qg, qh = matcher.quotient_g(g0, path_g), matcher.quotient_h(h0, path_h)
    for sigma in quotient_iso(qg, qh):
        if sigma not in relation:
            continue
        pi = LabelBijection.from_dict({qg.color_of(a): qh.color_of(sigma(a)) for a in qg.labels})
        f = relation[sigma]
        if not _verify(tg, th, pi, f, colors_g, colors_h):
            logger.error(f"Structural isomorphism witness failed verification under {pi}")
            raise InvariantError("structural isomorphism produced an invalid witness")
        logger.debug(f"Structurally isomorphic via {pi} ({len(matcher.table)} table entries)")
        return pi, f
    return None
