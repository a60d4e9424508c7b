"""
Label-blind colour refinement used to order choices during decomposition.

Vertices start from an optional mark colour. Each round hashes a vertex's
colour, the sorted colours of its neighbours, and the colour multiset of its
own label class. Label values never enter the hash, so relabeling a graph by
a label bijection leaves every key unchanged.
"""

import hashlib
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..graphs.core import Graph, iter_bits

RefinementKey = str


def _digest(payload: object) -> RefinementKey:
    return hashlib.blake2b(repr(payload).encode("utf-8"), digest_size=12).hexdigest()


def refinement_keys(g: Graph, scope: int, labels: Mapping[int, int],
                    marks: Optional[Mapping[int, int]] = None) -> Dict[int, RefinementKey]:
    """
    Stable colours of the vertices of ``g[scope]``.

    Args:
        g: Host graph
        scope: Bitmask of the vertices to refine over
        labels: Label of every vertex of ``scope``; only the partition matters
        marks: Optional initial colour per vertex (default 0)
    """
    vertices = list(iter_bits(scope))
    classes: Dict[int, List[int]] = {}
    for v in vertices:
        classes.setdefault(labels[v], []).append(v)
    colour = {v: _digest(("mark", marks.get(v, 0) if marks else 0)) for v in vertices}
    rounds = 0
    distinct = len(set(colour.values()))
    while True:
        rounds += 1
        fresh = {}
        for v in vertices:
            around = sorted(colour[w] for w in iter_bits(g.row(v) & scope))
            peers = sorted(colour[w] for w in classes[labels[v]])
            fresh[v] = _digest((colour[v], tuple(around), tuple(peers)))
        colour = fresh
        now = len(set(colour.values()))
        if now == distinct and rounds > 1:
            break
        distinct = now
        if rounds > len(vertices):
            break
    return colour


def vertex_order(keys: Mapping[int, RefinementKey], candidates: Iterable[int]) -> List[int]:
    """Candidates sorted by key; vertex ids break ties."""
    return sorted(candidates, key=lambda v: (keys[v], v))


def set_key(keys: Mapping[int, RefinementKey], vertices: Iterable[int]) -> Tuple[Tuple[RefinementKey, ...], Tuple[int, ...]]:
    """Ordering key for a vertex set: its sorted key multiset, then its sorted ids."""
    members = sorted(vertices)
    return tuple(sorted(keys[v] for v in members)), tuple(members)


def class_pair_key(keys: Mapping[int, RefinementKey], first: Sequence[int], second: Sequence[int]) -> tuple:
    """Symmetric ordering key for an unordered pair of label classes."""
    a, b = set_key(keys, first), set_key(keys, second)
    return (a, b) if a <= b else (b, a)
