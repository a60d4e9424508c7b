"""
Seeded random k-expressions (test-input generator).

Trees are built from a pool of subtrees: two random members are merged by a
union, and the merged tree then receives a few random irredundant joins and
renames. Joins never repeat an edge, so every generated tree evaluates.
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from ..errors import PreconditionError
from .tree import Join, Leaf, ParseTree, Rename, union

logger = logging.getLogger(__name__)

_JOIN_PROBABILITY = 0.6
_RENAME_PROBABILITY = 0.35


class _Entry:
    __slots__ = ("tree", "labels")

    def __init__(self, tree: ParseTree, labels: Dict[int, int]):
        self.tree = tree
        self.labels = labels

    def classes(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for v, lab in self.labels.items():
            out.setdefault(lab, []).append(v)
        return out


def _edges_between(entry: _Entry, edges: Set[Tuple[int, int]], i: int, j: int) -> bool:
    classes = entry.classes()
    for u in classes.get(i, ()):
        for v in classes.get(j, ()):
            if ((u, v) if u < v else (v, u)) in edges:
                return True
    return False


def random_expression(n: int, k: int = 3, seed: Optional[int] = None,
                      names: Optional[List[str]] = None) -> ParseTree:
    """
    Generate a well-formed parse tree on ``n`` vertices using at most ``k`` labels.

    Args:
        n: Number of vertices (leaves carry ids ``0..n-1``)
        k: Label budget, 1..3
        seed: Seed for ``numpy.random.default_rng``; equal seeds give equal trees
        names: Optional leaf names

    Raises:
        PreconditionError: If ``n < 1`` or ``k`` is outside 1..3
    """
    if n < 1:
        raise PreconditionError(f"random_expression needs n >= 1, got {n}")
    if not 1 <= k <= 3:
        raise PreconditionError(f"random_expression needs 1 <= k <= 3, got {k}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    pool: List[_Entry] = []
    edges: Set[Tuple[int, int]] = set()
    for v in order.tolist():
        label = int(rng.integers(1, k + 1))
        name = names[v] if names is not None else None
        pool.append(_Entry(Leaf(v, label, name), {v: label}))

    while len(pool) > 1:
        a, b = (int(x) for x in rng.choice(len(pool), size=2, replace=False))
        first, second = pool[a], pool[b]
        merged = _Entry(union(first.tree, second.tree), {**first.labels, **second.labels})
        for idx in sorted((a, b), reverse=True):
            pool.pop(idx)
        _decorate(merged, edges, k, rng)
        pool.append(merged)

    result = pool[0].tree
    logger.debug(f"Generated random expression: n={n}, k={k}, seed={seed}, edges={len(edges)}")
    return result


def _decorate(entry: _Entry, edges: Set[Tuple[int, int]], k: int, rng: np.random.Generator) -> None:
    """Apply a few random joins/renames on top of ``entry``, in place."""
    while True:
        roll = float(rng.random())
        classes = entry.classes()
        present = sorted(classes)
        if roll < _JOIN_PROBABILITY and len(present) >= 2:
            i, j = (int(x) for x in rng.choice(present, size=2, replace=False))
            if _edges_between(entry, edges, i, j):
                return
            for u in classes[i]:
                for v in classes[j]:
                    edges.add((u, v) if u < v else (v, u))
            entry.tree = Join(i, j, entry.tree)
        elif roll < _JOIN_PROBABILITY + _RENAME_PROBABILITY and k >= 2:
            i = int(rng.choice(present))
            j = int(rng.integers(1, k + 1))
            if i == j:
                return
            for v in classes[i]:
                entry.labels[v] = j
            entry.tree = Rename(i, j, entry.tree)
        else:
            return


def random_labeled_permutation(n: int, seed: Optional[int] = None) -> List[int]:
    """A seeded random permutation of ``0..n-1``."""
    return np.random.default_rng(seed).permutation(n).tolist()
