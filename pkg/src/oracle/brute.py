"""
Brute-force oracles for small graphs.

This module provides:
- ``brute_iso``: backtracking isomorphism search with degree and color pruning
- ``all_modules``: every module, by subset enumeration
- ``all_proper_splits``: every proper split, by bipartition enumeration
- ``brute_cwd_le3``: exhaustive search for a 3-expression

Nothing here calls the decomposition or isomorphism algorithms; only the
Graph container and the Split record are shared.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from ..decomposition.split import Split
from ..errors import PreconditionError
from ..graphs.core import ColoredGraph, Graph

logger = logging.getLogger(__name__)

MAX_ISO_N = 12
MAX_MODULES_N = 12
MAX_SPLITS_N = 10
MAX_CWD_N = 7


@dataclass(frozen=True)
class Witness:
    """A vertex bijection claimed to be an isomorphism."""

    mapping: Tuple[Tuple[int, int], ...]

    def as_dict(self) -> Dict[int, int]:
        return dict(self.mapping)

    def __getitem__(self, v: int) -> int:
        return self.as_dict()[v]

    def validate(self, g: Graph, h: Graph,
                 colors_g: Optional[Sequence[int]] = None, colors_h: Optional[Sequence[int]] = None) -> bool:
        f = self.as_dict()
        if sorted(f) != list(range(g.n)) or sorted(f.values()) != list(range(h.n)):
            return False
        if colors_g is not None and colors_h is not None:
            if any(colors_g[v] != colors_h[w] for v, w in f.items()):
                return False
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if g.has_edge(u, v) != h.has_edge(f[u], f[v]):
                    return False
        return True


def _unpack(x) -> Tuple[Graph, Tuple[int, ...]]:
    if isinstance(x, ColoredGraph):
        return x.graph, x.colors
    return x, (0,) * x.n


def brute_iso(g, h) -> Optional[Witness]:
    """
    Find an isomorphism by backtracking.

    Args:
        g: Graph or ColoredGraph
        h: Graph or ColoredGraph; colors must be preserved when given

    Returns:
        A Witness, or None when the graphs are not isomorphic
    """
    g, cg = _unpack(g)
    h, ch = _unpack(h)
    if g.n != h.n or g.m != h.m:
        return None
    if g.n > MAX_ISO_N:
        logger.warning(f"brute_iso on n={g.n} may be slow")
    n = g.n
    sig_g = [(g.degree(v), cg[v]) for v in range(n)]
    sig_h = [(h.degree(w), ch[w]) for w in range(n)]
    if sorted(sig_g) != sorted(sig_h):
        return None

    # most constrained first: high degree, then neighbours of placed vertices
    order: List[int] = []
    placed: Set[int] = set()
    while len(order) < n:
        rest = [v for v in range(n) if v not in placed]
        v = max(rest, key=lambda x: (sum(1 for u in placed if g.has_edge(x, u)), g.degree(x), -x))
        order.append(v)
        placed.add(v)

    f: Dict[int, int] = {}
    used: Set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if w in used or sig_h[w] != sig_g[v]:
                continue
            if any(g.has_edge(v, u) != h.has_edge(w, f[u]) for u in order[:i]):
                continue
            f[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del f[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    return Witness(tuple(sorted(f.items())))


def _is_module(g: Graph, members: FrozenSet[int]) -> bool:
    for x in range(g.n):
        if x in members:
            continue
        seen = {g.has_edge(x, v) for v in members}
        if len(seen) > 1:
            return False
    return True


def all_modules(g: Graph) -> List[FrozenSet[int]]:
    """Every non-empty module, ordered by size then members."""
    if g.n > MAX_MODULES_N:
        raise PreconditionError(f"all_modules is limited to n <= {MAX_MODULES_N}")
    found: List[FrozenSet[int]] = []
    for size in range(1, g.n + 1):
        for members in itertools.combinations(range(g.n), size):
            # every pair in a module must agree on every outside vertex
            a = members[0]
            if any(g.has_edge(a, x) != g.has_edge(b, x)
                   for b in members[1:2] for x in range(g.n) if x not in members):
                continue
            candidate = frozenset(members)
            if _is_module(g, candidate):
                found.append(candidate)
    return found


def strong_modules(g: Graph) -> Set[FrozenSet[int]]:
    """Modules overlapping no other module."""
    modules = all_modules(g)
    strong = set()
    for m in modules:
        if all(not (m & other) or m <= other or other <= m for other in modules):
            strong.add(m)
    return strong


def all_proper_splits(g: Graph) -> List[Split]:
    """Every proper split (both sides of size >= 2) of a connected graph."""
    if g.n > MAX_SPLITS_N:
        raise PreconditionError(f"all_proper_splits is limited to n <= {MAX_SPLITS_N}")
    everyone = frozenset(range(g.n))
    splits: List[Split] = []
    # vertex 0 always lies in A, so every unordered split appears once
    for size in range(1, g.n - 2):
        for rest in itertools.combinations(range(1, g.n), size):
            a = frozenset((0,) + rest)
            b = everyone - a
            a_tilde = frozenset(v for v in a if any(g.has_edge(v, w) for w in b))
            b_tilde = frozenset(w for w in b if any(g.has_edge(v, w) for v in a))
            if not a_tilde:
                continue
            if all(g.has_edge(v, w) for v in a_tilde for w in b_tilde):
                splits.append(Split(a, b, a_tilde, b_tilde))
    return splits


def _canonical(labels: Sequence[int]) -> Tuple[int, ...]:
    renumber: Dict[int, int] = {}
    return tuple(renumber.setdefault(x, len(renumber) + 1) for x in labels)


def _close(g: Graph, members: Tuple[int, ...], labels: Tuple[int, ...],
           missing: FrozenSet[Tuple[int, int]]) -> Set[Tuple[int, ...]]:
    """Labelings of G[members] reachable by joins and renames that leave no edge missing."""
    start = (_canonical(labels), missing)
    seen = {start}
    queue = [start]
    complete: Set[Tuple[int, ...]] = set()
    while queue:
        labels, missing = queue.pop()
        if not missing:
            complete.add(labels)
        present = sorted(set(labels))
        nexts = []
        for a, b in itertools.combinations(present, 2):
            cls_a = [v for v, x in zip(members, labels) if x == a]
            cls_b = [v for v, x in zip(members, labels) if x == b]
            if all(g.has_edge(u, v) for u in cls_a for v in cls_b):
                added = {(min(u, v), max(u, v)) for u in cls_a for v in cls_b}
                nexts.append((labels, missing - added))
            nexts.append((_canonical([b if x == a else x for x in labels]), missing))
        for state in nexts:
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return complete


def brute_cwd_le3(g: Graph) -> bool:
    """
    Decide whether some 3-expression generates ``g``.

    Every subexpression may be assumed to generate the induced subgraph on its
    vertices, so each vertex subset keeps the set of its reachable labelings
    (canonical up to label permutation).
    """
    if g.n > MAX_CWD_N:
        raise PreconditionError(f"brute_cwd_le3 is limited to n <= {MAX_CWD_N}")
    if g.n <= 3:
        return True
    perms = list(itertools.permutations((1, 2, 3)))
    reach: Dict[int, Set[Tuple[int, ...]]] = {1 << v: {(1,)} for v in range(g.n)}
    for size in range(2, g.n + 1):
        for members in itertools.combinations(range(g.n), size):
            mask = sum(1 << v for v in members)
            found: Set[Tuple[int, ...]] = set()
            low = members[0]
            for k in range(1, size):
                for left in itertools.combinations(members[1:], k - 1):
                    left = (low,) + left
                    right = tuple(v for v in members if v not in left)
                    lmask = sum(1 << v for v in left)
                    rmask = mask ^ lmask
                    if not reach.get(lmask) or not reach.get(rmask):
                        continue
                    missing = frozenset((min(u, v), max(u, v)) for u in left for v in right if g.has_edge(u, v))
                    index = {v: i for i, v in enumerate(members)}
                    starts: Set[Tuple[int, ...]] = set()
                    for lab_l in reach[lmask]:
                        for lab_r in reach[rmask]:
                            for perm in perms:
                                labels = [0] * size
                                for v, x in zip(left, lab_l):
                                    labels[index[v]] = x
                                for v, x in zip(right, lab_r):
                                    labels[index[v]] = perm[x - 1]
                                starts.add(_canonical(labels))
                    for labels in starts:
                        found |= _close(g, members, labels, missing)
            reach[mask] = found
    full = (1 << g.n) - 1
    result = bool(reach[full])
    logger.debug(f"brute_cwd_le3(n={g.n}, m={g.m}) = {result}")
    return result
