"""
Candidate labelings (LabG) of a connected prime graph.

This module provides:
- Provenance rules B1..B4 and T1
- ``build_labg``: per-vertex bilabelings (B1, B2) followed by the
  skeleton-derived trilabelings of special edges (T1), clique-component
  bilabelings (B3) and special-center bilabelings (B4)

Labelings with an empty class are skipped; repeated labelings keep their
first occurrence.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Set, Tuple

from ..decomposition.split import ComponentKind, Skeleton, skeleton, special_centers
from ..errors import InvariantError, PreconditionError
from ..graphs.core import Graph, LabeledGraph, is_connected, is_prime, iter_bits

logger = logging.getLogger(__name__)


class Rule(str, Enum):
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"
    T1 = "T1"


@dataclass(frozen=True)
class Provenance:
    rule: Rule
    source: Tuple[int, ...] = field(default_factory=tuple)

    def describe(self) -> str:
        return f"{self.rule.value}{list(self.source)}"


@dataclass(frozen=True)
class CandidateLabeling:
    graph: LabeledGraph
    provenance: Provenance

    @property
    def is_trilabeled(self) -> bool:
        return self.graph.is_trilabeled


def _bilabeling(g: Graph, first: Iterable[int]) -> List[int]:
    chosen = set(first)
    return [1 if v in chosen else 2 for v in g.vertices()]


def _clique_side(sk: Skeleton, vertices: Iterable[int]) -> Set[int]:
    side: Set[int] = set()
    for v in vertices:
        if sk.is_marker(v):
            side |= sk.accessible(sk.partner(v))
        else:
            side.add(v)
    return side


def build_labg(g: Graph, validate: bool = True) -> List[CandidateLabeling]:
    """
    Generate the candidate labelings of a connected prime graph.

    Args:
        g: Connected prime graph
        validate: Check that every candidate uses exactly two or three labels

    Returns:
        Candidates in a deterministic order

    Raises:
        PreconditionError: If ``g`` is disconnected or not prime
    """
    if g.n < 1 or not is_connected(g):
        raise PreconditionError("build_labg needs a connected graph")
    if not is_prime(g):
        raise PreconditionError("build_labg needs a prime graph")

    raw: List[Tuple[List[int], Provenance]] = []
    for v in g.vertices():
        raw.append((_bilabeling(g, [v]), Provenance(Rule.B1, (v,))))
        closed = g.closed_row(v)
        dominated = [x for x in iter_bits(g.row(v)) if g.closed_row(x) & ~closed == 0]
        if dominated:
            raw.append((_bilabeling(g, dominated), Provenance(Rule.B2, (v,))))

    sk = skeleton(g)
    for split in sk.splits():
        labels = [3] * g.n
        for x in split.a_tilde:
            labels[x] = 1
        for x in split.b_tilde:
            labels[x] = 2
        raw.append((labels, Provenance(Rule.T1, tuple(sorted(split.a_tilde | split.b_tilde)))))
    for comp in sk.components:
        if comp.kind is ComponentKind.CLIQUE:
            side = _clique_side(sk, comp.vertices)
            raw.append((_bilabeling(g, side), Provenance(Rule.B3, tuple(sorted(side)))))
    for _, center in special_centers(sk):
        raw.append((_bilabeling(g, [center]), Provenance(Rule.B4, (center,))))

    seen = set()
    candidates: List[CandidateLabeling] = []
    for labels, provenance in raw:
        used = len(set(labels))
        expected = 3 if provenance.rule is Rule.T1 else 2
        if used != expected:
            continue
        key = tuple(labels)
        if key in seen:
            continue
        seen.add(key)
        candidates.append(CandidateLabeling(LabeledGraph(g, labels), provenance))

    if validate:
        for cand in candidates:
            if len(cand.graph.labels_in_use()) not in (2, 3):
                raise InvariantError(f"candidate {cand.provenance.describe()} has an empty label class")
    logger.debug(f"LabG: n={g.n}, candidates={len(candidates)} "
                 f"(skeleton components={len(sk.components)}, special edges={len(sk.special_edges)})")
    return candidates
