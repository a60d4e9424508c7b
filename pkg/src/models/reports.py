"""
Pydantic data models shared by the engine and the command line.

This module provides:
- Verdict and IsoResult (the three-way isomorphism answer)
- InputGraphFile (a parsed graph input)
- Report models serialized as schema-stable JSON by the CLI
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..graphs.core import Graph


class Verdict(str, Enum):
    ISOMORPHIC = "ISOMORPHIC"
    NON_ISOMORPHIC = "NON-ISOMORPHIC"
    CLIQUEWIDTH_EXCEEDED = "CLIQUEWIDTH-EXCEEDED"

    @property
    def exit_code(self) -> int:
        return {Verdict.ISOMORPHIC: 0, Verdict.NON_ISOMORPHIC: 1, Verdict.CLIQUEWIDTH_EXCEEDED: 2}[self]


class GraphFormat(str, Enum):
    EDGELIST = "edgelist"
    GRAPH6 = "graph6"


class IsoResult(BaseModel):
    """Outcome of ``iso_cw3``; a witness is present exactly for isomorphic verdicts."""

    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    witness: Optional[Dict[int, int]] = None
    reason: Optional[str] = None

    @model_validator(mode="after")
    def _witness_matches_verdict(self) -> "IsoResult":
        if (self.verdict is Verdict.ISOMORPHIC) != (self.witness is not None):
            raise ValueError("witness must be present iff the verdict is ISOMORPHIC")
        return self

    @property
    def is_isomorphic(self) -> bool:
        return self.verdict is Verdict.ISOMORPHIC

    @classmethod
    def isomorphic(cls, witness: Dict[int, int]) -> "IsoResult":
        return cls(verdict=Verdict.ISOMORPHIC, witness=dict(sorted(witness.items())))

    @classmethod
    def non_isomorphic(cls, reason: str) -> "IsoResult":
        return cls(verdict=Verdict.NON_ISOMORPHIC, reason=reason)

    @classmethod
    def exceeded(cls, reason: str) -> "IsoResult":
        return cls(verdict=Verdict.CLIQUEWIDTH_EXCEEDED, reason=reason)


class InputGraphFile(BaseModel):
    """A parsed graph input: dense graph, vertex names and optional colors."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    format: GraphFormat
    graph: Graph
    names: List[str]
    colors: Optional[List[int]] = None

    @model_validator(mode="after")
    def _sizes_agree(self) -> "InputGraphFile":
        if len(self.names) != self.graph.n:
            raise ValueError("one name per vertex is required")
        if self.colors is not None and len(self.colors) != self.graph.n:
            raise ValueError("one color per vertex is required")
        return self


class IsoReport(BaseModel):
    verdict: Verdict
    witness: Optional[List[Tuple[str, str]]] = None
    reason: Optional[str] = None


class LabeledGraphReport(BaseModel):
    n: int
    m: int
    edges: List[Tuple[str, str]]
    labels: Dict[str, int]


class MDNodeReport(BaseModel):
    id: int
    kind: str
    vertices: List[str]
    children: List[int] = Field(default_factory=list)
    representative_edges: List[Tuple[int, int]] = Field(default_factory=list)


class MDTreeReport(BaseModel):
    root: int
    nodes: List[MDNodeReport]


class SkeletonComponentReport(BaseModel):
    id: int
    kind: str
    vertices: List[str]
    edges: List[Tuple[str, str]]
    center: Optional[str] = None


class SkeletonReport(BaseModel):
    components: List[SkeletonComponentReport]
    special_edges: List[Tuple[str, str]]


class LabelingReport(BaseModel):
    provenance: str
    source: List[str]
    labels: Dict[str, int]


class LabGReport(BaseModel):
    candidates: List[LabelingReport]


class ProfileReport(BaseModel):
    sizes: List[int]
    seconds: List[float]
    slope: Optional[float] = None
