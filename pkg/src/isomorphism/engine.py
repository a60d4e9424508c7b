"""
Isomorphism engine for graphs of clique-width at most three.

This module provides:
- EngineConfig: reduction strategy, thread count, witness verification
- ``prime_iso_colored``: one parse tree of G against every parse tree of H,
  with small primes matched directly when the trees disagree
- ``pendant_closure``: the private degree-1 neighbour reduction
- TypeRegistry: level-wise isomorphism types of MD-tree nodes, Series and
  Parallel nodes by child-type multiset, Prime nodes by colored prime
  isomorphism against one exemplar per type
- Witness assembly and verification
- ``iso_cw3`` (runs the isomorphism flow) and ``profile_runtime``
"""

import logging
import time
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism as nx_iso

from ..chlrr.decompose import DecomposeConfig, build_parse_trees, decompose
from ..chlrr.labg import build_labg
from ..decomposition.modular import MDNode, MDTree, NodeKind
from ..errors import CliqueWidthExceeded, PreconditionError
from ..graphs.core import ColoredGraph, Graph, is_connected
from ..kexpr.generator import random_expression, random_labeled_permutation
from ..kexpr.tree import ParseTree, evaluate
from ..models.reports import IsoResult, ProfileReport
from .structural import structurally_isomorphic

logger = logging.getLogger(__name__)

REDUCTIONS = ("modular", "pendant")


class EngineConfig:
    """Configuration for ``iso_cw3``."""

    def __init__(self, threads: int = 1, reduction: str = "modular", verify: bool = True,
                 decompose: Optional[DecomposeConfig] = None):
        if reduction not in REDUCTIONS:
            raise ValueError(f"unknown reduction {reduction!r}; expected one of {REDUCTIONS}")
        self.threads = threads
        self.reduction = reduction
        self.verify = verify
        self.decompose = decompose or DecomposeConfig(threads=threads)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "threads": self.threads,
            "reduction": self.reduction,
            "verify": self.verify,
            "decompose": self.decompose.to_dict(),
        }


def _color_map(g: ColoredGraph) -> Dict[int, int]:
    return {v: g.colors[v] for v in g.graph.vertices()}


def _invariants(g: ColoredGraph) -> Tuple:
    degrees = sorted((g.graph.degree(v), g.colors[v]) for v in g.graph.vertices())
    return g.n, g.graph.m, tuple(degrees)


class PrimeMatcher:
    """
    Colored isomorphism of prime graphs through parse trees.

    Parse trees are cached per key, so every prime graph is decomposed at
    most once per engine run.
    """

    def __init__(self, config: Optional[EngineConfig] = None):
        self.config = config or EngineConfig()
        self._first: Dict[Any, Optional[ParseTree]] = {}
        self._all: Dict[Any, List[ParseTree]] = {}
        self.comparisons = 0

    def first_tree(self, key: Any, g: Graph) -> ParseTree:
        """
        Raises:
            CliqueWidthExceeded: If no candidate labeling of ``g`` decomposes
        """
        if key not in self._first:
            tree = None
            for cand in build_labg(g):
                tree = decompose(cand.graph, check_preconditions=False, config=self.config.decompose).tree
                if tree is not None:
                    logger.debug(f"First parse tree of prime n={g.n} from {cand.provenance.describe()}")
                    break
            self._first[key] = tree
        tree = self._first[key]
        if tree is None:
            raise CliqueWidthExceeded(f"no candidate labeling of a prime graph on {g.n} vertices decomposes")
        return tree

    def all_trees(self, key: Any, h: Graph) -> List[ParseTree]:
        if key not in self._all:
            self._all[key] = build_parse_trees(build_labg(h), self.config.decompose)
        return self._all[key]

    def match(self, key_g: Any, g: ColoredGraph, key_h: Any, h: ColoredGraph) -> Optional[Dict[int, int]]:
        if g.n < 4 or h.n < 4:
            raise PreconditionError("prime isomorphism needs graphs on at least 4 vertices")
        if _invariants(g) != _invariants(h):
            return None
        self.comparisons += 1
        tg = self.first_tree(key_g, g.graph)
        colors_g, colors_h = _color_map(g), _color_map(h)
        for th in self.all_trees(key_h, h.graph):
            found = structurally_isomorphic(tg, th, colors_g, colors_h)
            if found is not None:
                return found[1]
        if g.n <= self.config.decompose.search_limit:
            # trees found by the exhaustive search depend on vertex order
            return _matched_directly(g, h)
        return None


def _as_networkx(g: ColoredGraph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from((v, {"color": g.colors[v]}) for v in g.graph.vertices())
    nxg.add_edges_from(g.graph.edges)
    return nxg


def _matched_directly(g: ColoredGraph, h: ColoredGraph) -> Optional[Dict[int, int]]:
    matcher = nx_iso.GraphMatcher(_as_networkx(g), _as_networkx(h),
                                  node_match=lambda a, b: a["color"] == b["color"])
    if not matcher.is_isomorphic():
        return None
    logger.debug(f"Prime n={g.n} matched directly after the parse trees disagreed")
    return dict(matcher.mapping)


def prime_iso_colored(g: ColoredGraph, h: ColoredGraph,
                      config: Optional[EngineConfig] = None) -> Optional[Dict[int, int]]:
    """
    Decide color-preserving isomorphism of two prime graphs.

    Args:
        g: Prime colored graph, at least 4 vertices
        h: Prime colored graph, at least 4 vertices
        config: Engine settings

    Returns:
        A color-preserving isomorphism ``V(g) -> V(h)``, or None

    Raises:
        CliqueWidthExceeded: If no candidate labeling of ``g`` decomposes
        PreconditionError: If either graph is too small or not prime
    """
    return PrimeMatcher(config).match("g", g, "h", h)


def pendant_closure(g: Graph) -> Graph:
    """Give every vertex ``v`` a private degree-1 neighbour ``n + v``."""
    if not is_connected(g):
        raise PreconditionError("pendant closure needs a connected graph")
    n = g.n
    names = list(g.names) + [f"{g.name(v)}'" for v in g.vertices()]
    edges = list(g.edges) + [(v, n + v) for v in g.vertices()]
    return Graph(2 * n, edges, names)


def quick_reject(g: ColoredGraph, h: ColoredGraph) -> Optional[str]:
    """A reason the graphs cannot be isomorphic, from cheap invariants."""
    if g.n != h.n:
        return f"vertex counts differ ({g.n} vs {h.n})"
    if g.graph.m != h.graph.m:
        return f"edge counts differ ({g.graph.m} vs {h.graph.m})"
    if sorted(g.graph.degree_sequence()) != sorted(h.graph.degree_sequence()):
        return "degree multisets differ"
    if g.color_histogram() != h.color_histogram():
        return "color multisets differ"
    if _invariants(g) != _invariants(h):
        return "colored degree multisets differ"
    return None


class TypeRegistry:
    """
    Isomorphism types of MD-tree nodes from both inputs.

    Nodes are registered level by level; two nodes share a type id exactly
    when their induced colored subgraphs are isomorphic.
    """

    def __init__(self, matcher: PrimeMatcher):
        self.matcher = matcher
        self._composite: Dict[Tuple, int] = {}
        self._prime: Dict[Tuple, List[Tuple[int, MDNode, ColoredGraph]]] = {}
        self.type_of: Dict[int, int] = {}
        # prime node -> map from its child indices onto its type exemplar's
        self.prime_map: Dict[int, Dict[int, int]] = {}
        self._next = 0

    def __len__(self) -> int:
        return self._next

    def _fresh(self) -> int:
        self._next += 1
        return self._next - 1

    def _leaf_or_composite(self, key: Tuple) -> int:
        if key not in self._composite:
            self._composite[key] = self._fresh()
        return self._composite[key]

    def assign(self, node: MDNode, colors: Sequence[int]) -> int:
        if node.kind is NodeKind.LEAF:
            t = self._leaf_or_composite(("leaf", colors[node.vertex]))
        elif node.kind is not NodeKind.PRIME:
            child_types = tuple(sorted(self.type_of[id(c)] for c in node.children))
            t = self._leaf_or_composite((node.kind.value, child_types))
        else:
            t = self._assign_prime(node)
        self.type_of[id(node)] = t
        return t

    def _assign_prime(self, node: MDNode) -> int:
        colored = ColoredGraph(node.representative, [self.type_of[id(c)] for c in node.children])
        bucket = self._prime.setdefault(_invariants(colored), [])
        for t, exemplar, exemplar_colored in bucket:
            f = self.matcher.match(id(node), colored, id(exemplar), exemplar_colored)
            if f is not None:
                self.prime_map[id(node)] = f
                return t
        t = self._fresh()
        bucket.append((t, node, colored))
        self.prime_map[id(node)] = {i: i for i in range(len(node.children))}
        logger.debug(f"New prime type {t} on {colored.n} children")
        return t

    def register(self, tree_g: MDTree, colors_g: Sequence[int],
                 tree_h: MDTree, colors_h: Sequence[int]) -> Optional[str]:
        """
        Register every node of both trees, lowest level first.

        Returns:
            None when the roots share a type, else the reason they do not

        Raises:
            CliqueWidthExceeded: If a required prime comparison cannot decompose
        """
        levels_g, levels_h = tree_g.by_height(), tree_h.by_height()
        for height in sorted(set(levels_g) | set(levels_h)):
            seen_g = Counter(self.assign(node, colors_g) for node in levels_g.get(height, []))
            seen_h = Counter(self.assign(node, colors_h) for node in levels_h.get(height, []))
            if seen_g != seen_h:
                return f"isomorphism types differ at MD level {height}"
        logger.debug(f"Type registry: {len(self)} types, {self.matcher.comparisons} prime comparisons")
        if self.type_of[id(tree_g.root)] != self.type_of[id(tree_h.root)]:
            return "root isomorphism types differ"
        return None


def assemble_witness(registry: TypeRegistry, x: MDNode, y: MDNode) -> Dict[int, int]:
    """Vertex bijection between two registered nodes of equal type."""
    f: Dict[int, int] = {}
    stack = [(x, y)]
    while stack:
        a, b = stack.pop()
        if a.kind is NodeKind.LEAF:
            f[a.vertex] = b.vertex
            continue
        if a.kind is NodeKind.PRIME:
            onto_b = {j: i for i, j in registry.prime_map[id(b)].items()}
            for i, child in enumerate(a.children):
                stack.append((child, b.children[onto_b[registry.prime_map[id(a)][i]]]))
            continue
        pool: Dict[int, List[MDNode]] = {}
        for child in b.children:
            pool.setdefault(registry.type_of[id(child)], []).append(child)
        for child in a.children:
            stack.append((child, pool[registry.type_of[id(child)]].pop()))
    return f


def verify_witness(g: ColoredGraph, h: ColoredGraph, f: Dict[int, int]) -> bool:
    """Check that ``f`` is a color-preserving isomorphism ``g -> h``."""
    if sorted(f) != list(g.graph.vertices()) or sorted(f.values()) != list(h.graph.vertices()):
        return False
    if any(g.colors[v] != h.colors[w] for v, w in f.items()):
        return False
    return g.graph.m == h.graph.m and all(h.graph.has_edge(f[u], f[v]) for u, v in g.graph.edges)


def iso_cw3(g: Graph, h: Graph, colors_g: Optional[Sequence[int]] = None,
            colors_h: Optional[Sequence[int]] = None, config: Optional[EngineConfig] = None) -> IsoResult:
    """
    Decide isomorphism of two graphs of clique-width at most three.

    Args:
        g: First graph
        h: Second graph
        colors_g: Optional vertex colors of ``g``; witnesses must preserve them
        colors_h: Optional vertex colors of ``h``
        config: Engine settings

    Returns:
        IsoResult with a verified witness, a non-isomorphism reason, or the
        clique-width exceeded verdict
    """
    from ..flows.iso_flow import create_iso_flow

    shared = {
        "g": ColoredGraph(g, colors_g),
        "h": ColoredGraph(h, colors_h),
        "config": config or EngineConfig(),
    }
    create_iso_flow().run(shared)
    result: IsoResult = shared["result"]
    logger.info(f"iso_cw3(n={g.n}, m={g.m}): {result.verdict.value}")
    return result


def profile_runtime(sizes: Sequence[int], repeats: int = 3, seed: int = 0,
                    config: Optional[EngineConfig] = None) -> ProfileReport:
    """
    Time ``iso_cw3`` on random 3-expression graphs against a permuted copy.

    Returns:
        ProfileReport with the median seconds per size and the fitted
        log-log slope (None with fewer than two sizes)
    """
    rng = np.random.default_rng(seed)
    seconds: List[float] = []
    for n in sizes:
        samples = []
        for _ in range(repeats):
            run_seed = int(rng.integers(0, 2**31 - 1))
            g = evaluate(random_expression(n, 3, seed=run_seed)).graph
            h = g.permuted(random_labeled_permutation(n, seed=run_seed + 1))
            start = time.perf_counter()
            result = iso_cw3(g, h, config=config)
            samples.append(time.perf_counter() - start)
            if not result.is_isomorphic:
                logger.warning(f"Profile run n={n} seed={run_seed} returned {result.verdict.value}")
        seconds.append(float(np.median(samples)))
        logger.info(f"Profile n={n}: median {seconds[-1]:.4f}s over {repeats} runs")
    slope = None
    if len(sizes) >= 2:
        slope = float(np.polyfit(np.log(sizes), np.log(np.maximum(seconds, 1e-9)), 1)[0])
    return ProfileReport(sizes=list(sizes), seconds=seconds, slope=slope)
