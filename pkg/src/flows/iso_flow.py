"""
PocketFlow pipeline behind ``iso_cw3``.

QuickRejectNode >> ModularDecompositionNode >> TypeRegistryNode >> WitnessNode >> VerdictNode

The "reject", "empty", "mismatch" and "exceeded" actions jump straight to
the VerdictNode. The shared store carries the colored inputs under ``g``/``h``,
the EngineConfig under ``config``, and receives the IsoResult under ``result``.
"""

import logging
from typing import Any, Dict, Optional, Tuple

import pocketflow as pf

from ..decomposition.modular import modular_decomposition
from ..errors import CliqueWidthExceeded, InvariantError
from ..graphs.core import ColoredGraph, is_connected
from ..isomorphism.engine import (
    PrimeMatcher,
    TypeRegistry,
    assemble_witness,
    pendant_closure,
    quick_reject,
    verify_witness,
)
from ..models.reports import IsoResult

logger = logging.getLogger(__name__)


class QuickRejectNode(pf.Node):
    def prep(self, shared):
        return shared["g"], shared["h"]

    def exec(self, prep_res):
        g, h = prep_res
        return quick_reject(g, h)

    def post(self, shared, prep_res, exec_res):
        if exec_res is not None:
            logger.debug(f"Quick reject: {exec_res}")
            shared["result"] = IsoResult.non_isomorphic(exec_res)
            return "reject"
        if prep_res[0].n == 0:
            shared["result"] = IsoResult.isomorphic({})
            return "empty"
        return "default"


class ModularDecompositionNode(pf.Node):
    """Build both MD trees, on the pendant closures when that reduction applies."""

    def prep(self, shared):
        return shared["g"], shared["h"], shared["config"]

    def exec(self, prep_res):
        g, h, config = prep_res
        reduced = (config.reduction == "pendant" and g.n >= 2
                   and is_connected(g.graph) and is_connected(h.graph))
        if reduced:
            g, h = _closure(g), _closure(h)
            logger.debug(f"Pendant reduction to n={g.n}")
        elif config.reduction == "pendant":
            logger.info("Pendant reduction needs connected inputs on 2+ vertices; using modular reduction")
        return g, h, modular_decomposition(g.graph), modular_decomposition(h.graph)

    def post(self, shared, prep_res, exec_res):
        g, h, tree_g, tree_h = exec_res
        shared["work_g"], shared["work_h"] = g, h
        shared["md_g"], shared["md_h"] = tree_g, tree_h
        return "default"


def _closure(g: ColoredGraph) -> ColoredGraph:
    colors = [2 * c for c in g.colors] + [2 * c + 1 for c in g.colors]
    return ColoredGraph(pendant_closure(g.graph), colors)


class TypeRegistryNode(pf.Node):
    def prep(self, shared):
        return shared["work_g"], shared["work_h"], shared["md_g"], shared["md_h"], shared["config"]

    def exec(self, prep_res) -> Tuple[str, Any]:
        g, h, tree_g, tree_h, config = prep_res
        registry = TypeRegistry(PrimeMatcher(config))
        try:
            reason = registry.register(tree_g, g.colors, tree_h, h.colors)
        except CliqueWidthExceeded as e:
            return "exceeded", str(e)
        if reason is not None:
            return "mismatch", reason
        return "default", registry

    def post(self, shared, prep_res, exec_res):
        action, payload = exec_res
        if action == "exceeded":
            shared["result"] = IsoResult.exceeded(payload)
        elif action == "mismatch":
            shared["result"] = IsoResult.non_isomorphic(payload)
        else:
            shared["registry"] = payload
        return action


class WitnessNode(pf.Node):
    def prep(self, shared):
        return (shared["registry"], shared["md_g"], shared["md_h"],
                shared["g"], shared["h"], shared["config"])

    def exec(self, prep_res) -> Dict[int, int]:
        registry, tree_g, tree_h, g, h, config = prep_res
        f = assemble_witness(registry, tree_g.root, tree_h.root)
        f = {v: w for v, w in f.items() if v < g.n}
        if config.verify and not verify_witness(g, h, f):
            logger.error("Assembled witness is not a color-preserving isomorphism")
            raise InvariantError("assembled witness failed verification")
        return f

    def post(self, shared, prep_res, exec_res):
        shared["result"] = IsoResult.isomorphic(exec_res)
        return "default"


class VerdictNode(pf.Node):
    def prep(self, shared):
        return shared.get("result")

    def exec(self, prep_res: Optional[IsoResult]) -> IsoResult:
        if prep_res is None:
            raise InvariantError("isomorphism flow finished without a verdict")
        return prep_res

    def post(self, shared, prep_res, exec_res):
        logger.debug(f"Verdict: {exec_res.verdict.value}")
        return None


def create_iso_flow() -> pf.Flow:
    quick = QuickRejectNode()
    md = ModularDecompositionNode()
    types = TypeRegistryNode()
    witness = WitnessNode()
    verdict = VerdictNode()

    quick >> md >> types >> witness >> verdict
    quick - "reject" >> verdict
    quick - "empty" >> verdict
    types - "mismatch" >> verdict
    types - "exceeded" >> verdict
    return pf.Flow(start=quick)
