"""
JSON and Graphviz DOT renderings of decomposition trees and skeletons.
"""

import logging
from typing import Dict, List

from ..graphs.core import Graph
from ..models.reports import MDNodeReport, MDTreeReport, SkeletonComponentReport, SkeletonReport
from .modular import MDTree, NodeKind
from .split import ComponentKind, Skeleton

logger = logging.getLogger(__name__)

_MD_FILL = {
    NodeKind.LEAF: "lightblue",
    NodeKind.SERIES: "lightgrey",
    NodeKind.PARALLEL: "white",
    NodeKind.PRIME: "gold",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _vertex_name(g: Graph, sk: Skeleton, v: int) -> str:
    return f"m{v - sk.n}" if sk.is_marker(v) else g.name(v)


def md_tree_report(tree: MDTree) -> MDTreeReport:
    """Number nodes in pre-order and describe each with its children and G_h edges."""
    ids: Dict[int, int] = {}
    order = list(tree.nodes())
    for index, node in enumerate(order):
        ids[id(node)] = index
    g = tree.graph
    nodes = []
    for node in order:
        rep_edges = list(node.representative.edges) if node.representative is not None else []
        nodes.append(MDNodeReport(
            id=ids[id(node)],
            kind=node.kind.value,
            vertices=[g.name(v) for v in sorted(node.vertices)],
            children=[ids[id(child)] for child in node.children],
            representative_edges=rep_edges,
        ))
    return MDTreeReport(root=0, nodes=nodes)


def md_tree_to_dot(tree: MDTree) -> str:
    report = md_tree_report(tree)
    lines = [
        "digraph MDTree {",
        "    rankdir=TB;",
        "    node [style=filled, fillcolor=lightgrey];",
    ]
    for node in report.nodes:
        kind = NodeKind(node.kind)
        if kind is NodeKind.LEAF:
            label, shape = node.vertices[0], "ellipse"
        else:
            label, shape = f"{kind.value} ({len(node.vertices)})", "box"
        lines.append(f'    n{node.id} [label="{_dot_escape(label)}", shape={shape}, fillcolor={_MD_FILL[kind]}];')
    for node in report.nodes:
        for child in node.children:
            lines.append(f"    n{node.id} -> n{child};")
    lines.append("}")
    return "\n".join(lines)


def skeleton_report(g: Graph, sk: Skeleton) -> SkeletonReport:
    components = []
    for comp in sk.components:
        components.append(SkeletonComponentReport(
            id=comp.id,
            kind=comp.kind.value,
            vertices=[_vertex_name(g, sk, v) for v in comp.vertices],
            edges=[(_vertex_name(g, sk, a), _vertex_name(g, sk, b)) for a, b in sorted(comp.edges)],
            center=_vertex_name(g, sk, comp.center) if comp.center is not None else None,
        ))
    special = [(_vertex_name(g, sk, p), _vertex_name(g, sk, q)) for p, q in sk.special_edges]
    return SkeletonReport(components=components, special_edges=special)


def skeleton_to_dot(g: Graph, sk: Skeleton) -> str:
    """One cluster per component; special edges are drawn bold and dashed."""
    lines: List[str] = ["graph Skeleton {", "    node [shape=circle];"]
    for comp in sk.components:
        lines.append(f"    subgraph cluster_{comp.id} {{")
        lines.append(f'        label="{comp.kind.value} {comp.id}";')
        if comp.kind is ComponentKind.PRIME:
            lines.append("        style=filled; fillcolor=lightyellow;")
        for v in comp.vertices:
            shape = "box" if sk.is_marker(v) else "ellipse"
            lines.append(f'        v{v} [label="{_dot_escape(_vertex_name(g, sk, v))}", shape={shape}];')
        for a, b in sorted(comp.edges):
            lines.append(f"        v{a} -- v{b};")
        lines.append("    }")
    for p, q in sk.special_edges:
        lines.append(f"    v{p} -- v{q} [style=\"bold,dashed\"];")
    lines.append("}")
    logger.debug(f"Rendered skeleton with {len(sk.components)} components as DOT")
    return "\n".join(lines)
