"""
Graph file readers and writers.

This module provides:
- The edge-list format: header ``n m``, then ``u v`` edge lines (0-based) and
  optional ``c v COLOR`` color lines; blank lines and ``#`` comments are skipped
- graph6 decoding/encoding through networkx
- ``read_graph_file`` returning an ``InputGraphFile`` model

Parse failures raise ``InputFormatError`` with 1-based line and column.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx

from ..errors import InputFormatError
from ..models.reports import GraphFormat, InputGraphFile
from .core import Graph

logger = logging.getLogger(__name__)


def _tokens(line: str) -> List[Tuple[str, int]]:
    """Split a line into (token, 1-based column) pairs."""
    out = []
    col = 0
    for part in line.split():
        col = line.index(part, col)
        out.append((part, col + 1))
        col += len(part)
    return out


def _as_int(token: str, line_no: int, column: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise InputFormatError(f"expected integer {what}, got {token!r}", line_no, column)
    if value < 0:
        raise InputFormatError(f"{what} must be non-negative, got {value}", line_no, column)
    return value


def parse_edge_list(text: str) -> InputGraphFile:
    """
    Parse edge-list text.

    Args:
        text: File contents

    Returns:
        InputGraphFile with dense vertex ids, default names and optional colors

    Raises:
        InputFormatError: On malformed header, bad tokens, out-of-range or
            duplicate edges, self-loops, or an edge count differing from ``m``
    """
    header: Optional[Tuple[int, int]] = None
    edges: List[Tuple[int, int]] = []
    seen = set()
    colors: Dict[int, int] = {}
    last_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        last_line = line_no
        if header is None:
            if len(toks) != 2:
                raise InputFormatError("header must be 'n m'", line_no, toks[0][1])
            header = (_as_int(toks[0][0], line_no, toks[0][1], "vertex count"),
                      _as_int(toks[1][0], line_no, toks[1][1], "edge count"))
            continue
        n = header[0]
        if toks[0][0] == "c":
            if len(toks) != 3:
                raise InputFormatError("color line must be 'c v COLOR'", line_no, toks[0][1])
            v = _as_int(toks[1][0], line_no, toks[1][1], "vertex")
            if v >= n:
                raise InputFormatError(f"vertex {v} out of range 0..{n - 1}", line_no, toks[1][1])
            try:
                colors[v] = int(toks[2][0])
            except ValueError:
                raise InputFormatError(f"expected integer color, got {toks[2][0]!r}", line_no, toks[2][1])
            continue
        if len(toks) != 2:
            raise InputFormatError("edge line must be 'u v'", line_no, toks[0][1])
        u = _as_int(toks[0][0], line_no, toks[0][1], "vertex")
        v = _as_int(toks[1][0], line_no, toks[1][1], "vertex")
        for value, (_, column) in ((u, toks[0]), (v, toks[1])):
            if value >= n:
                raise InputFormatError(f"vertex {value} out of range 0..{n - 1}", line_no, column)
        if u == v:
            raise InputFormatError(f"self-loop at vertex {u}", line_no, toks[0][1])
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputFormatError(f"duplicate edge {key[0]} {key[1]}", line_no, toks[0][1])
        seen.add(key)
        edges.append(key)

    if header is None:
        raise InputFormatError("missing 'n m' header", max(last_line, 1))
    n, m = header
    if len(edges) != m:
        raise InputFormatError(f"header announces {m} edges, found {len(edges)}", max(last_line, 1))

    graph = Graph(n, edges)
    color_list = None
    if colors:
        color_list = [colors.get(v, 0) for v in range(n)]
    logger.debug(f"Parsed edge list: n={n}, m={m}, colored={bool(colors)}")
    return InputGraphFile(format=GraphFormat.EDGELIST, graph=graph, names=list(graph.names), colors=color_list)


def parse_graph6(text: str) -> InputGraphFile:
    """Decode the first non-empty line of graph6 text."""
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise InputFormatError("empty graph6 input", 1)
    line_no, payload = lines[0]
    try:
        nxg = nx.from_graph6_bytes(payload.encode("ascii"))
    except (nx.NetworkXError, ValueError, UnicodeEncodeError) as e:
        raise InputFormatError(f"invalid graph6 data: {e}", line_no, 1)
    graph = Graph(nxg.number_of_nodes(), ((min(u, v), max(u, v)) for u, v in nxg.edges()))
    logger.debug(f"Parsed graph6: n={graph.n}, m={graph.m}")
    return InputGraphFile(format=GraphFormat.GRAPH6, graph=graph, names=list(graph.names))


def to_graph6(g: Graph) -> str:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices())
    nxg.add_edges_from(g.edges)
    return nx.to_graph6_bytes(nxg, header=False).decode("ascii").strip()


def to_edge_list(g: Graph, colors: Optional[List[int]] = None) -> str:
    """Render a graph in the edge-list format, using vertex names as tokens."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{g.name(u)} {g.name(v)}" for u, v in g.edges)
    if colors is not None:
        lines.extend(f"c {g.name(v)} {colors[v]}" for v in g.vertices())
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str, fmt: Union[str, GraphFormat] = GraphFormat.EDGELIST) -> InputGraphFile:
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.GRAPH6:
        return parse_graph6(text)
    return parse_edge_list(text)


def read_graph_file(path: Union[str, Path], fmt: Union[str, GraphFormat] = GraphFormat.EDGELIST) -> InputGraphFile:
    """
    Read and parse a graph file.

    Raises:
        InputFormatError: If the file cannot be read or parsed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Cannot read graph file {path}: {e}")
        raise InputFormatError(f"cannot read {path}: {e}", 1)
    return parse_graph_text(text, fmt)
