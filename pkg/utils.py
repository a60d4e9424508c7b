"""
Utility functions for the cw3-iso command line
"""
import logging
import time
from contextlib import contextmanager
from typing import Iterator, List, Mapping, Optional, Sequence

logger = logging.getLogger(__name__)

GRAPH_FORMATS = ("edgelist", "graph6")


def validate_input_format(fmt: str) -> bool:
    """
    Validate a graph file format name

    Args:
        fmt: Format name ('edgelist' or 'graph6')

    Returns:
        True if valid, False otherwise
    """
    return isinstance(fmt, str) and fmt.strip().lower() in GRAPH_FORMATS


def escape_name(name: str) -> str:
    r"""
    Escape a vertex name for a ``name -> name`` witness line

    Backslashes, whitespace and unprintable characters become ``\xNN``,
    ``\uNNNN`` or ``\UNNNNNNNN`` escapes, so every line splits into exactly
    three tokens.

    Args:
        name: Vertex name as read from the input file

    Returns:
        The escaped name
    """
    out = []
    for char in name:
        if char.isprintable() and not char.isspace() and char != "\\":
            out.append(char)
        elif ord(char) < 0x100:
            out.append(f"\\x{ord(char):02x}")
        elif ord(char) < 0x10000:
            out.append(f"\\u{ord(char):04x}")
        else:
            out.append(f"\\U{ord(char):08x}")
    return "".join(out)


@contextmanager
def timed(label: str, sink: Optional[List[float]] = None) -> Iterator[None]:
    """Log the wall time of a block at DEBUG and optionally append it to ``sink``"""
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        logger.debug(f"{label} took {elapsed:.4f}s")
        if sink is not None:
            sink.append(elapsed)


def format_mapping(mapping: Mapping[int, int], names_g: Sequence[str], names_h: Sequence[str]) -> List[str]:
    """Render a vertex bijection as ``name -> name`` lines in source order, names escaped"""
    return [f"{escape_name(names_g[v])} -> {escape_name(names_h[w])}" for v, w in sorted(mapping.items())]
