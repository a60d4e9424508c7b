"""
Concrete syntax for clique-width expressions.

Grammar (whitespace insignificant)::

    expr   := leaf | union | join | rename
    leaf   := NAME ":" LABEL            NAME = [A-Za-z0-9_]+, LABEL = 1|2|3|4
    union  := "u(" expr ("," expr)+ ")"
    join   := "join(" LABEL "," LABEL ";" expr ")"
    rename := "ren(" LABEL "," LABEL ";" expr ")"

Vertex ids are assigned to names in order of first appearance.
"""

import logging
import re
from typing import Dict, List, Tuple

from ..errors import ExpressionSyntaxError, MalformedExpressionError
from .tree import Join, Leaf, ParseTree, Rename, Union, postorder

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z0-9_]+)|(?P<punct>[():,;]))")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if match is None:
                offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ExpressionSyntaxError(f"unexpected character {text[offset]!r}", offset)
            kind = "word" if match.group("word") is not None else "punct"
            self.tokens.append((match.group(kind), match.start(kind)))
            pos = match.end()
        self.index = 0

    def peek(self) -> Tuple[str, int]:
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return "", len(self.text)

    def next(self) -> Tuple[str, int]:
        tok = self.peek()
        self.index += 1
        return tok

    def expect(self, value: str) -> int:
        tok, pos = self.next()
        if tok != value:
            found = repr(tok) if tok else "end of input"
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", pos)
        return pos


class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.ids: Dict[str, int] = {}

    def label(self) -> int:
        tok, pos = self.lexer.next()
        if not tok.isdigit():
            raise ExpressionSyntaxError(f"expected a label, found {tok or 'end of input'!r}", pos)
        value = int(tok)
        if not 1 <= value <= 4:
            raise ExpressionSyntaxError(f"label {value} out of range 1..4", pos)
        return value

    def expr(self) -> ParseTree:
        tok, pos = self.lexer.peek()
        following = self.lexer.tokens[self.lexer.index + 1][0] if self.lexer.index + 1 < len(self.lexer.tokens) else ""
        if tok in ("u", "join", "ren") and following == "(":
            self.lexer.next()
            self.lexer.expect("(")
            if tok == "u":
                children = [self.expr()]
                while self.lexer.peek()[0] == ",":
                    self.lexer.next()
                    children.append(self.expr())
                close = self.lexer.expect(")")
                if len(children) < 2:
                    raise ExpressionSyntaxError("a union needs at least two operands", close)
                return Union(tuple(children))
            i = self.label()
            self.lexer.expect(",")
            j_pos = self.lexer.peek()[1]
            j = self.label()
            self.lexer.expect(";")
            child = self.expr()
            self.lexer.expect(")")
            if tok == "join":
                if i == j:
                    raise ExpressionSyntaxError(f"join needs distinct labels, got ({i},{j})", j_pos)
                return Join(i, j, child)
            return Rename(i, j, child)
        return self.leaf()

    def leaf(self) -> Leaf:
        name, pos = self.lexer.next()
        if not name or not re.fullmatch(r"[A-Za-z0-9_]+", name):
            raise ExpressionSyntaxError(f"expected a vertex name, found {name or 'end of input'!r}", pos)
        self.lexer.expect(":")
        label = self.label()
        if name in self.ids:
            raise ExpressionSyntaxError(f"duplicate vertex name {name!r}", pos)
        self.ids[name] = len(self.ids)
        return Leaf(self.ids[name], label, name)


def parse_text(text: str) -> ParseTree:
    """
    Parse k-expression text into an AST.

    Raises:
        ExpressionSyntaxError: With the offending character offset, on grammar
            violations, labels outside 1..4 and duplicate vertex names
    """
    parser = _Parser(text)
    try:
        tree = parser.expr()
    except MalformedExpressionError as e:
        raise ExpressionSyntaxError(str(e), parser.lexer.peek()[1])
    tok, pos = parser.lexer.peek()
    if tok:
        raise ExpressionSyntaxError(f"trailing input {tok!r}", pos)
    logger.debug(f"Parsed expression with {len(parser.ids)} vertices")
    return tree


def to_text(tree: ParseTree) -> str:
    """Render a tree in the concrete syntax; ``parse_text(to_text(t))`` reproduces ``t``."""
    rendered: Dict[int, str] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            rendered[id(node)] = f"{node.display_name}:{node.label}"
        elif isinstance(node, Union):
            rendered[id(node)] = "u(" + ", ".join(rendered.pop(id(c)) for c in node.children) + ")"
        elif isinstance(node, Join):
            rendered[id(node)] = f"join({node.i},{node.j}; {rendered.pop(id(node.child))})"
        else:
            rendered[id(node)] = f"ren({node.i},{node.j}; {rendered.pop(id(node.child))})"
    return rendered[id(tree)]
