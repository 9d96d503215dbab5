"""Construction expression language.

Grammar (whitespace-insensitive; names are case-sensitive):

    expr := P1 | P2
          | B(n) | Bp(n) | Bpp(n) | units(n)
          | prod(expr, expr, ...)          at least two operands
          | union(expr, expr, ...)         at least two operands
          | three(expr, expr, expr)
          | six(expr * 6)
          | five(expr * 7)                 pn1, pn2, pn3, pk, pm1, pm2, pm3
          | mirror(expr)
          | double(expr)
          | tD(expr, even|odd)
          | load("path")

P1/P2 are the seed sets, B the no-zero block, Bp/Bpp its even/odd halves by
count of 2-coordinates, units the one-nonzero-coordinate set. Syntax errors
carry the character offset of the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ExprArityError, ExprNameError, ExprSyntaxError
from .f3core import PointSet
from . import constructions as c
from .capfile import read_capset

Arg = Union["Node", int, str]


@dataclass(frozen=True)
class Node:
    """One construction call: a name, its arguments, and its source offset."""

    name: str
    args: tuple[Arg, ...]
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)

_ATOMS = ("P1", "P2")
# name -> (argument kinds, display signature); kinds: e=expr, n=number,
# s=string, p=parity keyword, "e+"=two or more exprs.
_SIGNATURES: dict[str, tuple[str, str]] = {
    "B": ("n", "B(n)"),
    "Bp": ("n", "Bp(n)"),
    "Bpp": ("n", "Bpp(n)"),
    "units": ("n", "units(n)"),
    "prod": ("e+", "prod(expr, expr, ...)"),
    "union": ("e+", "union(expr, expr, ...)"),
    "three": ("eee", "three(expr, expr, expr)"),
    "six": ("eeeeee", "six(expr, expr, expr, expr, expr, expr)"),
    "five": ("eeeeeee", "five(pn1, pn2, pn3, pk, pm1, pm2, pm3)"),
    "mirror": ("e", "mirror(expr)"),
    "double": ("e", "double(expr)"),
    "tD": ("ep", "tD(expr, even|odd)"),
    "load": ("s", 'load("path")'),
}


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            if text[i] == '"':
                raise ExprSyntaxError("unterminated string", i)
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), i))
        i = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_punct(self, ch: str) -> _Token:
        tok = self.take()
        if tok.kind != "punct" or tok.text != ch:
            what = f"{tok.text!r}" if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected {ch!r}, got {what}", tok.pos)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Node:
        tok = self.take()
        if tok.kind != "name":
            what = f"{tok.text!r}" if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected a construction name, got {what}", tok.pos)
        name = tok.text
        if name in _ATOMS:
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == "(":
                raise ExprArityError(f"{name} takes no arguments", nxt.pos)
            return Node(name, (), tok.pos)
        if name not in _SIGNATURES:
            raise ExprNameError(f"unknown construction {name!r}", tok.pos)
        kinds, signature = _SIGNATURES[name]
        self.expect_punct("(")
        args = self.arg_list(name, kinds, signature)
        self.expect_punct(")")
        return Node(name, tuple(args), tok.pos)

    def arg_list(self, name: str, kinds: str, signature: str) -> list[Arg]:
        args: list[Arg] = []
        variadic = kinds == "e+"
        while True:
            kind = "e" if variadic else (kinds[len(args)] if len(args) < len(kinds) else None)
            if kind is None:
                raise ExprArityError(
                    f"{name} expects {len(kinds)} argument(s): {signature}", self.peek().pos
                )
            args.append(self.one_arg(name, kind, signature))
            tok = self.peek()
            if tok.kind == "punct" and tok.text == ",":
                self.take()
                continue
            break
        tok = self.peek()
        if not (tok.kind == "punct" and tok.text == ")"):
            what = f"{tok.text!r}" if tok.kind != "end" else "end of input"
            raise ExprSyntaxError(f"expected ',' or ')', got {what}", tok.pos)
        need = 2 if variadic else len(kinds)
        if (variadic and len(args) < 2) or (not variadic and len(args) != need):
            raise ExprArityError(
                f"{name} expects {'at least ' if variadic else ''}{need} argument(s), "
                f"got {len(args)}: {signature}",
                self.peek().pos,
            )
        return args

    def one_arg(self, name: str, kind: str, signature: str) -> Arg:
        tok = self.peek()
        if kind == "e":
            return self.expr()
        if kind == "n":
            if tok.kind != "number":
                raise ExprSyntaxError(f"{name} expects a number: {signature}", tok.pos)
            self.take()
            return int(tok.text)
        if kind == "p":
            if tok.kind != "name" or tok.text not in ("even", "odd"):
                raise ExprSyntaxError(f"{name} expects 'even' or 'odd' here: {signature}", tok.pos)
            self.take()
            return tok.text
        if kind == "s":
            if tok.kind != "string":
                raise ExprSyntaxError(f'{name} expects a double-quoted path: {signature}', tok.pos)
            self.take()
            return tok.text[1:-1]
        raise AssertionError(kind)


def parse(text: str) -> Node:
    """Parse an expression; errors carry character offsets."""
    return _Parser(text).parse()


def to_string(node: Node) -> str:
    """Canonical text form of a parsed expression."""
    if not node.args:
        return node.name
    parts = []
    for a in node.args:
        if isinstance(a, Node):
            parts.append(to_string(a))
        elif isinstance(a, int):
            parts.append(str(a))
        elif node.name == "load":
            parts.append(f'"{a}"')
        else:
            parts.append(a)
    return f"{node.name}({', '.join(parts)})"


def evaluate(
    expr: Node | str,
    strict: bool = True,
    allow_overlap: bool = False,
) -> PointSet:
    """Build the set an expression denotes.

    strict=False skips the hypothesis checks of three/six/five/tD/double;
    allow_overlap lets union operands share points.
    """
    node = parse(expr) if isinstance(expr, str) else expr
    return _eval(node, strict, allow_overlap)


def _eval(node: Node, strict: bool, allow_overlap: bool) -> PointSet:
    name = node.name
    if name == "P1":
        return c.seed_P(1)
    if name == "P2":
        return c.seed_P(2)
    if name == "B":
        return c.gen_B(node.args[0])
    if name == "Bp":
        return c.gen_B_parity(node.args[0], "even")
    if name == "Bpp":
        return c.gen_B_parity(node.args[0], "odd")
    if name == "units":
        return c.unit_pset(node.args[0])
    sub = [
        _eval(a, strict, allow_overlap) for a in node.args if isinstance(a, Node)
    ]
    if name == "prod":
        return c.product(sub)
    if name == "union":
        return c.union_sets(sub, allow_overlap=allow_overlap)
    if name == "three":
        return c.three_construction(*sub, check=strict)
    if name == "six":
        return c.six_construction(*sub, check=strict)
    if name == "five":
        return c.five_block(c.FiveBlockInputs(*sub), check=strict)
    if name == "mirror":
        return c.mirror_set(sub[0])
    if name == "double":
        return c.doubling(sub[0], check=strict)
    if name == "tD":
        return c.parity_cap(sub[0], node.args[1], check=strict)
    if name == "load":
        return read_capset(node.args[0])
    raise AssertionError(name)
