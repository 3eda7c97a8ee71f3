"""Parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' signed_number)?
    atom   := 'z' | number | '(' expr ')' | func '(' args ')'
    func   := log | exp | blaschke | dilation | monomial | lens | compose
            | testfn_f | testfn_g | testfn_h
    number := decimal (optional exponent part, optional 'i' suffix)

signed_number allows a leading '-', optionally parenthesised.  As a
convenience an expression (also inside parentheses) may open with a unary
minus; everything the printer emits stays within that extended grammar, so
parse(print(tree)) reproduces the tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import catalog
from .analytic import AnalyticFn
from .expr import (
    Add, Compose, Const, Div, Exp, ExprNode, Log, Mul, PowReal, Sub, Var,
)


class ParseError(ValueError):
    """Input text does not match the grammar."""

    def __init__(self, message: str, pos: int, expected: tuple = ()):
        self.pos = pos
        self.expected = tuple(expected)
        detail = f"{message} at position {pos}"
        if self.expected:
            detail += " (expected " + " or ".join(self.expected) + ")"
        super().__init__(detail)


class ArityError(ParseError):
    """A named primitive was called with the wrong number of arguments."""


_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?i?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<sym>[-+*/^(),])"
)

# name -> expected argument count
_ARITY = {
    "log": 1, "exp": 1, "compose": 2,
    "blaschke": 1, "dilation": 1, "monomial": 1, "lens": 1,
    "testfn_f": 2, "testfn_g": 1, "testfn_h": 2,
}


@dataclass(frozen=True)
class _Token:
    kind: str          # "number" | "name" | "sym" | "end"
    text: str
    pos: int
    value: complex = 0j


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup == "number":
            raw = m.group()
            if raw.endswith("i"):
                value = complex(0.0, float(raw[:-1]))
            else:
                value = complex(float(raw), 0.0)
            tokens.append(_Token("number", raw, i, value))
        elif m.lastgroup == "name":
            tokens.append(_Token("name", m.group(), i))
        else:
            tokens.append(_Token("sym", m.group(), i))
        i = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


def _constant_fold(node: ExprNode) -> Optional[complex]:
    """Value of a variable-free subtree, or None if it mentions z."""
    if isinstance(node, Var):
        return None
    if isinstance(node, Const):
        return node.value
    for attr in ("left", "right", "arg", "base", "outer", "inner", "body"):
        if hasattr(node, attr) and _constant_fold(getattr(node, attr)) is None:
            return None
    return complex(node.evaluate(0j))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0
        # Set when an atom was produced by a catalog constructor; lets the
        # top level hand back the original AnalyticFn (with its Taylor hook)
        # when the whole input is a single primitive call.
        self.last_catalog_fn: Optional[AnalyticFn] = None

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_sym(self, sym: str) -> _Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != sym:
            raise ParseError(f"found {tok.text!r}" if tok.text else "unexpected end of input",
                             tok.pos, expected=(repr(sym),))
        return self.advance()

    def at_sym(self, *syms: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text in syms

    # grammar rules -------------------------------------------------------

    def parse_expr(self) -> ExprNode:
        negate = False
        if self.at_sym("-"):
            self.advance()
            negate = True
        node = self.parse_term()
        if negate:
            if isinstance(node, Const):
                node = Const(-node.value)
            else:
                node = Sub(Const(0.0), node)
        while self.at_sym("+", "-"):
            op = self.advance().text
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self) -> ExprNode:
        node = self.parse_factor()
        while self.at_sym("*", "/"):
            op = self.advance().text
            rhs = self.parse_factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_factor(self) -> ExprNode:
        node = self.parse_atom()
        if self.at_sym("^"):
            self.advance()
            exponent = self.parse_signed_number()
            node = PowReal(node, exponent)
            self.last_catalog_fn = None
        return node

    def parse_signed_number(self) -> float:
        wrapped = False
        if self.at_sym("("):
            self.advance()
            wrapped = True
        sign = 1.0
        if self.at_sym("-"):
            self.advance()
            sign = -1.0
        tok = self.peek()
        if tok.kind != "number":
            raise ParseError("exponent must be a number", tok.pos, expected=("number",))
        self.advance()
        if tok.text.endswith("i"):
            raise ParseError("exponent must be real", tok.pos)
        if wrapped:
            self.expect_sym(")")
        return sign * tok.value.real

    def parse_atom(self) -> ExprNode:
        self.last_catalog_fn = None
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Const(tok.value)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_sym(")")
            self.last_catalog_fn = None
            return node
        if tok.kind == "name":
            self.advance()
            if tok.text == "z":
                return Var()
            if tok.text not in _ARITY:
                raise ParseError(
                    f"unknown function {tok.text!r}", tok.pos,
                    expected=("z",) + tuple(sorted(_ARITY)),
                )
            return self.parse_call(tok)
        raise ParseError(
            f"found {tok.text!r}" if tok.text else "unexpected end of input",
            tok.pos, expected=("z", "number", "'('", "function"),
        )

    def parse_call(self, name_tok: _Token) -> ExprNode:
        name = name_tok.text
        self.expect_sym("(")
        args = [self.parse_expr()]
        while self.at_sym(","):
            self.advance()
            args.append(self.parse_expr())
        self.expect_sym(")")
        if len(args) != _ARITY[name]:
            raise ArityError(
                f"{name} takes {_ARITY[name]} argument(s), got {len(args)}",
                name_tok.pos,
            )
        self.last_catalog_fn = None
        if name == "log":
            return Log(args[0])
        if name == "exp":
            return Exp(args[0])
        if name == "compose":
            return Compose(args[0], args[1])
        values = []
        for arg in args:
            val = _constant_fold(arg)
            if val is None:
                raise ParseError(
                    f"arguments of {name} must be constants", name_tok.pos
                )
            values.append(val)
        return self.build_primitive(name, name_tok, values)

    def build_primitive(self, name: str, tok: _Token, values: list) -> ExprNode:
        def real_arg(v: complex, what: str) -> float:
            if v.imag != 0.0:
                raise ParseError(f"{what} of {name} must be real", tok.pos)
            return v.real

        if name in ("blaschke", "dilation", "monomial", "lens"):
            arg = values[0]
            if name == "dilation":
                fn = catalog.make_selfmap("dilation", real_arg(arg, "factor")).fn
            elif name == "monomial":
                k = real_arg(arg, "degree")
                if k != int(k) or int(k) < 1:
                    raise ParseError("monomial degree must be a positive integer", tok.pos)
                fn = catalog.make_selfmap("monomial", int(k)).fn
            elif name == "lens":
                fn = catalog.make_selfmap("lens", real_arg(arg, "exponent")).fn
            else:
                fn = catalog.make_selfmap("blaschke", arg).fn
        elif name == "testfn_f":
            fn = catalog.test_fn_f(real_arg(values[0], "alpha"), values[1])
        elif name == "testfn_h":
            fn = catalog.test_fn_h(real_arg(values[0], "alpha"), values[1])
        else:
            fn = catalog.test_fn_g(values[0])
        self.last_catalog_fn = fn
        return fn.expr


def parse_expr(text: str) -> AnalyticFn:
    """Parse an expression in the grammar above into an AnalyticFn."""
    parser = _Parser(text)
    node = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.pos)
    fn = parser.last_catalog_fn
    if fn is not None and fn.expr is node:
        return fn
    return AnalyticFn(node)


def parse_constant(text: str) -> complex:
    """Parse an expression that must not mention z and return its value.

    Used for scalar command-line arguments such as test-function centres
    and polynomial coefficients, so they share one syntax ("0.5", "-0.3i",
    "0.25+0.25i") with the function grammar.
    """
    fn = parse_expr(text)
    value = _constant_fold(fn.expr)
    if value is None:
        raise ParseError(f"expected a constant, got an expression in z: {text!r}", 0)
    return value
