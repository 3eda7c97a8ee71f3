"""Expression trees for analytic functions on the unit disc.

Nodes are immutable, hashable dataclasses.  Evaluation accepts a complex
scalar or a numpy array of complex points, so a single tree walk covers a
whole sampling grid.  Differentiation is symbolic (tree rewriting); light
constant folding keeps derivative trees small.  Log and non-integer powers
use the principal branch with the cut along (-inf, 0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class BranchCutError(ArithmeticError):
    """A log or non-integer power was evaluated on its branch cut."""


# Printing precedence levels.
_P_ADD = 1
_P_MUL = 2
_P_POW = 3
_P_ATOM = 4


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def format_number(value) -> str:
    """Format a real or complex literal so the grammar can re-read it.

    Negative and genuinely complex values are parenthesised, which keeps the
    output valid in any factor position.
    """
    z = complex(value)
    if z.imag == 0.0:
        body = _fmt_real(z.real)
        return f"({body})" if z.real < 0 else body
    if z.real == 0.0:
        body = _fmt_real(z.imag) + "i"
        return f"({body})" if z.imag < 0 else body
    sign = "+" if z.imag > 0 else "-"
    return f"({_fmt_real(z.real)}{sign}{_fmt_real(abs(z.imag))}i)"


def _check_cut(values, what: str) -> None:
    vals = np.asarray(values)
    on_cut = (vals.real <= 0.0) & (vals.imag == 0.0)
    if np.any(on_cut):
        raise BranchCutError(
            f"{what} evaluated on its branch cut (argument on (-inf, 0])"
        )


class ExprNode:
    """Base class for expression-tree nodes."""

    def evaluate(self, z):
        raise NotImplementedError

    def derivative(self) -> "ExprNode":
        raise NotImplementedError

    def precedence(self) -> int:
        return _P_ATOM

    def _wrapped(self, parent_prec: int, strict: bool) -> str:
        text = str(self)
        p = self.precedence()
        if p < parent_prec or (strict and p == parent_prec):
            return f"({text})"
        return text


@dataclass(frozen=True)
class Var(ExprNode):
    """The coordinate z."""

    def evaluate(self, z):
        return z

    def derivative(self):
        return Const(1.0)

    def __str__(self):
        return "z"


@dataclass(frozen=True)
class Const(ExprNode):
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite constant {v!r}")
        object.__setattr__(self, "value", v)

    def evaluate(self, z):
        return self.value

    def derivative(self):
        return Const(0.0)

    def __str__(self):
        return format_number(self.value)


@dataclass(frozen=True)
class Add(ExprNode):
    left: ExprNode
    right: ExprNode

    def evaluate(self, z):
        return self.left.evaluate(z) + self.right.evaluate(z)

    def derivative(self):
        return _add(self.left.derivative(), self.right.derivative())

    def precedence(self):
        return _P_ADD

    def __str__(self):
        return f"{self.left._wrapped(_P_ADD, False)}+{self.right._wrapped(_P_ADD, True)}"


@dataclass(frozen=True)
class Sub(ExprNode):
    left: ExprNode
    right: ExprNode

    def evaluate(self, z):
        return self.left.evaluate(z) - self.right.evaluate(z)

    def derivative(self):
        return _sub(self.left.derivative(), self.right.derivative())

    def precedence(self):
        return _P_ADD

    def __str__(self):
        return f"{self.left._wrapped(_P_ADD, False)}-{self.right._wrapped(_P_ADD, True)}"


@dataclass(frozen=True)
class Mul(ExprNode):
    left: ExprNode
    right: ExprNode

    def evaluate(self, z):
        return self.left.evaluate(z) * self.right.evaluate(z)

    def derivative(self):
        return _add(
            _mul(self.left.derivative(), self.right),
            _mul(self.left, self.right.derivative()),
        )

    def precedence(self):
        return _P_MUL

    def __str__(self):
        return f"{self.left._wrapped(_P_MUL, False)}*{self.right._wrapped(_P_MUL, True)}"


@dataclass(frozen=True)
class Div(ExprNode):
    left: ExprNode
    right: ExprNode

    def evaluate(self, z):
        return self.left.evaluate(z) / self.right.evaluate(z)

    def derivative(self):
        num = _sub(
            _mul(self.left.derivative(), self.right),
            _mul(self.left, self.right.derivative()),
        )
        return _div(num, _pow(self.right, 2.0))

    def precedence(self):
        return _P_MUL

    def __str__(self):
        return f"{self.left._wrapped(_P_MUL, False)}/{self.right._wrapped(_P_MUL, True)}"


@dataclass(frozen=True)
class PowReal(ExprNode):
    """base raised to a fixed real exponent, principal branch.

    Integer exponents are single valued and skip the branch-cut check, so
    plain monomials work on the whole disc.
    """

    base: ExprNode
    exponent: float

    def __post_init__(self):
        e = float(self.exponent)
        if not math.isfinite(e):
            raise ValueError(f"non-finite exponent {e!r}")
        object.__setattr__(self, "exponent", e)

    def evaluate(self, z):
        b = self.base.evaluate(z)
        if float(self.exponent).is_integer():
            return b ** int(self.exponent)
        _check_cut(b, "power")
        return b ** self.exponent

    def derivative(self):
        e = self.exponent
        return _mul(_mul(Const(e), _pow(self.base, e - 1.0)), self.base.derivative())

    def precedence(self):
        return _P_POW

    def __str__(self):
        e = self.exponent
        etext = _fmt_real(e)
        if e < 0:
            etext = f"({etext})"
        return f"{self.base._wrapped(_P_ATOM, False)}^{etext}"


@dataclass(frozen=True)
class Log(ExprNode):
    """Principal-branch logarithm."""

    arg: ExprNode

    def evaluate(self, z):
        a = self.arg.evaluate(z)
        _check_cut(a, "log")
        return np.log(a)

    def derivative(self):
        return _div(self.arg.derivative(), self.arg)

    def __str__(self):
        return f"log({self.arg})"


@dataclass(frozen=True)
class Exp(ExprNode):
    arg: ExprNode

    def evaluate(self, z):
        return np.exp(self.arg.evaluate(z))

    def derivative(self):
        return _mul(self, self.arg.derivative())

    def __str__(self):
        return f"exp({self.arg})"


@dataclass(frozen=True)
class Compose(ExprNode):
    """outer applied after inner: z -> outer(inner(z))."""

    outer: ExprNode
    inner: ExprNode

    def evaluate(self, z):
        return self.outer.evaluate(self.inner.evaluate(z))

    def derivative(self):
        return _mul(_compose(self.outer.derivative(), self.inner),
                    self.inner.derivative())

    def __str__(self):
        return f"compose({self.outer},{self.inner})"


@dataclass(frozen=True)
class Named(ExprNode):
    """A named primitive with numeric arguments and an expanded body.

    Evaluation and differentiation delegate to the body; printing keeps the
    compact call form so text round trips stay readable.
    """

    name: str
    args: tuple
    body: ExprNode = field(compare=False)

    def evaluate(self, z):
        return self.body.evaluate(z)

    def derivative(self):
        return self.body.derivative()

    def __str__(self):
        inner = ",".join(format_number(a) for a in self.args)
        return f"{self.name}({inner})"


def _is_const(node, value=None) -> bool:
    if not isinstance(node, Const):
        return False
    return value is None or node.value == value


def _add(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _mul(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_const(a, 0) or _is_const(b, 0):
        return Const(0.0)
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def _div(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_const(a, 0):
        return Const(0.0)
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def _pow(base: ExprNode, exponent: float) -> ExprNode:
    if exponent == 1.0:
        return base
    if exponent == 0.0:
        return Const(1.0)
    if isinstance(base, Const):
        try:
            if float(exponent).is_integer():
                return Const(base.value ** int(exponent))
            if not (base.value.real <= 0 and base.value.imag == 0):
                return Const(base.value ** exponent)
        except ZeroDivisionError:
            pass
    return PowReal(base, exponent)


def _compose(outer: ExprNode, inner: ExprNode) -> ExprNode:
    if isinstance(outer, Const):
        return outer
    if isinstance(inner, Var):
        return outer
    return Compose(outer, inner)
