"""Analytic functions on the unit disc: evaluation, derivatives, Taylor data.

An AnalyticFn wraps an immutable expression tree.  The symbolic derivative is
built lazily and cached; because trees are immutable the worst a concurrent
race can do is build the same tree twice, so no locking is needed.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .expr import ExprNode

_MAX_LOG = math.log(sys.float_info.max)


class DomainError(ValueError):
    """An evaluation point lies outside the open unit disc."""


class PrecisionWarning(UserWarning):
    """Taylor coefficients extracted at two radii disagree."""


class AnalyticFn:
    """An analytic function of one complex variable on |z| < 1.

    Args:
        expr: expression tree for the function.
        series: optional closed-form Taylor provider; called with a degree n
            it must return coefficients c_0..c_n.  Constructors that know the
            exact expansion attach one so `taylor` can skip quadrature.
    """

    __slots__ = ("_expr", "_series", "_derivative")

    def __init__(self, expr: ExprNode, series: Optional[Callable] = None):
        self._expr = expr
        self._series = series
        self._derivative = None

    @property
    def expr(self) -> ExprNode:
        return self._expr

    @property
    def series(self) -> Optional[Callable]:
        return self._series

    def eval(self, z: complex) -> complex:
        z = complex(z)
        if abs(z) >= 1.0:
            raise DomainError(f"point {z!r} is not in the open unit disc")
        return complex(self._expr.evaluate(z))

    __call__ = eval

    def eval_many(self, zs) -> np.ndarray:
        """Evaluate on an array of points in one tree walk."""
        pts = np.asarray(zs, dtype=complex)
        if np.any(np.abs(pts) >= 1.0):
            raise DomainError("some evaluation points are not in the open unit disc")
        vals = self._expr.evaluate(pts)
        return np.broadcast_to(np.asarray(vals, dtype=complex), pts.shape).copy()

    def deriv(self) -> "AnalyticFn":
        """The exact symbolic derivative, cached after the first call."""
        d = self._derivative
        if d is None:
            d = AnalyticFn(self._expr.derivative())
            self._derivative = d
        return d

    def __str__(self):
        return str(self._expr)

    def __repr__(self):
        return f"AnalyticFn({self._expr!s})"


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor expansion c_0 + c_1 z + ... + c_N z^N."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if len(cs) == 0:
            raise ValueError("a power series needs at least the constant term")
        for c in cs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("non-finite Taylor coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> complex:
        return self.coeffs[j]

    def __len__(self) -> int:
        return len(self.coeffs)


def gen_binom(alpha: float, j: int) -> float:
    """Coefficient of w^j in (1 - w)^(-alpha): Gamma(j+alpha) / (Gamma(alpha) j!).

    Computed through log-gamma differences so large orders stay stable.
    Raises OverflowError when the result exceeds the double range.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if j < 0:
        raise ValueError(f"order must be nonnegative, got {j}")
    log_val = math.lgamma(j + alpha) - math.lgamma(alpha) - math.lgamma(j + 1)
    if log_val > _MAX_LOG:
        raise OverflowError(
            f"gen_binom({alpha}, {j}) exceeds the representable range"
        )
    return math.exp(log_val)


def _circle_coefficients(f: AnalyticFn, n: int, r: float, m: int) -> np.ndarray:
    k = np.arange(m)
    pts = r * np.exp(2j * np.pi * k / m)
    vals = f.eval_many(pts)
    fhat = np.fft.fft(vals)[: n + 1]
    return fhat / (m * r ** np.arange(n + 1))


def taylor(f: AnalyticFn, n: int, r: float = 0.7, m: Optional[int] = None) -> PowerSeries:
    """Taylor coefficients c_0..c_n of f at the origin.

    Functions carrying a closed-form series provider use it directly.
    Otherwise coefficients come from trapezoid quadrature on the circle |z|=r
    with m nodes, cross-checked at a second radius; a PrecisionWarning is
    issued when the two radii disagree beyond 1e-8 relative.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"quadrature radius must lie in (0, 1), got {r}")
    if m is None:
        m = max(256, 8 * (n + 1))
    if m < 4 * (n + 1):
        raise ValueError(f"need at least {4 * (n + 1)} nodes for degree {n}, got {m}")

    if f.series is not None:
        return PowerSeries(tuple(complex(c) for c in f.series(n)))

    coeffs = _circle_coefficients(f, n, r, m)
    r2 = min(1.1 * r, (1.0 + r) / 2.0)
    check = _circle_coefficients(f, n, r2, m)
    scale = 1.0 + np.abs(coeffs)
    worst = float(np.max(np.abs(coeffs - check) / scale))
    if worst > 1e-8:
        warnings.warn(
            f"Taylor coefficients at radii {r} and {r2} disagree "
            f"(worst relative gap {worst:.3e})",
            PrecisionWarning,
            stacklevel=2,
        )
    return PowerSeries(tuple(coeffs))
