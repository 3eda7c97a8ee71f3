"""Duality pairing against polynomials and weak-null certification.

The pairing of an analytic f with a polynomial p = sum a_j z^j under the
weight (1-|z|^2)^(alpha-1), normalised so the angular average carries the
factor 1/(2 pi), reduces to the coefficient sum

    <f, p> = sum_j  fhat(j) * conj(a_j) * B(j+1, alpha) / 2,

where B is the Euler beta function: the radial moments are

    beta_integral(j, alpha) = int_0^1 s^(2j+1) (1-s^2)^(alpha-1) ds
                            = B(j+1, alpha) / 2.

Because the probe is a polynomial the sum is exact: there is no truncation
remainder.  An independent route to the same number, used by the test
suite, is two-dimensional quadrature of f(r z) conj(p(r z)) (1-|z|^2)^(alpha-1)
at a shared radius r (trapezoid in the angle, weighted Gauss quadrature in
the radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .analytic import AnalyticFn, taylor
from .catalog import test_fn_f


@dataclass(frozen=True)
class Polynomial:
    """A polynomial probe sum a_j z^j given by its coefficient list."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(complex(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a polynomial needs at least one coefficient")
        for c in cs:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("non-finite polynomial coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, z):
        result = np.zeros_like(np.asarray(z, dtype=complex))
        for c in reversed(self.coeffs):
            result = result * z + c
        return result


@dataclass(frozen=True)
class PairingResult:
    value: complex
    alpha: float
    degree_used: int
    remainder: float

    def to_dict(self):
        return {
            "value": [self.value.real, self.value.imag],
            "alpha": self.alpha,
            "degree_used": self.degree_used,
            "remainder": self.remainder,
        }


def beta_integral(j: int, alpha: float) -> float:
    """Radial moment int_0^1 s^(2j+1) (1-s^2)^(alpha-1) ds = B(j+1, alpha)/2."""
    if j < 0:
        raise ValueError(f"order must be nonnegative, got {j}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return 0.5 * math.exp(
        math.lgamma(j + 1) + math.lgamma(alpha) - math.lgamma(j + 1 + alpha)
    )


def pair_poly_at_radius(f: AnalyticFn, p: Polynomial, alpha: float,
                        r: float = 1.0, n_trunc: Optional[int] = None) -> PairingResult:
    """Coefficient-route pairing of f against p at dilation radius r.

    r = 1 is the pairing itself; r < 1 matches what direct quadrature of
    f(r z) conj(p(r z)) computes, each term picking up a factor r^(2j).
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {r}")
    deg = p.degree
    if n_trunc is None:
        n_trunc = deg
    if n_trunc < deg:
        raise ValueError(f"truncation degree {n_trunc} is below deg p = {deg}")
    series = taylor(f, n_trunc)
    value = 0j
    for j in range(deg + 1):
        value += (
            series[j] * p.coeffs[j].conjugate()
            * r ** (2 * j) * beta_integral(j, alpha)
        )
    return PairingResult(value=complex(value), alpha=alpha,
                         degree_used=deg, remainder=0.0)


def pair_poly(f: AnalyticFn, p: Polynomial, alpha: float,
              n_trunc: Optional[int] = None) -> PairingResult:
    """Pairing <f, p> under the (1-|z|^2)^(alpha-1) weight; exact in degree."""
    return pair_poly_at_radius(f, p, alpha, r=1.0, n_trunc=n_trunc)


def pair_quadrature(f: AnalyticFn, p: Polynomial, alpha: float,
                    r: float = 1.0, n_theta: int = 256) -> complex:
    """Independent quadrature route to the pairing at dilation radius r.

    Averages over n_theta angles (trapezoid, exact for trigonometric
    polynomials below that order) and integrates the radial factor with the
    endpoint weight (1-s)^(alpha-1) handled by weighted Gauss quadrature.

    The radial rule samples the smooth factor at s = 1, i.e. on the circle
    |z| = r itself, so at r = 1 the integrand is evaluated through the
    expression tree directly (bypassing the open-disc guard); callers must
    pass an f whose boundary values exist, which holds for every catalog
    function with its singularities outside the closed disc.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"radius must lie in (0, 1], got {r}")
    angles = np.exp(2j * np.pi * np.arange(n_theta) / n_theta)

    def angular_mean(s: float) -> complex:
        pts = r * s * angles
        vals = np.asarray(f.expr.evaluate(pts)) * np.conj(p.eval(pts))
        return complex(np.mean(vals))

    def smooth(s: float, part: str) -> float:
        g = angular_mean(s) * (1.0 + s) ** (alpha - 1.0) * s
        return g.real if part == "re" else g.imag

    re_val, _ = integrate.quad(smooth, 0.0, 1.0, args=("re",),
                               weight="alg", wvar=(0.0, alpha - 1.0))
    im_val, _ = integrate.quad(smooth, 0.0, 1.0, args=("im",),
                               weight="alg", wvar=(0.0, alpha - 1.0))
    return complex(re_val, im_val)


@dataclass(frozen=True)
class WeakNullRow:
    n: int
    w: float
    max_abs_pairing: float
    max_coeff: float

    def to_dict(self):
        return {
            "n": self.n, "w": self.w,
            "max_abs_pairing": self.max_abs_pairing,
            "max_coeff": self.max_coeff,
        }


@dataclass(frozen=True)
class WeakNullReport:
    """Evidence that the family F tends to zero against polynomial probes."""

    alpha: float
    tol: float
    rows: tuple
    certified: bool
    conclusive: bool

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "tol": self.tol,
            "rows": [row.to_dict() for row in self.rows],
            "certified": self.certified,
            "conclusive": self.conclusive,
        }


def weak_null_certificate(alpha: float, probes: Sequence[Polynomial],
                          n_start: int = 1, n_stop: int = 10,
                          tol: float = 1e-2, coeff_degree: int = 5) -> WeakNullReport:
    """Certify weak-null behaviour of the family F along w_n = 1 - 2^-n.

    For each n the report records the largest |<f_n, p>| over the probes and
    the largest Taylor coefficient up to coeff_degree.  Certification
    requires the final pairing row below tol and the last three rows
    non-increasing within 10% jitter; a jitter violation makes the report
    inconclusive (and uncertified).
    """
    if n_stop < n_start:
        raise ValueError("empty family range")
    if not probes:
        raise ValueError("need at least one polynomial probe")
    rows = []
    for n in range(n_start, n_stop + 1):
        w = 1.0 - 2.0 ** (-n)
        f = test_fn_f(alpha, complex(w))
        max_pairing = max(
            abs(pair_poly(f, probe, alpha).value) for probe in probes
        )
        series = taylor(f, coeff_degree)
        max_coeff = max(abs(series[j]) for j in range(coeff_degree + 1))
        rows.append(WeakNullRow(n=n, w=w, max_abs_pairing=max_pairing,
                                max_coeff=max_coeff))

    conclusive = True
    tail = [row.max_abs_pairing for row in rows[-3:]]
    for earlier, later in zip(tail, tail[1:]):
        if later > 1.1 * earlier + 1e-15:
            conclusive = False
    certified = conclusive and rows[-1].max_abs_pairing < tol
    return WeakNullReport(alpha=alpha, tol=tol, rows=tuple(rows),
                          certified=certified, conclusive=conclusive)
