"""Holomorphic self-maps of the disc, multiplier weights, and test functions.

Self-maps are certified on a verification grid at construction time; a
Weight stores a witness point where it is provably nonzero.  The test
function families are the extremal families used by the boundedness and
compactness analysis:

  family F (parameters alpha > 0, |w| < 1):
      f(z) = (1-|w|^2)^2 / (1 - conj(w) z)^(alpha+1)
           - (1-|w|^2)   / (1 - conj(w) z)^alpha
      with f(w) = 0 and f'(w) = conj(w) / (1-|w|^2)^alpha.

  family H (alpha > 1):
      h(z) = (alpha+1)(1-|w|^2) / (1 - conj(w) z)^alpha
           - alpha (1-|w|^2)^2 / (1 - conj(w) z)^(alpha+1)
      with h(w) = (1-|w|^2)^(1-alpha) and h'(w) = 0.

  family G (w != 0), used in the log-weight case.  With
  t = log(1/(1-|w|^2)) and L(z) = log(1/(1 - conj(w) z)), the corrected
  normalisation is
      g(z) = 3 L(z)^2 / t - 2 L(z)^3 / t^2,
  which satisfies g(w) = t and g'(w) = 0.  The historical printed form
  (3 L^2 - 2 L^3) / t is kept behind corrected=False; it fails both
  isolation identities and exists only for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analytic import AnalyticFn, gen_binom
from .expr import (
    Add, Const, Div, Exp, ExprNode, Log, Named, Sub, Var,
    _div, _mul, _pow, _sub,
)
from .grids import DiscGrid, default_grid


class ValidationError(ValueError):
    """A candidate self-map or weight fails its defining constraints."""


class DegenerateParameterError(ValueError):
    """A test-function parameter sits in a degenerate regime."""


_INTERIOR_MARGIN = 1e-3
_WITNESS_CANDIDATES = (
    0j, 0.5 + 0j, -0.5 + 0j, 0.5j, -0.5j, 0.25 + 0.25j,
    0.75 + 0j, -0.75 + 0j, 0.3 - 0.4j, 0.9 + 0j,
)


def _verification_grid() -> DiscGrid:
    return default_grid(10)


@dataclass(frozen=True)
class SelfMap:
    """A holomorphic map of the disc into itself, grid certified."""

    fn: AnalyticFn
    sup_modulus_estimate: float
    interior_flag: bool

    def __call__(self, z):
        return self.fn.eval(z)

    def __str__(self):
        return str(self.fn)


@dataclass(frozen=True)
class Weight:
    """A multiplier weight, together with a point where it is nonzero."""

    fn: AnalyticFn
    nonzero_witness: complex

    def __call__(self, z):
        return self.fn.eval(z)

    def __str__(self):
        return str(self.fn)


def selfmap_from_fn(fn: AnalyticFn, grid: Optional[DiscGrid] = None) -> SelfMap:
    """Certify an arbitrary analytic function as a self-map of the disc.

    Raises ValidationError if the modulus reaches 1 anywhere on the
    verification grid.
    """
    grid = grid or _verification_grid()
    moduli = np.abs(fn.eval_many(grid.all_points))
    worst = int(np.argmax(moduli))
    sup = float(moduli[worst])
    if sup >= 1.0:
        raise ValidationError(
            f"|phi| = {sup:.6f} >= 1 at z = {grid.all_points[worst]:.6f}; "
            "not a self-map of the disc"
        )
    return SelfMap(fn=fn, sup_modulus_estimate=sup,
                   interior_flag=sup <= 1.0 - _INTERIOR_MARGIN)


def weight_from_fn(fn: AnalyticFn, witness: Optional[complex] = None) -> Weight:
    """Wrap a weight function, recording a point where |psi| > 1e-12.

    When no witness is supplied, a fixed candidate list is scanned; the
    witness is stored and never searched for again.
    """
    if witness is not None:
        w = complex(witness)
        if abs(fn.eval(w)) <= 1e-12:
            raise ValidationError(f"|psi({w})| <= 1e-12; witness rejected")
        return Weight(fn=fn, nonzero_witness=w)
    for cand in _WITNESS_CANDIDATES:
        if abs(fn.eval(cand)) > 1e-12:
            return Weight(fn=fn, nonzero_witness=cand)
    raise ValidationError(
        "weight vanishes at every probe point; supply a nonzero witness"
    )


def _blaschke_body(a: complex) -> ExprNode:
    return Div(Sub(Const(a), Var()), Sub(Const(1.0), _mul(Const(a.conjugate()), Var())))


def make_selfmap(kind: str, *params, grid: Optional[DiscGrid] = None) -> SelfMap:
    """Build one of the named self-maps.

    Kinds: identity, dilation(r in [0,1)), monomial(k >= 1),
    blaschke(a, |a| < 1), blaschke_product(sequence of a_i), lens(s in (0,1)).
    """
    if kind == "identity":
        if params:
            raise ValidationError("identity takes no parameters")
        expr: ExprNode = Var()
    elif kind == "dilation":
        (r,) = params
        r = float(r)
        if not 0.0 <= r < 1.0:
            raise ValidationError(f"dilation factor must lie in [0, 1), got {r}")
        expr = Named("dilation", (r,), _mul(Const(r), Var()))
    elif kind == "monomial":
        (k,) = params
        if k != int(k) or int(k) < 1:
            raise ValidationError(f"monomial degree must be a positive integer, got {k}")
        k = int(k)
        expr = Named("monomial", (k,), _pow(Var(), float(k)))
    elif kind == "blaschke":
        (a,) = params
        a = complex(a)
        if abs(a) >= 1.0:
            raise ValidationError(f"Blaschke parameter needs |a| < 1, got |a| = {abs(a)}")
        expr = Named("blaschke", (a,), _blaschke_body(a))
    elif kind == "blaschke_product":
        (zeros,) = params
        zeros = [complex(a) for a in zeros]
        if not zeros:
            raise ValidationError("a Blaschke product needs at least one factor")
        factors = []
        for a in zeros:
            if abs(a) >= 1.0:
                raise ValidationError(f"Blaschke parameter needs |a| < 1, got |a| = {abs(a)}")
            factors.append(Named("blaschke", (a,), _blaschke_body(a)))
        expr = factors[0]
        for fac in factors[1:]:
            expr = _mul(expr, fac)
    elif kind == "lens":
        (s,) = params
        s = float(s)
        if not 0.0 < s < 1.0:
            raise ValidationError(f"lens exponent must lie in (0, 1), got {s}")
        plus = _pow(Add(Const(1.0), Var()), s)
        minus = _pow(Sub(Const(1.0), Var()), s)
        body = _div(Sub(plus, minus), Add(plus, minus))
        expr = Named("lens", (s,), body)
    else:
        raise ValidationError(f"unknown self-map kind {kind!r}")
    return selfmap_from_fn(AnalyticFn(expr), grid=grid)


def binomial_kernel(w: complex, alpha: float) -> AnalyticFn:
    """The kernel (1 - conj(w) z)^(-alpha) with exact Taylor coefficients."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise ValidationError(f"kernel parameter needs |w| < 1, got |w| = {abs(w)}")
    if alpha <= 0:
        raise ValidationError(f"kernel exponent must be positive, got {alpha}")
    wbar = w.conjugate()
    expr = _pow(Sub(Const(1.0), _mul(Const(wbar), Var())), -alpha)

    def series(n: int):
        return [gen_binom(alpha, j) * wbar ** j for j in range(n + 1)]

    return AnalyticFn(expr, series=series)


def _check_testfn_params(alpha: Optional[float], w: complex) -> complex:
    w = complex(w)
    if abs(w) >= 1.0:
        raise ValidationError(f"test-function centre needs |w| < 1, got |w| = {abs(w)}")
    if alpha is not None and alpha <= 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    return w


def test_fn_f(alpha: float, w: complex) -> AnalyticFn:
    """Family F member centred at w (vanishes at w, slope pinned there)."""
    w = _check_testfn_params(alpha, w)
    u = 1.0 - abs(w) ** 2
    wbar = w.conjugate()
    k_hi = binomial_kernel(w, alpha + 1.0)
    k_lo = binomial_kernel(w, alpha)
    body = _sub(_mul(Const(u * u), k_hi.expr), _mul(Const(u), k_lo.expr))

    def series(n: int):
        return [
            u * u * gen_binom(alpha + 1.0, j) * wbar ** j
            - u * gen_binom(alpha, j) * wbar ** j
            for j in range(n + 1)
        ]

    return AnalyticFn(Named("testfn_f", (alpha, w), body), series=series)


def test_fn_h(alpha: float, w: complex) -> AnalyticFn:
    """Family H member centred at w (critical point at w, value pinned)."""
    w = _check_testfn_params(alpha, w)
    if alpha <= 1.0:
        raise ValidationError(f"family H requires alpha > 1, got {alpha}")
    u = 1.0 - abs(w) ** 2
    wbar = w.conjugate()
    k_lo = binomial_kernel(w, alpha)
    k_hi = binomial_kernel(w, alpha + 1.0)
    body = _sub(
        _mul(Const((alpha + 1.0) * u), k_lo.expr),
        _mul(Const(alpha * u * u), k_hi.expr),
    )

    def series(n: int):
        return [
            (alpha + 1.0) * u * gen_binom(alpha, j) * wbar ** j
            - alpha * u * u * gen_binom(alpha + 1.0, j) * wbar ** j
            for j in range(n + 1)
        ]

    return AnalyticFn(Named("testfn_h", (alpha, w), body), series=series)


def test_fn_g(w: complex, corrected: bool = True) -> AnalyticFn:
    """Family G member centred at w, for the logarithmic weight case.

    The corrected normalisation (default) satisfies g(w) = t and g'(w) = 0
    with t = log(1/(1-|w|^2)).  corrected=False returns the historical
    printed form (3L^2 - 2L^3)/t, which satisfies neither identity; it
    prints in expanded form since only the corrected family has a name in
    the expression grammar.
    """
    w = _check_testfn_params(None, w)
    u = 1.0 - abs(w) ** 2
    t = -math.log(u)
    if t < 1e-8:
        raise DegenerateParameterError(
            f"centre w = {w} gives t = {t:.3e}; the family degenerates near w = 0"
        )
    wbar = w.conjugate()
    big_l = Log(Div(Const(1.0), Sub(Const(1.0), _mul(Const(wbar), Var()))))
    if corrected:
        body = _sub(
            _mul(Const(3.0 / t), _pow(big_l, 2.0)),
            _mul(Const(2.0 / (t * t)), _pow(big_l, 3.0)),
        )
        return AnalyticFn(Named("testfn_g", (w,), body))
    printed = _mul(
        Const(1.0 / t),
        _sub(_mul(Const(3.0), _pow(big_l, 2.0)), _mul(Const(2.0), _pow(big_l, 3.0))),
    )
    return AnalyticFn(printed)


@dataclass(frozen=True)
class TestFnSpec:
    """Plumbing record naming one member of a test-function family."""

    family: str
    w: complex
    alpha: Optional[float] = None
    corrected: bool = True

    def build(self) -> AnalyticFn:
        if self.family == "f":
            if self.alpha is None:
                raise ValidationError("family F needs alpha")
            return test_fn_f(self.alpha, self.w)
        if self.family == "h":
            if self.alpha is None:
                raise ValidationError("family H needs alpha")
            return test_fn_h(self.alpha, self.w)
        if self.family == "g":
            return test_fn_g(self.w, corrected=self.corrected)
        raise ValidationError(f"unknown family {self.family!r}")


def constant_weight(c: complex = 1.0) -> Weight:
    return weight_from_fn(AnalyticFn(Const(c)))


def coordinate_weight() -> Weight:
    return weight_from_fn(AnalyticFn(Var()))


def standard_pairs() -> list:
    """Curated (label, weight, self-map) pairs exercised by the check suites."""
    kernel_weight = weight_from_fn(binomial_kernel(0.5, 1.0))
    return [
        ("psi=1, phi=id", constant_weight(), make_selfmap("identity")),
        ("psi=1, phi=blaschke(0.5)", constant_weight(), make_selfmap("blaschke", 0.5)),
        ("psi=z, phi=z^2", coordinate_weight(), make_selfmap("monomial", 2)),
        ("psi=z, phi=id", coordinate_weight(), make_selfmap("identity")),
        ("psi=(1-0.5z)^-1, phi=dilation(0.5)", kernel_weight, make_selfmap("dilation", 0.5)),
        ("psi=1, phi=lens(0.5)", constant_weight(), make_selfmap("lens", 0.5)),
        ("psi=z, phi=blaschke_product", coordinate_weight(),
         make_selfmap("blaschke_product", [0.5, -0.3])),
    ]


def catalog_functions() -> list:
    """Labelled analytic functions covering every constructor, for hygiene sweeps."""
    entries = [
        ("identity", make_selfmap("identity").fn),
        ("dilation(0.5)", make_selfmap("dilation", 0.5).fn),
        ("monomial(2)", make_selfmap("monomial", 2).fn),
        ("monomial(3)", make_selfmap("monomial", 3).fn),
        ("blaschke(0.5)", make_selfmap("blaschke", 0.5).fn),
        ("blaschke(-0.3+0.4i)", make_selfmap("blaschke", -0.3 + 0.4j).fn),
        ("blaschke_product([0.5,-0.3])",
         make_selfmap("blaschke_product", [0.5, -0.3]).fn),
        ("lens(0.5)", make_selfmap("lens", 0.5).fn),
        ("kernel(0.9, 0.5)", binomial_kernel(0.9, 0.5)),
        ("kernel(0.5, 2)", binomial_kernel(0.5, 2.0)),
        ("testfn_f(0.5, 0.9)", test_fn_f(0.5, 0.9)),
        ("testfn_f(2, 0.6i)", test_fn_f(2.0, 0.6j)),
        ("testfn_h(2, 0.9)", test_fn_h(2.0, 0.9)),
        ("testfn_h(1.5, -0.5)", test_fn_h(1.5, -0.5)),
        ("testfn_g(0.99)", test_fn_g(0.99)),
        ("testfn_g(0.5i)", test_fn_g(0.5j)),
        ("log kernel", AnalyticFn(
            Log(Div(Const(1.0), Sub(Const(1.0), _mul(Const(0.9), Var())))))),
        ("exp", AnalyticFn(Exp(Var()))),
    ]
    return entries
