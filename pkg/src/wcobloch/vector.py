"""Vector-valued Bloch machinery: tuples of analytic components, linear
functionals on C^d, weak norms, and the scalar-factorization identities for
weighted composition operators.

A map F: disc -> C^d is held componentwise.  Its Bloch-type norm uses the
Euclidean norm on values and derivatives:

    ||F|| = |F(0)|_2 + sup ||F'(z)||_2 (1-|z|^2)^alpha.

The weak norm takes the supremum of the scalar Bloch norms of x* o F over
a sample of unit functionals x*.  Including, for each F, the exact
maximizers of |x*(F(0))| and of ||F'||_2 at the grid argmax guarantees the
two-sided comparison  weak <= vec <= 2 weak  without any searching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analytic import AnalyticFn, DomainError
from .bloch import apply_wco, bloch_norm
from .catalog import SelfMap, Weight
from .expr import Const, _add, _mul
from .grids import DiscGrid, default_grid


@dataclass(frozen=True)
class VecFn:
    """An analytic map into C^d stored as a tuple of scalar components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a vector map needs at least one component")
        for comp in comps:
            if not isinstance(comp, AnalyticFn):
                raise TypeError("components must be AnalyticFn instances")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return len(self.components)

    def eval(self, z) -> np.ndarray:
        return np.array([comp.eval(z) for comp in self.components])

    def eval_many(self, zs) -> np.ndarray:
        """Evaluate at an array of points; returns shape (d, n)."""
        zs = np.asarray(zs, dtype=complex)
        return np.stack([comp.eval_many(zs) for comp in self.components])

    def deriv(self) -> "VecFn":
        return VecFn(tuple(comp.deriv() for comp in self.components))


@dataclass(frozen=True)
class Functional:
    """A norm-one linear functional x*(v) = sum_i coeffs[i] * v[i] on C^d.

    Coefficients are normalised to unit Euclidean length at construction.
    The functional achieving x*(v) = |v|_2 for a given nonzero v is the one
    with coeffs = conj(v)/|v|_2.
    """

    coeffs: tuple

    def __post_init__(self):
        cs = np.array([complex(c) for c in self.coeffs])
        if cs.size == 0:
            raise ValueError("a functional needs at least one coefficient")
        norm = float(np.linalg.norm(cs))
        if norm < 1e-300:
            raise ValueError("cannot normalise the zero functional")
        cs = cs / norm
        if abs(float(np.linalg.norm(cs)) - 1.0) > 1e-12:
            raise ValueError("normalisation failed")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in cs))

    @property
    def d(self) -> int:
        return len(self.coeffs)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Apply to vectors; values has shape (d,) or (d, n)."""
        cs = np.array(self.coeffs)
        return np.tensordot(cs, np.asarray(values, dtype=complex), axes=(0, 0))

    def compose(self, F: VecFn) -> AnalyticFn:
        """The scalar function x* o F = sum_i coeffs[i] * F_i."""
        if F.d != self.d:
            raise ValueError(
                f"dimension mismatch: functional on C^{self.d}, map into C^{F.d}"
            )
        node = Const(0.0)
        for c, comp in zip(self.coeffs, F.components):
            node = _add(node, _mul(Const(c), comp.expr))
        return AnalyticFn(node)


def basis_functional(d: int, i: int) -> Functional:
    coeffs = [0.0] * d
    coeffs[i] = 1.0
    return Functional(tuple(coeffs))


def _maximizing_functional(v: np.ndarray) -> Optional[Functional]:
    norm = float(np.linalg.norm(v))
    if norm < 1e-300:
        return None
    return Functional(tuple(np.conj(v) / norm))


def vec_bloch_norm(F: VecFn, alpha: float, grid: Optional[DiscGrid] = None) -> float:
    """|F(0)|_2 + sup ||F'(z)||_2 (1-|z|^2)^alpha over the grid."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if grid is None:
        grid = default_grid()
    pts = grid.all_points
    dv = F.deriv().eval_many(pts)
    weights = (1.0 - np.abs(pts) ** 2) ** alpha
    sup = float(np.max(np.linalg.norm(dv, axis=0) * weights))
    return float(np.linalg.norm(F.eval(0.0))) + sup


def weak_norm(F: VecFn, alpha: float, grid: Optional[DiscGrid] = None,
              directions: int = None, seed: int = 42) -> float:
    """sup over sampled unit functionals x* of the Bloch norm of x* o F.

    The sample always contains the basis functionals e_i, their rotations
    i*e_i, `directions` seeded random unit vectors (default 4d, at least 2d),
    and the exact maximizers at F(0) and at the grid argmax of the weighted
    derivative, which pins the sandwich weak <= vec <= 2 weak.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if grid is None:
        grid = default_grid()
    d = F.d
    if directions is None:
        directions = 4 * d
    if directions < 2 * d:
        raise ValueError(
            f"need at least {2 * d} sampled directions for d={d}, got {directions}"
        )
    functionals = []
    for i in range(d):
        functionals.append(basis_functional(d, i))
        rotated = [0.0] * d
        rotated[i] = 1j
        functionals.append(Functional(tuple(rotated)))
    rng = np.random.default_rng(seed)
    for _ in range(directions):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        xf = _maximizing_functional(np.conj(v))
        if xf is not None:
            functionals.append(xf)

    pts = grid.all_points
    dv = F.deriv().eval_many(pts)
    weights = (1.0 - np.abs(pts) ** 2) ** alpha
    idx = int(np.argmax(np.linalg.norm(dv, axis=0) * weights))
    for v in (F.eval(0.0), dv[:, idx]):
        xf = _maximizing_functional(v)
        if xf is not None:
            functionals.append(xf)

    return max(bloch_norm(xf.compose(F), alpha, grid) for xf in functionals)


def apply_wco_vec(psi: Weight, phi: SelfMap, F: VecFn) -> VecFn:
    """Componentwise weighted composition: (W F)_i = psi * (F_i o phi)."""
    return VecFn(tuple(apply_wco(psi, phi, comp) for comp in F.components))


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    max_abs_deviation: float
    samples: int
    passed: bool

    def to_dict(self):
        return {
            "identity": self.identity,
            "max_abs_deviation": self.max_abs_deviation,
            "samples": self.samples,
            "pass": self.passed,
        }


def _rel_deviation(got: np.ndarray, want: np.ndarray) -> float:
    got = np.asarray(got)
    want = np.asarray(want)
    scale = 1.0 + np.abs(want)
    return float(np.max(np.abs(got - want) / scale))


def check_prop1_factorizations(psi: Weight, phi: SelfMap, f: AnalyticFn,
                               x: Sequence[complex], xstar: Functional,
                               sample: np.ndarray,
                               tol: float = 1e-10) -> list:
    """Verify the two scalar/vector factorization identities pointwise.

    With j1 f = f (x) x (tensor with a fixed vector x), j2 F = x* o F,
    j3 v = the constant map v, and j4 F = F(z0)/psi(z0) at the weight's
    stored nonzero witness z0:

      * the scalar operator factors as  W = j2 o Wvec o j1  whenever
        x*(x) = 1, up to tol relative deviation over the sample;
      * the identity on C^d factors as  I = j4 o Wvec o j3  when phi is
        evaluated nowhere (the constant map is composition-invariant),
        checked on each basis vector.
    """
    sample = np.asarray(sample, dtype=complex)
    if np.any(np.abs(sample) >= 1.0):
        raise DomainError("factorization sample must stay inside the disc")
    d = xstar.d
    x = np.array([complex(c) for c in x])
    if x.shape != (d,):
        raise ValueError(f"vector x must have length {d}")
    pairing = complex(xstar.apply(x))
    if abs(pairing - 1.0) > 1e-12:
        raise ValueError(
            f"x*(x) must equal 1 for the factorization, got {pairing}"
        )

    reports = []

    # W f = j2( Wvec( f (x) x ) ) with (f (x) x)_i = x_i f.
    tensor = VecFn(tuple(
        AnalyticFn(_mul(Const(xi), f.expr)) for xi in x
    ))
    through_vec = xstar.compose(apply_wco_vec(psi, phi, tensor))
    direct = apply_wco(psi, phi, f)
    dev = _rel_deviation(through_vec.eval_many(sample), direct.eval_many(sample))
    reports.append(IdentityCheck(
        identity="scalar_through_vector",
        max_abs_deviation=dev, samples=sample.size, passed=dev <= tol,
    ))

    # I v = j4( Wvec( const v ) ): (psi * v)(z0) / psi(z0) = v.
    z0 = psi.nonzero_witness
    psi_z0 = psi.fn.eval(z0)
    worst = 0.0
    for i in range(d):
        v = np.zeros(d, dtype=complex)
        v[i] = 1.0
        const_map = VecFn(tuple(AnalyticFn(Const(c)) for c in v))
        out = apply_wco_vec(psi, phi, const_map).eval(z0) / psi_z0
        worst = max(worst, float(np.max(np.abs(out - v))))
    reports.append(IdentityCheck(
        identity="identity_through_vector",
        max_abs_deviation=worst, samples=d, passed=worst <= tol,
    ))
    return reports


@dataclass(frozen=True)
class NormTransferRow:
    functional: tuple
    scalar_norm_direct: float
    scalar_norm_commuted: float
    passed: bool

    def to_dict(self):
        return {
            "functional": [[c.real, c.imag] for c in self.functional],
            "scalar_norm_direct": self.scalar_norm_direct,
            "scalar_norm_commuted": self.scalar_norm_commuted,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class NormTransferReport:
    rows: tuple
    weak_ratio: float
    all_passed: bool

    def to_dict(self):
        return {
            "rows": [row.to_dict() for row in self.rows],
            "weak_ratio": self.weak_ratio,
            "all_passed": self.all_passed,
        }


def check_commutation(psi: Weight, phi: SelfMap, F: VecFn, xstar: Functional,
                      sample: np.ndarray, tol: float = 1e-12) -> IdentityCheck:
    """x* o (Wvec F) = W (x* o F) pointwise over the sample."""
    sample = np.asarray(sample, dtype=complex)
    left = xstar.compose(apply_wco_vec(psi, phi, F)).eval_many(sample)
    right = apply_wco(psi, phi, xstar.compose(F)).eval_many(sample)
    dev = _rel_deviation(left, right)
    return IdentityCheck(identity="functional_commutes_with_wco",
                         max_abs_deviation=dev, samples=sample.size,
                         passed=dev <= tol)


def check_norm_transfer(psi: Weight, phi: SelfMap, F: VecFn, alpha: float,
                        beta: float, grid: Optional[DiscGrid] = None,
                        directions: Optional[int] = None,
                        tol: float = 1e-10) -> NormTransferReport:
    """Norms of x* o (Wvec F) and W(x* o F) agree functional by functional.

    Also reports the ratio weak(Wvec F, beta) / weak(F, alpha) as the
    norm-transfer summary (the two weak norms are computed with the same
    direction sample).
    """
    if grid is None:
        grid = default_grid()
    d = F.d
    if directions is None:
        directions = 4 * d
    rng = np.random.default_rng(42)
    functionals = [basis_functional(d, i) for i in range(d)]
    for _ in range(max(0, directions - d)):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        xf = _maximizing_functional(np.conj(v))
        if xf is not None:
            functionals.append(xf)

    WF = apply_wco_vec(psi, phi, F)
    rows = []
    for xf in functionals:
        direct = bloch_norm(xf.compose(WF), beta, grid)
        commuted = bloch_norm(apply_wco(psi, phi, xf.compose(F)), beta, grid)
        ok = abs(direct - commuted) <= tol * (1.0 + abs(commuted))
        rows.append(NormTransferRow(
            functional=xf.coeffs, scalar_norm_direct=direct,
            scalar_norm_commuted=commuted, passed=ok,
        ))
    denom = weak_norm(F, alpha, grid, directions=max(directions, 2 * d))
    numer = weak_norm(WF, beta, grid, directions=max(directions, 2 * d))
    ratio = numer / denom if denom > 0 else math.inf
    return NormTransferReport(rows=tuple(rows), weak_ratio=ratio,
                              all_passed=all(row.passed for row in rows))
