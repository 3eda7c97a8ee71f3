"""Bloch-type norms, growth quantities, and the boundedness classifier.

The alpha-Bloch norm used throughout is

    ||f|| = |f(0)| + sup |f'(z)| (1-|z|^2)^alpha,

with the supremum estimated on a DiscGrid.  For a weight psi and self-map
phi the three growth quantities are

    q1 = (1-|z|^2)^beta / (1-|phi(z)|^2)^alpha * |psi(z)| |phi'(z)|
    q2 = (1-|z|^2)^beta * log(1/(1-|phi(z)|^2)) * |psi'(z)|
    q3 = (1-|z|^2)^beta / (1-|phi(z)|^2)^(alpha-1) * |psi'(z)|

Which of them control boundedness depends on alpha: below 1 only q1
matters, at 1 the pair (q1, q2), above 1 the pair (q1, q3).  Boundedness of
the operator corresponds to finite suprema; compactness to the quantities
vanishing as |phi(z)| approaches 1.  The classifier replaces those limits
with finite surrogates: a shell growth ratio for divergence and tail
suprema over {|phi(z)| >= 1 - 2^-m} for the boundary limit.

Everything here is pure and operates on immutable inputs, so the point maps
are safe to run data parallel; WCO_THREADS caps the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analytic import AnalyticFn
from .catalog import SelfMap, Weight, test_fn_f
from .expr import _compose, _mul
from .grids import DiscGrid, default_grid

_ALPHA_CASE_TOL = 1e-12
_TAIL_JITTER = 1.10


class Inconclusive(RuntimeError):
    """Grid evidence is too unstable for a determinate verdict."""


def _as_fn(obj) -> AnalyticFn:
    if isinstance(obj, AnalyticFn):
        return obj
    if isinstance(obj, (SelfMap, Weight)):
        return obj.fn
    raise TypeError(f"expected an analytic function or wrapper, got {type(obj)!r}")


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("WCO_THREADS", "1")))
    except ValueError:
        return 1


def _eval_points(fn: AnalyticFn, pts: np.ndarray) -> np.ndarray:
    """Evaluate fn over a point array, chunked across WCO_THREADS workers."""
    w = _workers()
    if w == 1 or pts.size < 8192:
        return fn.eval_many(pts)
    chunks = np.array_split(pts, w)
    with ThreadPoolExecutor(max_workers=w) as pool:
        parts = list(pool.map(fn.eval_many, chunks))
    return np.concatenate(parts)


def bloch_norm(f, alpha: float, grid: Optional[DiscGrid] = None) -> float:
    """Grid estimate of the alpha-Bloch norm (a lower bound of the true norm)."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    fn = _as_fn(f)
    grid = grid or default_grid()
    pts = grid.all_points
    dvals = _eval_points(fn.deriv(), pts)
    weights = (1.0 - np.abs(pts) ** 2) ** alpha
    return float(abs(fn.eval(0j)) + np.max(np.abs(dvals) * weights))


def _q_arrays(psi, phi, alpha: float, beta: float, pts: np.ndarray):
    psi_fn, phi_fn = _as_fn(psi), _as_fn(phi)
    one_minus = 1.0 - np.abs(pts) ** 2
    phi_v = _eval_points(phi_fn, pts)
    dphi_v = _eval_points(phi_fn.deriv(), pts)
    psi_v = _eval_points(psi_fn, pts)
    dpsi_v = _eval_points(psi_fn.deriv(), pts)
    gap = 1.0 - np.abs(phi_v) ** 2
    wb = one_minus ** beta
    q1v = wb / gap ** alpha * np.abs(psi_v) * np.abs(dphi_v)
    q2v = wb * np.log(1.0 / gap) * np.abs(dpsi_v)
    q3v = wb / gap ** (alpha - 1.0) * np.abs(dpsi_v)
    return np.abs(phi_v), q1v, q2v, q3v


def _q_scalar(values):
    arr = np.asarray(values)
    return float(arr) if arr.shape == () else arr


def q1(psi, phi, alpha: float, beta: float, z):
    """Weighted derivative growth quantity; scalar or array points."""
    pts = np.asarray(z, dtype=complex)
    _, q1v, _, _ = _q_arrays(psi, phi, alpha, beta, pts)
    return _q_scalar(q1v)


def q2(psi, phi, beta: float, z):
    """Logarithmic growth quantity (the alpha = 1 companion of q1)."""
    pts = np.asarray(z, dtype=complex)
    _, _, q2v, _ = _q_arrays(psi, phi, 1.0, beta, pts)
    return _q_scalar(q2v)


def q3(psi, phi, alpha: float, beta: float, z):
    """Weight derivative growth quantity for alpha > 1."""
    pts = np.asarray(z, dtype=complex)
    _, _, _, q3v = _q_arrays(psi, phi, alpha, beta, pts)
    return _q_scalar(q3v)


def apply_wco(psi, phi, f) -> AnalyticFn:
    """The weighted composition operator: z -> psi(z) * f(phi(z)).

    The derivative tree realises psi'*(f o phi) + psi*(f' o phi)*phi'
    through the ordinary product and chain rules.  At point evaluations
    this is exactly the adjoint identity: the pullback of the evaluation
    functional at z is psi(z) times evaluation at phi(z).
    """
    psi_fn, phi_fn, fn = _as_fn(psi), _as_fn(phi), _as_fn(f)
    return AnalyticFn(_mul(psi_fn.expr, _compose(fn.expr, phi_fn.expr)))


@dataclass(frozen=True)
class TailRow:
    """Suprema of the growth quantities over {|phi(z)| >= 1 - delta}."""

    m: int
    delta: float
    sup_q1: float
    sup_q2: float
    sup_q3: float
    vacuous: bool

    def to_dict(self):
        return {
            "m": self.m, "delta": self.delta,
            "sup_q1": self.sup_q1, "sup_q2": self.sup_q2, "sup_q3": self.sup_q3,
            "vacuous": self.vacuous,
        }


@dataclass(frozen=True, eq=False)
class QReport:
    """Point-by-point evidence gathered by the classifier."""

    points: np.ndarray
    abs_phi: np.ndarray
    q1_values: np.ndarray
    q2_values: np.ndarray
    q3_values: np.ndarray
    sup_q1: float
    sup_q2: float
    sup_q3: float
    tail: tuple
    shell_sups: dict = field(repr=False)

    def to_dict(self, include_points: bool = True) -> dict:
        out = {
            "sup": {"q1": self.sup_q1, "q2": self.sup_q2, "q3": self.sup_q3},
            "tail": [row.to_dict() for row in self.tail],
        }
        if include_points:
            out["points"] = [
                {
                    "z": [float(z.real), float(z.imag)],
                    "abs_phi": float(a),
                    "q1": float(v1), "q2": float(v2), "q3": float(v3),
                }
                for z, a, v1, v2, v3 in zip(
                    self.points, self.abs_phi,
                    self.q1_values, self.q2_values, self.q3_values,
                )
            ]
        return out


@dataclass(frozen=True)
class Classification:
    """Outcome of the boundedness/compactness analysis."""

    alpha: float
    beta: float
    case: str
    bounded: bool
    compact: bool
    inconclusive: bool
    notes: tuple
    evidence: QReport
    tolerances: dict

    def __post_init__(self):
        if self.compact and not self.bounded:
            raise ValueError("compact without bounded is impossible")

    def to_dict(self, include_points: bool = True) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "case": self.case,
            "bounded": self.bounded,
            "compact": self.compact,
            "inconclusive": self.inconclusive,
            "notes": list(self.notes),
            "tolerances": dict(self.tolerances),
            "evidence": self.evidence.to_dict(include_points=include_points),
        }


def _alpha_case(alpha: float) -> str:
    if abs(alpha - 1.0) <= _ALPHA_CASE_TOL:
        return "alpha=1"
    return "alpha<1" if alpha < 1.0 else "alpha>1"


def q_report(psi, phi, alpha: float, beta: float,
             grid: Optional[DiscGrid] = None, tail_depth: int = 10) -> QReport:
    """Evaluate all three growth quantities over a grid with tail statistics."""
    grid = grid or default_grid()
    pts = grid.all_points
    abs_phi, q1v, q2v, q3v = _q_arrays(psi, phi, alpha, beta, pts)
    named = {"q1": q1v, "q2": q2v, "q3": q3v}

    shell_sups = {
        name: tuple(
            float(np.max(vals[grid.shell_slice(k)])) for k in range(1, grid.K + 1)
        )
        for name, vals in named.items()
    }

    rows = []
    for m in range(1, tail_depth + 1):
        delta = 2.0 ** (-m)
        mask = abs_phi >= 1.0 - delta
        if not np.any(mask):
            rows.append(TailRow(m, delta, 0.0, 0.0, 0.0, True))
            continue
        rows.append(TailRow(
            m, delta,
            float(np.max(q1v[mask])),
            float(np.max(q2v[mask])),
            float(np.max(q3v[mask])),
            False,
        ))

    return QReport(
        points=pts, abs_phi=abs_phi,
        q1_values=q1v, q2_values=q2v, q3_values=q3v,
        sup_q1=float(np.max(q1v)), sup_q2=float(np.max(q2v)), sup_q3=float(np.max(q3v)),
        tail=tuple(rows), shell_sups=shell_sups,
    )


def classify(psi, phi, alpha: float, beta: float,
             grid: Optional[DiscGrid] = None,
             tol_bounded: float = 1.3, tol_compact: float = 1e-2,
             tail_depth: int = 10) -> Classification:
    """Classify the weighted composition operator between Bloch-type spaces.

    Args:
        psi, phi: weight and self-map (wrappers or plain AnalyticFn).
        alpha, beta: source and target space exponents, both positive.
        grid: sampling grid; needs K >= 8 for meaningful tail estimates.
        tol_bounded: largest allowed growth factor of a shell supremum
            between the outermost two shells.  Shell radii halve the gap to
            the boundary each step, so a quantity diverging like
            (1-|z|^2)^(-c) grows by 2^c per shell; the default 1.3 flags
            every divergence with c >= 0.5 while leaving an ample margin
            over the ~1.0 ratios of convergent cases.
        tol_compact: bound the outermost tail supremum must stay below for
            a compact verdict.
        tail_depth: number of tail rows (delta = 2^-m, m = 1..tail_depth).

    The verdict is three valued: when tail evidence is too jittery the
    classification is flagged inconclusive instead of silently guessing.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError(f"exponents must be positive, got alpha={alpha}, beta={beta}")
    grid = grid or default_grid()
    if grid.K < 8:
        raise ValueError(f"classification needs K >= 8 shells, got K={grid.K}")

    report = q_report(psi, phi, alpha, beta, grid=grid, tail_depth=tail_depth)
    case = _alpha_case(alpha)
    required = {"alpha<1": ("q1",), "alpha=1": ("q1", "q2"), "alpha>1": ("q1", "q3")}[case]
    sups = {"q1": report.sup_q1, "q2": report.sup_q2, "q3": report.sup_q3}

    notes = []
    bounded = True
    for name in required:
        if not math.isfinite(sups[name]):
            bounded = False
            notes.append(f"{name} overflows on the grid")
            continue
        shell = report.shell_sups[name]
        prev, last = shell[-2], shell[-1]
        if last > tol_bounded * prev + 1e-12:
            bounded = False
            notes.append(
                f"{name} grows by {last / prev if prev else float('inf'):.3f} "
                f"between the outermost shells (limit {tol_bounded})"
            )

    inconclusive = False
    for name in required:
        values = [getattr(row, f"sup_{name}") for row in report.tail if not row.vacuous]
        for earlier, later in zip(values, values[1:]):
            if later > _TAIL_JITTER * earlier + 1e-12:
                inconclusive = True
                notes.append(f"tail suprema of {name} are non-monotone beyond 10%")
                break

    compact = bounded and not inconclusive
    if compact:
        last_row = report.tail[-1]
        all_vacuous_beyond_1 = all(row.vacuous for row in report.tail[1:])
        for name in required:
            tail_sup = 0.0 if last_row.vacuous else getattr(last_row, f"sup_{name}")
            if not (tail_sup < tol_compact or all_vacuous_beyond_1):
                compact = False
                notes.append(
                    f"{name} stays at {tail_sup:.3e} on the outermost tail "
                    f"(limit {tol_compact})"
                )

    return Classification(
        alpha=alpha, beta=beta, case=case,
        bounded=bounded, compact=compact,
        inconclusive=inconclusive, notes=tuple(notes),
        evidence=report,
        tolerances={
            "tol_bounded": tol_bounded,
            "tol_compact": tol_compact,
            "alpha_case_tol": _ALPHA_CASE_TOL,
        },
    )


@dataclass(frozen=True)
class LowerBoundRow:
    z: complex
    phi_z: complex
    lhs: float
    rhs: float
    intermediate: float
    lower_ok: bool
    equality_ok: bool

    def to_dict(self):
        return {
            "z": [self.z.real, self.z.imag],
            "phi_z": [self.phi_z.real, self.phi_z.imag],
            "lhs": self.lhs, "rhs": self.rhs, "intermediate": self.intermediate,
            "lower_ok": self.lower_ok, "equality_ok": self.equality_ok,
        }


def lower_bound_check(psi, phi, alpha: float, beta: float,
                      z_points: Sequence[complex],
                      grid: Optional[DiscGrid] = None) -> list:
    """Norm lower bound through the family F.

    For each probe point z with w = phi(z), the operator applied to the
    family F member centred at w satisfies

        ||W f_w|| >= |(W f_w)'(z)| (1-|z|^2)^beta = |phi(z)| q1(z),

    because f_w(w) = 0 kills the psi' term and f_w'(w) is pinned.  Each row
    records the norm (with the probe point included in the supremum
    sample), the target |phi(z)| q1(z), and the intermediate value, checked
    for the inequality at 1e-6 slack and the equality at 1e-8 relative.
    """
    grid = grid or default_grid()
    psi_fn, phi_fn = _as_fn(psi), _as_fn(phi)
    rows = []
    for z in z_points:
        z = complex(z)
        w = phi_fn.eval(z)
        f = test_fn_f(alpha, w)
        wf = apply_wco(psi_fn, phi_fn, f)
        weight_z = (1.0 - abs(z) ** 2) ** beta
        intermediate = abs(wf.deriv().eval(z)) * weight_z
        lhs = max(bloch_norm(wf, beta, grid=grid), abs(wf.eval(0j)) + intermediate)
        rhs = abs(w) * q1(psi_fn, phi_fn, alpha, beta, z)
        lower_ok = lhs >= rhs * (1.0 - 1e-6)
        scale = max(rhs, 1e-300)
        equality_ok = abs(intermediate - rhs) <= 1e-8 * scale or (
            rhs < 1e-14 and intermediate < 1e-14
        )
        rows.append(LowerBoundRow(
            z=z, phi_z=w, lhs=lhs, rhs=rhs, intermediate=intermediate,
            lower_ok=lower_ok, equality_ok=equality_ok,
        ))
    return rows


def _shell_profile_sups(f, alpha: float, grid: DiscGrid) -> list:
    fn = _as_fn(f)
    pts = grid.all_points
    dvals = _eval_points(fn.deriv(), pts)
    profile = np.abs(dvals) * (1.0 - np.abs(pts) ** 2) ** alpha
    return [float(np.max(profile[grid.shell_slice(k)])) for k in range(1, grid.K + 1)]


def _little_bloch_verdict(shell_sups: Sequence[float], tol: float) -> bool:
    if shell_sups[-1] >= tol:
        return False
    tail = shell_sups[-3:]
    for earlier, later in zip(tail, tail[1:]):
        if later > _TAIL_JITTER * earlier + 1e-12:
            raise Inconclusive(
                "shell suprema fall below the threshold but are non-monotone "
                "beyond 10% on the outermost shells"
            )
    return True


def is_little_bloch(f, alpha: float, grid: Optional[DiscGrid] = None,
                    tol: float = 0.5) -> bool:
    """Whether the weighted derivative profile vanishes toward the boundary.

    True requires the outermost shell supremum of |f'(z)|(1-|z|^2)^alpha to
    sit below tol with the last three shell suprema non-increasing (10%
    jitter allowed); a below-threshold but non-monotone profile raises
    Inconclusive rather than guessing.
    """
    grid = grid or default_grid()
    return _little_bloch_verdict(_shell_profile_sups(f, alpha, grid), tol)
