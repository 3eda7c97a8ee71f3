"""Acceptance gate: the nine package-level criteria.

Each test prints one PASS/FAIL line (visible with -s; the -v test status
carries the same verdict) and pins the tolerances the criteria specify.
Shared conventions: quantities whose target is zero are compared against
the natural scale of the cancelling terms, everything else relatively.
"""

import math

import numpy as np
import pytest
from scipy import special

from wcobloch import (
    AnalyticFn, Const, Functional, PowReal, Polynomial, Var, VecFn,
    apply_wco, bloch_norm, catalog_functions, check_commutation,
    check_prop1_factorizations, classify, constant_weight,
    coordinate_weight, default_grid, lower_bound_check, make_selfmap,
    pair_poly, pair_poly_at_radius, pair_quadrature, parse_expr,
    standard_pairs, vec_bloch_norm, weak_norm, weak_null_certificate,
)
from wcobloch import test_fn_f as family_f
from wcobloch import test_fn_g as family_g
from wcobloch import test_fn_h as family_h
from wcobloch.expr import _add, _mul

ALPHAS = (0.3, 0.5, 0.8, 1.0, 1.3, 1.7, 2.0, 2.5, 3.0, 4.0)
CENTRES = (0.9, -0.7, 0.5j, 0.3 - 0.4j, 0.97)


def verdict(criterion: int, label: str, ok: bool) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {label}")
    assert ok, f"criterion {criterion} failed: {label}"


def random_poly_vec(rng, d: int, degree: int = 3) -> VecFn:
    comps = []
    for _ in range(d):
        node = Const(complex(rng.standard_normal(), rng.standard_normal()))
        for k in range(1, degree + 1):
            c = Const(complex(rng.standard_normal(), rng.standard_normal()))
            node = _add(node, _mul(c, Var() if k == 1 else PowReal(Var(), float(k))))
        comps.append(AnalyticFn(node))
    return VecFn(tuple(comps))


def disc_sample(rng, n: int, radius: float = 0.95) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))


def test_criterion_1_test_function_identities():
    ok = True
    pairs = [(alpha, complex(w)) for alpha in ALPHAS for w in CENTRES]
    assert len(pairs) == 50
    for alpha, w in pairs:
        u = 1.0 - abs(w) ** 2
        f = family_f(alpha, w)
        ok &= abs(f.eval(w)) <= 1e-6
        target = w.conjugate() * u ** (-alpha)
        ok &= abs(f.deriv().eval(w) - target) <= 1e-6 * abs(target)
        if alpha > 1.0:
            h = family_h(alpha, w)
            ok &= abs(h.eval(w) - u ** (1.0 - alpha)) <= 1e-6 * u ** (1.0 - alpha)
            ok &= abs(h.deriv().eval(w)) <= 1e-6 * (1.0 + u ** (-alpha))
    for w in CENTRES:
        w = complex(w)
        u = 1.0 - abs(w) ** 2
        g = family_g(w)
        t = math.log(1.0 / u)
        ok &= abs(g.eval(w) - t) <= 1e-6 * t
        ok &= abs(g.deriv().eval(w)) <= 1e-6 * (1.0 + abs(w) / u)
    verdict(1, "test-function identities on 50 (alpha, w) pairs", ok)


def test_criterion_2_norm_lower_bound():
    combos = [
        (constant_weight(), make_selfmap("identity")),
        (coordinate_weight(), make_selfmap("monomial", 2)),
        (constant_weight(), make_selfmap("blaschke", 0.5)),
    ]
    points = [1.0 - 2.0 ** (-n) for n in range(1, 11)]
    ok = True
    for psi, phi in combos:
        rows = lower_bound_check(psi, phi, 1.0, 1.0, points)
        ok &= all(row.lower_ok for row in rows)
        ok &= all(row.equality_ok for row in rows)
    verdict(2, "operator norm lower bound at 10 boundary points, 3 pairs", ok)


def test_criterion_3_classifier_ground_truths():
    one = constant_weight()
    ident = make_selfmap("identity")
    ok = True

    for alpha in (0.5, 1.0, 2.0):
        res = classify(one, ident, alpha, alpha)
        ok &= res.bounded and not res.compact and not res.inconclusive

    for r in (0.5, 0.9):
        for alpha, beta in ((1.0, 1.0), (0.5, 2.0)):
            res = classify(one, make_selfmap("dilation", r), alpha, beta)
            ok &= res.compact and not res.inconclusive

    res = classify(one, ident, 1.0, 2.0)
    ok &= res.compact and not res.inconclusive

    res = classify(one, ident, 1.0, 0.5)
    ok &= (not res.bounded) and not res.inconclusive

    verdict(3, "classifier matches the four analytic ground truths", ok)


def test_criterion_4_pairing_exactness():
    ok = True
    for alpha in (0.5, 1.0, 2.0):
        fns = [parse_expr("1" if j == 0 else f"z^{j}") for j in range(21)]
        for j, f in enumerate(fns):
            for k in range(21):
                probe = Polynomial(tuple([0.0] * k + [1.0]))
                value = pair_poly(f, probe, alpha).value
                expected = special.beta(j + 1, alpha) / 2.0 if j == k else 0.0
                ok &= abs(value - expected) <= 1e-12

    probe = Polynomial((0.5, 0.0, 1.0, 0.0, 0.0, -0.25))
    functions = [parse_expr("1+z^2-0.5*z^3"),
                 parse_expr("(1-0.5*z)^-1"),
                 parse_expr("testfn_f(1,0.6)")]
    for alpha in (0.5, 1.0, 2.0):
        for f in functions:
            for r in (0.999, 1.0):
                series_route = pair_poly_at_radius(f, probe, alpha, r=r).value
                quad_route = pair_quadrature(f, probe, alpha, r=r)
                ok &= abs(series_route - quad_route) <= 1e-8
    verdict(4, "pairing diagonality to 1e-12 and quadrature check to 1e-8", ok)


def test_criterion_5_weak_null_certificate():
    probes = [Polynomial(tuple([0.0] * k + [1.0])) for k in range(4)]
    report = weak_null_certificate(0.5, probes, n_start=1, n_stop=10, tol=1e-2)
    ok = report.certified and report.conclusive
    pairings = [row.max_abs_pairing for row in report.rows]
    ok &= pairings[-1] < 1e-2
    # decay sets in after the single interior peak near w = 3/4
    ok &= all(b < a for a, b in zip(pairings[1:], pairings[2:]))
    coeffs = [row.max_coeff for row in report.rows]
    ok &= all(b < a for a, b in zip(coeffs[1:], coeffs[2:]))
    ok &= coeffs[-1] < 1e-2
    verdict(5, "weak-null certificate at alpha = 0.5 by n = 10", ok)


def test_criterion_6_factorization_identities():
    rng = np.random.default_rng(42)
    f = parse_expr("(1-0.5*z)^-1")
    ok = True
    for label, psi, phi in standard_pairs():
        for d in (1, 2, 5):
            if d == 1:
                x, xstar = np.ones(1, dtype=complex), Functional((1.0,))
            else:
                v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                v /= np.linalg.norm(v)
                x, xstar = v, Functional(tuple(np.conj(v)))
            sample = disc_sample(rng, 200)
            for check in check_prop1_factorizations(psi, phi, f, x, xstar,
                                                    sample, tol=1e-10):
                ok &= check.passed
    verdict(6, "both factorization identities to 1e-10, d in {1, 2, 5}", ok)


def test_criterion_7_functional_commutation():
    rng = np.random.default_rng(42)
    pairs = standard_pairs()
    ok = True
    triples = 0
    for i in range(20):
        label, psi, phi = pairs[i % len(pairs)]
        d = 2 if i % 2 == 0 else 3
        F = random_poly_vec(rng, d)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        xstar = Functional(tuple(v))
        sample = disc_sample(rng, 5)
        triples += sample.size
        check = check_commutation(psi, phi, F, xstar, sample, tol=1e-12)
        ok &= check.passed
    assert triples == 100
    verdict(7, "functional commutes with the operator on 100 random triples", ok)


def test_criterion_8_norm_sandwich():
    rng = np.random.default_rng(42)
    grid = default_grid()
    ok = True
    for d in (2, 5):
        for _ in range(10):
            F = random_poly_vec(rng, d)
            weak = weak_norm(F, 1.0, grid=grid)
            vec = vec_bloch_norm(F, 1.0, grid=grid)
            ok &= weak <= vec + 1e-12
            ok &= vec <= 2.0 * weak + 1e-9
    verdict(8, "weak <= vec <= 2 weak + 1e-9 on 20 random maps", ok)


def test_criterion_9_numerics_hygiene():
    rng = np.random.default_rng(42)
    ok = True

    # symbolic vs central finite differences on every catalog function
    pts = disc_sample(rng, 1000, radius=0.95)
    h = 1e-5
    for label, fn in catalog_functions():
        sym = fn.deriv().eval_many(pts)
        fd = (fn.expr.evaluate(pts + h) - fn.expr.evaluate(pts - h)) / (2.0 * h)
        ok &= bool(np.all(np.abs(sym - fd) <= 1e-6 * (1.0 + np.abs(sym))))

    # norm estimates grow monotonically under grid refinement
    for f in (parse_expr("z^2"), parse_expr("testfn_f(0.5,0.9)"),
              parse_expr("(1-0.9*z)^-0.5")):
        norms = [bloch_norm(f, 1.0, grid=default_grid(K))
                 for K in (8, 10, 12, 14)]
        ok &= all(b >= a for a, b in zip(norms, norms[1:]))

    # classifier verdicts invariant under rescaling the weight
    cases = [(make_selfmap("identity"), 1.0, 1.0),
             (make_selfmap("dilation", 0.9), 1.0, 1.0),
             (make_selfmap("identity"), 1.0, 2.0),
             (make_selfmap("identity"), 1.0, 0.5)]
    for phi, alpha, beta in cases:
        base = classify(constant_weight(), phi, alpha, beta)
        for c in (2.0, 1j):
            other = classify(constant_weight(c), phi, alpha, beta)
            ok &= other.bounded == base.bounded
            ok &= other.compact == base.compact
            ok &= other.inconclusive == base.inconclusive

    verdict(9, "finite differences, grid refinement, weight rescaling", ok)
