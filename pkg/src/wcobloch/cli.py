"""Command-line front end.

Subcommands: classify, norm, pair, testfn, verify.  Every command echoes
its configuration and emits one JSON report to stdout or --out.

Exit codes: 0 success / determinate verdict, 1 expression parse error,
2 validation error (not a self-map, vanishing weight, bad parameters),
3 inconclusive verdict, 4 one or more verify suites failed.

The environment variable WCO_THREADS caps grid-evaluation parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analytic import AnalyticFn, DomainError
from .bloch import (
    Inconclusive, bloch_norm, classify, is_little_bloch, lower_bound_check,
)
from .catalog import (
    DegenerateParameterError, ValidationError, binomial_kernel,
    constant_weight, coordinate_weight, make_selfmap, selfmap_from_fn,
    standard_pairs, test_fn_f, test_fn_g, test_fn_h, weight_from_fn,
)
from .expr import BranchCutError, Const, PowReal, Var, _add, _mul
from .grids import default_grid
from .pairing import Polynomial, pair_poly, weak_null_certificate
from .parsing import ParseError, parse_constant, parse_expr
from .vector import (
    Functional, VecFn, check_commutation, check_prop1_factorizations,
    vec_bloch_norm, weak_norm,
)

_EXIT_OK = 0
_EXIT_PARSE = 1
_EXIT_VALIDATION = 2
_EXIT_INCONCLUSIVE = 3
_EXIT_VERIFY_FAILED = 4


def _config_echo(args: argparse.Namespace) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(config: dict, result, out: Optional[str], started: float) -> None:
    report = {
        "config": config,
        "result": result,
        "version": __version__,
        "wall_time_s": time.perf_counter() - started,
    }
    text = json.dumps(report, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _complex_pair(value: complex) -> list:
    return [value.real, value.imag]


# ---------------------------------------------------------------- commands


def cmd_classify(args: argparse.Namespace) -> tuple:
    psi = weight_from_fn(parse_expr(args.psi))
    phi = selfmap_from_fn(parse_expr(args.phi))
    grid = default_grid(args.grid_k)
    outcome = classify(
        psi, phi, args.alpha, args.beta, grid=grid,
        tol_bounded=args.tol_bounded, tol_compact=args.tol_compact,
        tail_depth=args.tail_m,
    )
    code = _EXIT_INCONCLUSIVE if outcome.inconclusive else _EXIT_OK
    return outcome.to_dict(include_points=args.points), code


def cmd_norm(args: argparse.Namespace) -> tuple:
    f = parse_expr(args.f)
    grid = default_grid(args.grid_k)
    value = bloch_norm(f, args.alpha, grid=grid)
    return {"norm": value, "alpha": args.alpha}, _EXIT_OK


def cmd_pair(args: argparse.Namespace) -> tuple:
    f = parse_expr(args.f)
    coeffs = tuple(parse_constant(part) for part in args.poly.split(","))
    poly = Polynomial(coeffs)
    result = pair_poly(f, poly, args.alpha, n_trunc=args.trunc)
    return result.to_dict(), _EXIT_OK


def cmd_testfn(args: argparse.Namespace) -> tuple:
    w = parse_constant(args.w)
    family = args.family
    if family == "f":
        if args.alpha is None:
            raise ValidationError("family f needs --alpha")
        fn = test_fn_f(args.alpha, w)
        norm_alpha = args.alpha
        u = 1.0 - abs(w) ** 2
        expect_value: complex = 0.0
        expect_deriv: complex = w.conjugate() * u ** (-args.alpha)
    elif family == "h":
        if args.alpha is None:
            raise ValidationError("family h needs --alpha")
        fn = test_fn_h(args.alpha, w)
        norm_alpha = args.alpha
        u = 1.0 - abs(w) ** 2
        expect_value = u ** (1.0 - args.alpha)
        expect_deriv = 0.0
    elif family == "g":
        fn = test_fn_g(w, corrected=not args.as_printed)
        norm_alpha = 1.0
        u = 1.0 - abs(w) ** 2
        expect_value = math.log(1.0 / u)
        expect_deriv = 0.0
    else:
        raise ValidationError(f"unknown family {family!r}")

    value = fn.eval(w)
    deriv = fn.deriv().eval(w)
    value_ok = abs(value - expect_value) <= 1e-6 * (1.0 + abs(expect_value))
    deriv_ok = abs(deriv - expect_deriv) <= 1e-6 * (1.0 + abs(expect_deriv))

    grid = default_grid(args.grid_k)
    code = _EXIT_OK
    little: Optional[bool]
    try:
        little = is_little_bloch(fn, norm_alpha, grid=grid)
    except Inconclusive:
        little = None
        code = _EXIT_INCONCLUSIVE

    payload = {
        "family": family,
        "w": _complex_pair(w),
        "value": _complex_pair(complex(value)),
        "derivative": _complex_pair(complex(deriv)),
        "expected_value": _complex_pair(complex(expect_value)),
        "expected_derivative": _complex_pair(complex(expect_deriv)),
        "bloch_norm": bloch_norm(fn, norm_alpha, grid=grid),
        "little_bloch": little,
        "identities_pass": bool(value_ok and deriv_ok),
    }
    return payload, code


# ------------------------------------------------------------ verify suites


def _disc_sample(rng: np.random.Generator, n: int, radius: float = 0.95) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * theta)


def _random_functional(rng: np.random.Generator, d: int) -> Functional:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return Functional(tuple(v / np.linalg.norm(v)))


def _random_vecfn(rng: np.random.Generator, d: int, degree: int = 3) -> VecFn:
    comps = []
    for _ in range(d):
        node = Const(complex(rng.standard_normal(), rng.standard_normal()))
        for k in range(1, degree + 1):
            c = complex(rng.standard_normal(), rng.standard_normal())
            power = Var() if k == 1 else PowReal(Var(), float(k))
            node = _add(node, _mul(Const(c), power))
        comps.append(AnalyticFn(node))
    return VecFn(tuple(comps))


def _suite_testfn(args: argparse.Namespace) -> tuple:
    alphas = (0.5, 0.8, 1.0, 1.5, 2.0) if args.alpha is None else (args.alpha,)
    ws = (0.9, -0.7, 0.5j, 0.3 - 0.4j, 0.99)
    rows, failures = [], []
    for alpha in alphas:
        for w in ws:
            w = complex(w)
            u = 1.0 - abs(w) ** 2
            checks = [("f", test_fn_f(alpha, w), 0.0, w.conjugate() * u ** (-alpha))]
            if alpha > 1.0:
                checks.append(("h", test_fn_h(alpha, w), u ** (1.0 - alpha), 0.0))
            if abs(alpha - 1.0) <= 1e-12 and abs(w) > 1e-8:
                checks.append(("g", test_fn_g(w), math.log(1.0 / u), 0.0))
            for family, fn, ev, ed in checks:
                verr = abs(fn.eval(w) - ev) / (1.0 + abs(ev))
                derr = abs(fn.deriv().eval(w) - ed) / (1.0 + abs(ed))
                err = max(verr, derr)
                ok = err <= 1e-6
                rows.append({
                    "family": family, "alpha": alpha, "w": _complex_pair(w),
                    "max_rel_err": err, "pass": ok,
                })
                if not ok:
                    failures.append(f"testfn: family {family} alpha={alpha} w={w}")
    return rows, failures


def _suite_prop1(args: argparse.Namespace) -> tuple:
    rng = np.random.default_rng(args.seed)
    dims = (1, 2, 5) if args.d is None else (args.d,)
    f = binomial_kernel(0.5, 1.0)
    rows, failures = [], []
    for label, psi, phi in standard_pairs():
        for d in dims:
            if d == 1:
                x = np.ones(1, dtype=complex)
                xstar = Functional((1.0,))
            else:
                v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                v = v / np.linalg.norm(v)
                x = v
                xstar = Functional(tuple(np.conj(v)))
            sample = _disc_sample(rng, 200)
            for check in check_prop1_factorizations(psi, phi, f, x, xstar, sample):
                rows.append({
                    "pair": label, "d": d, "identity": check.identity,
                    "max_abs_deviation": check.max_abs_deviation,
                    "pass": check.passed,
                })
                if not check.passed:
                    failures.append(f"prop1: {label} (d={d}) {check.identity}")
    return rows, failures


def _suite_lowerbound(args: argparse.Namespace) -> tuple:
    alpha = 1.0 if args.alpha is None else args.alpha
    beta = alpha
    combos = [
        ("psi=1, phi=id", constant_weight(), make_selfmap("identity")),
        ("psi=z, phi=z^2", coordinate_weight(), make_selfmap("monomial", 2)),
        ("psi=1, phi=blaschke(0.5)", constant_weight(), make_selfmap("blaschke", 0.5)),
    ]
    points = [1.0 - 2.0 ** (-n) for n in range(1, 11)]
    rows, failures = [], []
    for label, psi, phi in combos:
        check_rows = lower_bound_check(psi, phi, alpha, beta, points)
        lower = all(row.lower_ok for row in check_rows)
        equal = all(row.equality_ok for row in check_rows)
        rows.append({
            "pair": label, "alpha": alpha, "beta": beta,
            "n_points": len(check_rows),
            "all_lower_ok": lower, "all_equality_ok": equal,
            "pass": lower and equal,
        })
        if not (lower and equal):
            failures.append(f"lowerbound: {label}")
    return rows, failures


def _suite_weaknull(args: argparse.Namespace) -> tuple:
    alpha = 0.5 if args.alpha is None else args.alpha
    probes = [Polynomial((1.0,)), Polynomial((0.0, 1.0)),
              Polynomial((0.0, 0.0, 1.0)), Polynomial((0.0, 0.0, 0.0, 1.0))]
    report = weak_null_certificate(alpha, probes, n_start=1, n_stop=10, tol=1e-2)
    payload = report.to_dict()
    payload["pass"] = report.certified
    failures = [] if report.certified else [f"weaknull: alpha={alpha} not certified"]
    return [payload], failures


def _suite_sandwich(args: argparse.Namespace) -> tuple:
    rng = np.random.default_rng(args.seed)
    dims = (2, 5) if args.d is None else (args.d,)
    per_dim = max(1, 20 // len(dims))
    grid = default_grid(args.grid_k)
    rows, failures = [], []
    for d in dims:
        for trial in range(per_dim):
            F = _random_vecfn(rng, d)
            weak = weak_norm(F, 1.0, grid=grid)
            vec = vec_bloch_norm(F, 1.0, grid=grid)
            ok = weak <= vec + 1e-12 and vec <= 2.0 * weak + 1e-9
            rows.append({"d": d, "trial": trial, "weak": weak, "vec": vec, "pass": ok})
            if not ok:
                failures.append(f"sandwich: d={d} trial={trial}")
    return rows, failures


def _suite_commute(args: argparse.Namespace) -> tuple:
    rng = np.random.default_rng(args.seed)
    pairs = standard_pairs()
    rows, failures = [], []
    for i in range(20):
        label, psi, phi = pairs[i % len(pairs)]
        d = 2 if i % 2 == 0 else 3
        F = _random_vecfn(rng, d)
        xstar = _random_functional(rng, d)
        sample = _disc_sample(rng, 5)
        check = check_commutation(psi, phi, F, xstar, sample)
        rows.append({
            "pair": label, "d": d, "trial": i,
            "max_abs_deviation": check.max_abs_deviation, "pass": check.passed,
        })
        if not check.passed:
            failures.append(f"commute: {label} trial={i}")
    return rows, failures


_SUITES = {
    "testfn": _suite_testfn,
    "prop1": _suite_prop1,
    "lowerbound": _suite_lowerbound,
    "weaknull": _suite_weaknull,
    "sandwich": _suite_sandwich,
    "commute": _suite_commute,
}


def cmd_verify(args: argparse.Namespace) -> tuple:
    names = [args.suite] if args.suite else list(_SUITES)
    suites = {}
    failures = []
    for name in names:
        rows, suite_failures = _SUITES[name](args)
        suites[name] = {
            "rows": rows,
            "passed": not suite_failures,
        }
        failures.extend(suite_failures)
    payload = {"suites": suites, "failures": failures, "all_passed": not failures}
    return payload, (_EXIT_OK if not failures else _EXIT_VERIFY_FAILED)


# ------------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcobloch",
        description="Weighted composition operators on Bloch-type spaces "
                    "of the unit disc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--grid-k", type=int, default=14,
                       help="number of dyadic boundary shells (default 14)")
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("classify", help="boundedness/compactness verdict")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--psi", required=True, help="weight expression")
    p.add_argument("--phi", required=True, help="self-map expression")
    p.add_argument("--tail-m", type=int, default=10,
                   help="tail depth: delta = 2^-m rows (default 10)")
    p.add_argument("--tol-bounded", type=float, default=1.3)
    p.add_argument("--tol-compact", type=float, default=1e-2)
    p.add_argument("--points", action="store_true",
                   help="include per-point evidence in the report")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("norm", help="Bloch-type norm of a function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--f", required=True, help="function expression")
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("pair", help="duality pairing against a polynomial")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--f", required=True, help="function expression")
    p.add_argument("--poly", required=True,
                   help="comma-separated coefficients, lowest degree first")
    p.add_argument("--trunc", type=int, default=None,
                   help="Taylor truncation degree (defaults to deg poly)")
    common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("testfn", help="evaluate a test-function family member")
    p.add_argument("--family", required=True, choices=("f", "g", "h"))
    p.add_argument("--w", required=True, help="centre, e.g. 0.9 or 0.3-0.4i")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--as-printed", action="store_true",
                   help="family g only: use the uncorrected closed form")
    common(p)
    p.set_defaults(func=cmd_testfn)

    p = sub.add_parser("verify", help="run the invariant check suites")
    p.add_argument("--suite", choices=sorted(_SUITES), default=None)
    p.add_argument("--d", type=int, default=None,
                   help="restrict vector dimension where applicable")
    p.add_argument("--alpha", type=float, default=None,
                   help="restrict exponent where applicable")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    config = _config_echo(args)
    try:
        result, code = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return _EXIT_PARSE
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return _EXIT_INCONCLUSIVE
    except (ValidationError, DegenerateParameterError, DomainError,
            BranchCutError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    _emit(config, result, args.out, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
