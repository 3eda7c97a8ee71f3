"""Vector-valued maps, functionals, weak norms, factorization identities."""

import math

import numpy as np
import pytest

from wcobloch import (
    AnalyticFn, Const, DomainError, Functional, PowReal, Var, VecFn,
    apply_wco, apply_wco_vec, basis_functional, bloch_norm,
    check_commutation, check_norm_transfer, check_prop1_factorizations,
    constant_weight, coordinate_weight, make_selfmap, parse_expr,
    standard_pairs, vec_bloch_norm, weak_norm,
)


def diag_map() -> VecFn:
    return VecFn((parse_expr("z"), parse_expr("z")))


def mixed_map() -> VecFn:
    return VecFn((parse_expr("z"), parse_expr("z^2"), parse_expr("exp(z)")))


def random_poly_vec(rng, d: int, degree: int = 3) -> VecFn:
    comps = []
    for _ in range(d):
        node = Const(complex(rng.standard_normal(), rng.standard_normal()))
        for k in range(1, degree + 1):
            c = Const(complex(rng.standard_normal(), rng.standard_normal()))
            power = Var() if k == 1 else PowReal(Var(), float(k))
            from wcobloch.expr import _add, _mul
            node = _add(node, _mul(c, power))
        comps.append(AnalyticFn(node))
    return VecFn(tuple(comps))


class TestVecFn:
    def test_shapes(self):
        F = mixed_map()
        assert F.d == 3
        assert F.eval(0.2).shape == (3,)
        assert F.eval_many(np.zeros(5, dtype=complex)).shape == (3, 5)

    def test_componentwise_derivative(self):
        F = mixed_map()
        dF = F.deriv()
        assert dF.eval(0.3)[1] == pytest.approx(0.6)

    def test_needs_components(self):
        with pytest.raises(ValueError):
            VecFn(())
        with pytest.raises(TypeError):
            VecFn((parse_expr("z"), "z^2"))


class TestFunctional:
    def test_normalisation(self):
        xf = Functional((3.0, 4.0))
        assert xf.coeffs == pytest.approx((0.6, 0.8))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            Functional((0.0, 0.0))

    def test_action_is_plain_dot(self):
        xf = Functional((1.0, 1j))
        value = xf.apply(np.array([1.0, 1.0]))
        assert complex(value) == pytest.approx((1.0 + 1j) / math.sqrt(2.0))

    def test_compose_matches_dot(self, disc_points):
        F = mixed_map()
        xf = Functional((0.5, -0.5j, 1.0))
        composed = xf.compose(F)
        direct = xf.apply(F.eval_many(disc_points))
        np.testing.assert_allclose(composed.eval_many(disc_points), direct,
                                   rtol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            Functional((1.0, 0.0)).compose(mixed_map())

    def test_basis_functional(self):
        xf = basis_functional(3, 1)
        assert xf.apply(np.array([5.0, 7.0, 9.0])) == pytest.approx(7.0)


class TestVectorNorms:
    def test_diagonal_norm(self, grid14):
        assert vec_bloch_norm(diag_map(), 1.0, grid=grid14) == pytest.approx(
            math.sqrt(2.0), rel=1e-12)

    def test_single_component_reduces_to_scalar(self, grid14):
        f = parse_expr("z^2")
        F = VecFn((f,))
        assert vec_bloch_norm(F, 1.0, grid=grid14) == pytest.approx(
            bloch_norm(f, 1.0, grid=grid14), rel=1e-12)

    def test_weak_norm_sandwich_deterministic(self, grid14):
        for F in (diag_map(), mixed_map()):
            weak = weak_norm(F, 1.0, grid=grid14)
            vec = vec_bloch_norm(F, 1.0, grid=grid14)
            assert weak <= vec + 1e-12
            assert vec <= 2.0 * weak + 1e-9

    def test_weak_norm_sandwich_random(self, rng, grid10):
        for d in (2, 5):
            for _ in range(5):
                F = random_poly_vec(rng, d)
                weak = weak_norm(F, 1.0, grid=grid10)
                vec = vec_bloch_norm(F, 1.0, grid=grid10)
                assert weak <= vec + 1e-12
                assert vec <= 2.0 * weak + 1e-9

    def test_direction_budget_enforced(self, grid10):
        with pytest.raises(ValueError):
            weak_norm(diag_map(), 1.0, grid=grid10, directions=3)

    def test_rejects_nonpositive_alpha(self, grid10):
        with pytest.raises(ValueError):
            vec_bloch_norm(diag_map(), -1.0, grid=grid10)


class TestApplyWcoVec:
    def test_componentwise(self, disc_points):
        psi = coordinate_weight()
        phi = make_selfmap("blaschke", 0.3)
        F = mixed_map()
        WF = apply_wco_vec(psi, phi, F)
        for i, comp in enumerate(F.components):
            expected = apply_wco(psi, phi, comp)
            np.testing.assert_allclose(
                WF.components[i].eval_many(disc_points),
                expected.eval_many(disc_points), rtol=1e-12)


class TestProp1Factorizations:
    def test_all_standard_pairs(self, rng, disc_points):
        f = parse_expr("(1-0.5*z)^-1")
        for label, psi, phi in standard_pairs():
            for d in (1, 2, 5):
                if d == 1:
                    x, xstar = np.ones(1, dtype=complex), Functional((1.0,))
                else:
                    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
                    v /= np.linalg.norm(v)
                    x, xstar = v, Functional(tuple(np.conj(v)))
                checks = check_prop1_factorizations(psi, phi, f, x, xstar,
                                                    disc_points)
                for check in checks:
                    assert check.passed, (label, d, check.identity)
                    assert check.max_abs_deviation <= 1e-10

    def test_pairing_constraint_enforced(self, disc_points):
        psi, phi = constant_weight(), make_selfmap("identity")
        f = parse_expr("z")
        x = np.array([1.0, 1.0])
        xstar = Functional((1.0, 1.0))  # normalised: x*(x) = sqrt(2), not 1
        with pytest.raises(ValueError, match="x\\*\\(x\\)"):
            check_prop1_factorizations(psi, phi, f, x, xstar, disc_points)

    def test_sample_must_stay_inside_disc(self):
        psi, phi = constant_weight(), make_selfmap("identity")
        with pytest.raises(DomainError):
            check_prop1_factorizations(psi, phi, parse_expr("z"),
                                       np.ones(1), Functional((1.0,)),
                                       np.array([1.0 + 0j]))


class TestCommutationAndTransfer:
    def test_commutation_pointwise(self, rng, disc_points):
        psi = coordinate_weight()
        phi = make_selfmap("lens", 0.5)
        F = mixed_map()
        xstar = Functional(tuple(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
        check = check_commutation(psi, phi, F, xstar, disc_points)
        assert check.passed
        assert check.max_abs_deviation <= 1e-12

    def test_norm_transfer_report(self, grid10):
        psi = constant_weight()
        phi = make_selfmap("dilation", 0.5)
        report = check_norm_transfer(psi, phi, mixed_map(), 1.0, 1.0,
                                     grid=grid10)
        assert report.all_passed
        assert report.weak_ratio > 0.0
        for row in report.rows:
            assert row.scalar_norm_direct == pytest.approx(
                row.scalar_norm_commuted, rel=1e-10)

    def test_transfer_serializes(self, grid10):
        psi = constant_weight()
        phi = make_selfmap("dilation", 0.5)
        payload = check_norm_transfer(psi, phi, diag_map(), 1.0, 1.0,
                                      grid=grid10).to_dict()
        assert set(payload) == {"rows", "weak_ratio", "all_passed"}
