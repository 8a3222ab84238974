"""Slutsky and Antonelli matrices, integrability residuals, curvature, duality.

Rational inputs run the analytic formulas in exact arithmetic, so the frozen
values below are equalities, not tolerances.  At the unit point the Gale
family gives S = A - 1/3 (entrywise), the Antonelli block
((-10/37, -11/37), (1/37, -10/37)), and the bordered determinants
13690 and -102675 of the shared symmetrized companion [[9,14,14],[14,9,14],
[14,14,9]] bordered by (37,37,37).
"""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from galedemand import (
    ConvergenceError,
    LinearField,
    NumericField,
    QuadraticInverseDemand,
    antonelli,
    cone_contains,
    expenditure_numeric,
    fd_jacobian,
    inverse_demand,
    inverse_pair_gap,
    jacobi_residual,
    scaling_invariance_check,
    shephard_check,
    slutsky,
    tangent_definiteness,
)
from galedemand._num import dot, matvec

GALE_COMPANION = ((9, 12, 16), (16, 9, 12), (12, 16, 9))

SLUTSKY_AT_ONES = (
    (F(-10, 3), F(11, 3), F(-1, 3)),
    (F(-1, 3), F(-10, 3), F(11, 3)),
    (F(11, 3), F(-1, 3), F(-10, 3)),
)

ANTONELLI_AT_ONES = ((F(-10, 37), F(-11, 37)), (F(1, 37), F(-10, 37)))


def rand_cone_price(spec, rng):
    # the admissible cone of the control family is a narrow wedge around the
    # diagonal, so sample small multiplicative wobbles and reject
    while True:
        p = tuple(math.exp(u) for u in rng.uniform(-0.08, 0.08, size=3))
        if cone_contains(spec, p):
            return p


def rand_rational_bundle(rng, lo=1, hi=30):
    return tuple(F(int(rng.integers(lo, hi)), int(rng.integers(1, 10))) for _ in range(3))


def closed_form_expenditure(spec, x, p) -> float:
    xf = np.array([float(v) for v in x])
    pf = np.array([float(v) for v in p])
    A = np.array([[float(v) for v in row] for row in spec.A])
    B = np.array([[float(v) for v in row] for row in spec.B])
    return math.sqrt(float(xf @ B @ xf) * float(pf @ A @ pf))


class TestSlutsky:
    def test_gale_matrix_at_ones(self, gale):
        s = slutsky(gale, (1, 1, 1), 3)
        assert s.matrix == SLUTSKY_AT_ONES
        assert s.matrix[0][1] == F(11, 3)
        assert s.matrix[1][0] == F(-1, 3)
        assert s.asymmetry() == 4.0
        assert s.residual_price() == (0, 0, 0)

    def test_income_scales_linearly(self, gale):
        s1 = slutsky(gale, (1, 1, 1), 3).matrix
        s2 = slutsky(gale, (1, 1, 1), 6).matrix
        assert all(s2[i][j] == 2 * s1[i][j] for i in range(3) for j in range(3))

    def test_fd_matches_analytic(self, gale):
        exact = slutsky(gale, (1, 1, 1), 3).matrix
        fd = slutsky(gale, (1, 1, 1), 3, mode="fd").matrix
        gap = max(abs(float(exact[i][j]) - fd[i][j]) for i in range(3) for j in range(3))
        assert gap < 1e-6

    def test_price_null_space_sweep(self, gale, rng):
        for _ in range(50):
            p = tuple(F(int(rng.integers(4, 12)), int(rng.integers(1, 4))) for _ in range(3))
            if any(v <= 0 for v in matvec(gale.A, p)):
                continue
            s = slutsky(gale, p, 5)
            assert s.residual_price() == (0, 0, 0)

    def test_symmetric_family_is_symmetric(self, sym):
        p = (1, F(101, 100), F(99, 100))
        s = slutsky(sym, p, 3)
        assert s.asymmetry() == 0.0
        assert s.residual_price() == (0, 0, 0)

    def test_symmetric_family_fd(self, sym):
        s = slutsky(sym, (1.0, 1.0, 1.0), 3.0, mode="fd")
        assert s.asymmetry() <= 1e-7
        assert max(abs(v) for v in s.residual_price()) <= 1e-7

    def test_analytic_needs_interior_price(self, gale):
        # (9, 16, 12) sits on the cone boundary: A p = (37, 0, 0)
        with pytest.raises(ValueError, match="strictly inside"):
            slutsky(gale, (9, 16, 12), 1)

    def test_fd_stencil_must_stay_in_cone(self, gale):
        with pytest.raises(ValueError, match="stencil leaves the cone"):
            slutsky(gale, (9, 16, 12), 1, mode="fd")

    def test_mode_and_income_validation(self, gale):
        with pytest.raises(ValueError, match="unknown mode"):
            slutsky(gale, (1, 1, 1), 1, mode="adjoint")
        with pytest.raises(ValueError, match="income"):
            slutsky(gale, (1, 1, 1), 0)


class TestJacobi:
    def test_linear_companion_value(self):
        field = LinearField(GALE_COMPANION)
        assert jacobi_residual(field, (1, 1, 1)) == -444

    def test_gale_field_value(self, gale_field):
        assert jacobi_residual(gale_field, (1, 1, 1)) == F(-4, 111)

    def test_residual_consistent_under_clearing(self, gale_field):
        # the linear companion is (x'Cx / 37) times the field, and the
        # residual picks up the square of that factor: -444 / 111^2 = -4/111
        assert F(-444, 111**2) == F(-4, 111)
        lam = lambda v: 1 / dot(v, matvec(GALE_COMPANION, v))
        check = scaling_invariance_check(LinearField(GALE_COMPANION), lam, (1, 1, 1))
        assert check.residual_base == pytest.approx(-444.0)
        assert check.consistent()
        assert check.residual_scaled == pytest.approx(float(F(-4, 111)), abs=1e-6)

    def test_scaling_law_generic_factor(self, gale_field):
        check = scaling_invariance_check(gale_field, lambda v: 1.0 + 0.25 * float(v[0]), (1, 1, 1))
        assert check.lam_value == 1.25
        assert check.consistent()

    def test_antisymmetric_in_indices(self, gale_field):
        x = (1, 2, 3)
        base = jacobi_residual(gale_field, x, (0, 1, 2))
        assert jacobi_residual(gale_field, x, (1, 0, 2)) == -base
        assert jacobi_residual(gale_field, x, (1, 2, 0)) == base
        assert jacobi_residual(gale_field, x, (0, 0, 2)) == 0

    def test_symmetric_field_vanishes(self, sym_field, rng):
        assert jacobi_residual(sym_field, (1, 2, 3)) == 0
        for _ in range(20):
            x = tuple(rng.uniform(0.2, 4.0, size=3))
            assert jacobi_residual(sym_field, x) == 0.0

    def test_index_validation(self, gale_field):
        with pytest.raises(ValueError, match="out of range"):
            jacobi_residual(gale_field, (1, 1, 1), (0, 1, 5))


class TestAntonelli:
    def test_gale_block_at_ones(self, gale_field):
        a = antonelli(gale_field, (1, 1, 1))
        assert a.matrix == ANTONELLI_AT_ONES
        assert a.normalized_price == (1, 1, 1)
        assert a.income == 3
        assert a.asymmetry() == float(F(12, 37))

    def test_symmetric_block_is_symmetric(self, sym_field):
        for x in ((1, 1, 1), (2, 1, 3), (F(1, 2), F(3, 4), 1)):
            assert antonelli(sym_field, x).asymmetry() == 0.0

    def test_inverse_is_a_true_inverse(self, gale_field):
        a = antonelli(gale_field, (2, 1, 3))
        m, inv = a.matrix, a.inverse()
        prod = tuple(
            tuple(sum(m[i][k] * inv[k][j] for k in range(2)) for j in range(2))
            for i in range(2)
        )
        assert prod == ((1, 0), (0, 1))

    def test_singular_block_raises(self):
        # constant normalized price: the block vanishes identically
        flat = LinearField(((1, 1, 1), (1, 1, 1), (1, 1, 1)))
        with pytest.raises(ValueError, match="singular"):
            antonelli(flat, (1, 1, 1)).inverse()

    def test_vanishing_last_component_raises(self):
        field = LinearField(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        with pytest.raises(ValueError, match="normalize"):
            antonelli(field, (1, 1, 0))


class TestInversePair:
    @pytest.mark.parametrize("x", [(1, 1, 1), (2, 1, 3), (F(1, 2), F(3, 4), 1)])
    def test_exact_at_rational_bundles(self, gale, x):
        res = inverse_pair_gap(gale, x)
        assert res.gap == 0.0
        assert res.ok
        assert res.antonelli_inverse == res.slutsky_truncated

    def test_duality_budget(self, gale):
        res = inverse_pair_gap(gale, (1, 1, 1))
        assert res.price == (1, 1, 1)
        assert res.income == 3

    def test_float_bundles(self, gale, rng):
        for _ in range(25):
            x = tuple(rng.uniform(0.3, 3.0, size=3))
            assert inverse_pair_gap(gale, x).gap <= 1e-12

    def test_symmetric_family(self, sym):
        res = inverse_pair_gap(sym, (2, 1, 3))
        assert res.gap == 0.0
        a = res.antonelli_matrix
        assert a[0][1] == a[1][0]


class TestDefiniteness:
    def test_gale_bordered_values_at_ones(self, gale_field):
        res = tangent_definiteness(gale_field, (1, 1, 1))
        assert res.bordered2 == 13690
        assert res.bordered3 == -102675
        assert res.classification == "negative-definite"
        assert res.tangent_max < 0
        assert res.cross_check_agrees

    def test_symmetric_family_matches_at_ones(self, sym_field):
        # symmetrizing the Gale companion gives the control family's matrix,
        # so the two families certify with identical numbers at the unit point
        res = tangent_definiteness(sym_field, (1, 1, 1))
        assert res.bordered2 == 13690
        assert res.bordered3 == -102675
        assert res.classification == "negative-definite"

    def test_bordered_closed_forms_exact(self, gale_field, rng):
        for _ in range(50):
            x = rand_rational_bundle(rng)
            h = matvec(GALE_COMPANION, x)
            res = tangent_definiteness(gale_field, x, samples=8)
            assert res.bordered2 == 28 * h[0] * h[1] - 9 * h[0] ** 2 - 9 * h[1] ** 2
            assert res.bordered3 == 115 * (h[0] ** 2 + h[1] ** 2 + h[2] ** 2) - 140 * (
                h[0] * h[1] + h[0] * h[2] + h[1] * h[2]
            )
            assert res.classification == "negative-definite"

    def test_ratio_stays_in_positive_band(self, gale_field, rng):
        # h0/h1 for h = Cx ranges over the columnwise ratio band [9/16, 4/3],
        # on which -9 t^2 + 28 t - 9 is strictly positive
        for _ in range(200):
            x = tuple(rng.uniform(0.01, 10.0, size=3))
            h = matvec(GALE_COMPANION, x)
            t = h[0] / h[1]
            assert 9 / 16 <= t <= 4 / 3
            assert -9 * t * t + 28 * t - 9 > 0

    def test_float_points_sweep(self, gale_field, rng):
        for _ in range(50):
            x = tuple(rng.uniform(0.1, 10.0, size=3))
            res = tangent_definiteness(gale_field, x, samples=16)
            assert res.classification == "negative-definite"
            assert res.cross_check_agrees

    def test_identity_jacobian_is_indefinite(self):
        field = LinearField(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        res = tangent_definiteness(field, (1.0, 1.0, 1.0))
        assert res.classification == "indefinite"
        assert res.tangent_max > 0
        assert res.cross_check_agrees

    def test_degenerate_form_detected(self):
        field = LinearField(((1, 1, 0), (1, 1, 0), (0, 0, 1)))
        res = tangent_definiteness(field, (1.0, 1.0, 1.0))
        assert res.classification == "degenerate"


class TestExpenditure:
    def test_matches_closed_form(self, sym, rng):
        for _ in range(20):
            x = tuple(rng.uniform(0.3, 3.0, size=3))
            p = rand_cone_price(sym, rng)
            got = expenditure_numeric(sym, x, p)
            want = closed_form_expenditure(sym, x, p)
            assert abs(got - want) <= 1e-9 * want

    def test_degree_one_in_bundle_scale(self, sym):
        x = (1.2, 0.8, 1.1)
        p = (1.0, 1.0, 1.0)
        e1 = expenditure_numeric(sym, x, p)
        e2 = expenditure_numeric(sym, tuple(2 * v for v in x), p)
        assert abs(e2 - 2 * e1) <= 1e-9 * e2

    def test_rejects_gale_family(self, gale):
        with pytest.raises(ValueError, match="symmetric"):
            expenditure_numeric(gale, (1, 1, 1), (1, 1, 1))

    def test_rejects_price_outside_cone(self, sym):
        with pytest.raises(ValueError, match="outside the admissible cone"):
            expenditure_numeric(sym, (1, 1, 1), (1, 2, 3))

    def test_rejects_nonpositive_bundle(self, sym):
        with pytest.raises(ValueError, match="strictly positive"):
            expenditure_numeric(sym, (1, 0, 1), (1, 1, 1))

    def test_convergence_error_carries_best(self, sym):
        with pytest.raises(ConvergenceError) as info:
            expenditure_numeric(sym, (1, 1, 1), (1, 1, 1), restarts=1, max_iters=0)
        assert info.value.best == pytest.approx(3.0, abs=1e-12)


class TestShephard:
    def test_gradient_equals_demand(self, sym):
        res = shephard_check(sym, (1, 1, 1), (1, 1, 1), restarts=4, concavity_samples=4)
        assert res.ok
        assert res.residual <= 1e-6
        assert res.expenditure == pytest.approx(3.0, rel=1e-10)
        assert res.concavity_margin >= -1e-7
        for g, d in zip(res.gradient, res.demand):
            assert g == pytest.approx(float(d), abs=1e-6)

    def test_off_diagonal_point(self, sym, rng):
        x = (1.4, 0.9, 1.2)
        p = rand_cone_price(sym, rng)
        res = shephard_check(sym, x, p, restarts=4, concavity_samples=4)
        assert res.ok
        assert res.expenditure == pytest.approx(closed_form_expenditure(sym, x, p), rel=1e-9)


class TestFields:
    def test_linear_field(self):
        field = LinearField(GALE_COMPANION)
        assert field.value((1, 1, 1)) == (37, 37, 37)
        assert field.jacobian((5, 5, 5)) == GALE_COMPANION

    def test_quadratic_field_matches_inverse_demand(self, gale, gale_field, rng):
        for _ in range(20):
            x = tuple(rng.uniform(0.2, 4.0, size=3))
            assert gale_field.value(x) == inverse_demand(gale, x)

    def test_quadratic_jacobian_against_fd(self, gale_field):
        x = (1.3, 0.7, 2.1)
        J = gale_field.jacobian(x)
        Jfd = fd_jacobian(gale_field.value, x)
        gap = max(abs(J[i][j] - Jfd[i][j]) for i in range(3) for j in range(3))
        assert gap <= 1e-8

    def test_quadratic_rejects_nonpositive_form(self, gale_field):
        with pytest.raises(ValueError, match="not positive"):
            gale_field.value((0, 0, 0))

    def test_companion_matrix_clears_denominators(self, gale_field, sym_field):
        assert gale_field.companion_matrix() == GALE_COMPANION
        assert sym_field.companion_matrix() == ((9, 14, 14), (14, 9, 14), (14, 14, 9))

    def test_companion_matrix_float_fallback(self):
        B = ((0.5, 0.1, 0.1), (0.1, 0.5, 0.1), (0.1, 0.1, 0.5))
        assert QuadraticInverseDemand(B).companion_matrix() == B

    def test_numeric_field_wraps_callable(self, gale_field):
        wrapped = NumericField(lambda x: gale_field.value(x))
        x = (1.1, 0.9, 1.4)
        assert wrapped.value(x) == gale_field.value(x)
        J = gale_field.jacobian(x)
        Jn = wrapped.jacobian(x)
        assert max(abs(J[i][j] - Jn[i][j]) for i in range(3) for j in range(3)) <= 1e-8
