"""Moment layer: polar quadrature vs closed forms, error-bound honesty, MC."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gausscvx import body as bd
from gausscvx import gaussmoments as gm
from gausscvx import specfun as sf

import oracles


CLOSED_MEASURE_CASES = [
    (lambda: bd.ball(1.1, 2), lambda: oracles.ball_measure(1.1, 2)),
    (lambda: bd.ball(0.9, 3), lambda: oracles.ball_measure(0.9, 3)),
    (lambda: bd.strip(0.7, 3), lambda: oracles.strip_measure(0.7)),
    (lambda: bd.cylinder(2, 0.9, 3), lambda: oracles.ball_measure(0.9, 2)),
    (lambda: bd.box((0.8, 1.3), 2), lambda: oracles.box_measure((0.8, 1.3))),
    (lambda: bd.box((0.8, 1.0, 1.3), 3),
     lambda: oracles.box_measure((0.8, 1.0, 1.3))),
]


class TestMeasure:
    def test_closed_forms(self):
        for mk, truth in CLOSED_MEASURE_CASES:
            est = gm.measure(mk())
            assert est.value == pytest.approx(truth(), abs=max(1e-9, 3 * est.err))

    def test_error_bound_honest(self):
        # the nested-rule error estimate must dominate the true error,
        # including for corner bodies where the integrand has kinks
        for mk, truth in CLOSED_MEASURE_CASES:
            est = gm.measure(mk())
            assert abs(est.value - truth()) <= 3.0 * est.err + 1e-12

    def test_tol_enforcement(self):
        K = bd.box((0.8, 1.0, 1.3), 3)
        with pytest.raises(gm.QuadratureFailure):
            gm.measure(K, tol=1e-9)

    def test_rule_refinement_converges(self):
        K = bd.box((0.8, 1.3), 2)
        truth = oracles.box_measure((0.8, 1.3))
        errs = [abs(gm.measure(K, gm.sphere_rule(2, s)).value - truth)
                for s in (512, 2048, 8192)]
        assert errs[2] < errs[0]

    def test_monte_carlo_agrees(self):
        for mk, truth in CLOSED_MEASURE_CASES[:4]:
            K = mk()
            est = gm.mc_measure(K, 200_000, seed=5)
            assert est.method == "monte_carlo"
            assert abs(est.value - truth()) <= est.err  # err is already 3 sigma

    def test_mc_reproducible(self):
        K = bd.ball(1.0, 3)
        a = gm.mc_measure(K, 50_000, seed=11)
        b = gm.mc_measure(K, 50_000, seed=11)
        assert a.value == b.value


class TestMomentClosedForms:
    def test_ball_radial_moments(self):
        # E |X|^(2m) restricted to a centered ball is a ratio of the
        # incomplete kernel integrals
        for n, R in [(2, 1.3), (3, 0.8), (3, 2.0)]:
            b = gm.moments_bundle(bd.ball(R, n))
            m2 = sf.j_lower(n + 1, R) / sf.j_lower(n - 1, R)
            m4 = sf.j_lower(n + 3, R) / sf.j_lower(n - 1, R)
            assert b.m2.value == pytest.approx(m2, abs=max(1e-10, 3 * b.m2.err))
            assert b.m4.value == pytest.approx(m4, abs=max(1e-10, 3 * b.m4.err))
            assert b.gK2.value == pytest.approx(m2 / R**2, abs=1e-9)

    def test_strip_m2_splits_coordinates(self):
        # one pinned coordinate, the rest free Gaussians
        for n in (2, 3):
            b = gm.moments_bundle(bd.strip(0.7, n))
            m2 = sf.j_lower(2, 0.7) / sf.j_lower(0, 0.7) + (n - 1)
            assert b.m2.value == pytest.approx(m2, abs=max(1e-8, 3 * b.m2.err))

    def test_box_m2_is_coordinate_sum(self):
        widths = (0.8, 1.3)
        b = gm.moments_bundle(bd.box(widths, 2))
        m2 = sum(sf.j_lower(2, w) / sf.j_lower(0, w) for w in widths)
        assert b.m2.value == pytest.approx(m2, abs=max(1e-8, 3 * b.m2.err))

    def test_cylinder_gauge_second_moment(self):
        k, R = 2, 0.9
        b = gm.moments_bundle(bd.cylinder(k, R, 3))
        truth = sf.j_lower(k + 1, R) / (R**2 * sf.j_lower(k - 1, R))
        assert b.gK2.value == pytest.approx(truth, abs=max(1e-7, 3 * b.gK2.err))

    def test_var_consistency(self):
        b = gm.moments_bundle(bd.ball(1.2, 2))
        assert b.var_x2.value == pytest.approx(b.m4.value - b.m2.value**2,
                                               abs=1e-12)

    def test_direction_moments_symmetric_body(self):
        b = gm.moments_bundle(bd.ball(1.0, 2))
        th = np.array([0.6, 0.8])
        assert b.dir1(th).value == pytest.approx(0.0, abs=1e-12)
        # isotropy: directional second moment is m2 / n
        assert b.dir2(th).value == pytest.approx(b.m2.value / 2, abs=1e-9)


class TestRayIntegral:
    def test_linearity(self):
        K = bd.catalog("ellipsoid", 2, c=(0.9, 1.6))
        f = gm.RayPolynomial.abs_x_power(2)
        g = gm.RayPolynomial.constant(0.7)
        lhs = gm.ray_integral(K, f + g)
        rhs = gm.ray_integral(K, f) + gm.ray_integral(K, g)
        assert lhs.value == pytest.approx(rhs.value, rel=1e-12)

    def test_product_matches_power(self):
        K = bd.ball(1.1, 3)
        f = gm.RayPolynomial.abs_x_power(2)
        prod = gm.ray_integral(K, f * f)
        quart = gm.ray_integral(K, gm.RayPolynomial.abs_x_power(4))
        assert prod.value == pytest.approx(quart.value, rel=1e-12)

    def test_gauge_power_on_boundary_normalization(self):
        # int_K ||x||_K^0 = gamma(K)
        K = bd.ball(0.8, 2)
        zeroth = gm.ray_integral(K, gm.RayPolynomial.gauge_power(K, 0))
        assert zeroth.value == pytest.approx(gm.measure(K).value, rel=1e-12)

    def test_dot_power_gaussian_identity(self):
        # E <X, theta>^2 over all of R^2 equals |theta|^2
        big = bd.ball(40.0, 2)
        est = gm.ray_integral(big, gm.RayPolynomial.dot_power([0.6, 0.8], 2))
        assert est.value == pytest.approx(1.0, rel=1e-9)


class TestGammaOne:
    def test_ball_dilation_closed_form(self):
        # gamma(ball(R+eps)) has slope g_{n-1}(R) / c_{n-1} in eps
        for n, R in [(2, 1.0), (3, 0.8)]:
            est = gm.gamma_one(bd.ball(R, n), bd.ball(1.0, n))
            truth = sf.g(n - 1, R) / sf.j_total(n - 1)
            assert est.value == pytest.approx(truth, abs=max(1e-9, 3 * est.err))

    def test_self_variation_identity(self):
        # d/dc gamma(cK) at c=1 equals gamma(K) (n - E|X|^2)
        for K in (bd.box((0.8, 1.2), 2), bd.ball(1.1, 2),
                  bd.catalog("ellipsoid", 2, c=(0.7, 1.5))):
            est = gm.gamma_one(K, K)
            b = gm.moments_bundle(K)
            truth = b.a.value * (K.n - b.m2.value)
            assert est.value == pytest.approx(truth, abs=max(1e-7, 3 * est.err))

    def test_monotone_in_added_body(self):
        K = bd.ball(1.0, 2)
        small = gm.gamma_one(K, bd.ball(0.5, 2)).value
        large = gm.gamma_one(K, bd.ball(2.0, 2)).value
        assert 0 < small < large


class TestEstimateAlgebra:
    def test_monte_carlo_requires_samples(self):
        with pytest.raises(ValueError):
            gm.Estimate(1.0, 0.1, "monte_carlo")
        with pytest.raises(ValueError):
            gm.Estimate(1.0, -0.1, "closed")

    @settings(max_examples=100, deadline=None)
    @given(v1=st.floats(-10, 10), e1=st.floats(0, 1),
           v2=st.floats(-10, 10), e2=st.floats(0, 1))
    def test_add_sub_err_adds(self, v1, e1, v2, e2):
        a = gm.Estimate(v1, e1, "closed")
        b = gm.Estimate(v2, e2, "closed")
        assert (a + b).value == v1 + v2
        assert (a + b).err == e1 + e2
        assert (a - b).err == e1 + e2

    @settings(max_examples=100, deadline=None)
    @given(v1=st.floats(-10, 10), e1=st.floats(0, 1), c=st.floats(-5, 5))
    def test_scaling(self, v1, e1, c):
        a = gm.Estimate(v1, e1, "closed")
        assert (c * a).value == pytest.approx(c * v1, rel=1e-15, abs=0)
        assert (c * a).err == pytest.approx(abs(c) * e1, rel=1e-15, abs=0)

    @settings(max_examples=100, deadline=None)
    @given(v1=st.floats(-4, 4), e1=st.floats(0, 0.5),
           v2=st.floats(0.5, 4), e2=st.floats(0, 0.5))
    def test_quotient_first_order(self, v1, e1, v2, e2):
        a = gm.Estimate(v1, e1, "quadrature")
        b = gm.Estimate(v2, e2, "quadrature")
        q = a.over(b)
        assert q.value == v1 / v2
        # first-order propagated bound dominates either one-sided shift
        shift = abs((v1 + e1) / v2 - v1 / v2)
        assert q.err >= shift - 1e-12

    def test_times_symmetry(self):
        a = gm.Estimate(2.0, 0.1, "closed")
        b = gm.Estimate(-3.0, 0.2, "closed")
        ab, ba = a.times(b), b.times(a)
        assert ab.value == ba.value == -6.0
        assert ab.err == pytest.approx(ba.err)
