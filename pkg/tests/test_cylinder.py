"""Round-cylinder layer: radii, perimeter factors, argmin partition, transforms."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from gausscvx import cylinder as cyl
from gausscvx import specfun as sf

import oracles

# frozen n=2 crossing abscissas, computed independently below with brentq
S_CROSS_N2 = 0.7062610461
PHI_CROSS_N2 = 0.9846941899


class TestRadiusMaps:
    def test_round_trip(self):
        a = np.linspace(0.01, 0.99, 50)
        for k in (1, 2, 3, 4):
            R = cyl.radius_of_measure(k, a)
            np.testing.assert_allclose(cyl.measure_of_radius(k, R), a,
                                       rtol=0, atol=1e-12)

    def test_k1_is_halfline_quantile(self):
        a = np.linspace(0.01, 0.99, 99)
        np.testing.assert_allclose(cyl.radius_of_measure(1, a), sf.phi_inv(a),
                                   rtol=0, atol=1e-10)

    def test_measure_matches_geometry(self):
        for k in (1, 2, 3):
            for R in (0.4, 1.0, 2.0):
                assert cyl.measure_of_radius(k, R) == pytest.approx(
                    oracles.ball_measure(R, k), abs=1e-12)


class TestPerimeterAndPhi:
    def test_perimeter_formula(self):
        # s_k(a) = g_{k-1}(R_k(a)) / c_{k-1}
        for k in (1, 2, 3, 4):
            for a in (0.1, 0.5, 0.9):
                R = cyl.radius_of_measure(k, a)
                expected = sf.g(k - 1, R) / sf.j_total(k - 1)
                assert cyl.perimeter_s(k, a) == pytest.approx(expected, rel=1e-13)

    def test_phi_is_log_derivative_of_inverse_perimeter(self):
        for k in (1, 2, 3, 4):
            for a in (0.15, 0.4, 0.6, 0.85):
                fd = oracles.fd_slope(lambda x: np.log(1.0 / cyl.perimeter_s(k, x)), a)
                assert cyl.phi_k(k, a) == pytest.approx(fd, rel=5e-7, abs=5e-9)

    def test_radius_slope_is_inverse_perimeter(self):
        for k in (1, 2, 3):
            for a in (0.2, 0.5, 0.8):
                fd = oracles.fd_slope(lambda x: cyl.radius_of_measure(k, x), a)
                assert 1.0 / cyl.perimeter_s(k, a) == pytest.approx(fd, rel=1e-7)

    def test_ps_identity(self):
        rng = np.random.default_rng(11)
        a = rng.uniform(0.01, 0.99, 200)
        for k in (1, 2, 3, 4, 5):
            np.testing.assert_allclose(cyl.ps_cylinder(k, a),
                                       1.0 + a * cyl.phi_k(k, a),
                                       rtol=0, atol=1e-12)

    def test_ps_equals_one_at_critical_radius(self):
        # phi_k vanishes exactly where R^2 = k - 1
        for k in (2, 3, 4, 5):
            a_star = float(cyl.measure_of_radius(k, np.sqrt(k - 1.0)))
            assert cyl.ps_cylinder(k, a_star) == pytest.approx(1.0, abs=1e-11)

    def test_k1_ps_always_above_one(self):
        a = np.linspace(0.01, 0.99, 99)
        assert np.all(cyl.ps_cylinder(1, a) > 1.0)


class TestCylinderSpec:
    def test_pin_by_measure_or_radius(self):
        c1 = cyl.CylinderSpec(n=3, k=2, R=1.0)
        c2 = cyl.CylinderSpec(n=3, k=2, a=c1.a)
        assert c2.R == pytest.approx(1.0, abs=1e-12)
        assert c1.ps == pytest.approx(1.0 + c1.a * c1.phi, rel=1e-13)

    def test_validation(self):
        with pytest.raises(ValueError):
            cyl.CylinderSpec(n=2, k=3, R=1.0)
        with pytest.raises(ValueError):
            cyl.CylinderSpec(n=2, k=1, R=1.0, a=0.5)
        with pytest.raises(ValueError):
            cyl.CylinderSpec(n=2, k=1)


class TestPartition:
    def test_crossings_match_brentq(self):
        table = cyl.partition(2)
        assert len(table.crossings_phi) == 1
        assert len(table.crossings_s) == 1

        a_phi = brentq(lambda a: cyl.phi_k(1, a) - cyl.phi_k(2, a), 0.9, 0.995,
                       xtol=1e-13)
        a_s = brentq(lambda a: cyl.perimeter_s(1, a) - cyl.perimeter_s(2, a),
                     0.5, 0.9, xtol=1e-13)
        assert table.crossings_phi[0][0] == pytest.approx(a_phi, abs=1e-9)
        assert table.crossings_s[0][0] == pytest.approx(a_s, abs=1e-9)
        # against the frozen constants as well
        assert a_phi == pytest.approx(PHI_CROSS_N2, abs=1e-9)
        assert a_s == pytest.approx(S_CROSS_N2, abs=1e-9)

    def test_mismatch_window_exists(self):
        table = cyl.partition(2)
        assert table.mismatch.any()
        inside = (table.a > S_CROSS_N2) & (table.a < PHI_CROSS_N2)
        np.testing.assert_array_equal(table.mismatch, inside)

    def test_argmin_orientation(self):
        # in the mismatch window the perimeter favors the half-line while the
        # log-derivative still favors the ball
        table = cyl.partition(2)
        mask = table.mismatch
        assert np.all(table.s_argmin[mask] == 1)
        assert np.all(table.phi_argmin[mask] == 2)

    def test_low_measure_prefers_full_ball(self):
        for n in (2, 3):
            table = cyl.partition(n)
            assert table.phi_argmin[0] == n
            assert table.s_argmin[0] == n


class TestTransforms:
    def test_conjecture_slope_vs_fd(self):
        tr = cyl.conjecture_transform(2)
        for a in (0.2, 0.5, 0.8, 0.99):
            fd = oracles.fd_slope(tr, a, h=1e-5)
            assert tr.slope(a) == pytest.approx(fd, rel=2e-6)

    def test_weak_slope_vs_fd(self):
        tr = cyl.weak_transform(2)
        for a in (0.2, 0.5, 0.8):
            fd = oracles.fd_slope(tr, a, h=1e-5)
            assert tr.slope(a) == pytest.approx(fd, rel=2e-6)

    def test_conjecture_n1_affine_in_quantile(self):
        # with one factor the construction reduces to the half-line quantile
        # up to an affine map, so slope ratios must be constant
        a = np.array([0.2, 0.4, 0.6, 0.8])
        tr = cyl.conjecture_transform(1)
        ratio = tr.slope(a) / (np.sqrt(np.pi / 2) * np.exp(sf.phi_inv(a) ** 2 / 2))
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-9)

    def test_transform_increasing(self):
        a = np.linspace(0.05, 0.99, 30)
        for tr in (cyl.conjecture_transform(2), cyl.weak_transform(3)):
            v = np.array([tr(x) for x in a])
            assert np.all(np.diff(v) > 0)

    def test_log_slope_derivative_matches_min_phi(self):
        # the defining property: (log F')' = min_k phi_k
        tr = cyl.conjecture_transform(2)
        for a in (0.3, 0.6, 0.99):
            fd = oracles.fd_slope(lambda x: np.log(tr.slope(x)), a, h=1e-5)
            expected = min(cyl.phi_k(1, a), cyl.phi_k(2, a))
            assert fd == pytest.approx(expected, rel=5e-5, abs=5e-7)


class TestBadTransform:
    def test_continuity_at_breaks(self):
        tr = cyl.bad_transform(2)
        assert len(tr.breaks) == 1
        b = tr.breaks[0]
        assert tr.value(b - 1e-9) == pytest.approx(tr.value(b + 1e-9), abs=1e-7)

    def test_slope_is_inverse_perimeter_of_s_argmin(self):
        tr = cyl.bad_transform(2)
        # below the perimeter crossing the ball wins, above it the half-line
        assert tr.slope(0.3) == pytest.approx(1.0 / cyl.perimeter_s(2, 0.3), rel=1e-12)
        assert tr.slope(0.9) == pytest.approx(1.0 / cyl.perimeter_s(1, 0.9), rel=1e-12)

    def test_anchored_at_first_piece(self):
        tr = cyl.bad_transform(2)
        assert tr.value(0.3) == pytest.approx(cyl.radius_of_measure(2, 0.3), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(k=st.integers(min_value=1, max_value=4),
       a=st.floats(min_value=0.005, max_value=0.995))
def test_radius_monotone(k, a):
    R = float(cyl.radius_of_measure(k, a))
    assert R > 0
    assert float(cyl.radius_of_measure(k, min(a + 1e-3, 0.9995))) > R


@settings(max_examples=50, deadline=None)
@given(a=st.floats(min_value=0.01, max_value=0.98))
def test_phi_ordering_below_crossing(a):
    # the ball's log-derivative stays below the half-line's up to the
    # crossing near 0.9847
    assert cyl.phi_k(2, a) < cyl.phi_k(1, a)
