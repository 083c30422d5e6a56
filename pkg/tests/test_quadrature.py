import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kinetic_case.errors import AccuracyError, CutError, DomainError
from kinetic_case.quadrature import (
    DEFAULT_CONFIG,
    Interval,
    QuadratureConfig,
    RulePair,
    TanhSinhRule,
    cauchy_integral,
    gauss_integral,
    gaussian_tail_bound,
    pv_integral,
)


def scipy_pv(f, a, b, pole):
    # QUADPACK's dedicated Cauchy-weight routine (QAWC) as an independent oracle
    return quad(f, a, b, weight="cauchy", wvar=pole, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


class TestInterval:
    def test_semi_infinite_needs_gaussian(self):
        with pytest.raises(DomainError):
            Interval(0.0, math.inf)
        assert Interval(0.0, math.inf, gaussian=True).semi_infinite

    def test_empty(self):
        with pytest.raises(DomainError):
            Interval(1.0, 1.0)

    def test_truncation(self):
        lo, hi = Interval(0.0, math.inf, gaussian=True).truncated(DEFAULT_CONFIG)
        assert lo == 0.0 and hi == DEFAULT_CONFIG.semiinfinite_cutoff


class TestConfig:
    def test_cutoff_tail_below_tolerance(self):
        cfg = QuadratureConfig()
        assert math.exp(-cfg.semiinfinite_cutoff**2) < cfg.abs_tol
        assert gaussian_tail_bound(cfg.semiinfinite_cutoff, power=3) < cfg.abs_tol

    def test_tail_bound_is_an_upper_bound(self):
        for T in (1.0, 2.5, 4.0):
            for k in (0, 1, 2):
                exact = quad(lambda t: t**k * math.exp(-t * t), T, math.inf)[0]
                assert exact <= gaussian_tail_bound(T, k) * (1 + 1e-12)

    def test_bad_tolerances(self):
        with pytest.raises(DomainError):
            QuadratureConfig(abs_tol=0.0)


class TestPV:
    def test_symmetric_constant_is_zero(self):
        assert abs(pv_integral(lambda t: 1.0, Interval(0.0, 1.0), 0.5)) < 1e-14

    def test_closed_form_log(self):
        val = pv_integral(lambda t: 0.5, Interval(-1.0, 1.0), 0.5)
        assert val == pytest.approx(0.5 * math.log(1.0 / 3.0), abs=1e-13)

    def test_gaussian_half_line_matches_dawson_form(self):
        # PV int_0^inf e^{-t^2}/(t - 1) dt from the real-line PV (-2 sqrt(pi) F(1))
        # minus the regular integral over (-inf, 0)
        from scipy.special import dawsn

        val = pv_integral(lambda t: math.exp(-t * t), Interval(0.0, math.inf, gaussian=True), 1.0)
        whole = -2.0 * math.sqrt(math.pi) * dawsn(1.0)
        negative = quad(lambda t: math.exp(-t * t) / (t - 1.0), -math.inf, 0.0, epsabs=1e-14)[0]
        assert val == pytest.approx(whole - negative, abs=1e-9)

    @pytest.mark.parametrize("pole", [0.1, 0.37, 0.5, 0.93])
    def test_against_qawc(self, pole):
        f = lambda t: math.exp(t) * math.cos(3 * t)
        assert pv_integral(f, Interval(0.0, 1.0), pole) == pytest.approx(scipy_pv(f, 0.0, 1.0, pole), abs=1e-11)

    @pytest.mark.parametrize("pole", [0.0, 1.0, 2.0])
    def test_pole_not_interior(self, pole):
        with pytest.raises(DomainError):
            pv_integral(lambda t: 1.0, Interval(0.0, 1.0), pole)

    def test_accuracy_error_carries_estimate(self):
        cfg = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=1)
        with pytest.raises(AccuracyError) as info:
            pv_integral(lambda t: math.sin(40 * t) * abs(t - 0.3) ** 0.5, Interval(0.0, 1.0), 0.7, cfg)
        assert info.value.estimate is not None and info.value.error > 0

    @settings(max_examples=40, deadline=None)
    @given(center=st.floats(-5, 5), half=st.floats(0.01, 10))
    def test_antisymmetry(self, center, half):
        val = pv_integral(lambda t: 1.0, Interval(center - half, center + half), center)
        assert abs(val) < DEFAULT_CONFIG.abs_tol


class TestCauchy:
    def test_real_point(self):
        assert cauchy_integral(lambda t: 1.0, Interval(0.0, 1.0), 2.0) == pytest.approx(-math.log(2.0), abs=1e-13)

    def test_imaginary_point(self):
        val = cauchy_integral(lambda t: 1.0, Interval(0.0, 1.0), 1j)
        assert val == pytest.approx(np.log((1 - 1j) / (-1j)), abs=1e-12)

    def test_zero_function(self):
        assert cauchy_integral(lambda t: 0.0, Interval(0.0, 1.0), 0.3 + 0.2j) == 0

    def test_on_cut(self):
        with pytest.raises(CutError):
            cauchy_integral(lambda t: 1.0, Interval(0.0, 1.0), 0.5)

    def test_near_cut_subtraction(self):
        # f = 1: exact value log((1-z)/(-z)) even 1e-9 above the cut
        z = 0.4 + 1e-9j
        val = cauchy_integral(lambda t: 1.0, Interval(0.0, 1.0), z)
        assert val == pytest.approx(np.log((1 - z) / (-z)), abs=1e-10)

    def test_plemelj_limit(self):
        """C(mu + i eps) -> PV + i pi f(mu); the limit is taken by Richardson extrapolation."""
        f = lambda t: math.exp(-t) * (1 + t * t)
        mu = 0.45
        target = pv_integral(f, Interval(0.0, 1.0), mu) + 1j * math.pi * f(mu)
        eps = np.array([4e-5, 2e-5, 1e-5])
        vals = np.array([cauchy_integral(f, Interval(0.0, 1.0), mu + 1j * e) for e in eps])
        # the difference is c1 eps + O(eps^2) for smooth f; eliminate the linear term twice
        r1 = 2 * vals[1:] - vals[:-1]
        r2 = (4 * r1[1] - r1[0]) / 3
        assert abs(r2 - target) < 10 * DEFAULT_CONFIG.abs_tol
        # the raw value at eps = 1e-6 is within the first-order bound
        raw = cauchy_integral(f, Interval(0.0, 1.0), mu + 1e-6j)
        assert abs(raw - target) < 1e-5


class TestGauss:
    def test_half_gaussian(self):
        val = gauss_integral(lambda t: math.exp(-t * t), Interval(0.0, math.inf, gaussian=True))
        assert val == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-10)

    def test_cmfp_weight_normalised(self):
        assert gauss_integral(lambda t: 0.75 * (1 - t * t), Interval(-1.0, 1.0)) == pytest.approx(1.0, abs=1e-14)

    def test_moment(self):
        assert gauss_integral(lambda t: t * (1 - t * t), Interval(0.0, 1.0)) == pytest.approx(0.25, abs=1e-14)

    def test_truncation_soundness(self):
        f = lambda t: (1 + t**3) * math.exp(-t * t)
        cfg = QuadratureConfig()
        doubled = QuadratureConfig(semiinfinite_cutoff=2 * cfg.semiinfinite_cutoff)
        iv = Interval(0.0, math.inf, gaussian=True)
        assert abs(gauss_integral(f, iv, cfg) - gauss_integral(f, iv, doubled)) < cfg.abs_tol


class TestRules:
    def test_tanh_sinh_endpoint_log(self):
        rule = TanhSinhRule(0.0, 1.0, 129)
        assert rule.integrate(np.log(rule.nodes)) == pytest.approx(-1.0, abs=1e-12)

    def test_composite_panels(self):
        rule = TanhSinhRule(0.0, 3.0, 65, breaks=[0.0, 1.0, 3.0])
        assert rule.integrate(np.exp(-rule.nodes)) == pytest.approx(1 - math.exp(-3.0), abs=1e-13)

    def test_bad_breaks(self):
        with pytest.raises(DomainError):
            TanhSinhRule(0.0, 1.0, 33, breaks=[0.0, 0.7, 0.5, 1.0])

    def test_pair_pv_against_qawc(self, rng):
        f = lambda t: np.exp(t) * np.cos(3 * t)
        rules = RulePair(0.0, 1.0, 129)
        poles = np.sort(rng.uniform(0.001, 0.999, 25))
        vals = rules.pv(rules.sample(f), poles, f(poles))
        ref = [scipy_pv(f, 0.0, 1.0, p) for p in poles]
        assert np.max(np.abs(vals - ref)) < 1e-10

    def test_pair_pv_at_nodes(self):
        # poles exactly on nodes of one rule are handled by the other
        f = lambda t: np.sqrt(1 + t)
        rules = RulePair(0.0, 1.0, 129)
        poles = rules.a.nodes[40:45]
        vals = rules.pv(rules.sample(f), poles, f(poles))
        ref = [scipy_pv(f, 0.0, 1.0, p) for p in poles]
        assert np.all(np.isfinite(vals)) and np.max(np.abs(vals - ref)) < 1e-10

    def test_pair_cauchy_far_and_near(self):
        f = lambda t: np.exp(-t)
        rules = RulePair(0.0, 1.0, 129)
        z = np.array([2.0, -1.0 + 0.5j, 0.5 + 1e-8j])
        vals = rules.cauchy(rules.sample(f), z, func=lambda t: math.exp(-t))
        ref = [cauchy_integral(lambda t: math.exp(-t), Interval(0.0, 1.0), zz) for zz in z]
        assert np.max(np.abs(vals - ref)) < 1e-10

    def test_pair_cauchy_near_needs_callable(self):
        rules = RulePair(0.0, 1.0, 65)
        with pytest.raises(DomainError):
            rules.cauchy(rules.sample(np.exp), [0.5 + 1e-9j])
