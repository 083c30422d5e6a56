import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import dawsn, wofz

from kinetic_case import KineticModel, boundary_values, build_theta, lambda0, lambda_cmfp, lambda_maxwell
from kinetic_case.errors import CutError, DomainError, EndpointError


def maxwell_oracle(z, c):
    # lambda = 1 + i sqrt(pi) c z w(z) above the axis, conjugate symmetric below
    if z.imag > 0:
        return 1.0 + 1j * math.sqrt(math.pi) * c * z * wofz(z)
    return np.conj(maxwell_oracle(np.conj(z), c))


class TestLambda0:
    def test_origin(self):
        assert lambda0(0.0) == 1.0

    def test_real_beyond_cut(self):
        val = lambda0(2.0)
        assert val.imag == 0.0
        assert val.real == pytest.approx(1.0 + math.log(1.0 / 3.0), abs=1e-15)

    def test_even_in_z(self):
        for z in (0.3 + 0.4j, -2.0, 1.5j):
            assert lambda0(z) == pytest.approx(lambda0(-z), abs=1e-14)

    def test_large_z(self):
        # 1 + (z/2) ln((z-1)/(z+1)) ~ -1/(3 z^2)
        z = 1e3 + 0j
        assert lambda0(z) * z * z == pytest.approx(-1.0 / 3.0, rel=1e-5)

    @pytest.mark.parametrize("z", [0.5, -1.0, 1.0, 0.999])
    def test_on_cut(self, z):
        with pytest.raises(CutError):
            lambda0(z)


class TestCMFP:
    def test_against_integral(self):
        z = 3.0
        integral = quad(lambda t: 0.75 * (1 - t * t) / (t - z), -1.0, 1.0, epsabs=1e-14)[0]
        assert lambda_cmfp(z).real == pytest.approx(1.0 + z * integral, abs=1e-13)

    def test_complex_point_against_integral(self):
        z = 0.3 + 0.8j
        re = quad(lambda t: (0.75 * (1 - t * t) / (t - z)).real, -1, 1, epsabs=1e-14)[0]
        im = quad(lambda t: (0.75 * (1 - t * t) / (t - z)).imag, -1, 1, epsabs=1e-14)[0]
        assert lambda_cmfp(z) == pytest.approx(1.0 + z * complex(re, im), abs=1e-12)

    def test_boundary_imaginary_part(self):
        pair = boundary_values(KineticModel.cmfp(), 0.5)
        assert pair.lambda_plus.imag == pytest.approx(0.75 * math.pi * 0.5 * 0.75, abs=1e-15)
        assert pair.lambda_plus.imag == pytest.approx(0.883573, abs=1e-6)
        assert pair.lambda_minus == np.conj(pair.lambda_plus)

    def test_boundary_is_limit_from_above(self):
        model = KineticModel.cmfp()
        mu = 0.37
        assert lambda_cmfp(mu + 1e-9j) == pytest.approx(complex(model.lambda_plus(mu)), abs=1e-7)

    def test_endpoint_values(self):
        model = KineticModel.cmfp()
        assert model.lambda_real(1.0) == -0.5
        assert model.lambda_real(0.0) == 1.0


class TestMaxwell:
    @pytest.mark.parametrize("c", [0.3, 0.5, 0.9, 1.0])
    @pytest.mark.parametrize("z", [1.0 + 1.0j, -2.0 + 0.3j, 0.5 - 0.5j, 3.0j, 4.0 + 2.0j])
    def test_against_faddeeva(self, c, z):
        assert lambda_maxwell(z, c) == pytest.approx(maxwell_oracle(z, c), abs=1e-9)

    @pytest.mark.parametrize("mu", [0.1, 0.8, 1.5, 3.0])
    def test_real_part_dawson_form(self, mu):
        model = KineticModel.maxwell(0.7)
        pv = quad(lambda t: math.exp(-t * t), -8, 8, weight="cauchy", wvar=mu, epsabs=1e-14, epsrel=1e-13)[0]
        assert model.lambda_real(mu) == pytest.approx(1.0 + mu * 0.7 / math.sqrt(math.pi) * pv, abs=1e-11)
        assert model.lambda_real(mu) == pytest.approx(1.0 - 1.4 * mu * dawsn(mu), abs=1e-15)

    def test_boundary_matches_faddeeva_limit(self):
        model = KineticModel.maxwell(0.5)
        mu = 1.3
        assert complex(model.lambda_plus(mu)) == pytest.approx(maxwell_oracle(mu + 1e-12j, 0.5), abs=1e-9)

    def test_real_axis_rejected(self):
        with pytest.raises(CutError):
            lambda_maxwell(2.0, 0.5)

    @pytest.mark.parametrize("c", [0.0, -0.1, 1.5])
    def test_bad_c(self, c):
        with pytest.raises(DomainError):
            KineticModel.maxwell(c)
        with pytest.raises(DomainError):
            lambda_maxwell(1j, c)


class TestModel:
    def test_weight_moment(self):
        for model in (KineticModel.cmfp(), KineticModel.maxwell(0.4)):
            lo, hi = -10.0, 10.0
            if model.kind == "cmfp":
                lo, hi = -1.0, 1.0
            assert quad(model.weight, lo, hi)[0] == pytest.approx(model.weight_moment(), abs=1e-12)

    def test_cmfp_has_no_parameter(self):
        with pytest.raises(DomainError):
            KineticModel("cmfp", 0.5)

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            KineticModel("bgk")

    @pytest.mark.parametrize("mu", [0.0, 1.0, 1.2])
    def test_boundary_endpoints(self, mu):
        with pytest.raises(EndpointError):
            boundary_values(KineticModel.cmfp(), mu)

    def test_derivative_matches_finite_difference(self):
        for model in (KineticModel.cmfp(), KineticModel.maxwell(0.9)):
            mu, h = 0.4, 1e-6
            fd = (model.lambda_plus(mu + h) - model.lambda_plus(mu - h)) / (2 * h)
            assert complex(model.lambda_plus_derivative(mu)) == pytest.approx(complex(fd), abs=1e-8)


class TestTheta:
    def test_cmfp_winding(self):
        table = build_theta(KineticModel.cmfp())
        assert table.kappa == 1
        assert table.endpoint_limits == (0.0, math.pi)
        assert np.all(np.diff(table.theta) > -1e-12)

    @pytest.mark.parametrize("c", [0.3, 0.5, 0.9])
    def test_maxwell_winding(self, c):
        table = build_theta(KineticModel.maxwell(c))
        assert table.kappa == 0
        assert abs(table.endpoint_limits[1]) < 0.5 * math.pi

    def test_maxwell_c1_winds_once(self):
        assert build_theta(KineticModel.maxwell(1.0)).kappa == 1

    def test_table_is_continuous(self):
        for model in (KineticModel.cmfp(), KineticModel.maxwell(0.9)):
            table = build_theta(model)
            assert np.max(np.abs(np.diff(table.theta))) < 0.5 * math.pi

    def test_theta_is_argument_of_lambda_plus(self):
        model = KineticModel.maxwell(0.5)
        table = build_theta(model)
        mu = np.array([0.3, 1.1, 2.7])
        assert np.allclose(np.exp(1j * table(mu)), model.lambda_plus(mu) / np.abs(model.lambda_plus(mu)), atol=1e-14)

    def test_small_grid_rejected(self):
        with pytest.raises(DomainError):
            build_theta(KineticModel.cmfp(), grid_size=16)
