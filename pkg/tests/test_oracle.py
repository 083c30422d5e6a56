import math

import numpy as np
import pytest

from kinetic_case import DiffusionProblem, KineticModel, KramersProblem
from kinetic_case.errors import DomainError, IterationError, NonAsymptoticError
from kinetic_case.oracle import (
    OracleConfig,
    OracleSolution,
    compare,
    extract_constant,
    graded_edges,
    ordinate_set,
    refinement_study,
    solve_transport,
)

SMALL = OracleConfig(cells=200, ordinates=16, grading=4.0)


class TestOrdinates:
    def test_cmfp_weights_sum(self):
        mu, w = ordinate_set(KineticModel.cmfp(), 16)
        assert 2 * w.sum() == pytest.approx(1.0, abs=1e-14)
        # exact for polynomials: 2 sum W mu^2 = (3/4) int mu^2 (1 - mu^2) = 1/5
        assert 2 * np.sum(w * mu**2) == pytest.approx(0.2, abs=1e-14)

    @pytest.mark.parametrize("c", [0.3, 0.9])
    def test_maxwell_half_range_moments(self, c):
        mu, w = ordinate_set(KineticModel.maxwell(c), 16)
        k = c / math.sqrt(math.pi)
        assert 2 * w.sum() == pytest.approx(c, abs=1e-12)
        assert np.sum(w * mu) == pytest.approx(0.5 * k, abs=1e-12)
        assert np.sum(w * mu**3) == pytest.approx(0.5 * k, abs=1e-12)

    def test_maxwell_quadrature_of_dawson_type_integral(self):
        # half-range Gauss with 32 nodes integrates smooth functions against exp(-mu^2)
        mu, w = ordinate_set(KineticModel.maxwell(1.0), 32)
        val = np.sum(w * np.cos(mu)) * math.sqrt(math.pi)
        assert val == pytest.approx(0.5 * math.sqrt(math.pi) * math.exp(-0.25), abs=1e-10)

    def test_nodes_inside(self):
        mu, _ = ordinate_set(KineticModel.maxwell(0.5), 64)
        assert np.all((mu > 0) & (mu < 6.0)) and np.all(np.diff(mu) > 0)


class TestConfig:
    def test_graded_edges(self):
        e = graded_edges(25.0, 100, 6.0)
        assert e[0] == 0.0 and e[-1] == pytest.approx(25.0)
        ratios = np.diff(e)[1:] / np.diff(e)[:-1]
        assert np.allclose(ratios, math.exp(6.0 / 100))

    def test_uniform_when_ungraded(self):
        assert np.allclose(np.diff(graded_edges(10.0, 10, 0.0)), 1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(domain_length=5.0), dict(ordinates=15), dict(cells=4), dict(cells=50, grading=6.0), dict(sweep_tol=0.0)],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(DomainError):
            OracleConfig(**kwargs)

    def test_with_cells(self):
        assert SMALL.with_cells(100).cells == 100 and SMALL.with_cells(100).ordinates == 16


class TestSolve:
    def test_zero_gradient_single_sweep(self):
        sol = solve_transport(KineticModel.cmfp(), KramersProblem(0.0), SMALL, richardson=False)
        assert sol.sweeps == 1 and np.all(sol.h == 0)

    def test_problem_model_pairing(self):
        with pytest.raises(DomainError):
            solve_transport(KineticModel.maxwell(0.5), KramersProblem(1.0), SMALL)
        with pytest.raises(DomainError):
            solve_transport(KineticModel.maxwell(0.3), DiffusionProblem(0.5, 1.0), SMALL)

    def test_sweep_budget(self):
        cfg = OracleConfig(cells=100, ordinates=8, grading=4.0, max_sweeps=5)
        with pytest.raises(IterationError) as info:
            solve_transport(KineticModel.cmfp(), KramersProblem(1.0), cfg, richardson=False)
        assert 0 < info.value.spectral_radius < 1

    def test_conservation(self):
        sol = solve_transport(KineticModel.maxwell(0.5), DiffusionProblem(0.5, 1.0), SMALL, richardson=False)
        # diamond differencing balances each cell up to the iteration residue
        assert np.max(np.abs(sol.conservation_residual())) < 1e-8

    def test_diffusion_background(self):
        sol = solve_transport(KineticModel.maxwell(0.5), DiffusionProblem(0.5, 1.0), SMALL)
        value, unc = extract_constant(sol)
        assert value == pytest.approx(2.0, rel=1e-3)
        assert abs(value - 2.0) <= max(unc, 1e-4)

    def test_kramers_small_mesh(self):
        sol = solve_transport(KineticModel.cmfp(), KramersProblem(1.0), SMALL)
        value, _ = extract_constant(sol)
        assert value / sol.weights.sum() == pytest.approx(2 * 0.5819457611, rel=1e-3)
        assert sol.spectral_radius > 0.99


def _fake(density, length=25.0, cells=200):
    cfg = OracleConfig(cells=cells, ordinates=2, grading=0.0)
    edges = graded_edges(length, cells, 0.0)
    x = 0.5 * (edges[1:] + edges[:-1])
    u = np.repeat(density(x)[:, None], 4, axis=1) / 1.0
    w = np.full(4, 0.25)
    mu = np.array([-0.7, -0.2, 0.2, 0.7])
    return OracleSolution(KineticModel.cmfp(), KramersProblem(1.0), cfg, edges, x, mu, w, u, u, 1, 0.0, 0.0)


class TestExtraction:
    def test_constant_recovered(self):
        value, unc = extract_constant(_fake(lambda x: 3.0 + 0 * x))
        assert value == pytest.approx(3.0, abs=1e-14) and unc < 1e-14

    def test_decaying_tail_recovered(self):
        value, unc = extract_constant(_fake(lambda x: 3.0 + np.exp(-x)))
        assert abs(value - 3.0) < 1e-5 and unc < 1e-5

    def test_drifting_field_rejected(self):
        with pytest.raises(NonAsymptoticError):
            extract_constant(_fake(lambda x: 3.0 + 0.01 * x))


class TestCompare:
    def test_diffusion_agrees(self, diffusion):
        sol = solve_transport(KineticModel.maxwell(0.5), DiffusionProblem(0.5, 1.0), OracleConfig(cells=500))
        report = compare(diffusion, sol)
        assert report["pass"], report
        assert report["rel_difference"] < 1e-3

    def test_short_domain_is_diagnosed(self, diffusion):
        cfg = OracleConfig(domain_length=5.0, min_length=1.0, cells=200, ordinates=16, grading=4.0)
        sol = solve_transport(KineticModel.maxwell(0.5), DiffusionProblem(0.5, 1.0), cfg)
        report = compare(diffusion, sol)
        assert not report["pass"]
        assert report["diagnosis"].startswith("non-asymptotic")

    def test_problem_mismatch(self, diffusion):
        sol = solve_transport(KineticModel.maxwell(0.5), DiffusionProblem(0.5, 2.0), SMALL, richardson=False)
        with pytest.raises(DomainError):
            compare(diffusion, sol)

    def test_refinement_levels(self):
        with pytest.raises(DomainError):
            refinement_study(KineticModel.cmfp(), KramersProblem(1.0), SMALL, levels=2)

