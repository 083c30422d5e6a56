"""Analytic half-space solutions.

Kramers isothermal slip (constant-mean-free-path model)
    ``h = 2 U0 + 2 G_v (x - mu) + int_0^1 exp(-x/eta) Phi_eta(mu) a(eta) d eta``,
    ``h(0, mu) = 0`` for ``mu > 0``.  The slip constant is ``U0 = V1 G_v`` and
    ``a(eta) = 2 G_v eta / N(eta)``.

Light-component diffusion (Maxwell model, ``0 < c < 1``)
    The wall data ``G_n / (1 - c) = int_0^inf Phi_eta(mu) a(eta) d eta`` give
    ``a(eta) = G_n/(1-c) * eta / N(eta)``.  The profile is the constant
    background ``K = G_n/(1-c)`` minus the damped continuum, so that
    ``h(0, mu) = 0`` for ``mu > 0`` and ``h -> K`` far from the wall.

Each coefficient is computed by two independent routes (``eta/N`` and the
closed form through ``X^+ lambda^-``) and the solver refuses to return a
solution whose routes disagree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import KineticModel, build_theta
from .eigen import ContinuumCoefficient, EigenPairing
from .errors import ConsistencyError, ConstructionError, DomainError
from .quadrature import TanhSinhRule
from .xfunction import CanonicalX

__all__ = [
    "KramersProblem",
    "DiffusionProblem",
    "HalfSpaceSolution",
    "solve_kramers",
    "solve_diffusion",
]

ROUTE_TOLERANCE = 1e-6
REALNESS_TOLERANCE = 1e-8


@dataclass(frozen=True)
class KramersProblem:
    G_v: float

    def __post_init__(self):
        if not math.isfinite(self.G_v):
            raise DomainError("G_v must be finite")

    name = "kramers"

    def parameters(self):
        return {"G_v": self.G_v}


@dataclass(frozen=True)
class DiffusionProblem:
    c: float
    G_n: float

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise DomainError(f"c must lie strictly inside (0, 1), got {self.c}")
        if not math.isfinite(self.G_n):
            raise DomainError("G_n must be finite")

    name = "diffusion"

    @property
    def background(self):
        return self.G_n / (1.0 - self.c)

    def parameters(self):
        return {"c": self.c, "G_n": self.G_n}


def _build(model, grid_size):
    xfn = CanonicalX(model, build_theta(model, grid_size))
    try:
        xfn.validate()
    except ConstructionError as exc:
        raise ConstructionError(f"solver refuses {model.name}: {exc}") from exc
    return xfn


def _route_mismatch(first, second):
    scale = max(np.max(np.abs(first)), 1e-300)
    return float(np.max(np.abs(first - second)) / scale)


class HalfSpaceSolution:
    """Solution of one of the two half-space problems.

    Attributes
    ----------
    constant : float
        ``U0`` for the Kramers problem, the background ``G_n/(1-c)`` for diffusion.
    coefficient : ContinuumCoefficient
        ``a(eta)`` on the spectral grid.
    sign : int
        ``+1`` if the continuum is added to the asymptotic profile, ``-1`` if subtracted.
    """

    def __init__(self, problem, pairing, constant, coefficient, sign, diagnostics):
        self.problem = problem
        self.pairing = pairing
        self.model = pairing.model
        self.constant = float(constant)
        self.coefficient = coefficient
        self.sign = sign
        self.diagnostics = dict(diagnostics)

    # -- asymptotic part ----------------------------------------------------
    def h_as(self, x, mu):
        mu = np.asarray(mu, dtype=float)
        if isinstance(self.problem, KramersProblem):
            return 2.0 * self.constant + 2.0 * self.problem.G_v * (x - mu)
        return np.full(mu.shape, self.constant)

    def m_as(self, x):
        """Velocity average ``int w h_as dmu`` of the asymptotic profile."""
        x = np.asarray(x, dtype=float)
        if isinstance(self.problem, KramersProblem):
            return 2.0 * self.constant + 2.0 * self.problem.G_v * x
        return self.model.weight_moment() * self.constant * np.ones_like(x)

    # -- full solution --------------------------------------------------------
    def evaluate_h(self, x, mu):
        """``h(x, mu)`` for ``x >= 0`` and ``mu`` in the velocity range."""
        x = float(x)
        if x < 0:
            raise DomainError("x must be non-negative")
        continuum = self.pairing.reconstruct(self.coefficient.damped(x), mu)
        return self.h_as(x, mu) + self.sign * continuum

    def boundary_residual(self, mu):
        """``|h(0, mu)|`` on incoming velocities; zero for an exact solution."""
        mu = np.asarray(mu, dtype=float)
        if np.any(mu <= 0):
            raise DomainError("the wall condition applies to mu > 0")
        return np.abs(self.evaluate_h(0.0, mu))

    def defect_spectral(self, x):
        """``m(x) - m_as(x)`` from the spectral integral ``kernel * int a exp(-x/eta) d eta``."""
        rule = self.coefficient.rules.a
        out = []
        for xx in np.atleast_1d(np.asarray(x, dtype=float)):
            damped = self.coefficient.damped(float(xx))
            out.append(self.sign * self.model.kernel * rule.integrate(damped.samples[0]))
        return np.array(out)

    def moment_profile(self, x_grid, n_velocity=129):
        """Density moment ``m(x) = int w(mu) h(x, mu) dmu`` over the full velocity range.

        Returns a dict of arrays ``x, m, m_as, defect``.
        """
        x_grid = np.asarray(x_grid, dtype=float)
        if np.any(x_grid < 0):
            raise DomainError("x must be non-negative")
        vlo, vhi = self.model.velocity_range()
        rules = [TanhSinhRule(vlo, 0.0, n_velocity), TanhSinhRule(0.0, vhi, n_velocity)]
        m = []
        for x in x_grid:
            total = 0.0
            for rule in rules:
                h = self.evaluate_h(float(x), rule.nodes)
                total += rule.integrate(self.model.weight(rule.nodes) * h)
            m.append(total)
        m = np.array(m)
        m_as = self.m_as(x_grid)
        return {"x": x_grid, "m": m, "m_as": m_as, "defect": m - m_as}

    def scaled(self, factor):
        """Solution of the same problem with its driving gradient multiplied by ``factor``."""
        if isinstance(self.problem, KramersProblem):
            problem = KramersProblem(factor * self.problem.G_v)
        else:
            problem = DiffusionProblem(self.problem.c, factor * self.problem.G_n)
        return HalfSpaceSolution(
            problem,
            self.pairing,
            factor * self.constant,
            self.coefficient.scaled(factor),
            self.sign,
            self.diagnostics,
        )

    def summary(self, mu_check=None):
        """JSON-ready summary with residual statistics."""
        if mu_check is None:
            mu_check = self.default_check_grid()
        res = self.boundary_residual(mu_check)
        return {
            "problem": self.problem.name,
            "model": self.model.name,
            "parameters": self.problem.parameters(),
            "U0_or_background": self.constant,
            "residual_stats": {
                "boundary_max": float(np.max(res)),
                "boundary_mean": float(np.mean(res)),
                "boundary_mu_range": [float(np.min(mu_check)), float(np.max(mu_check))],
                **self.diagnostics,
            },
        }

    def default_check_grid(self):
        if self.model.kind == "cmfp":
            return np.linspace(0.05, 0.95, 91)
        return np.linspace(0.1, 3.0, 59)


def solve_kramers(problem, grid_size=None, xfn=None):
    """Slip problem for the constant-mean-free-path model."""
    if not isinstance(problem, KramersProblem):
        problem = KramersProblem(float(problem))
    if xfn is None:
        xfn = _build(KineticModel.cmfp(), grid_size)
    pairing = EigenPairing(xfn)
    gv = problem.G_v
    u0 = xfn.v1() * gv

    def a_eta_over_n(eta):
        return 2.0 * gv * eta / pairing.normalization(eta)

    def a_closed(eta):
        val = (1.0 - eta * eta) / (xfn.X_plus(eta) * np.conj(xfn.model.lambda_plus(eta)))
        return 2.0 * gv * val

    coef, diag = _two_routes(pairing, a_eta_over_n, a_closed)
    return HalfSpaceSolution(problem, pairing, u0, coef, +1, diag)


def solve_diffusion(problem, grid_size=None, xfn=None):
    """Light-component diffusion problem for the Maxwell model with ``0 < c < 1``."""
    if xfn is None:
        xfn = _build(KineticModel.maxwell(problem.c), grid_size)
    elif xfn.model != KineticModel.maxwell(problem.c):
        raise DomainError("canonical function was built for a different model")
    pairing = EigenPairing(xfn)
    K = problem.background

    def a_eta_over_n(eta):
        return K * eta / pairing.normalization(eta)

    def a_closed(eta):
        val = np.exp(-eta * eta) / (xfn.X_plus(eta) * np.conj(xfn.model.lambda_plus(eta)))
        return K * val

    coef, diag = _two_routes(pairing, a_eta_over_n, a_closed)
    return HalfSpaceSolution(problem, pairing, K, coef, -1, diag)


def _two_routes(pairing, primary, closed_form):
    rules = pairing.rules
    first = np.concatenate([primary(rules.a.nodes), primary(rules.b.nodes)])
    second = np.concatenate([closed_form(rules.a.nodes), closed_form(rules.b.nodes)])
    imag = float(np.max(np.abs(second.imag)) / max(np.max(np.abs(second)), 1e-300))
    if imag > REALNESS_TOLERANCE:
        raise ConsistencyError(f"continuum coefficient is not real (relative imaginary part {imag:.3e})")
    mismatch = _route_mismatch(first, second.real) if np.any(first) else float(np.max(np.abs(second)))
    if mismatch > ROUTE_TOLERANCE:
        raise ConstructionError(f"the two routes to a(eta) disagree by {mismatch:.3e}")
    n_a = rules.a.nodes.size
    coef = ContinuumCoefficient(rules, primary, samples=(first[:n_a], first[n_a:]))
    return coef, {"route_mismatch": mismatch, "coefficient_imag": imag}
