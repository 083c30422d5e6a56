"""Singular-eigenfunction solutions of two half-space kinetic problems.

The package builds the dispersion functions of a Maxwell-weighted and a
constant-mean-free-path model kinetic equation, the canonical solution of
the associated Riemann boundary problem, the half-range pairings of the
singular eigenfunctions, analytic solutions of the Kramers slip and
light-component diffusion problems, and an independent discrete-ordinates
solver used to cross-check them.
"""
from .dispersion import KineticModel, ThetaTable, boundary_values, build_theta, lambda0, lambda_cmfp, lambda_maxwell
from .eigen import ContinuumCoefficient, EigenPairing
from .errors import (
    AccuracyError,
    BranchError,
    ConsistencyError,
    ConstructionError,
    CutError,
    DomainError,
    EndpointError,
    IterationError,
    KineticCaseError,
    NonAsymptoticError,
)
from .halfspace import DiffusionProblem, HalfSpaceSolution, KramersProblem, solve_diffusion, solve_kramers
from .quadrature import DEFAULT_CONFIG, Interval, QuadratureConfig, cauchy_integral, gauss_integral, pv_integral
from .xfunction import CanonicalX, GammaWeight, Normalization

__version__ = "0.1.0"

__all__ = [
    "KineticModel",
    "ThetaTable",
    "boundary_values",
    "build_theta",
    "lambda0",
    "lambda_cmfp",
    "lambda_maxwell",
    "ContinuumCoefficient",
    "EigenPairing",
    "AccuracyError",
    "BranchError",
    "ConsistencyError",
    "ConstructionError",
    "CutError",
    "DomainError",
    "EndpointError",
    "IterationError",
    "KineticCaseError",
    "NonAsymptoticError",
    "DiffusionProblem",
    "HalfSpaceSolution",
    "KramersProblem",
    "solve_diffusion",
    "solve_kramers",
    "DEFAULT_CONFIG",
    "Interval",
    "QuadratureConfig",
    "cauchy_integral",
    "gauss_integral",
    "pv_integral",
    "CanonicalX",
    "GammaWeight",
    "Normalization",
]
