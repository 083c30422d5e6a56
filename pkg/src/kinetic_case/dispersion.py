"""Dispersion functions of the two model kinetic equations.

Two collision models are supported.

``maxwell``
    ``mu h_x + h = (c / sqrt(pi)) int exp(-mu'^2) h(x, mu') dmu'`` on the whole
    velocity line, continuous spectrum ``(0, inf)`` for half-space problems.
``cmfp``
    Constant mean free path, ``mu h_x + h = (3/4) int_{-1}^{1} (1 - mu'^2) h dmu'``,
    continuous spectrum ``(0, 1)``.

For both, ``lambda(z) = 1 + z int w(t) / (t - z) dt`` with the model's kernel
weight ``w``.  On the cut the boundary values are
``lambda^{+-}(mu) = lambda_real(mu) +- i pi mu w(mu)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import dawsn

from .errors import BranchError, CutError, DomainError, EndpointError
from .quadrature import DEFAULT_CONFIG, Interval, RulePair

__all__ = [
    "KineticModel",
    "BoundaryPair",
    "ThetaTable",
    "lambda0",
    "lambda_cmfp",
    "lambda_maxwell",
    "boundary_values",
    "build_theta",
    "default_grid_size",
]

SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class KineticModel:
    """One of the two model kinetic equations.

    Use :meth:`maxwell` or :meth:`cmfp` rather than the raw constructor.
    """

    kind: str
    c: float = 1.0

    def __post_init__(self):
        if self.kind not in ("maxwell", "cmfp"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if self.kind == "maxwell" and not 0.0 < self.c <= 1.0:
            raise DomainError(f"c must lie in (0, 1], got {self.c}")
        if self.kind == "cmfp" and self.c != 1.0:
            raise DomainError("the constant-mean-free-path model has no parameter c")

    @classmethod
    def maxwell(cls, c):
        return cls("maxwell", float(c))

    @classmethod
    def cmfp(cls):
        return cls("cmfp")

    @property
    def name(self):
        return "cmfp" if self.kind == "cmfp" else f"maxwell(c={self.c:g})"

    # -- geometry ----------------------------------------------------------
    @property
    def kernel(self):
        """Constant in front of the scattering integral."""
        return 0.75 if self.kind == "cmfp" else self.c / SQRT_PI

    def spectrum(self):
        """Half-range continuous spectrum as an :class:`Interval`."""
        if self.kind == "cmfp":
            return Interval(0.0, 1.0)
        return Interval(0.0, math.inf, gaussian=True)

    def spectrum_end(self, config=DEFAULT_CONFIG):
        """Finite right end used for quadrature (``1`` or the Gaussian cutoff)."""
        return 1.0 if self.kind == "cmfp" else config.semiinfinite_cutoff

    def velocity_range(self, config=DEFAULT_CONFIG):
        end = self.spectrum_end(config)
        return -end, end

    # -- weights -----------------------------------------------------------
    def rho_factor(self, mu):
        """Velocity factor of the orthogonality weight: ``exp(-mu^2)`` or ``1 - mu^2``."""
        mu = np.asarray(mu, dtype=float)
        if self.kind == "cmfp":
            return 1.0 - mu * mu
        return np.exp(-mu * mu)

    def weight(self, mu):
        """Kernel weight ``w(mu) = kernel * rho_factor(mu)``."""
        return self.kernel * self.rho_factor(mu)

    def delta_normalizer(self, eta):
        """Coefficient ``d(eta)`` of ``lambda(eta) delta(eta - mu)`` in the eigenfunction."""
        eta = np.asarray(eta, dtype=float)
        if self.kind == "cmfp":
            return 1.0 / (1.0 - eta * eta)
        return np.exp(eta * eta)

    def weight_moment(self):
        """``int w`` over the full velocity range (1 for cmfp, ``c`` for maxwell)."""
        return 1.0 if self.kind == "cmfp" else self.c

    # -- dispersion on the real axis --------------------------------------
    def lambda_real(self, mu):
        """Principal-value (on-axis) part of the dispersion function."""
        mu = np.asarray(mu, dtype=float)
        if self.kind == "cmfp":
            with np.errstate(divide="ignore", invalid="ignore"):
                log = np.log((1.0 - mu) / (1.0 + mu))
                lam0 = 1.0 + 0.5 * mu * log
                out = -0.5 + 1.5 * (1.0 - mu * mu) * lam0
            return np.where(np.abs(mu) == 1.0, -0.5, out)
        return 1.0 - 2.0 * self.c * mu * dawsn(mu)

    def lambda_imag(self, mu):
        """``Im lambda^+(mu) = pi mu w(mu)``."""
        mu = np.asarray(mu, dtype=float)
        return np.pi * mu * self.weight(mu)

    def lambda_plus(self, mu):
        return self.lambda_real(mu) + 1j * self.lambda_imag(mu)

    def lambda_plus_derivative(self, mu):
        """``d lambda^+ / d mu`` on the open spectrum."""
        mu = np.asarray(mu, dtype=float)
        if self.kind == "cmfp":
            log = np.log((1.0 - mu) / (1.0 + mu))
            lam0 = 1.0 + 0.5 * mu * log
            d_real = 1.5 * (-2.0 * mu * lam0 + 0.5 * (1.0 - mu * mu) * log - mu)
            d_imag = 0.75 * np.pi * (1.0 - 3.0 * mu * mu)
        else:
            F = dawsn(mu)
            d_real = -2.0 * self.c * (F + mu * (1.0 - 2.0 * mu * F))
            d_imag = self.c * SQRT_PI * (1.0 - 2.0 * mu * mu) * np.exp(-mu * mu)
        return d_real + 1j * d_imag

    def quadrature_breaks(self, config=DEFAULT_CONFIG, max_depth=10):
        """Panel breakpoints for quadrature over the spectrum.

        ``theta`` has a nearby complex singularity wherever ``lambda^+``
        nearly vanishes; its distance from the axis is estimated by
        ``|lambda^+| / |lambda^+'|`` and panels are halved until they are no
        wider than twice that distance.
        """
        end = self.spectrum_end(config)
        if self.kind == "cmfp":
            return np.array([0.0, end])
        coarse = [b for b in np.arange(0.0, 5.0, 0.5) if b < end] + [end]
        panels = list(zip(coarse[:-1], coarse[1:]))
        out = []
        while panels:
            a, b = panels.pop()
            mu = np.linspace(a, b, 65)
            dist = np.abs(self.lambda_plus(mu)) / np.maximum(np.abs(self.lambda_plus_derivative(mu)), 1e-300)
            if b - a > 2.0 * dist.min() and (coarse[-1] - coarse[0]) / (b - a) < 2**max_depth * 10:
                m = 0.5 * (a + b)
                panels.extend([(a, m), (m, b)])
            else:
                out.append(a)
        return np.array(sorted(out) + [end])

    def lambda_at(self, z):
        """Analytic dispersion function off the cut."""
        if self.kind == "cmfp":
            return lambda_cmfp(z)
        return lambda_maxwell(z, self.c)

    def theta_limits(self, config=DEFAULT_CONFIG):
        """Limits of the continuous argument at both ends of the spectrum."""
        if self.kind == "cmfp":
            return 0.0, math.pi
        end = self.spectrum_end(config)
        lam = complex(self.lambda_plus(end))
        return 0.0, math.atan2(lam.imag, lam.real)


@dataclass(frozen=True)
class BoundaryPair:
    """Boundary values ``lambda^{+-}`` at a point ``mu`` of the cut."""

    lambda_plus: complex
    lambda_minus: complex
    mu: float


def _is_on_segment(z, lo, hi):
    return z.imag == 0.0 and lo <= z.real <= hi


def lambda0(z):
    """``lambda_0(z) = 1 + (z/2) ln((z - 1)/(z + 1))``, analytic off ``[-1, 1]``.

    The logarithm is written with ``(z-1)/(z+1)``, which is negative real
    exactly on the cut, so the principal branch is continuous elsewhere.
    """
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    if _is_on_segment(z, -1.0, 1.0):
        raise CutError(f"z = {z} lies on the cut [-1, 1]; use boundary_values")
    return 1.0 + 0.5 * z * np.log((z - 1.0) / (z + 1.0))


def lambda_cmfp(z):
    """Dispersion function of the constant-mean-free-path model."""
    z = complex(z)
    return -0.5 + 1.5 * (1.0 - z * z) * lambda0(z)


def lambda_maxwell(z, c, config=DEFAULT_CONFIG):
    """Dispersion function of the Maxwell-weighted model, off the real axis.

    Evaluated as a truncated Cauchy integral over the whole velocity line.
    """
    z = complex(z)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"c must lie in (0, 1], got {c}")
    if z == 0:
        return 1.0 + 0.0j
    if z.imag == 0.0:
        raise CutError(f"z = {z} lies on the real axis; use boundary_values")
    from .quadrature import cauchy_integral

    T = config.semiinfinite_cutoff
    integral = cauchy_integral(lambda t: math.exp(-t * t), Interval(-T, T), z, config)
    return 1.0 + z * c / SQRT_PI * integral


def boundary_values(model, mu):
    """Boundary values of the dispersion function on the cut at ``mu``."""
    mu = float(mu)
    lo, hi = model.spectrum().lo, model.spectrum().hi
    if mu <= lo or mu >= hi:
        raise EndpointError(f"mu = {mu} is not interior to the spectrum ({lo}, {hi})")
    lam = complex(model.lambda_plus(mu))
    return BoundaryPair(lam, lam.conjugate(), mu)


class ThetaTable:
    """Continuous branch of ``theta(mu) = arg lambda^+(mu)`` with ``theta(0) = 0``.

    The samples live on the nodes of a :class:`RulePair` (tanh-sinh nodes,
    clustered geometrically at both ends).  ``theta_fn`` evaluates the same
    branch at arbitrary points.
    """

    def __init__(self, rules, theta_fn, theta_a, theta_b, endpoint_limits, model=None):
        self.rules = rules
        self.theta_fn = theta_fn
        self.theta_a = theta_a
        self.theta_b = theta_b
        self.endpoint_limits = tuple(float(v) for v in endpoint_limits)
        self.model = model
        order = np.argsort(np.concatenate([rules.a.nodes, rules.b.nodes]))
        self.grid = np.concatenate([rules.a.nodes, rules.b.nodes])[order]
        self.theta = np.concatenate([theta_a, theta_b])[order]
        self.kappa = int(round((self.endpoint_limits[1] - self.endpoint_limits[0]) / math.pi))

    def __call__(self, mu):
        return self.theta_fn(mu)

    @property
    def interval(self):
        return self.rules.lo, self.rules.hi

    @classmethod
    def synthetic(cls, func, lo=0.0, hi=1.0, grid_size=129):
        """Table for an arbitrary vectorised ``func``; used for controlled experiments."""
        rules = RulePair(lo, hi, grid_size)
        fn = lambda mu: np.broadcast_to(func(np.asarray(mu, dtype=float)), np.shape(mu)) * 1.0
        limits = (float(fn(lo)), float(fn(hi)))
        return cls(rules, fn, fn(rules.a.nodes), fn(rules.b.nodes), limits)


def _principal_arg(model, mu):
    lam_r = model.lambda_real(mu)
    lam_i = model.lambda_imag(mu)
    return np.arctan2(lam_i, lam_r)


def default_grid_size(model):
    """Nodes per quadrature panel: one wide panel for cmfp, several narrow ones for maxwell."""
    return 257 if model.kind == "cmfp" else 65


def build_theta(model, grid_size=None, config=DEFAULT_CONFIG, max_refine=12):
    """Tabulate the continuous argument of ``lambda^+`` on the spectrum.

    ``grid_size`` is the number of tanh-sinh nodes per quadrature panel
    (see :meth:`KineticModel.quadrature_breaks`).

    The argument is unwrapped along the sorted grid starting from
    ``theta(0) = 0``; any jump of ``pi/2`` or more is refined by bisection
    before unwrapping.  Raises :class:`BranchError` if that fails.
    """
    if grid_size is None:
        grid_size = default_grid_size(model)
    if grid_size < 64:
        raise DomainError("grid_size must be at least 64")
    hi = model.spectrum_end(config)
    rules = RulePair(0.0, hi, grid_size, breaks=model.quadrature_breaks(config))
    grid = np.concatenate([[0.0], np.sort(np.concatenate([rules.a.nodes, rules.b.nodes])), [hi]])
    lim_lo, lim_hi = model.theta_limits(config)
    raw = _principal_arg(model, grid)
    raw[0], raw[-1] = lim_lo, lim_hi

    for _ in range(max_refine):
        steps = np.abs(np.angle(np.exp(1j * np.diff(raw))))
        bad = np.nonzero(steps >= 0.5 * math.pi)[0]
        if bad.size == 0:
            break
        mids = 0.5 * (grid[bad] + grid[bad + 1])
        grid = np.insert(grid, bad + 1, mids)
        raw = np.insert(raw, bad + 1, _principal_arg(model, mids))
    else:
        raise BranchError(f"theta for {model.name} could not be unwrapped after {max_refine} refinements")

    unwrapped = np.unwrap(raw)
    unwrapped -= unwrapped[0] - lim_lo
    offsets = np.round((unwrapped - raw) / (2 * math.pi))
    if np.any(offsets != 0):
        # keep the branch offsets so theta_fn reproduces the table between samples
        def theta_fn(mu):
            mu = np.asarray(mu, dtype=float)
            k = offsets[np.clip(np.searchsorted(grid, mu), 0, grid.size - 1)]
            return _principal_arg(model, mu) + 2 * math.pi * k

        limits = (unwrapped[0], unwrapped[-1])
    else:

        def theta_fn(mu):
            return _principal_arg(model, mu)

        limits = (lim_lo, lim_hi)

    table = ThetaTable(
        rules,
        theta_fn,
        theta_fn(rules.a.nodes),
        theta_fn(rules.b.nodes),
        limits,
        model=model,
    )
    if table.kappa not in (0, 1):
        raise BranchError(f"winding index {table.kappa} outside {{0, 1}} for {model.name}")
    return table
