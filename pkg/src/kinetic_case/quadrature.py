"""Singular-integral engine.

Two families of routines live here.

* Adaptive, scalar routines (:func:`pv_integral`, :func:`cauchy_integral`,
  :func:`gauss_integral`) built on QUADPACK through :func:`scipy.integrate.quad`.
  They accept arbitrary Python callables and are used wherever a single
  high-accuracy number is needed, and as oracles in the test-suite.

* Fixed tanh-sinh rules (:class:`TanhSinhRule`, :class:`RulePair`) that
  evaluate many principal-value and Cauchy integrals at once from cached
  samples.  A :class:`RulePair` holds two interlaced rules; a pole is always
  integrated on the member whose nearest node is farther away, so the
  subtracted integrand never suffers catastrophic cancellation.

Principal values are always computed by pole subtraction::

    PV int_a^b f(t)/(t-p) dt = int_a^b (f(t)-f(p))/(t-p) dt + f(p) ln((b-p)/(p-a))
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError, CutError, DomainError

__all__ = [
    "Interval",
    "QuadratureConfig",
    "DEFAULT_CONFIG",
    "gaussian_tail_bound",
    "pv_integral",
    "cauchy_integral",
    "gauss_integral",
    "TanhSinhRule",
    "RulePair",
]

NEAR_CUT_FRACTION = 1e-4


@dataclass(frozen=True)
class Interval:
    """Integration range ``[lo, hi]``; ``hi`` may be ``inf`` for Gaussian-decaying integrands."""

    lo: float
    hi: float
    gaussian: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")
        if math.isinf(self.lo):
            raise DomainError("lower limit must be finite")
        if math.isinf(self.hi) and not self.gaussian:
            raise DomainError("a semi-infinite interval needs a Gaussian-decaying integrand")

    @property
    def semi_infinite(self):
        return math.isinf(self.hi)

    def truncated(self, config):
        """Finite version of the interval, cut at ``config.semiinfinite_cutoff``."""
        if not self.semi_infinite:
            return self.lo, self.hi
        return self.lo, max(self.lo, 0.0) + config.semiinfinite_cutoff

    def contains(self, x):
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by the adaptive routines.

    ``semiinfinite_cutoff`` defaults to ``sqrt(-ln abs_tol) + cutoff_margin``.
    The margin absorbs polynomial prefactors such as ``t**3 exp(-t**2)``.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    cutoff_margin: float = 2.0
    semiinfinite_cutoff: float = field(default=None)

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.semiinfinite_cutoff is None:
            cutoff = math.sqrt(-math.log(self.abs_tol)) + self.cutoff_margin
            object.__setattr__(self, "semiinfinite_cutoff", cutoff)
        elif self.semiinfinite_cutoff <= 0:
            raise DomainError("semiinfinite_cutoff must be positive")


DEFAULT_CONFIG = QuadratureConfig()


def gaussian_tail_bound(cutoff, power=0):
    """Upper bound for ``int_T^inf t**power exp(-t**2) dt`` with ``T = cutoff > 0``.

    Uses ``t**k <= T**k exp(k (t - T) / T)`` which gives a closed-form
    majorant for every ``power >= 0`` when ``2 T**2 > power``.
    """
    T = float(cutoff)
    if T <= 0:
        raise DomainError("cutoff must be positive")
    slope = 2.0 * T - power / T
    if slope <= 0:
        return math.inf
    return T**power * math.exp(-T * T) / slope


def _quad(f, a, b, config, **kwargs):
    # QUADPACK needs more subintervals than break points
    limit = max(config.max_subdivisions, len(kwargs.get("points", ())) + 1)
    res = quad(
        f,
        a,
        b,
        epsabs=config.abs_tol,
        epsrel=config.rel_tol,
        limit=limit,
        full_output=1,
        **kwargs,
    )
    value, err = res[0], res[1]
    if len(res) > 3 and err > max(config.abs_tol, config.rel_tol * abs(value)):
        raise AccuracyError(f"quadrature did not converge: {res[3]}", estimate=value, error=err)
    return value


def pv_integral(f, interval, pole, config=DEFAULT_CONFIG):
    """Cauchy principal value of ``int f(t) / (t - pole) dt`` over ``interval``.

    Parameters
    ----------
    f : callable
        Real-valued, Hölder-continuous at ``pole``.
    interval : Interval
        Semi-infinite intervals are truncated at ``config.semiinfinite_cutoff``.
    pole : float
        Must lie strictly inside the (truncated) interval.
    """
    a, b = interval.truncated(config)
    pole = float(pole)
    if not a < pole < b:
        raise DomainError(f"pole {pole} is not strictly inside [{a}, {b}]")
    fp = float(f(pole))

    def subtracted(t):
        if t == pole:
            return 0.0
        return (f(t) - fp) / (t - pole)

    regular = _quad(subtracted, a, b, config, points=[pole])
    return regular + fp * math.log((b - pole) / (pole - a))


def cauchy_integral(f, interval, z, config=DEFAULT_CONFIG):
    """Cauchy-type integral ``int f(t) / (t - z) dt`` for ``z`` off the cut.

    When ``z`` is within ``1e-4 * length`` of the cut, the linear part of
    ``f`` at ``Re z`` is subtracted and restored through the complex logarithm.
    """
    a, b = interval.truncated(config)
    z = complex(z)
    hi_cut = math.inf if interval.semi_infinite else b
    if z.imag == 0.0 and interval.lo <= z.real <= hi_cut:
        raise CutError(f"z = {z} lies on the cut; use pv_integral and the Plemelj formulae")
    length = b - a
    x0, y0 = z.real, z.imag

    def split(g):
        pts = _breakpoints(a, b, x0, abs(y0))
        re = _quad(lambda t: g(t).real, a, b, config, **pts)
        im = _quad(lambda t: g(t).imag, a, b, config, **pts)
        return complex(re, im)

    if abs(y0) < NEAR_CUT_FRACTION * length and a < x0 < b:
        # subtract f(x0) + f1 (t - x0) and add both back in closed form; the
        # identity holds for any f1, a finite-difference slope just makes the
        # remainder smooth at the scale of |Im z|
        f0 = float(f(x0))
        h = 1e-6 * length
        lo, hi = max(a, x0 - h), min(b, x0 + h)
        f1 = (float(f(hi)) - float(f(lo))) / (hi - lo)
        log = np.log(b - z) - np.log(a - z)
        body = split(lambda t: (f(t) - f0 - f1 * (t - x0)) / (t - z))
        return body + f0 * log + f1 * ((b - a) + (z - x0) * log)
    return split(lambda t: f(t) / (t - z))


def _breakpoints(a, b, x0, width=0.0):
    # extra breaks at a few multiples of |Im z| resolve the near-cut bump
    if not a < x0 < b:
        return {}
    pts = {x0}
    if width > 0.0:
        pts.update(p for k in (1, 10, 100) for p in (x0 - k * width, x0 + k * width) if a < p < b)
    return {"points": sorted(pts)}


def gauss_integral(f, interval, config=DEFAULT_CONFIG):
    """Plain adaptive integral of a non-singular integrand."""
    a, b = interval.truncated(config)
    return _quad(f, a, b, config)


# ---------------------------------------------------------------------------
# Fixed tanh-sinh rules
# ---------------------------------------------------------------------------

_TMAX = 3.0


class TanhSinhRule:
    """Composite tanh-sinh (double-exponential) rule.

    Each panel between consecutive ``breaks`` carries its own tanh-sinh
    rule, so nodes cluster geometrically at the panel ends.  With a single
    panel this is the classical rule, which suits integrands with
    logarithmic endpoint behaviour.
    """

    def __init__(self, lo, hi, n, shifted=False, breaks=None):
        if n < 3:
            raise DomainError("a tanh-sinh rule needs at least 3 nodes per panel")
        if not lo < hi or math.isinf(hi):
            raise DomainError("tanh-sinh rules need a finite, non-empty interval")
        self.lo, self.hi = float(lo), float(hi)
        if breaks is None:
            breaks = (self.lo, self.hi)
        breaks = np.asarray(breaks, dtype=float)
        if breaks[0] != self.lo or breaks[-1] != self.hi or np.any(np.diff(breaks) <= 0):
            raise DomainError("breaks must increase from lo to hi")
        self.breaks = breaks
        self.step = 2.0 * _TMAX / (n - 1)
        t = -_TMAX + self.step * np.arange(n)
        if shifted:
            t = t[:-1] + 0.5 * self.step
        u = 0.5 * np.pi * np.sinh(t)
        unit_lo = 1.0 / (1.0 + np.exp(-2.0 * u))
        unit_hi = 1.0 / (1.0 + np.exp(2.0 * u))
        unit_w = self.step * 0.5 * np.pi * np.cosh(t) / (2.0 * np.cosh(u) ** 2)
        nodes, weights = [], []
        for a, b in zip(breaks[:-1], breaks[1:]):
            nodes.append(np.where(u < 0, a + (b - a) * unit_lo, b - (b - a) * unit_hi))
            weights.append((b - a) * unit_w)
        self.nodes = np.concatenate(nodes)
        self.weights = np.concatenate(weights)
        self.shifted = shifted

    def __len__(self):
        return self.nodes.size

    def integrate(self, values):
        """Sum of ``weights * values`` along the last axis."""
        return np.asarray(values) @ self.weights

    def nearest_distance(self, points):
        points = np.asarray(points, dtype=float)
        idx = np.clip(np.searchsorted(self.nodes, points), 1, self.nodes.size - 1)
        left = np.abs(points - self.nodes[idx - 1])
        right = np.abs(self.nodes[idx] - points)
        return np.minimum(left, right)

    def local_spacing(self, points):
        """Node spacing near ``points`` (clamped into the interval)."""
        x = np.clip(np.asarray(points, dtype=float), self.lo, self.hi)
        idx = np.clip(np.searchsorted(self.nodes, x), 1, self.nodes.size - 1)
        return self.nodes[idx] - self.nodes[idx - 1]


class RulePair:
    """Two interlaced tanh-sinh rules on the same interval."""

    def __init__(self, lo, hi, n, breaks=None):
        self.lo, self.hi = float(lo), float(hi)
        self.a = TanhSinhRule(lo, hi, n, breaks=breaks)
        self.b = TanhSinhRule(lo, hi, n, shifted=True, breaks=breaks)
        self.breaks = self.a.breaks

    @property
    def rules(self):
        return self.a, self.b

    def sample(self, func):
        """Evaluate a vectorised ``func`` on the nodes of both rules."""
        return func(self.a.nodes), func(self.b.nodes)

    def pv(self, samples, poles, pole_values):
        """Principal values ``PV int g(t)/(t - p) dt`` for interior poles ``p``.

        ``samples`` is the pair returned by :meth:`sample` for ``g`` and
        ``pole_values`` holds ``g(p)``.
        """
        poles = np.atleast_1d(np.asarray(poles, dtype=float))
        pole_values = np.broadcast_to(np.asarray(pole_values), poles.shape)
        if np.any(poles <= self.lo) or np.any(poles >= self.hi):
            raise DomainError("principal-value poles must be interior")
        dtype = np.result_type(samples[0], pole_values, float)
        out = np.empty(poles.shape, dtype=dtype)
        use_a = self.a.nearest_distance(poles) >= self.b.nearest_distance(poles)
        logs = np.log((self.hi - poles) / (poles - self.lo))
        for rule, vals, mask in ((self.a, samples[0], use_a), (self.b, samples[1], ~use_a)):
            if not mask.any():
                continue
            p = poles[mask]
            gp = pole_values[mask]
            q = (vals[None, :] - gp[:, None]) / (rule.nodes[None, :] - p[:, None])
            out[mask] = q @ rule.weights + gp * logs[mask]
        return out

    def cauchy(self, samples, z, func=None, config=DEFAULT_CONFIG):
        """Cauchy integrals ``int g(t)/(t - z) dt`` for ``z`` off ``[lo, hi]``.

        Points closer to the cut than a few node spacings are handed to the
        adaptive :func:`cauchy_integral`, which needs the callable ``func``.
        """
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape, dtype=complex)
        rule = self.a
        nearest_x = np.clip(z.real, self.lo, self.hi)
        dist = np.hypot(z.real - nearest_x, z.imag)
        near = dist < 8.0 * rule.local_spacing(nearest_x)
        near &= (z.real > self.lo) & (z.real < self.hi)
        far = ~near
        if far.any():
            out[far] = (samples[0][None, :] / (rule.nodes[None, :] - z[far][:, None])) @ rule.weights
        if near.any():
            if func is None:
                raise DomainError("near-cut Cauchy integral needs the integrand as a callable")
            interval = Interval(self.lo, self.hi)
            out[near] = [cauchy_integral(func, interval, zz, config) for zz in z[near]]
        return out
