"""Canonical solution ``X(z)`` of the homogeneous Riemann problem.

``X^+(mu) / X^-(mu) = lambda^+(mu) / lambda^-(mu)`` on the spectrum.  With
``theta`` the continuous argument of ``lambda^+`` the solution is an
exponential of a Cauchy integral of ``theta``.  Its behaviour at infinity
depends on the winding index of ``theta``:

* winding 1: ``X(z) = exp(V(z)) / z`` with ``V(z) = (1/pi) int (theta - pi)/(t - z) dt``;
* winding 0: ``X(z) = exp(V(z))`` with ``V(z) = (1/pi) int theta/(t - z) dt``.

The weight ``gamma(mu) = mu X^+(mu) / lambda^+(mu)`` is real because the phases
of ``X^+`` and ``lambda^+`` cancel.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .errors import ConsistencyError, ConstructionError, DomainError, EndpointError
from .quadrature import DEFAULT_CONFIG

__all__ = ["Normalization", "CanonicalX", "GammaWeight", "default_samples"]

IDENTITY_REJECT = 1e-4
GAMMA_IMAG_LIMIT = 1e-6


class Normalization(enum.Enum):
    UNIT_AT_INFINITY = "unit_at_infinity"
    ONE_OVER_Z = "one_over_z"

    @classmethod
    def for_winding(cls, kappa):
        return cls.ONE_OVER_Z if kappa == 1 else cls.UNIT_AT_INFINITY


def default_samples(model):
    """Off-cut points used to check the integral representation of ``X``."""
    if model.kind == "cmfp":
        return [2.0, -1.5, 0.5 + 0.5j, 3.0j, 1.5 - 0.7j]
    return [1.0 + 1.0j, -2.0, 3.0j, 0.5 - 0.5j, 4.0 + 2.0j]


class CanonicalX:
    """Evaluator for ``V(z)``, ``X(z)``, ``X^+(mu)`` and ``gamma(mu)``.

    Parameters
    ----------
    model : KineticModel or None
        ``None`` is allowed for synthetic theta tables; only ``V``, ``X`` and
        ``v1`` are then available.
    theta : ThetaTable
    normalization : Normalization, optional
        Defaults to the choice implied by the measured winding index.
    """

    def __init__(self, model, theta, normalization=None, config=DEFAULT_CONFIG):
        self.model = model
        self.theta = theta
        self.config = config
        if normalization is None:
            normalization = Normalization.for_winding(theta.kappa)
        self.normalization = Normalization(normalization)
        self.rules = theta.rules
        self._shift = math.pi if self.normalization is Normalization.ONE_OVER_Z else 0.0
        self._f = (theta.theta_a - self._shift, theta.theta_b - self._shift)
        self._gamma_nodes = None

    # -- integrand of V ----------------------------------------------------
    def _f_fn(self, mu):
        return self.theta(mu) - self._shift

    def _require_model(self):
        if self.model is None:
            raise DomainError("this operation needs a kinetic model, not a synthetic theta table")

    def _check_interior(self, mu):
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        lo, hi = self.rules.lo, self.rules.hi
        if np.any(mu <= lo) or np.any(mu >= hi):
            raise EndpointError(f"mu must be interior to ({lo}, {hi})")
        return mu

    # -- off the cut --------------------------------------------------------
    def V(self, z):
        """Cauchy integral ``(1/pi) int f(t)/(t - z) dt`` of the selected integrand."""
        scalar = np.ndim(z) == 0
        val = self.rules.cauchy(self._f, z, func=lambda t: float(self._f_fn(t)), config=self.config)
        val /= math.pi
        return val[0] if scalar else val

    def X(self, z):
        z_arr = np.asarray(z, dtype=complex)
        val = np.exp(self.V(z_arr))
        if self.normalization is Normalization.ONE_OVER_Z:
            val = val / z_arr
        return val

    # -- on the cut ---------------------------------------------------------
    def V_principal(self, mu):
        """Principal value of ``V`` on the cut (the real part of ``V^+``)."""
        mu = self._check_interior(mu)
        return self.rules.pv(self._f, mu, self._f_fn(mu)) / math.pi

    def _boundary_exponential(self, mu):
        # exp(V^+) = exp(V_p + i f(mu)) by the Plemelj formula
        return np.exp(self.V_principal(mu) + 1j * self._f_fn(mu))

    def X_plus(self, mu):
        """Boundary value ``X^+(mu)`` from above the cut."""
        scalar = np.ndim(mu) == 0
        mu = self._check_interior(mu)
        val = self._boundary_exponential(mu)
        if self.normalization is Normalization.ONE_OVER_Z:
            val = val / mu
        return val[0] if scalar else val

    def X_minus(self, mu):
        """Boundary value from below; ``X`` is real on the real axis off the cut."""
        return np.conj(self.X_plus(mu))

    def gamma_complex(self, mu):
        """``mu X^+(mu) / lambda^+(mu)`` before discarding the imaginary residue.

        The ``1/mu`` of the ``ONE_OVER_Z`` normalisation is cancelled
        analytically so no ``0 * inf`` appears near ``mu = 0``.
        """
        self._require_model()
        mu = self._check_interior(mu)
        val = self._boundary_exponential(mu) / self.model.lambda_plus(mu)
        if self.normalization is Normalization.UNIT_AT_INFINITY:
            val = val * mu
        return val

    def gamma(self, mu):
        """Real weight ``gamma(mu)``; raises if the imaginary residue is not negligible."""
        scalar = np.ndim(mu) == 0
        val = self.gamma_complex(mu)
        bad = np.abs(val.imag) > GAMMA_IMAG_LIMIT * np.abs(val.real)
        if np.any(bad):
            raise ConsistencyError(
                f"gamma has an imaginary part {np.max(np.abs(val.imag)):.3e}; "
                "branch or winding mismatch"
            )
        return val.real[0] if scalar else val.real

    @property
    def gamma_nodes(self):
        """``gamma`` sampled on both rules of the theta grid (cached)."""
        if self._gamma_nodes is None:
            self._gamma_nodes = (self.gamma(self.rules.a.nodes), self.gamma(self.rules.b.nodes))
        return self._gamma_nodes

    def rho(self, mu):
        """Orthogonality weight ``rho_factor(mu) * gamma(mu)``."""
        return self.model.rho_factor(mu) * self.gamma(mu)

    @property
    def rho_nodes(self):
        ga, gb = self.gamma_nodes
        return (
            self.model.rho_factor(self.rules.a.nodes) * ga,
            self.model.rho_factor(self.rules.b.nodes) * gb,
        )

    # -- derived quantities -------------------------------------------------
    def v1(self):
        """``V_1 = -(1/pi) int_0^1 (theta - pi) dmu``."""
        if self.model is not None and self.model.kind != "cmfp":
            raise DomainError("V1 is defined for the constant-mean-free-path model")
        return -self.rules.a.integrate(self.theta.theta_a - math.pi) / math.pi

    def moments(self):
        """``kernel * int rho_factor * gamma * mu**k`` for ``k = 0, 1``."""
        self._require_model()
        rho_a = self.rho_nodes[0]
        nodes = self.rules.a.nodes
        k = self.model.kernel
        return k * self.rules.a.integrate(rho_a), k * self.rules.a.integrate(nodes * rho_a)

    def representation_constant(self):
        """Constant term of the printed integral representation of ``X``.

        The Maxwell form reads ``X = 1 + ...``; the constant-mean-free-path
        form has no constant.
        """
        self._require_model()
        return 1.0 if self.model.kind == "maxwell" else 0.0

    def representation(self, z):
        """``const + kernel * int rho_factor(t) gamma(t) / (t - z) dt``."""
        self._require_model()
        scalar = np.ndim(z) == 0

        def density(t):
            return float(self.model.rho_factor(t) * self.gamma(t))

        val = self.rules.cauchy(self.rho_nodes, z, func=density, config=self.config)
        val = self.representation_constant() + self.model.kernel * val
        return val[0] if scalar else val

    def identity_residual(self, z_samples=None):
        """Largest ``|X(z) - representation(z)|`` over off-cut samples."""
        if z_samples is None:
            z_samples = default_samples(self.model)
        z = np.asarray(z_samples, dtype=complex)
        return float(np.max(np.abs(self.X(z) - self.representation(z))))

    def validate(self, z_samples=None):
        """Raise :class:`ConstructionError` unless the representation identity holds."""
        res = self.identity_residual(z_samples)
        if not res < IDENTITY_REJECT:
            raise ConstructionError(
                f"canonical function for {self.model.name} with {self.normalization.value} "
                f"normalisation fails its integral representation (residual {res:.3e})"
            )
        return res


class GammaWeight:
    """``gamma`` as a callable, with the realness diagnostic over the theta grid."""

    def __init__(self, xfn):
        self.xfn = xfn

    def __call__(self, mu):
        return self.xfn.gamma(mu)

    def max_imag_residue(self):
        """``sup |Im gamma| / |gamma|`` over the theta grid."""
        vals = np.concatenate(
            [self.xfn.gamma_complex(self.xfn.rules.a.nodes), self.xfn.gamma_complex(self.xfn.rules.b.nodes)]
        )
        return float(np.max(np.abs(vals.imag) / np.abs(vals)))
