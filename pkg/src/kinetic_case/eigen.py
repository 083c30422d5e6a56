"""Half-range pairings of the singular eigenfunctions.

The continuum eigenfunction of either model is the distribution

    Phi_eta(mu) = kernel * eta * P 1/(eta - mu) + d(eta) lambda(eta) delta(eta - mu)

and only its pairings with smooth functions are numbers.  Every pairing is
therefore computed as a principal-value integral plus the explicit point
term of the delta function; nothing is discretised as a spike.

The scalar product is ``(f, g) = int_0^b rho(mu) f(mu) g(mu) dmu`` with
``rho = rho_factor * gamma``.  Because ``d(eta) * rho_factor(eta) = 1`` the
delta part of ``(f, Phi_eta)`` reduces to ``lambda(eta) gamma(eta) f(eta)``.
"""
from __future__ import annotations

import numpy as np

from .errors import ConsistencyError, DomainError, EndpointError

__all__ = ["EigenPairing", "ContinuumCoefficient"]


class ContinuumCoefficient:
    """Coefficient ``a(eta)`` of a continuum expansion.

    Holds the samples on both tanh-sinh rules of the spectral grid together
    with an exact evaluator.  ``discrete`` is the coefficient of the
    ``Phi_inf = 1`` mode (constant-mean-free-path model only).
    """

    def __init__(self, rules, func, discrete=0.0, samples=None):
        self.rules = rules
        self.func = func
        self.discrete = float(discrete)
        if samples is None:
            samples = (np.asarray(func(rules.a.nodes), dtype=float), np.asarray(func(rules.b.nodes), dtype=float))
        self.samples = samples

    @property
    def eta(self):
        return self.rules.a.nodes

    @property
    def values(self):
        return self.samples[0]

    def __call__(self, eta):
        eta = np.asarray(eta, dtype=float)
        if np.any(eta < self.rules.lo) or np.any(eta > self.rules.hi):
            raise DomainError("coefficient requested outside the spectral grid")
        return self.func(eta)

    def scaled(self, factor):
        """Coefficient multiplied by ``factor`` (samples are scaled, not recomputed)."""
        return ContinuumCoefficient(
            self.rules,
            lambda eta: factor * self.func(eta),
            factor * self.discrete,
            (factor * self.samples[0], factor * self.samples[1]),
        )

    def damped(self, x):
        """``a(eta) exp(-x / eta)``, the coefficient seen at distance ``x`` from the wall."""
        if x == 0:
            return self
        if x < 0:
            raise DomainError("x must be non-negative")

        def damp(eta):
            with np.errstate(divide="ignore", over="ignore"):
                return np.where(eta > 0, np.exp(-x / eta), 0.0)

        return ContinuumCoefficient(
            self.rules,
            lambda eta: self.func(eta) * damp(eta),
            self.discrete,
            (self.samples[0] * damp(self.rules.a.nodes), self.samples[1] * damp(self.rules.b.nodes)),
        )


class EigenPairing:
    """Pairings, normalisation, expansion and reconstruction for one model."""

    def __init__(self, xfn):
        if xfn.model is None:
            raise DomainError("EigenPairing needs a canonical function built for a kinetic model")
        self.xfn = xfn
        self.model = xfn.model
        self.rules = xfn.rules

    # -- weights ----------------------------------------------------------
    def rho(self, mu):
        return self.xfn.rho(mu)

    def _check_interior(self, eta):
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        if np.any(eta <= self.rules.lo) or np.any(eta >= self.rules.hi):
            raise EndpointError(f"eta must be interior to ({self.rules.lo}, {self.rules.hi})")
        return eta

    # -- pairings -----------------------------------------------------------
    def pair_smooth(self, f, eta, samples=None):
        """``(f, Phi_eta)`` for a smooth vectorised ``f``.

        ``samples`` may carry ``f`` on both rules of the grid when it is
        expensive to evaluate.
        """
        scalar = np.ndim(eta) == 0
        eta = self._check_interior(eta)
        if samples is None:
            samples = self.rules.sample(f)
        rho_a, rho_b = self.xfn.rho_nodes
        g = (rho_a * samples[0], rho_b * samples[1])
        gamma_eta = self.xfn.gamma(eta)
        f_eta = np.asarray(f(eta), dtype=float)
        g_eta = self.model.rho_factor(eta) * gamma_eta * f_eta
        pv = self.rules.pv(g, eta, g_eta)
        out = -self.model.kernel * eta * pv + self.model.lambda_real(eta) * gamma_eta * f_eta
        return out[0] if scalar else out

    def pair_discrete(self, f):
        """``(f, Phi_inf) = int rho f`` for the discrete mode ``Phi_inf = 1``."""
        if self.model.kind != "cmfp":
            raise DomainError("only the constant-mean-free-path model has the discrete mode Phi_inf")
        rho_a = self.xfn.rho_nodes[0]
        return float(self.rules.a.integrate(rho_a * f(self.rules.a.nodes)))

    def normalization(self, eta):
        """``N(eta) = d(eta) gamma(eta) |lambda^+(eta)|^2``."""
        scalar = np.ndim(eta) == 0
        eta = self._check_interior(eta)
        out = self.model.delta_normalizer(eta) * self.xfn.gamma(eta) * np.abs(self.model.lambda_plus(eta)) ** 2
        return out[0] if scalar else out

    # -- expansion ------------------------------------------------------------
    def expand(self, f):
        """Coefficients of ``f = discrete + int a(eta) Phi_eta d eta`` on the half range.

        For the constant-mean-free-path model the ``Phi_inf`` coefficient is
        ``(1, f) / (1, 1)``; the continuum part is then orthogonal to it.
        """
        discrete = 0.0
        target = f
        if self.model.kind == "cmfp":
            discrete = self.pair_discrete(f) / self.pair_discrete(np.ones_like)

            def target(mu):
                return np.asarray(f(mu), dtype=float) - discrete

        f_samples = self.rules.sample(target)

        def coefficient(eta):
            eta = np.asarray(eta, dtype=float)
            return self.pair_smooth(target, eta) / self._checked_norm(eta)

        samples = []
        for rule in (self.rules.a, self.rules.b):
            pairing = self.pair_smooth(target, rule.nodes, samples=f_samples)
            samples.append(pairing / self._checked_norm(rule.nodes))
        return ContinuumCoefficient(self.rules, coefficient, discrete, tuple(samples))

    def _checked_norm(self, eta):
        norm = self.normalization(eta)
        if np.any(np.abs(norm) < 1e-300):
            raise ConsistencyError("normalisation N(eta) vanishes on the spectral grid")
        return norm

    def coefficient_from(self, func, discrete=0.0):
        """Wrap an explicit ``a(eta)`` as a :class:`ContinuumCoefficient`."""
        return ContinuumCoefficient(self.rules, func, discrete)

    def reconstruct(self, coef, mu):
        """Evaluate ``discrete + int a(eta) Phi_eta(mu) d eta`` at velocities ``mu``.

        Inside the spectrum this is a principal value plus the delta term;
        for ``mu <= 0`` (or beyond the truncated spectrum) the integral is
        regular.
        """
        scalar = np.ndim(mu) == 0
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        vlo, vhi = self.model.velocity_range()
        if np.any(mu < vlo) or np.any(mu > vhi):
            raise DomainError(f"mu outside the velocity range [{vlo}, {vhi}]")
        k = self.model.kernel
        out = np.empty(mu.shape)
        inside = (mu > self.rules.lo) & (mu < self.rules.hi)
        g = (coef.samples[0] * self.rules.a.nodes, coef.samples[1] * self.rules.b.nodes)
        if inside.any():
            m = mu[inside]
            a_m = coef(m)
            pv = self.rules.pv(g, m, a_m * m)
            delta = self.model.delta_normalizer(m) * self.model.lambda_real(m) * a_m
            out[inside] = k * pv + delta
        outside = ~inside
        if outside.any():
            m = mu[outside]
            cauchy = self.rules.cauchy(g, m.astype(complex))
            out[outside] = k * cauchy.real
        out += coef.discrete
        return out[0] if scalar else out

    def smeared_normalization(self, b, eta):
        """``int b(eta') (Phi_eta, Phi_eta') d eta'`` by composing the module's quadratures.

        The inner integral over ``eta'`` is carried out first (it is
        :meth:`reconstruct` of ``b``); the result is then paired with
        ``Phi_eta``.  By the delta-normalisation theorem this equals
        ``N(eta) b(eta)``.
        """
        coef = ContinuumCoefficient(self.rules, b)
        recon = lambda mu: self.reconstruct(coef, mu)
        samples = (recon(self.rules.a.nodes), recon(self.rules.b.nodes))
        return self.pair_smooth(recon, eta, samples=samples)
