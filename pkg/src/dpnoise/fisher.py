"""Moments and Fisher information of norm-power densities.

For ``X`` with density proportional to ``exp(-||x||_p^alpha)`` on R^n the
Fisher information matrix is a multiple ``lambda * I`` of the identity (the
density is invariant under sign flips and cyclic coordinate shifts), so a
single scalar describes it. All Gamma ratios are evaluated as differences of
``gammaln`` so that large ``n`` does not overflow.

Formulas take coefficient ``c = 1`` unless a ``c`` argument is given; under
coefficient ``c`` the noise is ``c^{-1/alpha}`` times the ``c = 1`` noise, so
Fisher information scales by ``c^{2/alpha}`` and the second moment by
``c^{-2/alpha}``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import gammaln

from dpnoise.errors import DomainError, NumericError
from dpnoise.lp_sampler import NormPowerDensity, sample_norm_power

_LOG_MAX = math.log(np.finfo(float).max)


def _check(n, p, alpha, c=1.0):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"p must be finite and >= 1, got {p}")
    if not (alpha >= 1.0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be finite and >= 1, got {alpha}")
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"c must be positive and finite, got {c}")


def _exp_or_raise(log_value: float, what: str) -> float:
    if log_value > _LOG_MAX:
        raise NumericError(f"{what} overflows float64; request log=True")
    return math.exp(log_value)


def gamma_moment(k: float, m: float) -> float:
    """``m``-th moment of ``Gamma(k, 1)``: ``Gamma(m+k)/Gamma(k)``."""
    if not k > 0.0 or not m + k > 0.0:
        raise DomainError(f"need k > 0 and m + k > 0, got k={k}, m={m}")
    return math.exp(gammaln(m + k) - gammaln(k))


def lp_ball_volume(n: int, p: float, log: bool = False) -> float:
    """Volume ``2^n Gamma(1/p+1)^n / Gamma(n/p+1)`` of the unit ``l_p`` ball.

    Args:
        log: Return the natural log of the volume instead. Needed when the
            volume itself is outside the float64 range.
    """
    _check(n, p, 1.0)
    lv = n * (math.log(2.0) + gammaln(1.0 / p + 1.0)) - gammaln(n / p + 1.0)
    return lv if log else _exp_or_raise(lv, "volume")


def normalizer(n: int, p: float, alpha: float, c: float = 1.0, log: bool = False) -> float:
    """``Z = integral of exp(-c ||x||_p^alpha) = Gamma(n/alpha+1) c^{-n/alpha} vol(K_p)``."""
    _check(n, p, alpha, c)
    lz = gammaln(n / alpha + 1.0) - (n / alpha) * math.log(c) + lp_ball_volume(n, p, log=True)
    return lz if log else _exp_or_raise(lz, "normalizer")


def second_moment_exact(n: int, p: float, alpha: float, c: float = 1.0) -> float:
    """``E ||X||_2^2``."""
    _check(n, p, alpha, c)
    lg = (
        gammaln(n / alpha + 1.0 + 2.0 / alpha)
        - gammaln(n / p + 1.0 + 2.0 / p)
        + gammaln(n / p + 1.0)
        - gammaln(n / alpha + 1.0)
        + gammaln(3.0 / p)
        - gammaln(1.0 / p)
    )
    return n * math.exp(lg) * c ** (-2.0 / alpha)


def fisher_info_exact(n: int, p: float, alpha: float, c: float = 1.0) -> float:
    """Scalar ``lambda`` with Fisher information ``lambda * I``."""
    _check(n, p, alpha, c)
    lg = (
        gammaln((n + 2.0 * alpha - 2.0) / alpha)
        - gammaln((n + 2.0 * p - 2.0) / p)
        + gammaln(n / p)
        - gammaln(n / alpha)
        + gammaln(2.0 - 1.0 / p)
        - gammaln(1.0 / p)
    )
    return alpha**2 * math.exp(lg) * c ** (2.0 / alpha)


def product_constant(p: float) -> float:
    """``C_p`` with ``E||X||_2^2 * lambda ~ C_p n`` for large ``n``."""
    return p**2 * math.exp(gammaln(3.0 / p) + gammaln(2.0 - 1.0 / p) - 2.0 * gammaln(1.0 / p))


def asymptotics(n: int, p: float, alpha: float) -> tuple[float, float]:
    """Large-``n`` forms of ``(E ||X||_2^2, lambda)`` at coefficient 1."""
    _check(n, p, alpha)
    moment = (
        n ** (2.0 / alpha - 2.0 / p + 1.0)
        * alpha ** (-2.0 / alpha)
        * p ** (2.0 / p)
        * math.exp(gammaln(3.0 / p) - gammaln(1.0 / p))
    )
    fisher = (
        n ** (2.0 / p - 2.0 / alpha)
        * alpha ** (2.0 / alpha)
        * p ** (2.0 - 2.0 / p)
        * math.exp(gammaln(2.0 - 1.0 / p) - gammaln(1.0 / p))
    )
    return moment, fisher


def c_coefficient(p: float, alpha: float) -> float:
    """``c_{p,alpha} = alpha^{-1} p^{-alpha + alpha/p} (Gamma(2-1/p)/Gamma(1/p))^{-alpha/2}``.

    With coefficient ``n^{1 - alpha/p} c_{p,alpha}`` the Fisher information
    tends to the identity as ``n`` grows.
    """
    _check(1, p, alpha)
    ratio = math.exp(gammaln(2.0 - 1.0 / p) - gammaln(1.0 / p))
    return p ** (-alpha + alpha / p) * ratio ** (-alpha / 2.0) / alpha


def _grad_sq(d: NormPowerDensity, x: np.ndarray) -> np.ndarray:
    g = d.grad_phi(x)
    return np.sum(g * g, axis=1)


def fisher_info_mc(d: NormPowerDensity, count: int, seed: int, return_se: bool = False):
    """Monte Carlo estimate ``(1/(n N)) sum ||grad phi(x_i)||_2^2``.

    Args:
        return_se: Also return the standard error of the estimate.
    """
    x = sample_norm_power(d, count, seed)
    vals = _grad_sq(d, x) / d.n
    est = float(vals.mean())
    if return_se:
        se = float(vals.std(ddof=1) / math.sqrt(count)) if count > 1 else float("nan")
        return est, se
    return est


def linf_second_moment_mc(n: int, p: float, alpha: float, count: int, seed: int) -> tuple[float, float]:
    """Monte Carlo ``E ||X||_inf^2`` at coefficient 1, with standard error."""
    x = sample_norm_power(NormPowerDensity(n, p, alpha), count, seed)
    v = np.max(np.abs(x), axis=1) ** 2
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(count)) if count > 1 else float("nan")


def uncertainty_products(
    n: int, p: float, alpha: float, count: int = 20000, seed: int = 0
) -> tuple[float, float]:
    """``(E||X||_2^2 * lambda, E||X||_inf^2 * lambda)``; the second is a Monte Carlo estimate.

    The first is at least ``n``, with equality for Gaussian noise. Both are
    invariant under the coefficient ``c``.
    """
    lam = fisher_info_exact(n, p, alpha)
    l2 = second_moment_exact(n, p, alpha) * lam
    linf, _ = linf_second_moment_mc(n, p, alpha, count, seed)
    return l2, linf * lam


def relate_factor(n: int, alpha: float) -> float:
    """``Gamma(n/alpha+1+2/alpha)^{1/2} / Gamma(n/alpha+1)^{1/2+1/n}``: density-to-body isotropic ratio."""
    return math.exp(0.5 * gammaln(n / alpha + 1.0 + 2.0 / alpha) - (0.5 + 1.0 / n) * gammaln(n / alpha + 1.0))


def isotropic_constants(n: int, p: float, alpha: float) -> tuple[float, float]:
    """Isotropic constants ``(L_{K_p}, L_{p,alpha})`` of the unit ``l_p`` ball and the density."""
    _check(n, p, alpha)
    shape = 2.0 * math.log(p) - math.log(4.0) + gammaln(3.0 / p) - 3.0 * gammaln(1.0 / p)
    ball = shape + (1.0 + 2.0 / n) * gammaln(n / p + 1.0) - gammaln(n / p + 1.0 + 2.0 / p)
    dens = (
        shape
        + gammaln(n / alpha + 1.0 + 2.0 / alpha)
        - gammaln(n / p + 1.0 + 2.0 / p)
        + (1.0 + 2.0 / n) * (gammaln(n / p + 1.0) - gammaln(n / alpha + 1.0))
    )
    return math.exp(0.5 * ball), math.exp(0.5 * dens)


def gdp_scale(n: int, p: float, alpha: float, c: float, mu: float) -> float:
    """Noise multiplier ``t = mu^{-1} sqrt(lambda)`` for asymptotic ``mu``-GDP at unit sensitivity."""
    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mu must be positive and finite, got {mu}")
    return math.sqrt(fisher_info_exact(n, p, alpha, c)) / mu


@dataclass(frozen=True)
class FisherSummary:
    """Exact and asymptotic moment/Fisher quantities of one norm-power density (coefficient 1)."""

    n: int
    p: float
    alpha: float
    fisher_norm: float
    second_moment_l2: float
    fisher_asymp: float
    second_moment_asymp: float
    uncertainty_l2: float
    isotropic_ball: float
    isotropic_density: float

    def to_dict(self) -> dict:
        return asdict(self)


def fisher_summary(n: int, p: float, alpha: float) -> FisherSummary:
    lam = fisher_info_exact(n, p, alpha)
    mom = second_moment_exact(n, p, alpha)
    mom_a, lam_a = asymptotics(n, p, alpha)
    ball, dens = isotropic_constants(n, p, alpha)
    return FisherSummary(n, p, alpha, lam, mom, lam_a, mom_a, lam * mom, ball, dens)

