"""Monte Carlo trade-off curves and convergence diagnostics.

The empirical curve for testing ``X`` against ``X + v`` thresholds the
log-likelihood ratio. With ``x_1..x_N`` drawn from the null,

    A_i = phi(x_i) - phi(x_i - v)      (log-likelihood ratio under the null)
    B_i = phi(x_i + v) - phi(x_i)      (log-likelihood ratio under x_i + v)

and the test rejecting the ``j`` largest null ratios has ``alpha_j = j/N``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from dpnoise import _rng
from dpnoise.errors import DomainError, NumericError
from dpnoise.fisher import c_coefficient, fisher_info_exact, gdp_scale
from dpnoise.lp_sampler import NormPowerDensity, sample_norm_power
from dpnoise.tradeoff import (
    GaussianCurve,
    PiecewiseLinearCurve,
    levy_distance_empirical,
    sup_distance,
)

VARIANTS = ("appendix", "main")
DIRECTION_MODES = ("random_unit", "axis")
# Substream index reserved for drawing the shift direction.
DIRECTION_STREAM = 2**32 - 1


@dataclass(frozen=True)
class EmpiricalCurve(PiecewiseLinearCurve):
    """Piecewise-linear curve through ``(j/N, beta_j)``, ``j = 0..N``."""

    sample_size: int = 0
    seed: int | None = None
    shift: tuple[float, ...] | None = None
    variant: str = "appendix"

    def descriptor(self):
        out = super().descriptor()
        out.update(
            sample_size=self.sample_size,
            seed=self.seed,
            shift=None if self.shift is None else list(self.shift),
            variant=self.variant,
        )
        return out


def _fisher_scalar(d: NormPowerDensity) -> float:
    return fisher_info_exact(d.n, d.p, d.alpha, d.c)


def _as_shift(d: NormPowerDensity, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (d.n,):
        raise DomainError(f"shift must have shape ({d.n},), got {v.shape}")
    return v


def likelihood_projection(d: NormPowerDensity, v, x) -> np.ndarray | float:
    """Centered log-likelihood ratio ``phi(x+v) - phi(x) - v^T I v / 2``.

    ``x`` may be a single point or a matrix of rows.
    """
    v = _as_shift(d, v)
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (d.n,):
        raise DomainError(f"x must have trailing dimension {d.n}, got {x.shape}")
    val = d.phi(x + v) - d.phi(x) - 0.5 * _fisher_scalar(d) * float(v @ v)
    return float(val) if np.ndim(val) == 0 else val


def _snap(values: np.ndarray, tol: float) -> np.ndarray:
    """Round to a grid of spacing ``tol`` so that rounding noise cannot split atoms."""
    if tol <= 0.0:
        return values
    return np.round(values / tol) * tol


def betas_from_ratios(
    null_llr, alt_llr, variant: str = "appendix", tie_tol: float = 1e-10
) -> np.ndarray:
    """Type II errors ``beta_0..beta_N`` of the tests rejecting the ``j`` largest null ratios.

    Args:
        null_llr: Log-likelihood ratios of the ``N`` null samples.
        alt_llr: Log-likelihood ratios of the alternative samples.
        variant: ``"appendix"`` rejects ratios at or above the ``j``-th
            largest null value and counts ``B < h``; when null values tie at
            the threshold the tied block is rejected with the probability
            needed to hit ``alpha = j/N``. ``"main"`` uses threshold
            ``h_j = A_(N-j)`` with ``A_(0) = -inf`` and counts ``B <= h``.
            When no alternative ratio equals a null ratio, ``main[j]`` equals
            ``appendix[j + 1]``: the same curve shifted left by ``1/N``.
        tie_tol: Ratios are rounded to multiples of ``tie_tol`` times the
            largest magnitude, so values equal up to floating-point noise
            (atoms of the ratio, e.g. for Laplace noise) are treated as ties.
    """
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}")
    a = np.asarray(null_llr, dtype=float).ravel()
    b = np.asarray(alt_llr, dtype=float).ravel()
    n_null, n_alt = a.size, b.size
    if n_null < 1 or n_alt < 1:
        raise DomainError("need at least one sample per hypothesis")
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    a = np.sort(_snap(a, tie_tol * scale))
    b = np.sort(_snap(b, tie_tol * scale))
    j = np.arange(n_null + 1)
    if variant == "main":
        # h_j = A_(N-j), the (N-j)-th smallest; j = N gives -inf.
        h = np.where(j < n_null, a[np.clip(n_null - j - 1, 0, None)], -np.inf)
        betas = np.searchsorted(b, h, side="right") / n_alt
    else:
        h = a[n_null - j[1:]]  # j-th largest
        above = n_null - np.searchsorted(a, h, side="right")
        tied = np.searchsorted(a, h, side="right") - np.searchsorted(a, h, side="left")
        gamma = (j[1:] - above) / tied
        b_lt = np.searchsorted(b, h, side="left")
        b_eq = np.searchsorted(b, h, side="right") - b_lt
        betas = np.empty(n_null + 1)
        betas[0] = 1.0
        betas[1:] = (b_lt + (1.0 - gamma) * b_eq) / n_alt
    betas[-1] = 0.0
    return np.clip(betas, 0.0, 1.0)


def _curve(betas: np.ndarray, **meta) -> EmpiricalCurve:
    n = betas.size - 1
    return EmpiricalCurve(np.arange(n + 1) / n, betas, **meta)


def empirical_tradeoff(
    d: NormPowerDensity, v, N: int, seed: int, variant: str = "appendix", n_jobs: int = 1
) -> EmpiricalCurve:
    """Monte Carlo curve of ``X`` against ``X + v`` for ``X`` drawn from ``d``."""
    v = _as_shift(d, v)
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    x = sample_norm_power(d, N, seed, n_jobs=n_jobs)
    phi_x = d.phi(x)
    null_llr = phi_x - d.phi(x - v)
    alt_llr = d.phi(x + v) - phi_x
    betas = betas_from_ratios(null_llr, alt_llr, variant)
    return _curve(betas, sample_size=int(N), seed=seed, shift=tuple(v.tolist()), variant=variant)


def _child_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence(int(seed), spawn_key=(k,)).generate_state(1)[0])


def _finite_or_raise(values: np.ndarray, label: str) -> np.ndarray:
    values = np.asarray(values, dtype=float).ravel()
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NumericError(f"non-finite log density for {label} sample index {int(bad[0])}")
    return values


def empirical_tradeoff_general(
    log_density_0: Callable,
    log_density_1: Callable,
    sampler_0: Callable[[int, int], np.ndarray],
    sampler_1: Callable[[int, int], np.ndarray],
    N: int,
    seed: int,
    variant: str = "appendix",
) -> EmpiricalCurve:
    """Monte Carlo curve for arbitrary distributions ``P_0`` (null) and ``P_1``.

    Args:
        log_density_0, log_density_1: Vectorized log densities, each known up
            to its own additive constant.
        sampler_0, sampler_1: ``sampler(count, seed)`` returning ``count``
            samples (first axis). They receive independent child seeds of
            ``seed``.

    Raises:
        NumericError: A log density is not finite at some sample.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N}")
    x0 = sampler_0(N, _child_seed(seed, 0))
    x1 = sampler_1(N, _child_seed(seed, 1))
    null_llr = _finite_or_raise(log_density_1(x0), "null") - _finite_or_raise(log_density_0(x0), "null")
    alt_llr = _finite_or_raise(log_density_1(x1), "alternative") - _finite_or_raise(log_density_0(x1), "alternative")
    betas = betas_from_ratios(null_llr, alt_llr, variant)
    return _curve(betas, sample_size=int(N), seed=seed, variant=variant)


class EmpiricalCDF:
    """Right-continuous empirical CDF with the generalized inverse as ``ppf``.

    Samples and query points are rounded to multiples of ``tie_tol`` times the
    largest sample magnitude, so atoms blurred by floating-point noise stay
    atoms. ``cdf_left`` gives the left limit, which lets callers randomize on
    atoms.
    """

    def __init__(self, samples, tie_tol: float = 1e-10):
        x = np.asarray(samples, dtype=float).ravel()
        if x.size == 0:
            raise DomainError("need at least one sample")
        if not np.all(np.isfinite(x)):
            raise NumericError("samples must be finite")
        self.tol = tie_tol * max(1.0, float(np.max(np.abs(x))))
        # Rounding is monotone, so both arrays share one order.
        self.raw = np.sort(x)
        self.x = _snap(self.raw, self.tol)

    def _at(self, t, side: str):
        t = _snap(np.asarray(t, dtype=float), self.tol)
        out = np.searchsorted(self.x, t, side=side) / self.x.size
        return float(out) if np.ndim(out) == 0 else out

    def cdf(self, t):
        return self._at(t, "right")

    def cdf_left(self, t):
        """``P(X < t)``."""
        return self._at(t, "left")

    def ppf(self, u):
        """Smallest sample with ``cdf >= u``; ``-inf`` at ``u = 0``."""
        u = np.asarray(u, dtype=float)
        idx = np.ceil(u * self.x.size - 1e-9).astype(int) - 1
        out = np.where(idx < 0, -np.inf, self.raw[np.clip(idx, 0, self.x.size - 1)])
        return float(out) if np.ndim(out) == 0 else out


def tradeoff_from_projection_cdfs(F_v, F_neg_v, vIv: float, alpha):
    """``beta = F_v(-F_{-v}^{-1}(alpha) - v^T I v)`` from likelihood-projection CDFs.

    ``F_v`` and ``F_neg_v`` are objects with ``cdf``/``ppf`` for the laws of
    the projections along ``v`` and ``-v``. When both also provide
    ``cdf_left`` (laws with atoms), the test is randomized on the atom at the
    threshold so that its level is exactly ``alpha``. Levels outside [0, 1]
    are clamped with a warning.
    """
    if not vIv >= 0.0:
        raise DomainError(f"vIv must be nonnegative, got {vIv}")
    a = np.asarray(alpha, dtype=float)
    if np.any((a < 0.0) | (a > 1.0)):
        warnings.warn("alpha outside [0, 1] clamped", RuntimeWarning, stacklevel=2)
        a = np.clip(a, 0.0, 1.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        q = np.asarray(F_neg_v.ppf(a), dtype=float)
        s = -q - vIv
        if hasattr(F_v, "cdf_left") and hasattr(F_neg_v, "cdf_left"):
            below = np.asarray(F_neg_v.cdf_left(q), dtype=float)
            mass = np.asarray(F_neg_v.cdf(q), dtype=float) - below
            gamma = np.where(mass > 0, (a - below) / np.where(mass > 0, mass, 1.0), 1.0)
            left = np.asarray(F_v.cdf_left(s), dtype=float)
            beta = left + (1.0 - gamma) * (np.asarray(F_v.cdf(s), dtype=float) - left)
        else:
            beta = np.asarray(F_v.cdf(s), dtype=float)
    if np.any(np.isnan(beta)):
        raise NumericError("projection CDF returned NaN")
    beta = np.clip(beta, 0.0, 1.0)
    return float(beta) if beta.ndim == 0 else beta


def projection_tradeoff(d: NormPowerDensity, v, N: int, seed: int) -> EmpiricalCurve:
    """Curve on the grid ``j/N`` via empirical projection CDFs (shares samples with ``empirical_tradeoff``)."""
    v = _as_shift(d, v)
    x = sample_norm_power(d, N, seed)
    F_v = EmpiricalCDF(likelihood_projection(d, v, x))
    F_neg = EmpiricalCDF(likelihood_projection(d, -v, x))
    vIv = _fisher_scalar(d) * float(v @ v)
    alphas = np.arange(N + 1) / N
    betas = tradeoff_from_projection_cdfs(F_v, F_neg, vIv, alphas)
    betas[-1] = 0.0
    return EmpiricalCurve(alphas, betas, sample_size=int(N), seed=seed, shift=tuple(v.tolist()), variant="projection")


def shift_direction(n: int, mode: str, seed: int) -> np.ndarray:
    """Unit shift: first axis, or a normalized Gaussian from a reserved substream of ``seed``."""
    if mode not in DIRECTION_MODES:
        raise DomainError(f"direction_mode must be one of {DIRECTION_MODES}")
    if mode == "axis":
        v = np.zeros(n)
        v[0] = 1.0
        return v
    g = _rng.substream(seed, DIRECTION_STREAM).standard_normal(n)
    return g / np.linalg.norm(g)


def calibrated_density(n: int, p: float, alpha: float, c: float, mu: float) -> NormPowerDensity:
    """Density of ``t X`` with ``t = gdp_scale(...)``, whose Fisher scalar is ``mu^2``."""
    t = gdp_scale(n, p, alpha, c, mu)
    return NormPowerDensity(n, p, alpha, c * t ** (-alpha))


@dataclass(frozen=True)
class CLTDeviation:
    sup_to_gmu: float
    ks_projection: float
    levy_projection: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.sup_to_gmu, self.ks_projection, self.levy_projection)


def clt_deviation(
    n: int,
    p: float,
    alpha: float,
    c: float,
    mu: float,
    direction_mode: str,
    N: int,
    seed: int,
    grid_size: int = 1001,
    n_jobs: int = 1,
) -> CLTDeviation:
    """Distance of the calibrated mechanism from ``mu``-GDP, with two projection diagnostics.

    Returns:
        ``sup_to_gmu``: sup distance between the empirical curve at unit
        shift and ``G_mu``. ``ks_projection``: two-sample KS distance between
        the likelihood projection and its linearization ``v^T grad phi``.
        ``levy_projection``: Levy distance of ``v^T grad phi / mu`` to the
        standard normal.
    """
    d = calibrated_density(n, p, alpha, c, mu)
    v = shift_direction(n, direction_mode, seed)
    x = sample_norm_power(d, N, seed, n_jobs=n_jobs)
    phi_x = d.phi(x)
    betas = betas_from_ratios(phi_x - d.phi(x - v), d.phi(x + v) - phi_x)
    curve = _curve(betas, sample_size=int(N), seed=seed, shift=tuple(v.tolist()))
    sup = sup_distance(curve, GaussianCurve(mu), grid_size)
    proj = d.phi(x + v) - phi_x - 0.5 * mu**2
    lin = d.grad_phi(x) @ v
    ks = float(stats.ks_2samp(proj, lin, method="asymp").statistic)
    levy = levy_distance_empirical(lin / mu)
    return CLTDeviation(sup, ks, levy)


def thin_shell_diagnostic(n: int, p: float, alpha: float, N: int, seed: int) -> dict[str, float]:
    """Spread of ``||grad phi(X)||_2 / sqrt(n)`` under the unit-Fisher rescaling.

    Uses coefficient ``n^{1 - alpha/p} c_{p,alpha}``; the ratio concentrates
    at 1 as ``n`` grows when the density satisfies the thin-shell property.
    """
    d = NormPowerDensity(n, p, alpha, n ** (1.0 - alpha / p) * c_coefficient(p, alpha))
    x = sample_norm_power(d, N, seed)
    r = np.linalg.norm(d.grad_phi(x), axis=1) / math.sqrt(n)
    return {"median": float(np.median(r)), "std": float(r.std(ddof=1))}
