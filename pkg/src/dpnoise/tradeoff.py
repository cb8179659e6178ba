"""Trade-off (ROC) functions.

A trade-off function maps a type I error level ``alpha`` to the smallest type
II error any test can reach at that level. Curves here are callables on
``[0, 1]``; they accept scalars or arrays and return the same shape.

Noise distributions are duck-typed: anything with vectorized ``cdf`` and
``ppf`` methods works (``NoiseModel`` or a frozen ``scipy.stats``
distribution). An ``isf`` method is used when present for accuracy near
``alpha = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import special

from dpnoise.errors import DegenerateTruncationError, DomainError, NumericError

DOMINANCE_TOL = 1e-12
CONVEXITY_TOL = 1e-9


def _as_alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if np.any(np.isnan(a)) or np.any(a < 0.0) or np.any(a > 1.0):
        raise DomainError("alpha must lie in [0, 1]")
    return a


def _out(a_in, values: np.ndarray):
    if np.ndim(a_in) == 0:
        return float(values)
    return values


def eval_f_eps_delta(eps: float, delta: float, alpha):
    """Piecewise-linear (eps, delta)-DP template.

    ``f(alpha) = max(0, 1 - delta - e^eps alpha, e^-eps (1 - delta - alpha))``.
    """
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise DomainError(f"eps must be a finite nonnegative number, got {eps}")
    if not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta must lie in [0, 1], got {delta}")
    a = _as_alpha(alpha)
    beta = np.maximum.reduce(
        [
            np.zeros_like(a),
            1.0 - delta - math.exp(eps) * a,
            math.exp(-eps) * (1.0 - delta - a),
        ]
    )
    return _out(alpha, beta)


def eval_gdp(mu: float, alpha):
    """Gaussian trade-off ``G_mu(alpha) = Phi(-Phi^{-1}(alpha) - mu)``."""
    if not mu >= 0.0:
        raise DomainError(f"mu must be nonnegative, got {mu}")
    a = _as_alpha(alpha)
    if math.isinf(mu):
        return _out(alpha, np.where(a > 0.0, 0.0, 1.0))
    beta = special.ndtr(-special.ndtri(a) - mu)
    return _out(alpha, beta)


def _upper_quantile(dist, alpha: np.ndarray) -> np.ndarray:
    isf = getattr(dist, "isf", None)
    if isf is not None:
        return np.asarray(isf(alpha), dtype=float)
    return np.asarray(dist.ppf(1.0 - alpha), dtype=float)


def tradeoff_from_cdf(dist, shift: float, alpha):
    """Trade-off between ``X`` and ``X + shift`` for 1-D log-concave ``X``.

    Uses ``beta = F(F^{-1}(1 - alpha) - shift)``; the optimal test rejects
    when the observation is large.
    """
    if not shift >= 0.0:
        raise DomainError(f"shift must be nonnegative, got {shift}")
    a = _as_alpha(alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = _upper_quantile(dist, a)
        if np.any(np.isnan(q)):
            raise NumericError("quantile evaluation returned NaN")
        beta = np.asarray(dist.cdf(q - shift), dtype=float)
    if np.any(np.isnan(beta)):
        raise NumericError("CDF evaluation returned NaN")
    return _out(alpha, np.clip(beta, 0.0, 1.0))


class TradeoffCurve:
    """Base class: a non-increasing convex function on [0, 1]."""

    kind: str = "abstract"

    def _eval(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, alpha):
        a = _as_alpha(alpha)
        return _out(alpha, np.asarray(self._eval(np.atleast_1d(a)), dtype=float).reshape(a.shape))

    def grid(self, size: int = 1001) -> tuple[np.ndarray, np.ndarray]:
        alphas = np.linspace(0.0, 1.0, size)
        return alphas, self(alphas)

    def descriptor(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class EpsDeltaCurve(TradeoffCurve):
    eps: float
    delta: float = 0.0
    kind = "f_eps_delta"

    def __post_init__(self):
        eval_f_eps_delta(self.eps, self.delta, 0.0)

    def _eval(self, a):
        return eval_f_eps_delta(self.eps, self.delta, a)

    def descriptor(self):
        return {"kind": self.kind, "eps": self.eps, "delta": self.delta}


@dataclass(frozen=True)
class GaussianCurve(TradeoffCurve):
    mu: float
    kind = "gdp"

    def __post_init__(self):
        eval_gdp(self.mu, 0.5)

    def _eval(self, a):
        return eval_gdp(self.mu, a)

    def descriptor(self):
        return {"kind": self.kind, "mu": self.mu}


@dataclass(frozen=True)
class NoiseCurve(TradeoffCurve):
    """Trade-off between ``noise`` and ``noise + shift``."""

    noise: Any
    shift: float
    kind = "noise"

    def __post_init__(self):
        if not self.shift >= 0.0:
            raise DomainError(f"shift must be nonnegative, got {self.shift}")

    def _eval(self, a):
        return tradeoff_from_cdf(self.noise, self.shift, a)

    def descriptor(self):
        to_dict = getattr(self.noise, "to_dict", None)
        if to_dict is None:
            raise TypeError("noise has no JSON descriptor")
        return {"kind": self.kind, "noise": to_dict(), "shift": self.shift}


@dataclass(frozen=True)
class PiecewiseLinearCurve(TradeoffCurve):
    """Linear interpolation through ``(alphas[j], betas[j])``."""

    alphas: np.ndarray
    betas: np.ndarray
    kind = "empirical"

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        b = np.asarray(self.betas, dtype=float)
        if a.ndim != 1 or a.shape != b.shape or a.size < 2:
            raise DomainError("alphas and betas must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(a) < 0) or a[0] != 0.0 or a[-1] != 1.0:
            raise DomainError("alphas must be sorted and span [0, 1]")
        if np.any(b < 0.0) or np.any(b > 1.0):
            raise DomainError("betas must lie in [0, 1]")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    def _eval(self, a):
        return np.interp(a, self.alphas, self.betas)

    def descriptor(self):
        return {"kind": self.kind, "alphas": self.alphas.tolist(), "betas": self.betas.tolist()}


@dataclass(frozen=True)
class ConjugateCurve(TradeoffCurve):
    """Trade-off of a noise truncated to ``[-h, h]``, from the untruncated curve.

    With ``Z = F(h) - F(-h)`` the truncated curve satisfies
    ``Z beta + F(-h) = f(Z alpha + 1 - F(h))``, i.e. it is ``f`` conjugated
    by an affine map. Values falling outside [0, 1] are clamped and the
    affected alpha intervals are listed in ``clamped``.
    """

    base: TradeoffCurve
    noise: Any
    h: float
    kind = "conjugate"
    lower_mass: float = field(init=False, repr=False)
    upper_tail: float = field(init=False, repr=False)
    mass: float = field(init=False, repr=False)
    clamped: tuple[tuple[float, float], ...] = field(init=False)

    def __post_init__(self):
        if not self.h > 0.0:
            raise DomainError(f"h must be positive, got {self.h}")
        lo = float(self.noise.cdf(-self.h))
        hi = float(self.noise.cdf(self.h))
        if not hi - lo > 0.0:
            raise DegenerateTruncationError(f"F(h) == F(-h) at h={self.h}")
        object.__setattr__(self, "lower_mass", lo)
        object.__setattr__(self, "upper_tail", 1.0 - hi)
        object.__setattr__(self, "mass", hi - lo)
        object.__setattr__(self, "clamped", self._find_clamped())

    def to_inner(self, alpha):
        """Truncated-scale level -> untruncated level (the inverse affine map)."""
        return self.mass * np.asarray(alpha, dtype=float) + self.upper_tail

    def to_outer(self, beta):
        """Untruncated type II error -> truncated type II error."""
        return (np.asarray(beta, dtype=float) - self.lower_mass) / self.mass

    def raw(self, alpha):
        """The conjugated curve before clamping to [0, 1]."""
        return self.to_outer(self.base(self.to_inner(alpha)))

    def _eval(self, a):
        return np.clip(self.raw(a), 0.0, 1.0)

    def _find_clamped(self):
        out = []
        # raw is non-increasing, so each violation is one end interval.
        if self.raw(0.0) > 1.0:
            out.append((0.0, _bisect_last(lambda x: self.raw(x) > 1.0)))
        if self.raw(1.0) < 0.0:
            out.append((_bisect_last(lambda x: self.raw(x) >= 0.0), 1.0))
        return tuple(out)

    def unclamped_mask(self, alphas) -> np.ndarray:
        a = np.asarray(alphas, dtype=float)
        mask = np.ones(a.shape, dtype=bool)
        for lo, hi in self.clamped:
            mask &= ~((a >= lo) & (a <= hi))
        return mask

    def descriptor(self):
        to_dict = getattr(self.noise, "to_dict", None)
        if to_dict is None:
            raise TypeError("noise has no JSON descriptor")
        return {"kind": self.kind, "base": self.base.descriptor(), "noise": to_dict(), "h": self.h}


def _bisect_last(pred: Callable[[float], bool], tol: float = 1e-14) -> float:
    """Largest x in [0, 1] with pred(x) true, for pred true on a prefix."""
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def affine_conjugate(f: TradeoffCurve, dist, h: float) -> ConjugateCurve:
    """Curve for the ``[-h, h]``-truncation of ``dist`` given its curve ``f``."""
    return ConjugateCurve(f, dist, h)


def sup_distance(f: Callable, g: Callable, grid_size: int = 1001) -> float:
    """Max of ``|f - g|`` over the uniform grid of ``grid_size`` points on [0, 1]."""
    if grid_size < 2:
        raise DomainError("grid_size must be >= 2")
    alphas = np.linspace(0.0, 1.0, grid_size)
    return float(np.max(np.abs(np.asarray(f(alphas)) - np.asarray(g(alphas)))))


def dominates(f: Callable, g: Callable, grid_size: int = 1001, tol: float = DOMINANCE_TOL) -> bool:
    """True when ``f >= g - tol`` at every grid point, i.e. f is at least as private."""
    if grid_size < 2:
        raise DomainError("grid_size must be >= 2")
    alphas = np.linspace(0.0, 1.0, grid_size)
    return bool(np.all(np.asarray(f(alphas)) >= np.asarray(g(alphas)) - tol))


def is_tradeoff_shaped(betas, tol: float = CONVEXITY_TOL) -> bool:
    """Check that grid values are in [0, 1], non-increasing, and convex."""
    b = np.asarray(betas, dtype=float)
    if np.any(b < -tol) or np.any(b > 1.0 + tol):
        return False
    steps = -np.diff(b)
    if np.any(steps < -tol):
        return False
    return bool(np.all(np.diff(steps) <= tol))


def levy_distance_empirical(samples, reference: Callable | None = None, tol: float = 1e-10) -> float:
    """Levy distance between the empirical CDF of ``samples`` and ``reference``.

    Finds the smallest ``t`` with ``ref(x_k - t) - t <= (k-1)/n`` and
    ``k/n <= ref(x_k + t) + t`` at every sorted sample ``x_k``, by bisection.
    ``reference`` defaults to the standard normal CDF.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise DomainError("need at least one sample")
    if not np.all(np.isfinite(x)):
        raise NumericError("samples must be finite")
    cdf = special.ndtr if reference is None else reference
    k = np.arange(1, n + 1)
    below = (k - 1) / n
    above = k / n

    def ok(t: float) -> bool:
        return bool(
            np.all(np.asarray(cdf(x - t)) - t <= below) and np.all(above <= np.asarray(cdf(x + t)) + t)
        )

    lo, hi = 0.0, 1.0
    if ok(lo):
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
