"""One-dimensional noise families and privacy-budget calibration.

Every model is a scale multiplier applied to a standard member of its family:

* ``laplace``: density ``e^{-|x|}/2``.
* ``tlap``: Laplace restricted to ``[-h, h]`` and renormalized (``h`` in
  standard units, so the support of the scaled model is ``[-scale*h, scale*h]``).
* ``gaussian``: standard normal.
* ``dgeom``: two-sided geometric on the integers,
  ``P(k) = (1-p)/(1+p) * p^|k|``.
* ``tgu``: ``dgeom`` plus an independent ``Uniform[-1/2, 1/2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import integrate, special

from dpnoise import _rng
from dpnoise.errors import CalibrationError, DomainError, UnsupportedError
from dpnoise.tradeoff import (
    EpsDeltaCurve,
    GaussianCurve,
    NoiseCurve,
    PiecewiseLinearCurve,
    TradeoffCurve,
)

LAPLACE = "laplace"
TLAP = "tlap"
GAUSSIAN = "gaussian"
DGEOM = "dgeom"
TGU = "tgu"
FAMILIES = (LAPLACE, TLAP, GAUSSIAN, DGEOM, TGU)
DISCRETE = (DGEOM, TGU)


# Privacy budgets -----------------------------------------------------------


@dataclass(frozen=True)
class PureDP:
    eps: float

    def __post_init__(self):
        if not (self.eps >= 0.0 and math.isfinite(self.eps)):
            raise DomainError(f"eps must be finite and >= 0, got {self.eps}")

    def template(self) -> TradeoffCurve:
        return EpsDeltaCurve(self.eps, 0.0)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "pure", "eps": self.eps}


@dataclass(frozen=True)
class ApproxDP:
    eps: float
    delta: float

    def __post_init__(self):
        if not (self.eps >= 0.0 and math.isfinite(self.eps)):
            raise DomainError(f"eps must be finite and >= 0, got {self.eps}")
        if not 0.0 <= self.delta < 1.0:
            raise DomainError(f"delta must lie in [0, 1), got {self.delta}")

    def template(self) -> TradeoffCurve:
        return EpsDeltaCurve(self.eps, self.delta)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "approx", "eps": self.eps, "delta": self.delta}


@dataclass(frozen=True)
class GDP:
    mu: float

    def __post_init__(self):
        if not (self.mu >= 0.0 and math.isfinite(self.mu)):
            raise DomainError(f"mu must be finite and >= 0, got {self.mu}")

    def template(self) -> TradeoffCurve:
        return GaussianCurve(self.mu)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "gdp", "mu": self.mu}


PrivacyBudget = PureDP | ApproxDP | GDP


def budget_from_dict(data: dict[str, Any]) -> PrivacyBudget:
    kind = data.get("kind")
    fields = {k: v for k, v in data.items() if k != "kind"}
    try:
        if kind == "pure":
            return PureDP(**fields)
        if kind == "approx":
            return ApproxDP(**fields)
        if kind == "gdp":
            return GDP(**fields)
    except TypeError as exc:
        raise DomainError(f"bad budget fields: {exc}") from None
    raise DomainError(f"unknown budget kind {kind!r}")


# Standard-member helpers ---------------------------------------------------


def _geom_tail(m, p: float):
    """P(xi >= m) for the two-sided geometric, integer m."""
    m = np.asarray(m, dtype=float)
    with np.errstate(over="ignore"):
        pos = np.power(p, np.maximum(m, 1.0)) / (1.0 + p)
        neg = 1.0 - np.power(p, np.maximum(1.0 - m, 1.0)) / (1.0 + p)
    return np.where(m >= 1.0, pos, neg)


def _geom_cdf_int(k, p: float):
    """P(xi <= k) for integer k."""
    k = np.asarray(k, dtype=float)
    return _geom_tail(-k, p)


def _geom_pmf(k, p: float):
    k = np.asarray(k, dtype=float)
    return (1.0 - p) / (1.0 + p) * np.power(p, np.abs(k))


def _geom_ppf(u, p: float):
    """Smallest integer k with P(xi <= k) >= u."""
    u = np.asarray(u, dtype=float)
    lp = math.log(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.ceil(-np.log(u * (1.0 + p)) / lp)
        right = np.maximum(0.0, np.ceil(np.log((1.0 - u) * (1.0 + p)) / lp - 1.0))
    k = np.where(u <= p / (1.0 + p), left, right)
    finite = np.isfinite(k)
    kf = np.where(finite, k, 0.0)
    # Repair off-by-one from rounding in the logarithms.
    kf = np.where(finite & (_geom_cdf_int(kf - 1.0, p) >= u), kf - 1.0, kf)
    kf = np.where(finite & (_geom_cdf_int(kf, p) < u), kf + 1.0, kf)
    k = np.where(finite, kf, k)
    k = np.where(u <= 0.0, -np.inf, k)
    return np.where(u >= 1.0, np.inf, k)


def tlap_h(eps: float, delta: float) -> float:
    """Truncation point making truncated Laplace at scale ``1/eps`` tight for (eps, delta).

    ``h = log(1 + (e^eps - 1) / (2 delta))``, in standard units.
    """
    if not (eps > 0.0 and math.isfinite(eps)):
        raise DomainError(f"eps must be positive, got {eps}")
    if delta == 0.0:
        raise DomainError("delta = 0 gives infinite truncation; use Laplace noise")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    return math.log1p(math.expm1(eps) / (2.0 * delta))


def tlap_second_moment_standard(h: float) -> float:
    """E X^2 of standard Laplace truncated to [-h, h]: ``2 - h(h+2)/(e^h - 1)``."""
    return 2.0 - h * (h + 2.0) / math.expm1(h)


def tlap_second_moment_alternative(eps: float, h: float) -> float:
    """Competing closed form ``(2/eps^2)(1 - eps^2 h(h+2)/(e^h - 1))``.

    Kept only so tests can show it disagrees with quadrature; do not use.
    """
    return (2.0 / eps**2) * (1.0 - eps**2 * h * (h + 2.0) / math.expm1(h))


def tlap_second_moment_quadrature(h: float) -> float:
    """E X^2 of standard truncated Laplace by adaptive quadrature."""
    norm = -math.expm1(-h)
    val, _ = integrate.quad(lambda x: x * x * math.exp(-x), 0.0, h, epsabs=1e-14, epsrel=1e-13)
    return val / norm


# The model -----------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    """A scaled member of one of the symmetric 1-D families.

    Attributes:
        family: One of ``FAMILIES``.
        scale: Positive multiplier applied to the standard member.
        h: Truncation point in standard units (``tlap`` only).
        p_geom: Geometric ratio in (0, 1) (``dgeom`` and ``tgu`` only).
    """

    family: str
    scale: float = 1.0
    h: float | None = None
    p_geom: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be positive and finite, got {self.scale}")
        if self.family == TLAP:
            if self.h is None or not (self.h > 0.0 and math.isfinite(self.h)):
                raise DomainError(f"tlap needs a positive finite h, got {self.h}")
        elif self.h is not None:
            raise DomainError("h applies to tlap only")
        if self.family in DISCRETE:
            if self.p_geom is None or not 0.0 < self.p_geom < 1.0:
                raise DomainError(f"p_geom must lie in (0, 1), got {self.p_geom}")
        elif self.p_geom is not None:
            raise DomainError("p_geom applies to dgeom and tgu only")

    @property
    def is_discrete(self) -> bool:
        return self.family == DGEOM

    # Standard-member functions, argument already divided by scale.

    def _cdf_std(self, z):
        f = self.family
        if f == LAPLACE:
            return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))
        if f == GAUSSIAN:
            return special.ndtr(z)
        if f == TLAP:
            h = self.h
            zc = np.clip(z, -h, h)
            denom = 2.0 * -math.expm1(-h)
            lower = (np.exp(np.minimum(zc, 0.0)) - math.exp(-h)) / denom
            upper = 1.0 - (np.exp(-np.maximum(zc, 0.0)) - math.exp(-h)) / denom
            return np.where(zc < 0, lower, upper)
        p = self.p_geom
        if f == DGEOM:
            with np.errstate(invalid="ignore"):
                return np.where(np.isfinite(z), _geom_cdf_int(np.floor(np.where(np.isfinite(z), z, 0.0)), p), (z > 0) * 1.0)
        # tgu: on [k - 1/2, k + 1/2) the CDF rises linearly by pmf(k).
        fin = np.isfinite(z)
        zf = np.where(fin, z, 0.0)
        k = np.floor(zf + 0.5)
        val = _geom_cdf_int(k - 1.0, p) + (zf - k + 0.5) * _geom_pmf(k, p)
        return np.where(fin, val, (z > 0) * 1.0)

    def _ppf_std(self, u):
        f = self.family
        with np.errstate(divide="ignore"):
            if f == LAPLACE:
                return np.where(u < 0.5, np.log(2.0 * u), -np.log(2.0 * (1.0 - u)))
            if f == GAUSSIAN:
                return special.ndtri(u)
            if f == TLAP:
                h = self.h
                denom = 2.0 * -math.expm1(-h)
                lower = np.log(np.maximum(u * denom + math.exp(-h), math.exp(-h)))
                upper = -np.log(np.maximum((1.0 - u) * denom + math.exp(-h), math.exp(-h)))
                return np.where(u < 0.5, lower, upper)
        p = self.p_geom
        k = _geom_ppf(u, p)
        if f == DGEOM:
            return k
        fin = np.isfinite(k)
        kf = np.where(fin, k, 0.0)
        x = kf - 0.5 + (u - _geom_cdf_int(kf - 1.0, p)) / _geom_pmf(kf, p)
        return np.where(fin, x, k)

    # Public API.

    def cdf(self, x):
        """P(X <= x)."""
        x = np.asarray(x, dtype=float)
        out = np.asarray(self._cdf_std(x / self.scale), dtype=float)
        return float(out) if out.ndim == 0 else out

    def ppf(self, u):
        """Smallest x with P(X <= x) >= u."""
        u = np.asarray(u, dtype=float)
        if np.any((u < 0.0) | (u > 1.0)):
            raise DomainError("quantile level must lie in [0, 1]")
        out = self.scale * np.asarray(self._ppf_std(u), dtype=float)
        return float(out) if out.ndim == 0 else out

    def isf(self, a):
        """Upper quantile; by symmetry ``-ppf(a)``, accurate for small ``a``."""
        if self.is_discrete:
            return self.ppf(1.0 - np.asarray(a, dtype=float))
        return -self.ppf(a)

    def pdf(self, x):
        """Density. Undefined for the lattice family ``dgeom``; use ``pmf``."""
        if self.is_discrete:
            raise UnsupportedError("dgeom has no density; use pmf")
        z = np.asarray(x, dtype=float) / self.scale
        f = self.family
        if f == LAPLACE:
            out = 0.5 * np.exp(-np.abs(z))
        elif f == GAUSSIAN:
            out = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        elif f == TLAP:
            out = np.where(np.abs(z) <= self.h, np.exp(-np.abs(z)) / (2.0 * -math.expm1(-self.h)), 0.0)
        else:
            out = _geom_pmf(np.floor(z + 0.5), self.p_geom)
        out = out / self.scale
        return float(out) if np.ndim(out) == 0 else out

    def pmf(self, k):
        """Mass at lattice point ``scale * k`` (``dgeom`` only)."""
        if not self.is_discrete:
            raise UnsupportedError("pmf is defined for dgeom only")
        out = _geom_pmf(k, self.p_geom)
        return float(out) if np.ndim(out) == 0 else out

    def second_moment(self) -> float:
        return second_moment(self)

    def sample(self, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
        return sample(self, count, seed, n_jobs=n_jobs)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family, "scale": self.scale}
        if self.h is not None:
            out["h"] = self.h
        if self.p_geom is not None:
            out["p_geom"] = self.p_geom
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "NoiseModel":
        unknown = set(data) - {"family", "scale", "h", "p_geom"}
        if unknown:
            raise DomainError(f"unknown noise keys: {sorted(unknown)}")
        return cls(**data)


# Operations ----------------------------------------------------------------


def calibrate(budget: PrivacyBudget, sensitivity: float, family: str) -> NoiseModel:
    """Smallest noise of ``family`` meeting ``budget`` for a query of given sensitivity.

    Gaussian noise under an ``ApproxDP`` budget uses the classical
    ``sqrt(2 log(1.25/delta))/eps`` rule; under a ``GDP`` budget it uses
    ``sensitivity/mu``.

    Raises:
        CalibrationError: The pair (budget, family) is not supported or the
            budget is degenerate (zero privacy loss).
    """
    if not (sensitivity > 0.0 and math.isfinite(sensitivity)):
        raise DomainError(f"sensitivity must be positive, got {sensitivity}")
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    if isinstance(budget, (PureDP, ApproxDP)) and budget.eps == 0.0:
        raise CalibrationError("eps = 0 requires infinite noise")
    if isinstance(budget, GDP) and budget.mu == 0.0:
        raise CalibrationError("mu = 0 requires infinite noise")

    if isinstance(budget, PureDP):
        if family == LAPLACE:
            return NoiseModel(LAPLACE, sensitivity / budget.eps)
        if family in DISCRETE:
            if sensitivity != 1.0:
                raise CalibrationError("dgeom/tgu calibration assumes an integer query of sensitivity 1")
            return NoiseModel(family, 1.0, p_geom=math.exp(-budget.eps))
    elif isinstance(budget, ApproxDP):
        if budget.delta == 0.0:
            raise CalibrationError("delta = 0: use a PureDP budget")
        if family == TLAP:
            return NoiseModel(TLAP, sensitivity / budget.eps, h=tlap_h(budget.eps, budget.delta))
        if family == GAUSSIAN:
            sigma = math.sqrt(2.0 * math.log(1.25 / budget.delta)) / budget.eps
            return NoiseModel(GAUSSIAN, sensitivity * sigma)
    elif isinstance(budget, GDP):
        if family == GAUSSIAN:
            return NoiseModel(GAUSSIAN, sensitivity / budget.mu)
    else:
        raise DomainError(f"not a privacy budget: {budget!r}")
    raise CalibrationError(f"cannot calibrate {family} noise to a {type(budget).__name__} budget")


def second_moment(model: NoiseModel) -> float:
    """Exact ``E X^2``."""
    s2 = model.scale**2
    f = model.family
    if f == LAPLACE:
        return 2.0 * s2
    if f == GAUSSIAN:
        return s2
    if f == TLAP:
        return s2 * tlap_second_moment_standard(model.h)
    p = model.p_geom
    geom = 2.0 * p / (1.0 - p) ** 2
    return s2 * (geom + (1.0 / 12.0 if f == TGU else 0.0))


def _draw_standard(model: NoiseModel, rng: np.random.Generator, size: int) -> np.ndarray:
    f = model.family
    if f == LAPLACE:
        return rng.laplace(size=size)
    if f == GAUSSIAN:
        return rng.standard_normal(size)
    if f == TLAP:
        return model._ppf_std(rng.random(size))
    p = model.p_geom
    # Difference of two geometrics on {0, 1, ...} is two-sided geometric.
    xi = (rng.geometric(1.0 - p, size) - rng.geometric(1.0 - p, size)).astype(float)
    if f == TGU:
        xi += rng.random(size) - 0.5
    return xi


def sample(model: NoiseModel, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
    """``count`` i.i.d. draws; a pure function of ``(model, count, seed)``."""
    draws = _rng.blocked(count, seed, lambda rng, m: _draw_standard(model, rng, m), n_jobs=n_jobs)
    return model.scale * draws


def discrete_tradeoff(p: float, shift: int) -> PiecewiseLinearCurve:
    """Exact curve for ``xi`` vs ``xi + shift`` with randomized tests, ``xi`` two-sided geometric.

    The likelihood ratio is constant for ``x >= shift`` and for ``x <= 0``,
    so the Neyman-Pearson vertices are the thresholds ``m = shift, ..., 0``.
    Adding independent uniform noise leaves this curve unchanged.
    """
    if shift < 1:
        raise DomainError("shift must be a positive integer")
    ms = np.arange(shift, -1, -1, dtype=float)
    alphas = np.concatenate([[0.0], _geom_tail(ms, p), [1.0]])
    betas = np.concatenate([[1.0], 1.0 - _geom_tail(ms - shift, p), [0.0]])
    return PiecewiseLinearCurve(alphas, betas)


def exact_tradeoff(model: NoiseModel, shift: float) -> TradeoffCurve:
    """Curve of ``model`` against ``model + shift``.

    Raises:
        UnsupportedError: ``dgeom`` (atoms need randomized tests; use ``tgu``)
            or a lattice family with a shift that is not a lattice multiple.
    """
    if not shift > 0.0:
        raise DomainError(f"shift must be positive, got {shift}")
    if model.family == DGEOM:
        raise UnsupportedError("no exact curve for dgeom; add uniform smoothing (tgu)")
    if model.family == TGU:
        k = shift / model.scale
        if abs(k - round(k)) > 1e-12:
            raise UnsupportedError("tgu curve needs a shift that is an integer multiple of the scale")
        return discrete_tradeoff(model.p_geom, int(round(k)))
    return NoiseCurve(model, float(shift))
