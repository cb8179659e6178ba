"""Samplers for n-dimensional noise with density proportional to exp(-c ||x||_p^alpha).

The general sampler uses the radial decomposition: if ``V`` is uniform on the
unit ``l_p`` ball and ``T ~ Gamma(n/alpha + 1)`` is independent, then
``T^{1/alpha} V`` has density proportional to ``exp(-||x||_p^alpha)``. A
coefficient ``c`` is applied afterwards by the exact scaling ``c^{-1/alpha}``.
When ``p == alpha`` the coordinates are independent and can be drawn directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from dpnoise import _rng
from dpnoise.errors import DomainError


def lp_norm(x, p: float, axis: int = -1) -> np.ndarray:
    """``l_p`` norm along ``axis``, rescaled by the max entry to avoid overflow."""
    a = np.abs(np.asarray(x, dtype=float))
    if math.isinf(p):
        return a.max(axis=axis)
    m = a.max(axis=axis, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = np.sum((a / safe) ** p, axis=axis)
    return np.squeeze(safe, axis=axis) * s ** (1.0 / p)


@dataclass(frozen=True)
class NormPowerDensity:
    """Density proportional to ``exp(-c ||x||_p^alpha)`` on R^n.

    Attributes:
        n: Dimension.
        p: Norm exponent, at least 1.
        alpha: Power applied to the norm, at least 1.
        c: Positive coefficient.
    """

    n: int
    p: float
    alpha: float
    c: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not (self.p >= 1.0 and math.isfinite(self.p)):
            raise DomainError(f"p must be finite and >= 1, got {self.p}")
        if not (self.alpha >= 1.0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be finite and >= 1, got {self.alpha}")
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise DomainError(f"c must be positive and finite, got {self.c}")
        object.__setattr__(self, "n", int(self.n))

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.n,):
            raise DomainError(f"expected trailing dimension {self.n}, got shape {x.shape}")
        return x

    def phi(self, x) -> np.ndarray:
        """Negative log-density up to a constant, ``c ||x||_p^alpha``, row-wise."""
        x = self._check(x)
        return self.c * lp_norm(x, self.p) ** self.alpha

    def grad_phi(self, x) -> np.ndarray:
        """Gradient ``c alpha ||x||_p^{alpha-p} |x_i|^{p-1} sgn(x_i)``, defined almost everywhere."""
        x = self._check(x)
        norm = lp_norm(x, self.p)[..., None]
        sign = np.sign(x)
        if self.p == 1.0:
            return self.c * self.alpha * norm ** (self.alpha - 1.0) * sign
        with np.errstate(divide="ignore", invalid="ignore"):
            # ||x||^{alpha-p} |x_i|^{p-1} = ||x||^{alpha-1} (|x_i|/||x||)^{p-1}
            g = self.c * self.alpha * norm ** (self.alpha - 1.0) * (np.abs(x) / norm) ** (self.p - 1.0) * sign
        return np.where(norm > 0, g, 0.0)

    def sample(self, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
        return sample_norm_power(self, count, seed, n_jobs=n_jobs)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "p": self.p, "alpha": self.alpha, "c": self.c}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "NormPowerDensity":
        unknown = set(data) - {"n", "p", "alpha", "c"}
        if unknown:
            raise DomainError(f"unknown density keys: {sorted(unknown)}")
        return cls(**data)


def _gamma_root(rng: np.random.Generator, p: float, size) -> np.ndarray:
    """Draw ``xi^{1/p}`` with ``xi ~ Gamma(1/p)``.

    Shape ``1/p < 1`` is boosted: ``Gamma(k) = Gamma(k+1) U^{1/k}``, so
    ``xi^{1/p} = Gamma(1/p + 1)^{1/p} U``. This never underflows to zero.
    """
    g = rng.standard_gamma(1.0 / p + 1.0, size)
    u = rng.random(size)
    return g ** (1.0 / p) * u


def _signed_coordinates(rng: np.random.Generator, p: float, rows: int, n: int) -> np.ndarray:
    mag = _gamma_root(rng, p, (rows, n))
    signs = rng.integers(0, 2, (rows, n)) * 2.0 - 1.0
    return signs * mag


def _check_count(count: int, n: int):
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")


def sample_independent(p: float, n: int, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
    """Rows with density proportional to ``exp(-||x||_p^p)``: i.i.d. signed ``Gamma(1/p)^{1/p}`` coordinates."""
    _check_count(count, n)
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"p must be finite and >= 1, got {p}")
    return _rng.blocked(count, seed, lambda rng, m: _signed_coordinates(rng, p, m, n), width=n, n_jobs=n_jobs)


def _sphere_block(rng: np.random.Generator, p: float, rows: int, n: int) -> np.ndarray:
    x = _signed_coordinates(rng, p, rows, n)
    return x / lp_norm(x, p)[:, None]


def sample_lp_sphere(p: float, n: int, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
    """Rows on the unit ``l_p`` sphere, distributed by the cone measure."""
    _check_count(count, n)
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"p must be finite and >= 1, got {p}")
    return _rng.blocked(count, seed, lambda rng, m: _sphere_block(rng, p, m, n), width=n, n_jobs=n_jobs)


def _norm_power_block(rng: np.random.Generator, d: NormPowerDensity, rows: int) -> np.ndarray:
    n = d.n
    direction = _sphere_block(rng, d.p, rows, n)
    r = rng.random(rows) ** (1.0 / n)
    t = rng.standard_gamma(n / d.alpha + 1.0, rows)
    radius = t ** (1.0 / d.alpha) * r * d.c ** (-1.0 / d.alpha)
    return direction * radius[:, None]


def sample_norm_power(d: NormPowerDensity, count: int, seed: int, n_jobs: int = 1) -> np.ndarray:
    """``count`` rows with density proportional to ``exp(-c ||x||_p^alpha)``.

    Uniform point of the ``l_p`` ball (cone-measure direction times
    ``U^{1/n}``) times ``Gamma(n/alpha + 1)^{1/alpha}``, then scaled by
    ``c^{-1/alpha}``.
    """
    _check_count(count, d.n)
    return _rng.blocked(count, seed, lambda rng, m: _norm_power_block(rng, d, m), width=d.n, n_jobs=n_jobs)


def norm_concentration_check(d: NormPowerDensity, count: int, seed: int) -> dict[str, float]:
    """Median and interquartile range of ``||X||_p / (n/(c alpha))^{1/alpha}``.

    In high dimension the ratio concentrates near 1.
    """
    x = sample_norm_power(d, count, seed)
    ref = (d.n / (d.c * d.alpha)) ** (1.0 / d.alpha)
    ratio = lp_norm(x, d.p) / ref
    q25, med, q75 = np.quantile(ratio, [0.25, 0.5, 0.75])
    return {"median": float(med), "iqr": float(q75 - q25), "reference_norm": float(ref)}
