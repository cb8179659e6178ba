"""Noise-addition mechanisms ``M(D) = f(D) + t X``.

A ``MechanismSpec`` fixes the noise law ``X`` (a unit-scale 1-D model applied
independently to each coordinate, or an n-dimensional norm-power density),
the multiplier ``t``, the query sensitivity and the budget it was calibrated
for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from dpnoise import noise1d
from dpnoise.empirical import empirical_tradeoff, shift_direction
from dpnoise.errors import CalibrationError, DomainError, UnsupportedError
from dpnoise.fisher import fisher_info_exact, gdp_scale, second_moment_exact
from dpnoise.lp_sampler import NormPowerDensity, sample_independent, sample_norm_power
from dpnoise.noise1d import GDP, ApproxDP, NoiseModel, PureDP, budget_from_dict
from dpnoise.tradeoff import dominates, sup_distance

LINF_MIN_DIM = 16


@dataclass(frozen=True)
class QueryAnswer:
    """A vector of query values."""

    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float)).copy()
        if v.ndim != 1:
            raise DomainError("query answer must be a vector")
        if not np.all(np.isfinite(v)):
            raise DomainError("query answer must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def to_list(self) -> list[float]:
        return self.values.tolist()


@dataclass(frozen=True)
class MechanismSpec:
    """Everything needed to run and analyze one mechanism.

    Attributes:
        noise: Unit-scale ``NoiseModel`` (applied i.i.d. per coordinate) or a
            ``NormPowerDensity``.
        scale: Multiplier ``t >= 0``; ``t = 0`` releases the answer unchanged.
        sensitivity: Absolute (1-D) or l2 (n-dimensional) sensitivity.
        budget: Budget the scale was calibrated for.
        n: Dimension of the query answer.
    """

    noise: NoiseModel | NormPowerDensity
    scale: float
    sensitivity: float
    budget: PureDP | ApproxDP | GDP
    n: int = 1
    expected_err_l2: float = field(init=False)

    def __post_init__(self):
        if not (self.scale >= 0.0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be finite and >= 0, got {self.scale}")
        if not (self.sensitivity > 0.0 and math.isfinite(self.sensitivity)):
            raise DomainError(f"sensitivity must be positive, got {self.sensitivity}")
        if isinstance(self.noise, NormPowerDensity):
            if self.n != self.noise.n:
                raise DomainError(f"n={self.n} does not match noise dimension {self.noise.n}")
            moment = second_moment_exact(self.noise.n, self.noise.p, self.noise.alpha, self.noise.c)
        elif isinstance(self.noise, NoiseModel):
            if int(self.n) != self.n or self.n < 1:
                raise DomainError(f"n must be a positive integer, got {self.n}")
            moment = self.n * noise1d.second_moment(self.noise)
        else:
            raise DomainError(f"unsupported noise {self.noise!r}")
        object.__setattr__(self, "expected_err_l2", self.scale**2 * moment)

    @property
    def is_norm_power(self) -> bool:
        return isinstance(self.noise, NormPowerDensity)

    def effective_noise(self) -> NoiseModel:
        """The 1-D noise law of ``t X`` (1-D specs with ``t > 0`` only)."""
        if self.is_norm_power or self.scale == 0.0:
            raise UnsupportedError("effective 1-D noise needs a 1-D spec with positive scale")
        d = self.noise.to_dict()
        d["scale"] = self.scale * self.noise.scale
        return NoiseModel.from_dict(d)

    def to_dict(self) -> dict[str, Any]:
        kind = "norm_power" if self.is_norm_power else "noise1d"
        return {
            "noise": {"kind": kind, **self.noise.to_dict()},
            "scale": self.scale,
            "sensitivity": self.sensitivity,
            "budget": self.budget.to_dict(),
            "n": self.n,
            "expected_err_l2": self.expected_err_l2,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MechanismSpec":
        noise = dict(data["noise"])
        kind = noise.pop("kind")
        noise_obj = NormPowerDensity.from_dict(noise) if kind == "norm_power" else NoiseModel.from_dict(noise)
        return cls(noise_obj, data["scale"], data["sensitivity"], budget_from_dict(data["budget"]), data.get("n", 1))


def mechanism_1d(budget, sensitivity: float, family: str, n: int = 1) -> MechanismSpec:
    """Calibrated 1-D mechanism, noise applied independently to ``n`` coordinates."""
    model = noise1d.calibrate(budget, sensitivity, family)
    unit = model.to_dict()
    unit["scale"] = 1.0
    return MechanismSpec(NoiseModel.from_dict(unit), model.scale, sensitivity, budget, n)


def mechanism_norm_power(
    n: int, p: float, alpha: float, c: float, budget: GDP, sensitivity: float = 1.0
) -> MechanismSpec:
    """Norm-power mechanism with ``t = sensitivity * mu^{-1} sqrt(lambda)``."""
    if not isinstance(budget, GDP):
        raise CalibrationError("norm-power noise is calibrated to GDP budgets only")
    d = NormPowerDensity(n, p, alpha, c)
    t = sensitivity * gdp_scale(n, p, alpha, c, budget.mu)
    return MechanismSpec(d, t, sensitivity, budget, n)


def one_way_marginal_sensitivity(n: int, n_records: int) -> float:
    """l2 sensitivity ``sqrt(n)/N`` of ``n`` one-way marginals over ``N`` records."""
    if n < 1 or n_records < 1:
        raise DomainError("n and n_records must be positive")
    return math.sqrt(n) / n_records


def noise_draws(spec: MechanismSpec, count: int, seed: int) -> np.ndarray:
    """``count`` independent draws of the added noise ``t X``, shape ``(count, n)``."""
    if spec.is_norm_power:
        x = sample_norm_power(spec.noise, count, seed)
    else:
        flat = noise1d.sample(spec.noise, count * spec.n, seed)
        x = flat.reshape(count, spec.n)
    return spec.scale * x


def answer_query(answer: QueryAnswer, spec: MechanismSpec, seed: int) -> QueryAnswer:
    """Release ``answer + t X``; deterministic given ``seed``."""
    if answer.n != spec.n:
        raise DomainError(f"answer has dimension {answer.n}, mechanism expects {spec.n}")
    if spec.scale == 0.0:
        return answer
    return QueryAnswer(answer.values + noise_draws(spec, 1, seed)[0])


def compare_mechanisms(eps: float, delta: float) -> list[dict[str, Any]]:
    """Noise variance of four mechanisms in units of ``sensitivity^2/eps^2``.

    Rows: Laplace at (eps, 0), classical Gaussian at (eps, delta), truncated
    Laplace at (eps, delta) and Gaussian at eps-GDP.
    """
    if not (eps > 0.0 and math.isfinite(eps)):
        raise DomainError(f"eps must be positive, got {eps}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    unit = 1.0 / eps**2
    rows = [
        ("laplace", PureDP(eps), noise1d.LAPLACE),
        ("gaussian_classical", ApproxDP(eps, delta), noise1d.GAUSSIAN),
        ("tlap", ApproxDP(eps, delta), noise1d.TLAP),
        ("gaussian_gdp", GDP(eps), noise1d.GAUSSIAN),
    ]
    out = []
    for name, budget, family in rows:
        model = noise1d.calibrate(budget, 1.0, family)
        out.append(
            {
                "mechanism": name,
                "budget": budget.to_dict(),
                "noise": model.to_dict(),
                "normalized_variance": noise1d.second_moment(model) / unit,
            }
        )
    return out


def linf_exponent(n: int) -> float:
    """``p = 2 log log n``."""
    if n < LINF_MIN_DIM:
        raise UnsupportedError(f"l_inf mechanism needs n >= {LINF_MIN_DIM} so that log log n > 1, got {n}")
    return 2.0 * math.log(math.log(n))


def linf_scale(n: int, sensitivity: float, mu: float) -> float:
    """``t = sensitivity * mu^{-1} sqrt(lambda_{p,p})`` at ``p = 2 log log n``."""
    p = linf_exponent(n)
    if not (mu > 0.0 and math.isfinite(mu)):
        raise DomainError(f"mu must be positive, got {mu}")
    if not (sensitivity > 0.0 and math.isfinite(sensitivity)):
        raise DomainError(f"sensitivity must be positive, got {sensitivity}")
    return sensitivity * math.sqrt(fisher_info_exact(n, p, p)) / mu


def linf_noise(n: int, sensitivity: float, mu: float, count: int, seed: int) -> np.ndarray:
    """``count`` noise vectors of the l_inf mechanism, shape ``(count, n)``."""
    t = linf_scale(n, sensitivity, mu)
    return t * sample_independent(linf_exponent(n), n, count, seed)


def linf_mechanism(answer: QueryAnswer, sensitivity: float, mu: float, seed: int) -> tuple[QueryAnswer, dict[str, float]]:
    """Release a vector query with noise tuned for small l_inf error.

    Coordinates get i.i.d. noise with density proportional to ``exp(-|x|^p)``,
    ``p = 2 log log n``, scaled for asymptotic ``mu``-GDP.
    """
    n = answer.n
    noise = linf_noise(n, sensitivity, mu, 1, seed)[0]
    linf = float(np.max(np.abs(noise)))
    report = {
        "n": n,
        "p": linf_exponent(n),
        "scale": linf_scale(n, sensitivity, mu),
        "noise_linf": linf,
        "ratio": linf / (sensitivity * math.sqrt(math.log(math.log(n)))),
    }
    return QueryAnswer(answer.values + noise), report


def err_report(spec: MechanismSpec, count: int = 20000, seed: int = 0) -> dict[str, float]:
    """Expected squared errors: l2 exact, l_inf by Monte Carlo."""
    x = noise_draws(spec, count, seed)
    linf = np.max(np.abs(x), axis=1) ** 2
    return {
        "err_l2": spec.expected_err_l2,
        "err_linf_mc": float(linf.mean()),
        "err_linf_se": float(linf.std(ddof=1) / math.sqrt(count)) if count > 1 else float("nan"),
    }


@dataclass(frozen=True)
class BudgetCheck:
    ok: bool
    gap: float
    worst_alpha: float


def budget_check(spec: MechanismSpec, grid_size: int = 1001, N: int = 10000, seed: int = 0, tol: float = 1e-12) -> BudgetCheck:
    """Whether the mechanism's curve dominates the budget template, and by how much.

    1-D specs use the exact curve at shift ``sensitivity``. Norm-power specs
    use the empirical curve along a random unit direction scaled to the
    sensitivity, so small negative gaps of Monte Carlo size are expected
    there; pass a larger ``tol`` accordingly.

    Returns:
        ``ok``: domination on the grid. ``gap``: sup distance between the two
        curves, i.e. how much of the budget is left unused. ``worst_alpha``:
        where the distance is largest.
    """
    template = spec.budget.template()
    if spec.scale == 0.0:
        raise UnsupportedError("a noiseless mechanism has no trade-off curve")
    if spec.is_norm_power:
        v = spec.sensitivity * shift_direction(spec.n, "random_unit", seed)
        d = spec.noise
        scaled = NormPowerDensity(d.n, d.p, d.alpha, d.c * spec.scale ** (-d.alpha))
        curve = empirical_tradeoff(scaled, v, N, seed)
    else:
        curve = noise1d.exact_tradeoff(spec.effective_noise(), spec.sensitivity)
    alphas = np.linspace(0.0, 1.0, grid_size)
    diff = np.abs(np.asarray(curve(alphas)) - np.asarray(template(alphas)))
    return BudgetCheck(
        dominates(curve, template, grid_size, tol),
        sup_distance(curve, template, grid_size),
        float(alphas[int(np.argmax(diff))]),
    )
