"""Command-line front end.

Every subcommand takes its parameters from three layers: built-in defaults,
an optional JSON config file (``--config``), and command-line flags, with
later layers winning. The effective configuration is echoed to stderr as one
JSON line. Results go to ``--out`` or stdout.

Exit codes: 0 success, 2 usage or domain error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from dpnoise import empirical, fisher, mechanisms, noise1d, serialize
from dpnoise.errors import DomainError, NumericError
from dpnoise.lp_sampler import NormPowerDensity, sample_independent, sample_lp_sphere, sample_norm_power
from dpnoise.noise1d import GDP, ApproxDP, NoiseModel, PureDP
from dpnoise.tradeoff import EpsDeltaCurve, GaussianCurve, NoiseCurve, affine_conjugate, levy_distance_empirical

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # float, int, str, bool, floats, ints
    default: Any
    help: str
    choices: tuple | None = None


def _parse_list(kind: str, text: str):
    conv = float if kind == "floats" else int
    try:
        return [conv(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated {kind[:-1]}s, got {text!r}") from None


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes"):
        return True
    if low in ("0", "false", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


_ARG_TYPES: dict[str, Callable] = {
    "float": float,
    "int": int,
    "str": str,
    "bool": _parse_bool,
    "floats": lambda t: _parse_list("floats", t),
    "ints": lambda t: _parse_list("ints", t),
}


def _coerce(param: Param, value: Any) -> Any:
    """Check and convert a config-file value."""
    if value is None:
        return None
    k = param.kind
    try:
        if k == "float":
            if isinstance(value, bool):
                raise TypeError
            return float(value)
        if k == "int":
            if isinstance(value, bool) or float(value) != int(value):
                raise TypeError
            return int(value)
        if k == "bool":
            if not isinstance(value, bool):
                raise TypeError
            return value
        if k == "str":
            if not isinstance(value, str):
                raise TypeError
            return value
        if isinstance(value, (int, float)):
            value = [value]
        conv = float if k == "floats" else int
        return [conv(v) for v in value]
    except (TypeError, ValueError):
        raise DomainError(f"config key {param.name!r} expects {k}, got {value!r}") from None


# Parameter tables ----------------------------------------------------------

_NOISE = [
    Param("family", "str", "laplace", "1-D noise family", noise1d.FAMILIES),
    Param("scale", "float", 1.0, "noise scale multiplier"),
    Param("h", "float", None, "truncation point in standard units (tlap)"),
    Param("p_geom", "float", None, "geometric ratio (dgeom, tgu)"),
]
_BUDGET = [
    Param("budget", "str", None, "budget kind; inferred from the family when omitted", ("pure", "approx", "gdp")),
    Param("eps", "float", None, "epsilon"),
    Param("delta", "float", 0.0, "delta"),
    Param("mu", "float", 1.0, "GDP parameter mu"),
    Param("sensitivity", "float", 1.0, "query sensitivity"),
]
_DENSITY = [
    Param("n", "int", 30, "dimension"),
    Param("p", "float", 2.0, "norm exponent p"),
    Param("alpha", "float", 2.0, "norm power alpha"),
    Param("c", "float", 1.0, "density coefficient c"),
]


def _replace(params: list[Param], **defaults) -> list[Param]:
    return [Param(p.name, p.kind, defaults.get(p.name, p.default), p.help, p.choices) for p in params]


COMMANDS: dict[str, tuple[str, list[Param]]] = {
    "roc": (
        "trade-off curve on a uniform alpha grid (CSV)",
        [
            Param("kind", "str", "gdp", "curve kind", ("gdp", "fepsdelta", "noise", "calibrated", "conjugate", "empirical")),
            Param("grid", "int", 1001, "number of alpha grid points"),
            Param("shift", "float", 1.0, "shift for kind=noise"),
            *_NOISE,
            *_BUDGET,
            *_replace(_DENSITY, c=0.5),
            Param("N", "int", 10000, "Monte Carlo sample size"),
            Param("seed", "int", 0, "random seed"),
            Param("direction_mode", "str", "random_unit", "shift direction", empirical.DIRECTION_MODES),
            Param("variant", "str", "appendix", "empirical counting rule", empirical.VARIANTS),
        ],
    ),
    "sample": (
        "draw noise samples (CSV or binary little-endian float64, row-major)",
        [
            Param("mode", "str", "norm_power", "sampler", ("noise1d", "norm_power", "independent", "sphere")),
            *_replace(_DENSITY, n=2),
            *_NOISE,
            Param("count", "int", 10, "number of rows"),
            Param("seed", "int", 0, "random seed"),
            Param("format", "str", "csv", "output format", ("csv", "binary")),
        ],
    ),
    "fisher": (
        "exact and asymptotic moments and Fisher information (JSON)",
        [
            *_DENSITY,
            Param("mu", "float", None, "also report the GDP noise scale for this mu"),
            Param("mc_count", "int", 0, "Monte Carlo sample size (0 skips)"),
            Param("seed", "int", 0, "random seed"),
        ],
    ),
    "calibrate": ("calibrate 1-D noise to a privacy budget (JSON)", [_NOISE[0], *_BUDGET]),
    "answer": (
        "answer a vector query with a calibrated mechanism (JSON)",
        [
            Param("values", "floats", None, "query answer, comma-separated"),
            Param("mechanism", "str", "noise1d", "mechanism type", ("noise1d", "norm_power", "linf")),
            _NOISE[0],
            *_BUDGET,
            *_DENSITY[1:],
            Param("seed", "int", 0, "random seed"),
        ],
    ),
    "clt-experiment": (
        "distance to GDP across sweeps of n and N (CSV)",
        [
            Param("n_values", "ints", [30], "dimensions to sweep"),
            Param("p", "float", 2.0, "norm exponent p"),
            Param("alpha", "float", 2.0, "norm power alpha"),
            Param("c", "float", 0.5, "density coefficient c"),
            Param("mu", "float", 1.0, "GDP parameter mu"),
            Param("N_values", "ints", [10000], "Monte Carlo sample sizes to sweep"),
            Param("seeds", "int", 20, "number of seeds per sweep point"),
            Param("seed", "int", 0, "first seed"),
            Param("direction_mode", "str", "random_unit", "shift direction", empirical.DIRECTION_MODES),
            Param("grid", "int", 1001, "grid size for the sup distance"),
            Param("flag_threshold", "float", 0.1, "flag rows whose sup distance exceeds this"),
        ],
    ),
    "tables": (
        "moment/Fisher table or mechanism-comparison table (CSV)",
        [
            Param("table", "str", "fisher", "which table", ("fisher", "mechanisms")),
            Param("n_values", "ints", [2, 10, 30, 100], "dimensions"),
            Param("pairs", "str", "1:1,2:1,2:2", "comma-separated p:alpha pairs"),
            Param("mc_count", "int", 10000, "Monte Carlo sample size (0 skips)"),
            Param("seed", "int", 0, "random seed"),
            Param("eps", "float", 1.0, "epsilon (mechanisms table)"),
            Param("delta", "float", 1e-5, "delta (mechanisms table)"),
        ],
    ),
    "uncertainty": (
        "uncertainty products E||X||^2 * ||I|| (JSON)",
        [
            Param("n", "int", 30, "dimension"),
            Param("p", "float", 2.0, "norm exponent p"),
            Param("alpha", "float", 2.0, "norm power alpha"),
            Param("count", "int", 20000, "Monte Carlo sample size for the l_inf product"),
            Param("seed", "int", 0, "random seed"),
        ],
    ),
    "levy": (
        "Levy distance of an empirical sample to the standard normal (JSON)",
        [
            Param("input", "str", "-", "file of numbers, '-' for stdin"),
            Param("standardize", "bool", False, "subtract the mean and divide by the std first"),
        ],
    ),
}


# Argument handling ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dpnoise", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (help_text, params) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text, allow_abbrev=False)
        sp.add_argument("--config", help="JSON file of parameter values")
        sp.add_argument("--out", help="output path (default stdout)")
        for p in params:
            flag = "--" + p.name.replace("_", "-")
            kw: dict[str, Any] = {
                "dest": p.name,
                "type": _ARG_TYPES[p.kind],
                "default": argparse.SUPPRESS,
                "help": f"{p.help} (default: {p.default})",
            }
            if p.choices:
                kw["choices"] = p.choices
            sp.add_argument(flag, **kw)
    return parser


def effective_config(command: str, flags: dict[str, Any], config: dict[str, Any] | None) -> dict[str, Any]:
    """Merge defaults, config-file values and flags; reject unknown config keys."""
    params = {p.name: p for p in COMMANDS[command][1]}
    eff = {name: p.default for name, p in params.items()}
    if config:
        unknown = sorted(set(config) - set(params))
        if unknown:
            raise DomainError(f"unknown config keys for {command}: {unknown}")
        for key, value in config.items():
            value = _coerce(params[key], value)
            if params[key].choices and value not in params[key].choices:
                raise DomainError(f"config key {key!r} must be one of {params[key].choices}")
            eff[key] = value
    for key, value in flags.items():
        if key in params:
            eff[key] = value
    return eff


def _load_config(path: str | None) -> dict[str, Any] | None:
    if path is None:
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DomainError("config must be a JSON object")
    return data


# Helpers -------------------------------------------------------------------


def _require(cfg: dict, *keys: str):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise DomainError(f"missing required parameter(s): {', '.join('--' + k.replace('_', '-') for k in missing)}")


def _budget(cfg: dict, family: str | None = None):
    kind = cfg.get("budget")
    if kind is None:
        if family in (noise1d.LAPLACE, noise1d.DGEOM, noise1d.TGU):
            kind = "pure"
        elif family == noise1d.TLAP:
            kind = "approx"
        else:
            kind = "approx" if cfg.get("eps") is not None else "gdp"
    if kind == "gdp":
        _require(cfg, "mu")
        return GDP(cfg["mu"])
    _require(cfg, "eps")
    if kind == "pure":
        return PureDP(cfg["eps"])
    return ApproxDP(cfg["eps"], cfg["delta"])


def _noise_model(cfg: dict) -> NoiseModel:
    return NoiseModel(cfg["family"], cfg["scale"], cfg.get("h"), cfg.get("p_geom"))


def _check_positive_int(cfg: dict, *keys: str):
    for k in keys:
        v = cfg[k]
        values = v if isinstance(v, list) else [v]
        if not values or any(x is None or x < 1 for x in values):
            raise DomainError(f"--{k.replace('_', '-')} must be positive integer(s), got {v}")


# Commands ------------------------------------------------------------------


def cmd_roc(cfg: dict, out) -> None:
    _check_positive_int(cfg, "grid")
    if cfg["grid"] < 2:
        raise DomainError("--grid must be >= 2")
    kind = cfg["kind"]
    if kind == "gdp":
        curve = GaussianCurve(cfg["mu"])
        desc = curve.descriptor()
    elif kind == "fepsdelta":
        _require(cfg, "eps")
        curve = EpsDeltaCurve(cfg["eps"], cfg["delta"])
        desc = curve.descriptor()
    elif kind == "noise":
        curve = noise1d.exact_tradeoff(_noise_model(cfg), cfg["shift"])
        desc = curve.descriptor() if isinstance(curve, NoiseCurve) else {
            "kind": "noise", "noise": _noise_model(cfg).to_dict(), "shift": cfg["shift"]}
    elif kind == "calibrated":
        spec = mechanisms.mechanism_1d(_budget(cfg, cfg["family"]), cfg["sensitivity"], cfg["family"])
        curve = noise1d.exact_tradeoff(spec.effective_noise(), cfg["sensitivity"])
        desc = {"kind": "calibrated", "budget": spec.budget.to_dict(), "noise": spec.effective_noise().to_dict(),
                "shift": cfg["sensitivity"]}
    elif kind == "conjugate":
        _require(cfg, "eps", "delta")
        base_noise = NoiseModel(noise1d.LAPLACE, 1.0 / cfg["eps"])
        h = noise1d.tlap_h(cfg["eps"], cfg["delta"])
        curve = affine_conjugate(NoiseCurve(base_noise, 1.0), base_noise, h / cfg["eps"])
        desc = curve.descriptor()
        desc["clamped"] = [list(iv) for iv in curve.clamped]
    else:
        _check_positive_int(cfg, "n", "N")
        d = empirical.calibrated_density(cfg["n"], cfg["p"], cfg["alpha"], cfg["c"], cfg["mu"])
        v = empirical.shift_direction(cfg["n"], cfg["direction_mode"], cfg["seed"])
        curve = empirical.empirical_tradeoff(d, v, cfg["N"], cfg["seed"], cfg["variant"])
        desc = {"kind": "empirical", **{k: cfg[k] for k in ("n", "p", "alpha", "c", "mu", "N", "seed", "direction_mode", "variant")}}
    alphas, betas = curve.grid(cfg["grid"])
    serialize.write_curve_csv(out.text(), alphas, betas, desc)


def cmd_sample(cfg: dict, out) -> None:
    _check_positive_int(cfg, "count")
    mode = cfg["mode"]
    desc: dict[str, Any] = {"mode": mode, "count": cfg["count"], "seed": cfg["seed"]}
    if mode == "noise1d":
        model = _noise_model(cfg)
        x = noise1d.sample(model, cfg["count"], cfg["seed"])[:, None]
        desc["noise"] = model.to_dict()
    else:
        _check_positive_int(cfg, "n")
        if mode == "norm_power":
            d = NormPowerDensity(cfg["n"], cfg["p"], cfg["alpha"], cfg["c"])
            x = sample_norm_power(d, cfg["count"], cfg["seed"])
            desc["density"] = d.to_dict()
        elif mode == "independent":
            x = sample_independent(cfg["p"], cfg["n"], cfg["count"], cfg["seed"])
            desc.update(n=cfg["n"], p=cfg["p"])
        else:
            x = sample_lp_sphere(cfg["p"], cfg["n"], cfg["count"], cfg["seed"])
            desc.update(n=cfg["n"], p=cfg["p"])
    desc["shape"] = list(x.shape)
    if cfg["format"] == "binary":
        out.binary(serialize.samples_to_bytes(x))
        print(serialize.dumps(desc), file=sys.stderr)
    else:
        serialize.write_samples_csv(out.text(), x, desc)


def cmd_fisher(cfg: dict, out) -> None:
    n, p, a, c = cfg["n"], cfg["p"], cfg["alpha"], cfg["c"]
    result: dict[str, Any] = {"summary": fisher.fisher_summary(n, p, a).to_dict()}
    result["c"] = c
    result["fisher_at_c"] = fisher.fisher_info_exact(n, p, a, c)
    result["second_moment_at_c"] = fisher.second_moment_exact(n, p, a, c)
    result["c_coefficient"] = fisher.c_coefficient(p, a)
    result["product_constant"] = fisher.product_constant(p)
    if cfg["mu"] is not None:
        result["gdp_scale"] = fisher.gdp_scale(n, p, a, c, cfg["mu"])
    if cfg["mc_count"]:
        est, se = fisher.fisher_info_mc(NormPowerDensity(n, p, a, c), cfg["mc_count"], cfg["seed"], return_se=True)
        result["fisher_mc"] = {"estimate": est, "se": se, "count": cfg["mc_count"], "seed": cfg["seed"]}
    out.text().write(serialize.dumps(result) + "\n")


def cmd_calibrate(cfg: dict, out) -> None:
    budget = _budget(cfg, cfg["family"])
    model = noise1d.calibrate(budget, cfg["sensitivity"], cfg["family"])
    result = {
        "budget": budget.to_dict(),
        "sensitivity": cfg["sensitivity"],
        "noise": model.to_dict(),
        "second_moment": noise1d.second_moment(model),
    }
    out.text().write(serialize.dumps(result) + "\n")


def cmd_answer(cfg: dict, out) -> None:
    _require(cfg, "values")
    answer = mechanisms.QueryAnswer(np.asarray(cfg["values"], dtype=float))
    mech = cfg["mechanism"]
    result: dict[str, Any] = {"input": answer.to_list(), "seed": cfg["seed"]}
    if mech == "linf":
        released, report = mechanisms.linf_mechanism(answer, cfg["sensitivity"], cfg["mu"], cfg["seed"])
        result["report"] = report
    else:
        if mech == "norm_power":
            spec = mechanisms.mechanism_norm_power(
                answer.n, cfg["p"], cfg["alpha"], cfg["c"], GDP(cfg["mu"]), cfg["sensitivity"])
        else:
            spec = mechanisms.mechanism_1d(_budget(cfg, cfg["family"]), cfg["sensitivity"], cfg["family"], answer.n)
        released = mechanisms.answer_query(answer, spec, cfg["seed"])
        result["spec"] = spec.to_dict()
    result["values"] = released.to_list()
    out.text().write(serialize.dumps(result) + "\n")


CLT_COLUMNS = ("n", "p", "alpha", "c", "mu", "N", "seed", "direction_mode",
               "sup_to_gmu", "ks_projection", "levy_projection", "flagged")


def cmd_clt_experiment(cfg: dict, out) -> None:
    _check_positive_int(cfg, "n_values", "N_values", "seeds", "grid")
    rows = []
    for n in cfg["n_values"]:
        for N in cfg["N_values"]:
            for s in range(cfg["seed"], cfg["seed"] + cfg["seeds"]):
                dev = empirical.clt_deviation(
                    n, cfg["p"], cfg["alpha"], cfg["c"], cfg["mu"], cfg["direction_mode"], N, s, cfg["grid"])
                rows.append((n, cfg["p"], cfg["alpha"], cfg["c"], cfg["mu"], N, s, cfg["direction_mode"],
                             dev.sup_to_gmu, dev.ks_projection, dev.levy_projection,
                             dev.sup_to_gmu > cfg["flag_threshold"]))
    serialize.write_table(out.text(), CLT_COLUMNS, rows, {"command": "clt-experiment", **cfg})


FISHER_TABLE_COLUMNS = (
    "n", "p", "alpha", "second_moment", "fisher", "product",
    "second_moment_mc", "second_moment_mc_se", "fisher_mc", "fisher_mc_se",
    "linf_moment_mc", "linf_moment_mc_se", "linf_product_mc",
)
MECHANISM_TABLE_COLUMNS = ("mechanism", "eps", "delta", "normalized_variance")


def _pairs(text: str) -> list[tuple[float, float]]:
    out = []
    for tok in text.split(","):
        try:
            p, a = tok.split(":")
            out.append((float(p), float(a)))
        except ValueError:
            raise DomainError(f"--pairs expects p:alpha items, got {tok!r}") from None
    return out


def cmd_tables(cfg: dict, out) -> None:
    if cfg["table"] == "mechanisms":
        rows = [(r["mechanism"], cfg["eps"], cfg["delta"], r["normalized_variance"])
                for r in mechanisms.compare_mechanisms(cfg["eps"], cfg["delta"])]
        serialize.write_table(out.text(), MECHANISM_TABLE_COLUMNS, rows,
                              {"table": "mechanisms", "eps": cfg["eps"], "delta": cfg["delta"]})
        return
    _check_positive_int(cfg, "n_values")
    if cfg["mc_count"] < 0 or cfg["mc_count"] == 1:
        raise DomainError("--mc-count must be 0 or at least 2")
    rows = []
    for p, a in _pairs(cfg["pairs"]):
        for n in cfg["n_values"]:
            mom = fisher.second_moment_exact(n, p, a)
            lam = fisher.fisher_info_exact(n, p, a)
            mc = [math.nan] * 7
            if cfg["mc_count"]:
                d = NormPowerDensity(n, p, a)
                x = sample_norm_power(d, cfg["mc_count"], cfg["seed"])
                m2 = np.sum(x * x, axis=1)
                g = d.grad_phi(x)
                fi = np.sum(g * g, axis=1) / n
                li = np.max(np.abs(x), axis=1) ** 2
                root = math.sqrt(cfg["mc_count"])
                mc = [m2.mean(), m2.std(ddof=1) / root, fi.mean(), fi.std(ddof=1) / root,
                      li.mean(), li.std(ddof=1) / root, li.mean() * lam]
            rows.append((n, p, a, mom, lam, mom * lam, *[float(v) for v in mc]))
    serialize.write_table(out.text(), FISHER_TABLE_COLUMNS, rows,
                          {"table": "fisher", "pairs": cfg["pairs"], "mc_count": cfg["mc_count"], "seed": cfg["seed"]})


def cmd_uncertainty(cfg: dict, out) -> None:
    _check_positive_int(cfg, "n", "count")
    l2, linf = fisher.uncertainty_products(cfg["n"], cfg["p"], cfg["alpha"], cfg["count"], cfg["seed"])
    result = {"n": cfg["n"], "p": cfg["p"], "alpha": cfg["alpha"], "l2_product": l2,
              "l2_bound_holds": bool(l2 >= cfg["n"] * (1 - 1e-12)), "linf_product_estimate": linf,
              "count": cfg["count"], "seed": cfg["seed"]}
    out.text().write(serialize.dumps(result) + "\n")


def cmd_levy(cfg: dict, out) -> None:
    if cfg["input"] == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(cfg["input"]) as fh:
                text = fh.read()
        except OSError as exc:
            raise DomainError(f"cannot read input: {exc}") from None
    x = serialize.read_numbers(text)
    if x.size == 0:
        raise DomainError("input contains no numbers")
    if cfg["standardize"]:
        if x.size < 2 or x.std() == 0:
            raise DomainError("standardizing needs at least two distinct values")
        x = (x - x.mean()) / x.std(ddof=1)
    result = {"n": int(x.size), "standardized": cfg["standardize"], "levy_distance": levy_distance_empirical(x)}
    out.text().write(serialize.dumps(result) + "\n")


HANDLERS = {
    "roc": cmd_roc,
    "sample": cmd_sample,
    "fisher": cmd_fisher,
    "calibrate": cmd_calibrate,
    "answer": cmd_answer,
    "clt-experiment": cmd_clt_experiment,
    "tables": cmd_tables,
    "uncertainty": cmd_uncertainty,
    "levy": cmd_levy,
}


class _Output:
    """Buffers output so nothing is written when a command fails."""

    def __init__(self):
        self._text = io.StringIO()
        self._bytes: bytes | None = None

    def text(self) -> io.StringIO:
        return self._text

    def binary(self, data: bytes):
        self._bytes = data

    def flush_to(self, path: str | None, stdout):
        if self._bytes is not None:
            if path:
                with open(path, "wb") as fh:
                    fh.write(self._bytes)
            else:
                getattr(stdout, "buffer", stdout).write(self._bytes)
            return
        if path:
            with open(path, "w") as fh:
                fh.write(self._text.getvalue())
        else:
            stdout.write(self._text.getvalue())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "out")}
    try:
        cfg = effective_config(args.command, flags, _load_config(args.config))
        print(serialize.dumps({"command": args.command, **cfg}), file=sys.stderr)
        out = _Output()
        with np.errstate(over="ignore", under="ignore"):
            HANDLERS[args.command](cfg, out)
        out.flush_to(args.out, sys.stdout)
    except DomainError as exc:
        print(f"dpnoise {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, FloatingPointError, ArithmeticError) as exc:
        print(f"dpnoise {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"dpnoise {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def run() -> None:
    sys.exit(main())
