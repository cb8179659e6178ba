"""CSV, JSON and binary I/O.

CSV files written here start with one comment line ``# {json descriptor}``
followed by a header row and data rows. Floats are written with ``repr``, so
they round-trip exactly. Binary sample files are raw little-endian float64 in
row-major order with no header; the shape comes from the descriptor.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, TextIO

import numpy as np

from dpnoise.errors import DomainError
from dpnoise.noise1d import NoiseModel
from dpnoise.tradeoff import (
    ConjugateCurve,
    EpsDeltaCurve,
    GaussianCurve,
    NoiseCurve,
    PiecewiseLinearCurve,
    TradeoffCurve,
)

CURVE_COLUMNS = ("alpha", "beta")


def _fmt(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return str(value)


def dumps(obj: Any) -> str:
    """JSON with numpy scalars and arrays converted."""

    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    return json.dumps(obj, default=default, sort_keys=True)


def write_table(stream: TextIO, columns: Iterable[str], rows: Iterable[Iterable[Any]], descriptor: dict | None = None):
    """Write a descriptor comment, a header row and the data rows."""
    if descriptor is not None:
        stream.write("# " + dumps(descriptor) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(columns))
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def read_table(stream: TextIO) -> tuple[dict | None, list[str], list[list[str]]]:
    """Inverse of ``write_table``; values are returned as strings."""
    text = stream.read()
    lines = text.splitlines()
    descriptor = None
    if lines and lines[0].startswith("# "):
        descriptor = json.loads(lines[0][2:])
        lines = lines[1:]
    reader = csv.reader(lines)
    header = next(reader)
    return descriptor, header, [r for r in reader]


def write_curve_csv(stream: TextIO, alphas, betas, descriptor: dict | None = None):
    write_table(stream, CURVE_COLUMNS, zip(np.asarray(alphas, dtype=float), np.asarray(betas, dtype=float)), descriptor)


def read_curve_csv(stream: TextIO) -> tuple[dict | None, np.ndarray, np.ndarray]:
    descriptor, header, rows = read_table(stream)
    if tuple(header) != CURVE_COLUMNS:
        raise DomainError(f"expected columns {CURVE_COLUMNS}, got {header}")
    data = np.array(rows, dtype=float).reshape(-1, 2)
    return descriptor, data[:, 0], data[:, 1]


def curve_to_csv(curve: TradeoffCurve, grid_size: int = 1001) -> str:
    buf = io.StringIO()
    alphas, betas = curve.grid(grid_size)
    write_curve_csv(buf, alphas, betas, curve.descriptor())
    return buf.getvalue()


def curve_from_descriptor(desc: dict[str, Any]) -> TradeoffCurve:
    """Rebuild a curve from its JSON descriptor."""
    kind = desc.get("kind")
    if kind == "f_eps_delta":
        return EpsDeltaCurve(desc["eps"], desc["delta"])
    if kind == "gdp":
        return GaussianCurve(desc["mu"])
    if kind == "noise":
        return NoiseCurve(NoiseModel.from_dict(desc["noise"]), desc["shift"])
    if kind == "conjugate":
        return ConjugateCurve(curve_from_descriptor(desc["base"]), NoiseModel.from_dict(desc["noise"]), desc["h"])
    if kind == "empirical":
        return PiecewiseLinearCurve(np.asarray(desc["alphas"]), np.asarray(desc["betas"]))
    raise DomainError(f"unknown curve kind {kind!r}")


def write_samples_csv(stream: TextIO, x: np.ndarray, descriptor: dict | None = None):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    write_table(stream, [f"x{i}" for i in range(x.shape[1])], x, descriptor)


def samples_to_bytes(x: np.ndarray) -> bytes:
    """Little-endian float64, row-major."""
    return np.ascontiguousarray(np.asarray(x, dtype="<f8")).tobytes(order="C")


def samples_from_bytes(data: bytes, n: int) -> np.ndarray:
    flat = np.frombuffer(data, dtype="<f8")
    if n < 1 or flat.size % n:
        raise DomainError(f"{flat.size} values do not form rows of length {n}")
    return flat.reshape(-1, n).astype(float)


def read_numbers(text: str) -> np.ndarray:
    """Parse numbers separated by commas, whitespace or newlines.

    ``#`` starts a comment. The first non-comment line may be a non-numeric
    header (as written by ``write_table``), which is skipped.
    """
    values = []
    first = True
    for line in text.splitlines():
        toks = line.split("#", 1)[0].replace(",", " ").split()
        if not toks:
            continue
        try:
            parsed = [float(t) for t in toks]
        except ValueError:
            if first:
                first = False
                continue
            raise DomainError(f"not a number in line: {line!r}") from None
        first = False
        values.extend(parsed)
    out = np.array(values, dtype=float)
    if not all(math.isfinite(v) for v in values):
        raise DomainError("input contains non-finite numbers")
    return out
