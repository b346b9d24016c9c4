"""Deterministic parameter sweeps over the activated channel.

Rows are produced in lexicographic axis order (first axis slowest) whatever
the worker count, and serialised with a fixed number format so repeated runs
are byte-identical.
"""

from __future__ import annotations

import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .activation import ActivationParams, eac_channel, eac_noise_m
from .channels import CPTP_TOL, amplification, classify, q_lower_bound_from_invariants
from .transducer import gain_from_cooperativity

PARAMETERS = ("G", "Gp", "Gpp", "Cg")
QUANTITIES = ("tau", "m", "n_e", "qlb", "qlb_amp", "class_label")
EAC_QUANTITIES = {"tau", "m", "n_e", "qlb", "class_label"}

OK = "ok"
INVALID = "invalid_params"
INFINITE = "infinite"

SIG_DIGITS = 12


@dataclass(frozen=True)
class Axis:
    """A swept parameter: an evenly spaced range, or an explicit value list."""

    name: str
    start: float = 0.0
    stop: float = 0.0
    count: int = 0
    scale: str = "linear"
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {PARAMETERS}")
        if self.values is not None:
            if len(self.values) < 1:
                raise ValueError(f"axis {self.name}: empty value list")
            return
        if self.count < 2:
            raise ValueError(f"axis {self.name}: count must be >= 2")
        if not self.start < self.stop:
            raise ValueError(f"axis {self.name}: start must be below stop")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"axis {self.name}: scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise ValueError(f"axis {self.name}: log scale needs a positive start")

    def grid(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def size(self) -> int:
        return len(self.values) if self.values is not None else self.count

    def to_dict(self) -> dict:
        if self.values is not None:
            return {"name": self.name, "values": list(self.values)}
        return {
            "name": self.name,
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    fixed: dict[str, float] = field(default_factory=dict)
    quantities: tuple[str, ...] = ("qlb",)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "quantities", tuple(self.quantities))
        if not self.axes:
            raise ValueError("a sweep needs at least one axis")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axis names in {names}")
        for name in self.fixed:
            if name not in PARAMETERS:
                raise ValueError(f"unknown fixed parameter {name!r}")
        clash = set(names) & set(self.fixed)
        if clash:
            raise ValueError(f"parameters both swept and fixed: {sorted(clash)}")
        if not self.quantities:
            raise ValueError("no quantities requested")
        for q in self.quantities:
            if q not in QUANTITIES:
                raise ValueError(f"unknown quantity {q!r}; expected one of {QUANTITIES}")
        given = set(names) | set(self.fixed)
        if "G" in given and "Cg" in given:
            raise ValueError("give either G or Cg, not both")
        if not given & {"G", "Cg"}:
            raise ValueError("the amplifier gain needs G or Cg")
        if "Gp" not in given:
            raise ValueError("Gp must be swept or fixed")
        if EAC_QUANTITIES & set(self.quantities) and "Gpp" not in given:
            raise ValueError("Gpp must be swept or fixed for the requested quantities")

    @property
    def columns(self) -> list[str]:
        return [a.name for a in self.axes] + list(self.quantities) + ["status"]

    @property
    def n_rows(self) -> int:
        return math.prod(a.size for a in self.axes)

    def to_dict(self) -> dict:
        return {
            "axes": [a.to_dict() for a in self.axes],
            "fixed": dict(sorted(self.fixed.items())),
            "quantities": list(self.quantities),
        }


def evaluate_point(
    params: dict[str, float], quantities: Sequence[str], tol: float = CPTP_TOL
) -> dict:
    """One sweep row: the requested quantities and a status flag."""
    row: dict = {q: math.nan for q in quantities}
    if "class_label" in row:
        row["class_label"] = ""
    try:
        G = params["G"] if "G" in params else gain_from_cooperativity(params["Cg"])
        p = ActivationParams(G, params["Gp"], params.get("Gpp", 1.0))
    except ValueError:
        row["status"] = INVALID
        return row

    status = OK
    if EAC_QUANTITIES & set(quantities):
        inv = classify(eac_channel(p), tol)
        qlb = q_lower_bound_from_invariants(inv)
        values = {
            "tau": inv.tau,
            "m": eac_noise_m(p),
            "n_e": math.nan if inv.n_e is None else inv.n_e,
            "qlb": qlb,
            "class_label": inv.class_label,
        }
        for q in EAC_QUANTITIES & set(quantities):
            row[q] = values[q]
        if "qlb" in quantities and math.isinf(qlb):
            status = INFINITE
    if "qlb_amp" in quantities:
        inv = classify(amplification(p.G, p.G_p - 1), tol)
        row["qlb_amp"] = q_lower_bound_from_invariants(inv)
    row["status"] = status
    return row


def _points(spec: SweepSpec) -> list[dict[str, float]]:
    names = [a.name for a in spec.axes]
    out = []
    for combo in itertools.product(*(a.grid() for a in spec.axes)):
        point = dict(spec.fixed)
        point.update(zip(names, (float(v) for v in combo)))
        out.append(point)
    return out


def _evaluate_chunk(args) -> list[dict]:
    points, quantities, tol = args
    return [evaluate_point(pt, quantities, tol) for pt in points]


def run_sweep(
    spec: SweepSpec, workers: int = 1, chunk_size: int = 2000, tol: float = CPTP_TOL
) -> list[dict]:
    """Evaluate the full grid; each row maps column name to value."""
    points = _points(spec)
    chunks = [points[i : i + chunk_size] for i in range(0, len(points), chunk_size)]
    jobs = [(chunk, spec.quantities, tol) for chunk in chunks]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_chunk, jobs))
    else:
        results = [_evaluate_chunk(job) for job in jobs]
    rows = []
    for chunk, chunk_rows in zip(chunks, results):
        for point, qrow in zip(chunk, chunk_rows):
            row = {a.name: point[a.name] for a in spec.axes}
            row.update(qrow)
            rows.append(row)
    return rows


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return "nan"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{SIG_DIGITS}g}"
    return "0" if text == "-0" else text


def write_csv(
    rows: Iterable[dict], columns: Sequence[str], out, comments: Sequence[str] = ()
) -> None:
    for line in comments:
        out.write(f"# {line}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(format_value(row.get(c)) for c in columns) + "\n")


def _json_value(value):
    if isinstance(value, str) or value is None:
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    value = float(value)
    if math.isnan(value):
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(format_value(value))


def write_json_lines(rows: Iterable[dict], columns: Sequence[str], out) -> None:
    for row in rows:
        out.write(json.dumps({c: _json_value(row.get(c)) for c in columns}) + "\n")


def spec_comments(
    spec: SweepSpec, label: str | None = None, tol: float = CPTP_TOL
) -> list[str]:
    lines = []
    if label:
        lines.append(f"figure: {label}")
    lines.append("spec: " + json.dumps(spec.to_dict(), sort_keys=True))
    lines.append(f"tol: {tol!r}")
    return lines


def sweep_csv(
    spec: SweepSpec, workers: int = 1, label: str | None = None, tol: float = CPTP_TOL
) -> str:
    buf = io.StringIO()
    rows = run_sweep(spec, workers, tol=tol)
    write_csv(rows, spec.columns, buf, spec_comments(spec, label, tol))
    return buf.getvalue()
