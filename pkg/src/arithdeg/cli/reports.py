"""Run reports: deterministic serialization to json, csv and text.

Floats are rendered as fixed-point strings with ``precision`` decimals, so
the serialized form depends only on the inputs.  Wall-clock timings live
under the top-level ``timings`` key, which comparisons ignore.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .. import __version__
from ..algebra import AlgebraicReal

DEFAULT_PRECISION = 12
TOOL = "arithdeg"


def fmt_float(x: float, precision: int = DEFAULT_PRECISION) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{precision}f}"
    return "0." + "0" * precision if s.lstrip("-") == "0." + "0" * precision else s


def algebraic_json(a: AlgebraicReal, precision: int = DEFAULT_PRECISION) -> dict[str, Any]:
    out = {
        "minimal_polynomial": str(a.minpoly),
        "interval": a.format_interval(precision),
        "value": fmt_float(float(a), precision),
    }
    if a.is_rational():
        out["exact"] = str(a.as_fraction())
    return out


def to_jsonable(obj: Any, precision: int = DEFAULT_PRECISION) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return fmt_float(obj, precision)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, AlgebraicReal):
        return algebraic_json(obj, precision)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, precision) for v in obj]
    return str(obj)


@dataclass
class RunReport:
    command: str
    inputs: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    system_digest: str | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def as_dict(self, precision: int = DEFAULT_PRECISION) -> dict[str, Any]:
        return {
            "tool": TOOL,
            "version": __version__,
            "command": self.command,
            "system_digest": self.system_digest,
            "inputs": to_jsonable(self.inputs, precision),
            "results": to_jsonable(self.results, precision),
            "timings": {k: fmt_float(v, 3) for k, v in sorted(self.timings.items())},
        }


def _flatten(obj: Any, prefix: str = ""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, "" if obj is None else str(obj).lower() if isinstance(obj, bool) else str(obj)


def render(report: RunReport, fmt: str = "json", precision: int = DEFAULT_PRECISION) -> str:
    data = report.as_dict(precision)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    rows = list(_flatten(data))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "text":
        lines = [f"{k}: {v}" for k, v in rows]
        verdict = data["results"].get("verdict") if isinstance(data["results"], dict) else None
        if verdict:
            lines.insert(0, str(verdict))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def strip_timings(text: str) -> dict[str, Any]:
    """A parsed json report without its timing fields, for determinism checks."""
    data = json.loads(text)
    data.pop("timings", None)
    return data
