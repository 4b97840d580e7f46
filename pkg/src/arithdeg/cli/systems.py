"""System description files and the bundled corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from ..dml import Correspondence
from ..dynamics import DEFAULT_DIGIT_BUDGET, DEFAULT_HORIZON, Endomorphism, ProjPoint
from ..polynomials import ParseError

SCHEMA_VERSION = 1
DEFAULT_TOL = 0.02


class SystemFileError(ValueError):
    pass


@dataclass(frozen=True)
class Options:
    horizon: int = DEFAULT_HORIZON
    digit_budget: int = DEFAULT_DIGIT_BUDGET
    tol: float = DEFAULT_TOL


@dataclass(frozen=True)
class SystemDescription:
    name: str
    space: tuple[int, ...]
    blocks: tuple[tuple[str, ...], ...]
    points: dict[str, tuple[tuple[int, ...], ...]]
    options: Options = field(default_factory=Options)
    description: str = ""
    tags: tuple[str, ...] = ()

    def endomorphism(self, check_resultant: bool = True) -> Endomorphism:
        try:
            return Endomorphism.from_strings(self.space, self.blocks, self.name, check_resultant)
        except ParseError as exc:
            raise SystemFileError(f"system {self.name!r}: {exc}") from exc

    def point(self, name: str | None = None) -> ProjPoint:
        if not self.points:
            raise SystemFileError(f"system {self.name!r} declares no points")
        key = name if name is not None else next(iter(self.points))
        if key not in self.points:
            raise SystemFileError(f"system {self.name!r} has no point {key!r}")
        return ProjPoint.of(*self.points[key])

    def point_name(self, name: str | None = None) -> str:
        return name if name is not None else next(iter(self.points))

    def to_dict(self) -> dict[str, Any]:
        """Canonical form: coefficients and spacing as the polynomial printer emits them."""
        f = self.endomorphism(check_resultant=False)
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "description": self.description,
            "space": list(self.space),
            "blocks": f.block_strings(),
            "points": {k: [list(ProjPoint.of(*v).coords[j]) for j in range(len(v))] for k, v in self.points.items()},
            "options": {
                "horizon": self.options.horizon,
                "digit_budget": self.options.digit_budget,
                "tol": self.options.tol,
            },
            "tags": list(self.tags),
        }


def _require(data: dict, key: str, kind: type):
    if key not in data:
        raise SystemFileError(f"missing field {key!r}")
    if not isinstance(data[key], kind):
        raise SystemFileError(f"field {key!r} must be {kind.__name__}")
    return data[key]


def parse_system(data: dict[str, Any]) -> SystemDescription:
    if data.get("schema") != SCHEMA_VERSION:
        raise SystemFileError(f"unsupported schema version {data.get('schema')!r}")
    name = _require(data, "name", str)
    space = tuple(int(n) for n in _require(data, "space", list))
    blocks = tuple(tuple(str(p) for p in b) for b in _require(data, "blocks", list))
    raw_points = data.get("points", {})
    if not isinstance(raw_points, dict):
        raise SystemFileError("field 'points' must be an object")
    points = {}
    for k, v in raw_points.items():
        coords = tuple(tuple(int(c) for c in vec) for vec in v)
        if len(coords) != len(space) or any(len(c) != n + 1 for c, n in zip(coords, space)):
            raise SystemFileError(f"point {k!r} does not match the space {list(space)}")
        if any(not any(c) for c in coords):
            raise SystemFileError(f"point {k!r} has an all-zero factor")
        points[k] = coords
    opts = data.get("options", {})
    options = Options(
        int(opts.get("horizon", DEFAULT_HORIZON)),
        int(opts.get("digit_budget", DEFAULT_DIGIT_BUDGET)),
        float(opts.get("tol", DEFAULT_TOL)),
    )
    desc = SystemDescription(
        name, space, blocks, points, options, str(data.get("description", "")), tuple(data.get("tags", ()))
    )
    desc.endomorphism()  # validate early so errors surface at load time
    return desc


def load_system(path: str | Path) -> SystemDescription:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_system(data)


def dump_system(desc: SystemDescription) -> str:
    return json.dumps(desc.to_dict(), indent=2, sort_keys=True) + "\n"


def load_correspondence(path: str | Path) -> Correspondence:
    data = json.loads(Path(path).read_text())
    if data.get("schema") != SCHEMA_VERSION:
        raise SystemFileError(f"unsupported schema version {data.get('schema')!r}")
    try:
        return Correspondence.from_strings(_require(data, "space", list), _require(data, "equations", list))
    except ParseError as exc:
        raise SystemFileError(str(exc)) from exc


def corpus_names() -> list[str]:
    files = resources.files("arithdeg.corpus").iterdir()
    return sorted(p.name[:-5] for p in files if p.name.endswith(".json"))


def load_corpus_system(name: str) -> SystemDescription:
    path = resources.files("arithdeg.corpus").joinpath(f"{name}.json")
    if not path.is_file():
        raise SystemFileError(f"no bundled system named {name!r}")
    return parse_system(json.loads(path.read_text()))


def load_corpus() -> list[SystemDescription]:
    return [load_corpus_system(n) for n in corpus_names()]


def resolve_system(arg: str) -> SystemDescription:
    """A path to a system file, or the name of a bundled corpus system."""
    p = Path(arg)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise SystemFileError(f"no such file: {arg}")
        return load_system(p)
    return load_corpus_system(arg)
