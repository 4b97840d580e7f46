"""On-disk orbit cache.

One file per (system digest, starting point).  Each line is a JSON record
with the step index, the factor coordinate vectors and per-factor digit
counts; the last line is a footer with the stop reason.  Coordinates with
more than ``INLINE_DIGITS`` digits go to side files named by the sha256 of
their binary encoding.  Every write is temp-file-then-rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from ..dynamics import Endomorphism, OrbitRecord, ProjPoint, decimal_digits, iterate

INLINE_DIGITS = 2000
CACHE_ENV = "ARITHDEG_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "arithdeg"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _encode_int(x: int) -> bytes:
    n = (x.bit_length() + 8) // 8
    return x.to_bytes(n, "big", signed=True)


class OrbitCache:
    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _key(self, digest: str, x: ProjPoint) -> str:
        return hashlib.sha256(f"{digest}|{x}".encode()).hexdigest()[:24]

    def path(self, digest: str, x: ProjPoint) -> Path:
        return self.root / "orbits" / f"{digest}-{self._key(digest, x)}.jsonl"

    def _blob_path(self, h: str) -> Path:
        return self.root / "blobs" / f"{h}.bin"

    def _store_int(self, x: int) -> str | dict:
        if decimal_digits(x) <= INLINE_DIGITS:
            return str(x)
        data = _encode_int(x)
        h = hashlib.sha256(data).hexdigest()
        p = self._blob_path(h)
        if not p.exists():
            _atomic_write(p, data)
        return {"ref": h}

    def _load_int(self, v: str | dict) -> int:
        if isinstance(v, str):
            return int(v)
        data = self._blob_path(v["ref"]).read_bytes()
        if hashlib.sha256(data).hexdigest() != v["ref"]:
            raise ValueError(f"corrupt side file {v['ref']}")
        return int.from_bytes(data, "big", signed=True)

    def store(self, rec: OrbitRecord) -> Path:
        x = rec.points[0]
        lines = []
        for n, (p, digs) in enumerate(zip(rec.points, rec.digits)):
            coords = [[self._store_int(c) for c in vec] for vec in p.coords]
            lines.append(json.dumps({"n": n, "coords": coords, "digits": list(digs)}, sort_keys=True))
        footer = {
            "footer": True,
            "stop_reason": rec.stop_reason,
            "n_max": rec.n_max,
            "digit_budget": rec.digit_budget,
            "system_digest": rec.system_digest,
        }
        lines.append(json.dumps(footer, sort_keys=True))
        path = self.path(rec.system_digest, x)
        _atomic_write(path, ("\n".join(lines) + "\n").encode())
        return path

    def load(self, digest: str, x: ProjPoint) -> OrbitRecord | None:
        path = self.path(digest, x)
        if not path.exists():
            return None
        try:
            rows = [json.loads(line) for line in path.read_text().splitlines() if line]
            footer = rows[-1]
            if not footer.get("footer") or footer.get("system_digest") != digest:
                return None
            points = []
            for n, row in enumerate(rows[:-1]):
                if row["n"] != n:
                    return None
                points.append(ProjPoint(tuple(tuple(self._load_int(c) for c in vec) for vec in row["coords"])))
        except (OSError, ValueError, KeyError):
            return None
        return OrbitRecord(digest, tuple(points), footer["stop_reason"], footer["n_max"], footer["digit_budget"])

    def orbit(self, f: Endomorphism, x: ProjPoint, n_max: int, digit_budget: int) -> tuple[OrbitRecord, bool]:
        """The orbit a cold ``iterate`` call would return, and whether the cache served it."""
        x = ProjPoint.of(*x.coords)
        digest = f.digest()
        cached = self.load(digest, x)
        if cached is not None:
            rec = _restrict(cached, n_max, digit_budget)
            if rec is not None:
                return rec, True
        rec = iterate(f, x, n_max, digit_budget)
        self.store(rec)
        return rec, False


def _restrict(rec: OrbitRecord, n_max: int, budget: int) -> OrbitRecord | None:
    """Truncate a cached orbit to a request, or None when the cache cannot answer it."""
    pts = []
    for p, digs in zip(rec.points, rec.digits):
        if len(pts) > n_max:
            break
        if pts and sum(digs) > budget:
            return OrbitRecord(rec.system_digest, tuple(pts), "budget", n_max, budget)
        pts.append(p)
    if len(pts) == n_max + 1:
        return OrbitRecord(rec.system_digest, tuple(pts), "completed", n_max, budget)
    # the cache ran out; it answers only if it stopped at the same budget
    if rec.stop_reason == "budget" and rec.digit_budget == budget:
        return OrbitRecord(rec.system_digest, tuple(pts), "budget", n_max, budget)
    return None
