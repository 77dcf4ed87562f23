"""Potential tables on radial grids and their CSV/JSON serialization."""

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

COLUMNS = ("r_au", "coulomb", "delta_v", "method", "est_error")


@dataclass(frozen=True)
class PotentialSample:
    """One table row.

    ``coulomb`` is the bare nuclear potential ``-Z/r`` in hartree, given
    for scale; ``delta_v`` is the correction.
    """

    r_au: float
    coulomb: float
    delta_v: float
    method: str
    est_error: float
    flags: tuple = ()


def _fmt(x):
    # 17 significant digits round-trip a double; format() ignores locale
    return format(float(x), ".17g")


@dataclass(frozen=True)
class PotentialTable:
    """Rows in grid order plus the parameters that produced them."""

    kind: str
    rows: tuple
    params: tuple = ()

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for s in self.rows:
            w.writerow([_fmt(s.r_au), _fmt(s.coulomb), _fmt(s.delta_v), s.method, _fmt(s.est_error)])
        return buf.getvalue()

    def to_json(self):
        doc = {
            "kind": self.kind,
            "params": dict(self.params),
            "columns": list(COLUMNS),
            "rows": [
                {"r_au": s.r_au, "coulomb": s.coulomb, "delta_v": s.delta_v,
                 "method": s.method, "est_error": s.est_error, "flags": list(s.flags)}
                for s in self.rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def render(self, fmt="csv"):
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise DomainError(f"unknown output format {fmt!r}")


def make_grid(r_min, r_max, points, grid="log"):
    """Radial grid including both end points."""
    if not (0.0 < r_min < r_max and np.isfinite(r_max)):
        raise DomainError(f"need 0 < r_min < r_max, got {r_min!r}, {r_max!r}")
    if int(points) != points or points < 2:
        raise DomainError(f"points must be an integer >= 2, got {points!r}")
    if grid == "log":
        return np.geomspace(r_min, r_max, int(points))
    if grid == "linear":
        return np.linspace(r_min, r_max, int(points))
    raise DomainError(f"grid must be 'linear' or 'log', got {grid!r}")


def tabulate(kind, evaluate, radii, Z, *, jobs=1, params=()):
    """Evaluate ``evaluate(r) -> PotentialResult`` on `radii`.

    With ``jobs > 1`` rows are computed in worker processes (`evaluate`
    must then be picklable); the table is always in grid order.
    """
    radii = [float(r) for r in radii]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate, radii))
    else:
        results = [evaluate(r) for r in radii]
    rows = tuple(PotentialSample(r, -Z / r, res.value, res.method, res.est_error, res.flags)
                 for r, res in zip(radii, results))
    return PotentialTable(kind, rows, tuple(params))
