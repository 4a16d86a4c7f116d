"""Bound surfaces on (r, t) grids and light-cone velocity extraction.

A :class:`BoundCurve` stores the values of one bound family (or a measured
quantity) on a grid of integer distances and times, together with the named
parameters that produced it.  :func:`light_cone_fit` turns a curve into a
:class:`LightConeReport`: the earliest threshold crossing per distance and a
least-squares front velocity.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds as _bounds
from .errors import FitError

FAMILIES = (
    "MatrixExp",
    "PathSum",
    "SelfAvoiding",
    "Chain1D",
    "BoundedDegree",
    "ExpEnvelope",
    "SingleParticle",
    "QWMarkov",
)

# Lossless decimal round-trip for the CSV artifacts.
FLOAT_FMT = "%.17g"


@dataclass
class BoundCurve:
    """Values of one bound family over an (r, t) grid."""

    family: str
    rs: np.ndarray
    ts: np.ndarray
    values: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown bound family {self.family!r}")
        self.rs = np.asarray(self.rs, dtype=int)
        self.ts = np.asarray(self.ts, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.rs.shape != self.ts.shape or self.rs.shape != self.values.shape:
            raise ValueError("rs, ts, values must have identical shapes")

    def validate(self, atol=1e-12):
        """Check grid invariants: non-negative values, non-decreasing in t at
        fixed r."""
        if np.any(self.values < -atol):
            raise ValueError("bound values must be non-negative")
        for r in np.unique(self.rs):
            sel = self.rs == r
            order = np.argsort(self.ts[sel], kind="stable")
            vals = self.values[sel][order]
            if np.any(np.diff(vals) < -atol):
                raise ValueError(f"values decrease in t at r={r}")
        return self

    def slice_r(self, r):
        """(ts, values) at one distance, sorted by t."""
        sel = self.rs == r
        order = np.argsort(self.ts[sel], kind="stable")
        return self.ts[sel][order], self.values[sel][order]

    # -- serialization: CSV with header family,r,t,value ---------------------

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["family", "r", "t", "value"])
        for r, t, v in zip(self.rs, self.ts, self.values):
            writer.writerow([self.family, int(r), FLOAT_FMT % t, FLOAT_FMT % v])
        return out.getvalue()

    def save_csv(self, path):
        with open(path, "w") as f:
            f.write(self.to_csv())

    @classmethod
    def from_csv(cls, text: str, params=None):
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != ["family", "r", "t", "value"]:
            raise ValueError(f"unexpected CSV header {header!r}")
        fams, rs, ts, vals = [], [], [], []
        for row in reader:
            fams.append(row[0])
            rs.append(int(row[1]))
            ts.append(float(row[2]))
            vals.append(float(row[3]))
        if not fams:
            raise ValueError("empty curve file")
        if len(set(fams)) != 1:
            raise ValueError("curve file mixes families")
        return cls(fams[0], np.array(rs), np.array(ts), np.array(vals),
                   params=params or {})

    @classmethod
    def load_csv(cls, path, params=None):
        with open(path) as f:
            return cls.from_csv(f.read(), params=params)


@dataclass
class LightConeReport:
    """Threshold crossings per distance and the fitted front velocity."""

    epsilon: float
    crossings: dict
    fitted_velocity: float
    fit_residual: float

    def to_json_dict(self):
        return {
            "epsilon": self.epsilon,
            "crossings": [{"r": int(r), "t": t} for r, t in sorted(self.crossings.items())],
            "velocity": self.fitted_velocity,
            "residual": self.fit_residual,
        }

    def save_json(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)


def first_crossing(ts, values, epsilon):
    """Earliest t where `values` reaches epsilon, linearly interpolated
    between grid points; None when the curve never gets there."""
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    above = values >= epsilon
    if not above.any():
        return None
    i = int(np.argmax(above))
    if i == 0:
        return float(ts[0])
    t0, t1 = ts[i - 1], ts[i]
    v0, v1 = values[i - 1], values[i]
    if v1 == v0:
        return float(t1)
    return float(t0 + (epsilon - v0) * (t1 - t0) / (v1 - v0))


def light_cone_fit(curve: BoundCurve, epsilon: float) -> LightConeReport:
    """Extract threshold crossings and fit a front velocity.

    The velocity is the least-squares slope of r against crossing time over
    the largest suffix of distances that all have crossings.  Raises FitError
    with fewer than three crossing distances.
    """
    if not (0.0 < epsilon <= 1.0):
        raise ValueError("epsilon must lie in (0, 1]")
    crossings = {}
    r_sorted = sorted(int(r) for r in np.unique(curve.rs))
    for r in r_sorted:
        ts, vals = curve.slice_r(r)
        tc = first_crossing(ts, vals, epsilon)
        if tc is not None:
            crossings[r] = tc
    # largest suffix of distances in which every r crossed
    suffix = []
    for r in reversed(r_sorted):
        if r in crossings:
            suffix.append(r)
        else:
            break
    suffix.reverse()
    if len(suffix) < 3:
        raise FitError(
            f"only {len(suffix)} trailing distances have threshold crossings; need >= 3")
    tc = np.array([crossings[r] for r in suffix])
    rr = np.array(suffix, dtype=float)
    slope, intercept = np.polyfit(tc, rr, 1)
    residual = float(np.sqrt(np.mean((rr - (slope * tc + intercept)) ** 2)))
    return LightConeReport(float(epsilon), crossings, float(slope), residual)


# -- grid evaluation ----------------------------------------------------------


def evaluate_family(family: str, r_list, t_list, params: dict,
                    graph=None, a=None, b=None) -> BoundCurve:
    """Tabulate one bound family over the cartesian r x t grid.

    Scalar families read their constants from `params`.  Graph families
    (MatrixExp, PathSum, SelfAvoiding) need `graph`, `a`, `b`; their distance
    column is fixed to d(a, b) and `r_list` is ignored.
    """
    t_list = [float(t) for t in t_list]
    if family in ("MatrixExp", "PathSum", "SelfAvoiding"):
        if graph is None or a is None or b is None:
            raise ValueError(f"family {family} needs graph, a, b")
        d = graph.set_distance(a, b)
        r = -1 if d is None else int(d)
        rs, ts, vals = [], [], []
        for t in t_list:
            if family == "MatrixExp":
                v = _bounds.matrix_exp_bound(graph, a, b, t)
            else:
                partial, _ = _bounds.path_sum_bound(
                    graph, a, b, t, int(params["ell_max"]),
                    self_avoiding=(family == "SelfAvoiding"))
                v = partial
            rs.append(r)
            ts.append(t)
            vals.append(v)
        return BoundCurve(family, np.array(rs), np.array(ts), np.array(vals), dict(params))

    scalar = {
        "Chain1D": lambda r, t: _bounds.chain_bound(params["h"], r, t),
        "BoundedDegree": lambda r, t: _bounds.bounded_degree_bound(
            int(params["g"]), params["h"], r, t),
        "ExpEnvelope": lambda r, t: _bounds.exp_envelope(
            params["c"], params["mu"], params["v"], int(params.get("boundary", 1)), r, t),
        "SingleParticle": lambda r, t: _bounds.single_particle_bound(params["h"], r, t),
        "QWMarkov": lambda r, t: _bounds.qw_markov_bound(
            params["h"], r, t, params.get("b", "optimize")),
    }
    if family not in scalar:
        raise ValueError(f"unknown bound family {family!r}")
    fn = scalar[family]
    rs, ts, vals = [], [], []
    for r in r_list:
        for t in t_list:
            rs.append(int(r))
            ts.append(t)
            vals.append(fn(int(r), t))
    return BoundCurve(family, np.array(rs), np.array(ts), np.array(vals), dict(params))


def complete_graph_bound_curve(n: int, a: float, b: float, t_grid) -> BoundCurve:
    """Closed form of the matrix-exponential bound between two vertices of the
    all-to-all graph whose coupling matrix is a*J + b*N*I:
    value(t) = (exp(2 t (a+b) N) - exp(2 t b N)) / N."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if a < 0.0 or b < 0.0:
        raise ValueError("a and b must be non-negative")
    ts = np.asarray(t_grid, dtype=float)
    vals = np.array([
        (math.exp(2.0 * abs(t) * (a + b) * n) - math.exp(2.0 * abs(t) * b * n)) / n
        for t in ts
    ])
    rs = np.ones_like(ts, dtype=int)
    return BoundCurve("MatrixExp", rs, ts, vals, {"n": n, "a": a, "b": b})
