"""Bound surfaces, serialization, and light-cone fitting."""

import json
import math

import numpy as np
import pytest

from lrbounds import FitError
from lrbounds.bounds import chain_bound, single_particle_bound
from lrbounds.curves import (BoundCurve, complete_graph_bound_curve,
                             evaluate_family, first_crossing, light_cone_fit)


def chain_curve(h=1.0, rs=range(10, 31, 2), ts=np.linspace(0.0, 8.0, 400)):
    r_col, t_col, v_col = [], [], []
    for r in rs:
        for t in ts:
            r_col.append(r)
            t_col.append(t)
            v_col.append(chain_bound(h, r, t))
    return BoundCurve("Chain1D", np.array(r_col), np.array(t_col), np.array(v_col),
                      {"h": h})


def bisect_crossing(f, lo, hi, tol=1e-12):
    """Independent root bracket for f(t) = eps crossings."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def test_curve_validation():
    with pytest.raises(ValueError):
        BoundCurve("NoSuchFamily", [1], [0.0], [0.0])
    with pytest.raises(ValueError):
        BoundCurve("Chain1D", [1, 2], [0.0], [0.0])
    curve = chain_curve()
    curve.validate()
    bad = BoundCurve("Chain1D", [1, 1], [0.0, 1.0], [0.5, 0.2])
    with pytest.raises(ValueError):
        bad.validate()


def test_csv_round_trip(tmp_path):
    curve = chain_curve(rs=[2, 3], ts=np.array([0.0, 0.5, 1.0]))
    path = tmp_path / "c.csv"
    curve.save_csv(path)
    text = path.read_text()
    assert text.splitlines()[0] == "family,r,t,value"
    loaded = BoundCurve.load_csv(path)
    assert loaded.family == "Chain1D"
    np.testing.assert_array_equal(loaded.rs, curve.rs)
    np.testing.assert_allclose(loaded.values, curve.values, rtol=0, atol=0)


def test_first_crossing_interpolation():
    ts = np.array([0.0, 1.0, 2.0])
    vals = np.array([0.0, 0.0, 1.0])
    assert first_crossing(ts, vals, 0.5) == pytest.approx(1.5)
    assert first_crossing(ts, vals, 2.0) is None
    assert first_crossing(ts, np.array([0.7, 0.8, 0.9]), 0.5) == 0.0


def test_chain_fit_against_root_finding():
    h, eps = 1.0, 0.5
    curve = chain_curve(h=h)
    report = light_cone_fit(curve, eps)
    # oracle: direct bisection of (2ht)^r/r! = eps per distance
    oracle = {}
    for r in range(10, 31, 2):
        f = lambda t, r=r: chain_bound(h, r, t) - eps
        oracle[r] = bisect_crossing(f, 0.0, 8.0)
    rs = np.array(sorted(oracle))
    slope_oracle = np.polyfit([oracle[r] for r in rs], rs, 1)[0]
    assert report.fitted_velocity == pytest.approx(slope_oracle, rel=1e-2)
    # the chain front travels at 2 e h to within 15 percent over this window
    assert abs(report.fitted_velocity - 2 * math.e * h) / (2 * math.e * h) < 0.15
    for r in rs:
        assert report.crossings[r] == pytest.approx(oracle[r], abs=2e-2)
    crossing_list = [report.crossings[r] for r in rs]
    assert all(b >= a for a, b in zip(crossing_list, crossing_list[1:]))


def test_single_particle_fit_velocity():
    rs = range(12, 41, 2)
    ts = np.linspace(0.0, 10.0, 600)
    r_col, t_col, v_col = [], [], []
    for r in rs:
        for t in ts:
            r_col.append(r)
            t_col.append(t)
            v_col.append(single_particle_bound(1.0, r, t))
    curve = BoundCurve("SingleParticle", np.array(r_col), np.array(t_col),
                       np.array(v_col), {"h": 1.0})
    report = light_cone_fit(curve, 0.5)
    v_expected = 2 * math.e
    assert abs(report.fitted_velocity - v_expected) / v_expected < 0.15


def test_constant_zero_curve_fit_error():
    rs = np.repeat([1, 2, 3], 5)
    ts = np.tile(np.linspace(0, 1, 5), 3)
    curve = BoundCurve("Chain1D", rs, ts, np.zeros(15), {})
    with pytest.raises(FitError):
        light_cone_fit(curve, 0.5)


def test_fit_epsilon_validation():
    curve = chain_curve()
    with pytest.raises(ValueError):
        light_cone_fit(curve, 0.0)
    with pytest.raises(ValueError):
        light_cone_fit(curve, 1.5)


def test_report_json_schema(tmp_path):
    report = light_cone_fit(chain_curve(), 0.5)
    path = tmp_path / "cone.json"
    report.save_json(path)
    data = json.loads(path.read_text())
    assert set(data) == {"epsilon", "crossings", "velocity", "residual"}
    assert all(set(c) == {"r", "t"} for c in data["crossings"])


def test_evaluate_family_grid_shape():
    curve = evaluate_family("Chain1D", [1, 2, 3], [0.0, 0.5, 1.0], {"h": 1.0})
    assert len(curve.values) == 9
    curve.validate()
    qw = evaluate_family("QWMarkov", [2, 4], [0.0, 1.0], {"h": 1.0})
    assert len(qw.values) == 4
    assert np.all(qw.values <= 1.0)


def test_evaluate_family_graph_families():
    from lrbounds.graphs import path_graph

    g = path_graph(5)
    curve = evaluate_family("MatrixExp", [], [0.0, 0.3], {}, graph=g, a={0}, b={4})
    assert list(curve.rs) == [4, 4]
    sa = evaluate_family("SelfAvoiding", [], [0.5], {"ell_max": 6}, graph=g,
                         a={0}, b={4})
    assert sa.values[0] == pytest.approx((2 * 0.5) ** 4 / 24.0)


def test_complete_graph_curve_closed_form():
    curve = complete_graph_bound_curve(6, 1.0, 0.5, [0.0, 0.1, 0.2])
    assert curve.values[0] == 0.0
    expected = (math.exp(2 * 0.1 * 1.5 * 6) - math.exp(2 * 0.1 * 0.5 * 6)) / 6
    assert curve.values[1] == pytest.approx(expected, rel=1e-12)
    curve.validate()
