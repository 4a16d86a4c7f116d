"""Closed-form bound values against independent oracles."""

import math

import numpy as np
import pytest

from lrbounds import bounds as b
from lrbounds.graphs import InteractionGraph, complete_graph, path_graph


def test_matrix_exp_single_edge_closed_form():
    # 2x2 oracle: coupling matrix h*[[1,1],[1,1]] has eigenvalues {0, 2h},
    # so the off-diagonal of exp(2|t|h) is (e^{4h|t|} - 1)/2.
    for h, t in [(1.0, 0.3), (0.4, 1.7), (2.0, -0.25)]:
        g = path_graph(2, norm=h)
        expected = (math.exp(4.0 * h * abs(t)) - 1.0) / 2.0
        assert b.matrix_exp_bound(g, {0}, {1}, t) == pytest.approx(expected, rel=1e-12)


def test_matrix_exp_zero_time_disjoint():
    g = path_graph(6)
    assert b.matrix_exp_bound(g, {0}, {4, 5}, 0.0) == 0.0


def test_matrix_exp_complete_graph_closed_form():
    # all-to-all coupling matrix = J0*J + (N-2)*J0*I; its exponential's
    # off-diagonal entry has the two-exponential closed form
    for n in (4, 6):
        j0, t = 0.8, 0.21
        g = complete_graph(n, norm=j0)
        a_const = j0
        b_const = (n - 2) * j0 / n
        expected = (math.exp(2 * t * (a_const + b_const) * n)
                    - math.exp(2 * t * b_const * n)) / n
        got = b.matrix_exp_bound(g, {0}, {1}, t)
        assert got == pytest.approx(expected, rel=1e-11)


def test_matrix_exp_input_validation():
    g = path_graph(3)
    with pytest.raises(ValueError):
        b.matrix_exp_bound(g, set(), {1}, 1.0)
    with pytest.raises(ValueError):
        b.matrix_exp_bound(g, {0}, {7}, 1.0)


def test_path_sum_chain_self_avoiding():
    g = path_graph(5)  # vertices 0..4
    for t in (0.3, 1.0, 2.5):
        partial, tail = b.path_sum_bound(g, {0}, {4}, t, 4, self_avoiding=True)
        assert partial == pytest.approx((2 * t) ** 4 / 24.0, rel=1e-12)
        assert tail >= 0.0


def test_path_sum_too_far_is_zero():
    g = path_graph(6)
    partial, _ = b.path_sum_bound(g, {0}, {5}, 1.0, 3)
    assert partial == 0.0


def test_path_sum_triangle_unrestricted():
    g = complete_graph(3)
    t = 0.4
    partial, _ = b.path_sum_bound(g, {0}, {2}, t, 2)
    assert partial == pytest.approx(2 * t + (2 * t) ** 2 / 2 * 3, rel=1e-12)


def test_path_sum_monotone_in_ell_max():
    g = complete_graph(4, norm=0.5)
    prev = 0.0
    for ell in range(1, 7):
        partial, _ = b.path_sum_bound(g, {0}, {3}, 0.6, ell)
        assert partial >= prev - 1e-15
        prev = partial


def test_path_sum_tail_converges():
    g = path_graph(6)
    _, tail_small = b.path_sum_bound(g, {0}, {3}, 0.1, 8)
    _, tail_big = b.path_sum_bound(g, {0}, {3}, 0.1, 12)
    assert tail_big < tail_small < 1e-6


def test_ordering_self_avoiding_unrestricted_matrix_exp():
    rng = np.random.default_rng(17)
    for _ in range(8):
        n = int(rng.integers(4, 8))
        edges = []
        for i in range(n - 1):
            edges.append((i, i + 1, float(rng.uniform(0.3, 1.0))))
        for _ in range(2):
            i, j = rng.integers(0, n, 2)
            if i != j and not any({int(i), int(j)} == {u, v} for u, v, _ in edges):
                edges.append((int(min(i, j)), int(max(i, j)), float(rng.uniform(0.3, 1.0))))
        g = InteractionGraph(range(n), edges)
        for t in (0.2, 0.7):
            sa, _ = b.path_sum_bound(g, {0}, {n - 1}, t, 8, self_avoiding=True)
            free, _ = b.path_sum_bound(g, {0}, {n - 1}, t, 8)
            mat = b.matrix_exp_bound(g, {0}, {n - 1}, t)
            assert sa <= free + 1e-12
            assert free <= mat + 1e-12


def test_chain_bound_values():
    assert b.chain_bound(1.0, 1, 1.0) == pytest.approx(2.0)
    assert b.chain_bound(0.7, 3, 0.0) == 0.0
    # log-gamma oracle at r beyond double-precision factorials
    expected = math.exp(170 * math.log(2.0) - math.lgamma(171))
    assert b.chain_bound(1.0, 170, 1.0) == pytest.approx(expected, rel=1e-12)
    assert np.isfinite(b.chain_bound(1.0, 400, 1.0))


def test_bounded_degree_forms():
    k = 1.0 / (1.0 - 2.0 / math.e)
    for h, r, t in [(1.0, 2, 0.2), (0.5, 4, 0.8)]:
        expected = min(2.0, (4 * h * t) ** r / math.factorial(r) * k)
        assert b.bounded_degree_bound(2, h, r, t) == pytest.approx(expected, rel=1e-12)
    assert b.bounded_degree_bound(3, 1.0, 2, 0.0) == 0.0
    assert b.bounded_degree_bound(4, 1.0, 1, 50.0) == 2.0
    with pytest.raises(ValueError):
        b.bounded_degree_bound(1, 1.0, 1, 1.0)


def test_chain_below_bounded_degree_when_cap_inactive():
    rng = np.random.default_rng(23)
    for _ in range(50):
        h = float(rng.uniform(0.1, 2.0))
        r = int(rng.integers(1, 12))
        t = float(rng.uniform(0.0, 1.0))
        bd = b.bounded_degree_bound(2, h, r, t)
        if bd < 2.0:
            assert b.chain_bound(h, r, t) <= bd + 1e-12


def test_factorial_to_exponential():
    assert b.factorial_to_exponential(1.0, 1.0, 2, 1.0) == pytest.approx(
        math.exp(-2.0) * (math.exp(math.e) - 1.0), rel=1e-12)
    assert b.factorial_to_exponential(1.0, 1.0, 5, 0.0) == 0.0
    with pytest.raises(ValueError):
        b.factorial_to_exponential(1.0, -0.1, 2, 1.0)
    with pytest.raises(ValueError):
        b.factorial_to_exponential(1.0, 1.0, 1, 1.0)


def test_factorial_to_exponential_dominates():
    rng = np.random.default_rng(29)
    for _ in range(200):
        c = float(rng.uniform(0.1, 3.0))
        mu = float(rng.uniform(0.1, 2.0))
        r = int(rng.integers(2, 30))
        t = float(rng.uniform(0.0, 3.0))
        factorial_form = (c * t) ** r / math.factorial(r)
        assert b.factorial_to_exponential(c, mu, r, t) >= factorial_form - 1e-12


def test_exp_envelope():
    assert b.exp_envelope(1.0, 1.0, 1.0, 1, 5, 0.0) == 0.0
    assert b.exp_envelope(1.0, 1.0, 1.0, 1, 5, 1.0) == pytest.approx(
        math.exp(-5.0) * (math.e - 1.0), rel=1e-12)
    # doubling the distance multiplies by exp(-mu * d)
    v1 = b.exp_envelope(2.0, 0.7, 1.3, 3, 4, 0.9)
    v2 = b.exp_envelope(2.0, 0.7, 1.3, 3, 8, 0.9)
    assert v2 == pytest.approx(v1 * math.exp(-0.7 * 4), rel=1e-12)


def test_single_particle_bound():
    val = b.single_particle_bound(1.0, 5, 0.1)
    assert val == pytest.approx((0.2 * math.e / 5) ** 5 / (1 - math.exp(-2)), rel=1e-12)
    assert b.single_particle_bound(1.0, 30, 1.0) < 1e-6
    assert b.single_particle_bound(1.0, 1, 100.0) == 1.0
    assert b.single_particle_bound(1.0, 1, 0.0) == 0.0


def test_qw_markov_fixed_b():
    got = b.qw_markov_bound(1.0, 10, 1.0, 0.5)
    expected = math.exp(-5.0 * (1.0 - 0.4 * math.sinh(0.25) / 0.5))
    assert got == pytest.approx(expected, rel=1e-12)
    # t = 0 reduces to exp(-b x0)
    assert b.qw_markov_bound(1.0, 3, 0.0, 2.0) == pytest.approx(math.exp(-6.0))


def test_qw_markov_optimized():
    # beats (or ties) any fixed b, and certifies velocity 2h: below 1 outside it
    for x0, t in [(10, 1.0), (5, 2.0), (8, 3.5)]:
        opt = b.qw_markov_bound(1.0, x0, t, "optimize")
        for bb in (0.1, 0.5, 1.0, 3.0, 10.0):
            assert opt <= b.qw_markov_bound(1.0, x0, t, bb) + 1e-10
        if x0 > 2.0 * t:
            assert opt < 1.0
    # analytic oracle: interior optimum at cosh(b/2) = x0 / (2 h t)
    h, x0, t = 1.0, 10, 1.0
    b_star = 2.0 * math.acosh(x0 / (2.0 * h * t))
    expected = math.exp(-b_star * x0 + 4.0 * h * t * math.sinh(b_star / 2.0))
    assert b.qw_markov_bound(h, x0, t, "optimize") == pytest.approx(expected, rel=1e-7)


def test_butterfly_velocity_general():
    # oracle: dense scan of (d + e^-b + (d-1) e^b)/b over b
    for degree in (2, 3, 5):
        bs = np.linspace(1e-4, 10.0, 400_000)
        scan = (degree + np.exp(-bs) + (degree - 1) * np.exp(bs)) / bs
        oracle = 2.0 * scan.min()
        v, b_star = b.butterfly_velocity_general(degree, 1.0)
        assert v == pytest.approx(oracle, rel=1e-6)
        assert 0.0 < b_star < 10.0
        # interior minimum: finite-difference slope changes sign
        f = lambda x: (degree + math.exp(-x) + (degree - 1) * math.exp(x)) / x
        eps = 1e-4
        assert f(b_star - eps) > f(b_star) - 1e-12
        assert f(b_star + eps) > f(b_star) - 1e-12
    v1, _ = b.butterfly_velocity_general(2, 1.0)
    v2, _ = b.butterfly_velocity_general(2, 2.0)
    assert v2 == pytest.approx(2.0 * v1, rel=1e-10)


def test_butterfly_velocity_1d():
    assert b.butterfly_velocity_1d(1.0) == 4.0
    assert b.butterfly_velocity_1d(0.0) == 0.0
    v_general, _ = b.butterfly_velocity_general(2, 1.0)
    assert b.butterfly_velocity_1d(1.0) <= v_general


def test_all_families_monotone_in_time():
    ts = np.linspace(0.0, 3.0, 40)
    g = complete_graph(4, norm=0.6)
    series = {
        "matrix_exp": [b.matrix_exp_bound(g, {0}, {3}, t) for t in ts],
        "chain": [b.chain_bound(0.8, 3, t) for t in ts],
        "degree": [b.bounded_degree_bound(3, 0.8, 3, t) for t in ts],
        "single": [b.single_particle_bound(1.0, 4, t) for t in ts],
        "envelope": [b.exp_envelope(1.0, 0.5, 2.0, 2, 3, t) for t in ts],
        "fact2exp": [b.factorial_to_exponential(1.0, 0.5, 3, t) for t in ts],
        "qw": [b.qw_markov_bound(1.0, 5, t, "optimize") for t in ts],
    }
    for name, vals in series.items():
        diffs = np.diff(vals)
        assert np.all(diffs >= -1e-12), name


def test_zero_time_zero_value_disjoint():
    g = path_graph(4)
    assert b.matrix_exp_bound(g, {0}, {3}, 0.0) == 0.0
    partial, _ = b.path_sum_bound(g, {0}, {3}, 0.0, 5)
    assert partial == 0.0
