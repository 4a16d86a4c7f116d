"""Closed-form speed-limit bounds on interaction graphs.

Every function here is a pure function of graph data and a handful of real
parameters.  Two families are graph-resolved (the matrix-exponential bound and
the path sums); the rest are scalar closed forms evaluated directly from the
cited expressions.  All bounds depend on time through ``|t|`` only.

Conventions: the bounded quantity is the worst-case commutator between unit
operators on the two sets, *divided by two*.  Factorial ratios ``x**r / r!``
are evaluated in log space once ``r > 20`` so light-cone fits at large
distance never overflow.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ResourceLimitError
from .graphs import InteractionGraph, enumerate_paths

_LOG_SPACE_R = 20
# Geometric-tail constants; each closed form uses the constant from its own
# derivation, and the two are deliberately not unified.
_SINGLE_PARTICLE_K = 1.0 / (1.0 - math.exp(-2.0))
_BOUNDED_DEGREE_K = 1.0 / (1.0 - 2.0 / math.e)

EIGH_VERTEX_LIMIT = 2000


def power_over_factorial(x, r):
    """x**r / r!, evaluated in log space for large r (x >= 0, integer r >= 0)."""
    r = int(r)
    if r < 0:
        raise ValueError("r must be non-negative")
    if x < 0.0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0 if r == 0 else 0.0
    if r <= _LOG_SPACE_R:
        return x ** r / math.factorial(r)
    return math.exp(r * math.log(x) - math.lgamma(r + 1))


def coupling_matrix(graph: InteractionGraph) -> np.ndarray:
    """Symmetric matrix of coupling norms: off-diagonal entries are the edge
    norms, each diagonal entry is the total coupling incident on the vertex."""
    order = {v: i for i, v in enumerate(graph.vertices)}
    n = len(order)
    h = np.zeros((n, n))
    for (u, v), norm in graph.edges.items():
        i, j = order[u], order[v]
        h[i, j] = h[j, i] = norm
        h[i, i] += norm
        h[j, j] += norm
    return h


def matrix_exp_bound(graph: InteractionGraph, a, b, t: float) -> float:
    """Commutator bound from exponentiating the coupling matrix.

    Builds the symmetric coupling matrix h and returns
    ``sum_{u in a, v in b} exp(2|t| h)_{uv}``.
    """
    a = graph._check_vertex_set(a, "A")
    b = graph._check_vertex_set(b, "B")
    if t == 0.0:
        return float(len(a & b))  # exp(0) is the identity, exactly
    order = {v: i for i, v in enumerate(graph.vertices)}
    h = coupling_matrix(graph)
    n = h.shape[0]
    if n <= EIGH_VERTEX_LIMIT:
        # h is symmetric: eigendecomposition is exact to roundoff.
        w, vecs = np.linalg.eigh(h)
        rows = np.array([order[u] for u in a])
        cols = np.array([order[v] for v in b])
        left = vecs[rows, :] * np.exp(2.0 * abs(t) * w)
        block = left @ vecs[cols, :].T
        return float(block.sum())
    from scipy.linalg import expm  # Pade scaling-and-squaring fallback

    m = expm(2.0 * abs(t) * h)
    return float(sum(m[order[u], order[v]] for u in a for v in b))


def path_sum_bound(graph: InteractionGraph, a, b, t: float, ell_max: int,
                   self_avoiding: bool = False, **enum_kwargs):
    """Truncated path-sum bound plus a bound on the discarded tail.

    Returns ``(partial_sum, tail_estimate)`` where the partial sum is
    ``sum_{l <= ell_max} (2|t|)^l / l! * weight(l)`` over rule-satisfying
    (optionally self-avoiding) paths, and the tail estimate controls the terms
    beyond `ell_max` by the bounded-degree geometric argument: at most
    ``E_A * (2g-2)^(l-1)`` paths of length l leave the source set, each with
    weight at most ``h_max^l``.
    """
    tallies = enumerate_paths(graph, a, b, ell_max, self_avoiding, **enum_kwargs)
    x = 2.0 * abs(t)
    partial = sum(power_over_factorial(x, ell) * tallies[ell].weight
                  for ell in range(ell_max + 1) if tallies[ell].count)

    g = graph.max_degree()
    h_max = graph.max_edge_norm()
    branching = max(2 * g - 2, 0)
    a = frozenset(a)
    edges_at_a = sum(1 for (u, v) in graph.edges if u in a or v in a)
    y = x * h_max * branching
    if edges_at_a == 0 or y == 0.0:
        tail = 0.0
    elif y < ell_max + 2:
        head = power_over_factorial(y, ell_max + 1)
        tail = (edges_at_a / branching) * head / (1.0 - y / (ell_max + 2))
    else:
        tail = math.inf  # geometric tail has not started converging
    return partial, tail


def chain_bound(h: float, r: int, t: float) -> float:
    """Nearest-neighbor chain bound (2 h |t|)^r / r! for sets r hops apart."""
    if h < 0.0:
        raise ValueError("h must be non-negative")
    if r < 1:
        raise ValueError("r must be a positive integer")
    return power_over_factorial(2.0 * h * abs(t), r)


def bounded_degree_bound(g: int, h: float, r: int, t: float) -> float:
    """Degree-g graph bound min(2, (4(g-1) h |t|)^r / r! / (1 - 2/e))."""
    if g < 2:
        raise ValueError("degree g must be at least 2")
    if h < 0.0:
        raise ValueError("h must be non-negative")
    if r < 1:
        raise ValueError("r must be a positive integer")
    val = power_over_factorial(4.0 * (g - 1) * h * abs(t), r) * _BOUNDED_DEGREE_K
    return min(2.0, val)


def factorial_to_exponential(c: float, mu: float, r: int, t: float) -> float:
    """Exponential envelope e^{-mu r} (e^{mu v t} - 1) with v = e^mu c / mu.

    Dominates (c|t|)^r / r! for every r > 1; the factorial form is recovered by
    keeping a single term of the exponential series.
    """
    if c <= 0.0:
        raise ValueError("c must be positive")
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    if r <= 1:
        raise ValueError("r must exceed 1")
    # mu * v * t = e^mu * c * t
    return math.exp(-mu * r) * math.expm1(math.exp(mu) * c * abs(t))


def exp_envelope(c: float, mu: float, v: float, boundary: int, d_ab: int, t: float) -> float:
    """Envelope c * boundary * e^{-mu d} (e^{mu v |t|} - 1).

    The constants are caller-supplied; nothing here derives them from a
    microscopic model.
    """
    if min(c, mu, v) <= 0.0:
        raise ValueError("c, mu, v must be positive")
    if boundary < 1 or d_ab < 1:
        raise ValueError("boundary and d_ab must be positive integers")
    return c * boundary * math.exp(-mu * d_ab) * math.expm1(mu * v * abs(t))


def single_particle_bound(h: float, r: int, t: float) -> float:
    """Single-particle hopping bound min(1, (2 e h |t| / r)^r / (1 - e^-2))."""
    if h < 0.0:
        raise ValueError("h must be non-negative")
    if r < 1:
        raise ValueError("r must be a positive integer")
    x = 2.0 * math.e * h * abs(t) / r
    if x == 0.0:
        return 0.0
    val = math.exp(r * math.log(x)) if r > _LOG_SPACE_R else x ** r
    return min(1.0, val * _SINGLE_PARTICLE_K)


def golden_section_minimize(f, lo: float, hi: float, rel_tol: float = 1e-8,
                            max_iter: int = 200):
    """Golden-section search for the minimum of a unimodal f on [lo, hi].

    Returns (x_min, f(x_min)); the bracket shrinks until its width is below
    rel_tol relative to x_min.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel_tol * max(abs(mid), 1e-300):
            break
    x = x1 if f1 < f2 else x2
    return x, f(x)


QW_B_MAX = 50.0


def qw_markov_bound(h: float, x0: int, t: float, b="optimize") -> float:
    """Markov-inequality tail bound for the hopping walk.

    Value ``exp[-b x0 (1 - (4 h t / x0) sinh(b/2) / b)]`` clipped to 1; with
    ``b="optimize"`` the exponent is minimized over b in (0, 50].
    """
    if h < 0.0:
        raise ValueError("h must be non-negative")
    if x0 < 1:
        raise ValueError("x0 must be a positive integer")
    t = abs(t)

    def exponent(bb):
        return -bb * x0 + 4.0 * h * t * math.sinh(0.5 * bb)

    if b == "optimize":
        _, value = golden_section_minimize(exponent, 1e-12, QW_B_MAX)
    else:
        b = float(b)
        if b <= 0.0:
            raise ValueError("b must be positive")
        value = exponent(b)
    return 1.0 if value >= 0.0 else math.exp(value)


def butterfly_velocity_general(degree: int, h: float):
    """Frobenius-cone velocity on a degree-d graph.

    Returns ``(v_b, b_star)`` with
    ``v_b = 2 h min_b (d + e^-b + (d-1) e^b) / b`` found by golden-section
    search (the bracketed function is a sum of convex terms, hence unimodal).
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if h < 0.0:
        raise ValueError("h must be non-negative")
    d = float(degree)

    def objective(b):
        return (d + math.exp(-b) + (d - 1.0) * math.exp(b)) / b

    b_star, fmin = golden_section_minimize(objective, 1e-9, 50.0)
    return 2.0 * h * fmin, b_star


def butterfly_velocity_1d(h_max: float) -> float:
    """Rightmost-site refinement of the 1d Frobenius velocity: 4 h_max."""
    if h_max < 0.0:
        raise ValueError("h_max must be non-negative")
    return 4.0 * h_max
