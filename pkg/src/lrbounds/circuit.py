"""Stochastic Pauli-support spreading in brickwork random circuits.

Averaging a Haar-random two-site gate turns Heisenberg evolution of a Pauli
string into a classical Markov chain on the string itself: a gate leaves an
identity pair alone and otherwise re-draws the pair uniformly from the 15
non-identity two-site Pauli assignments.  This module simulates that chain on
an open chain of L sites with the brickwork layout (odd layers couple sites
(0,1), (2,3), ...; even layers couple (1,2), (3,4), ...).

Randomness is counter-based: sample s of a run with seed S consumes a Philox
stream keyed (S, s), reading one fixed-size block of draws per layer.  The
draw for a given (sample, step, gate) is therefore a pure function of those
indices, so results are bit-identical no matter how samples are chunked over
workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

# Pauli codes: 0=I, 1=X, 2=Y, 3=Z.  A pair (a, b) maps to 4*a + b in 0..15;
# draws are uniform over 1..15 (the identity pair is never produced).
PAIR_CODES = 15
CHUNK_SAMPLES = 512


def layer_gates(length: int, step: int) -> np.ndarray:
    """Left sites of the gates in one layer (step counts from 1)."""
    start = 0 if step % 2 == 1 else 1
    return np.arange(start, length - 1, 2)


def spread_step(pair, rng):
    """One gate update on a two-site Pauli pair (scalar reference version)."""
    a, b = pair
    if a == 0 and b == 0:
        return (0, 0)
    draw = int(rng.integers(PAIR_CODES)) + 1
    return (draw >> 2, draw & 3)


def spread_step_many(pair, n_draws: int, rng) -> np.ndarray:
    """Counts of the 16 outcome pairs over many updates of the same input."""
    a, b = pair
    counts = np.zeros(16, dtype=np.int64)
    if a == 0 and b == 0:
        counts[0] = n_draws
        return counts
    draws = rng.integers(PAIR_CODES, size=n_draws) + 1
    counts[1:] = np.bincount(draws, minlength=16)[1:]
    return counts


def sample_stream(seed: int, sample_index: int) -> np.random.Generator:
    key = np.array([seed, sample_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class SpreadSample:
    """Full support trajectory of one sample (sets of non-identity sites)."""

    length: int
    depth: int
    rng_seed: int
    sample_index: int
    trajectory: list  # per step, frozenset of sites


@dataclass
class SpreadStats:
    """Aggregate front statistics of a spreading run."""

    length: int
    depth: int
    initial_site: int
    samples: int
    seed: int
    right_front: np.ndarray  # (samples, depth+1) int16
    left_front: np.ndarray
    support_size: np.ndarray  # (samples, depth+1) int32
    cone_right: np.ndarray  # (depth+1,) deterministic reachability cone
    cone_left: np.ndarray
    front_velocity: float = field(init=False)
    front_velocity_stderr: float = field(init=False)

    def __post_init__(self):
        v, se = _fit_front_velocity(self.right_front, self.depth)
        self.front_velocity = v
        self.front_velocity_stderr = se

    def mean_front(self) -> np.ndarray:
        return self.right_front.mean(axis=0)

    def std_front(self) -> np.ndarray:
        return self.right_front.std(axis=0)

    def mean_support(self) -> np.ndarray:
        return self.support_size.mean(axis=0)

    def support_histogram(self):
        """Occurrences of each final support size."""
        final = self.support_size[:, -1]
        return np.bincount(final, minlength=self.length + 1)

    def to_csv(self) -> str:
        lines = ["step,mean_front,std_front,mean_support"]
        mf, sf, ms = self.mean_front(), self.std_front(), self.mean_support()
        for k in range(self.depth + 1):
            lines.append(f"{k},{mf[k]:.17g},{sf[k]:.17g},{ms[k]:.17g}")
        return "\n".join(lines) + "\n"

    def summary_dict(self):
        return {
            "v_b": self.front_velocity,
            "stderr": self.front_velocity_stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def _fit_front_velocity(right_front: np.ndarray, depth: int):
    """Least-squares front slope over the second half of the run.

    The per-sample slopes are averaged (equivalently, the mean front is fit);
    the standard error is the spread of the per-sample slopes.
    """
    k0 = depth // 2
    ks = np.arange(k0, depth + 1, dtype=float)
    kc = ks - ks.mean()
    denom = float((kc ** 2).sum())
    slopes = (right_front[:, k0:].astype(float) @ kc) / denom
    n = len(slopes)
    return float(slopes.mean()), float(slopes.std(ddof=1) / math.sqrt(n))


def deterministic_cone(length: int, depth: int, initial_site: int):
    """Exact per-step reachable interval of the brickwork adjacency."""
    reach = np.zeros(length, dtype=bool)
    reach[initial_site] = True
    left = np.empty(depth + 1, dtype=np.int16)
    right = np.empty(depth + 1, dtype=np.int16)
    left[0] = right[0] = initial_site
    for step in range(1, depth + 1):
        for i in layer_gates(length, step):
            if reach[i] or reach[i + 1]:
                reach[i] = reach[i + 1] = True
        idx = np.nonzero(reach)[0]
        left[step], right[step] = idx[0], idx[-1]
    return left, right


def _run_chunk(length, depth, initial_site, seed, lo, hi):
    """Simulate samples lo..hi-1, vectorized across the chunk."""
    m = hi - lo
    gate_sets = [layer_gates(length, step) for step in range(1, depth + 1)]
    max_gates = max(len(g) for g in gate_sets)
    draws = np.empty((m, depth, max_gates), dtype=np.uint8)
    for idx in range(m):
        gen = sample_stream(seed, lo + idx)
        draws[idx] = gen.integers(PAIR_CODES, size=(depth, max_gates), dtype=np.uint8) + 1

    state = np.zeros((m, length), dtype=np.uint8)
    state[:, initial_site] = 1  # X
    right = np.empty((m, depth + 1), dtype=np.int16)
    left = np.empty((m, depth + 1), dtype=np.int16)
    size = np.empty((m, depth + 1), dtype=np.int32)
    sites = np.arange(length)
    right[:, 0] = left[:, 0] = initial_site
    size[:, 0] = 1
    for step in range(1, depth + 1):
        gates = gate_sets[step - 1]
        a = state[:, gates]
        b = state[:, gates + 1]
        active = (a | b) != 0
        d = draws[:, step - 1, :len(gates)]
        state[:, gates] = np.where(active, d >> 2, a)
        state[:, gates + 1] = np.where(active, d & 3, b)
        occupied = state != 0
        right[:, step] = np.where(occupied, sites, -1).max(axis=1)
        left[:, step] = np.where(occupied, sites, length).min(axis=1)
        size[:, step] = occupied.sum(axis=1)
    return right, left, size


def run_spread(length: int, depth: int, initial_site: int, samples: int,
               seed: int, workers: int = 1) -> SpreadStats:
    """Monte-Carlo front statistics for `samples` independent trajectories.

    Requires the deterministic cone to stay off the boundary
    (initial_site +- depth strictly inside the chain), so the measured front
    is never an artifact of reflection.
    """
    if length < 2 * depth + 2:
        raise ValueError(f"chain of length {length} too short for depth {depth}")
    if not 0 <= initial_site < length:
        raise ValueError("initial_site outside the chain")
    if initial_site - depth < 0 or initial_site + depth > length - 1:
        raise ValueError("deterministic cone would hit the boundary")
    if samples < 1:
        raise ValueError("need at least one sample")

    bounds = list(range(0, samples, CHUNK_SAMPLES)) + [samples]
    chunks = list(zip(bounds[:-1], bounds[1:]))

    def work(chunk):
        lo, hi = chunk
        return _run_chunk(length, depth, initial_site, seed, lo, hi)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    right = np.concatenate([p[0] for p in parts], axis=0)
    left = np.concatenate([p[1] for p in parts], axis=0)
    size = np.concatenate([p[2] for p in parts], axis=0)
    cone_left, cone_right = deterministic_cone(length, depth, initial_site)
    return SpreadStats(length, depth, initial_site, samples, seed,
                       right, left, size, cone_right, cone_left)


def simulate_sample(length: int, depth: int, initial_site: int, seed: int,
                    sample_index: int) -> SpreadSample:
    """Single trajectory with the full support record, same stream layout as
    run_spread."""
    gate_sets = [layer_gates(length, step) for step in range(1, depth + 1)]
    max_gates = max(len(g) for g in gate_sets)
    gen = sample_stream(seed, sample_index)
    draws = gen.integers(PAIR_CODES, size=(depth, max_gates), dtype=np.uint8) + 1
    state = np.zeros(length, dtype=np.uint8)
    state[initial_site] = 1
    trajectory = [frozenset({initial_site})]
    for step in range(1, depth + 1):
        gates = gate_sets[step - 1]
        for g_idx, i in enumerate(gates):
            if state[i] or state[i + 1]:
                d = draws[step - 1, g_idx]
                state[i] = d >> 2
                state[i + 1] = d & 3
        trajectory.append(frozenset(np.nonzero(state)[0].tolist()))
    return SpreadSample(length, depth, seed, sample_index, trajectory)


@dataclass
class ConeCheck:
    ok: bool
    violations: list  # of (sample_index, step)


def strict_cone_check(stats: SpreadStats) -> ConeCheck:
    """Verify every sample stayed inside the deterministic circuit cone.

    Returns the offending (sample, step) pairs when it fails; the update rule
    is gate-local, so an honest run can never produce one.
    """
    over = stats.right_front > stats.cone_right[None, :]
    under = stats.left_front < stats.cone_left[None, :]
    bad = over | under
    if not bad.any():
        return ConeCheck(True, [])
    idx = np.argwhere(bad)
    return ConeCheck(False, [(int(s), int(k)) for s, k in idx])
