"""State vectors, entanglement entropies, and connected correlations.

States are plain complex 1-d arrays of length 2^n, site 0 the leftmost tensor
factor, checked to unit norm where the contract requires it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .paulis import embed_site_operator, operator_norm

NORM_ATOL = 1e-10


def assert_normalized(psi: np.ndarray, label="state"):
    if abs(np.linalg.norm(psi) - 1.0) > NORM_ATOL:
        raise ValueError(f"{label} is not normalized")


def basis_state(n: int, bits) -> np.ndarray:
    """|b_0 b_1 ... b_{n-1}> as a dense vector."""
    bits = list(bits)
    if len(bits) != n:
        raise ValueError("bit count must equal qubit count")
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    psi = np.zeros(2 ** n, dtype=complex)
    psi[index] = 1.0
    return psi


def ghz_state(n: int) -> np.ndarray:
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def w_state(n: int) -> np.ndarray:
    """Equal superposition of the n single-excitation basis states."""
    psi = np.zeros(2 ** n, dtype=complex)
    for site in range(n):
        psi[1 << (n - 1 - site)] = 1.0 / math.sqrt(n)
    return psi


def product_state(factors) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def reduced_density_matrix(psi: np.ndarray, region, n: int) -> np.ndarray:
    """rho_region of a pure state."""
    region = sorted(set(region))
    if any(not 0 <= s < n for s in region):
        raise ValueError("region out of range")
    if psi.shape != (2 ** n,):
        raise ValueError("state shape does not match qubit count")
    rest = [i for i in range(n) if i not in region]
    tensor = psi.reshape((2,) * n)
    mat = np.transpose(tensor, region + rest).reshape(2 ** len(region), 2 ** len(rest))
    return mat @ mat.conj().T


def renyi_entropy(psi: np.ndarray, region, n: int, alpha: int) -> float:
    """Entanglement entropy of `region`: alpha=1 is von Neumann, alpha=2 is
    the collision entropy -ln Tr rho^2.  Empty region gives 0 by convention."""
    if alpha not in (1, 2):
        raise ValueError("alpha must be 1 or 2")
    region = sorted(set(region))
    if not region:
        return 0.0
    assert_normalized(psi)
    rho = reduced_density_matrix(psi, region, n)
    evals = np.linalg.eigvalsh(rho)
    evals = np.clip(evals.real, 0.0, None)
    if alpha == 2:
        return float(-math.log(max(np.sum(evals ** 2), 1e-300)))
    pos = evals[evals > 1e-15]
    return float(-np.sum(pos * np.log(pos)))


@dataclass(frozen=True)
class LocalOperator:
    """Dense operator together with the sites it acts on."""

    matrix: np.ndarray
    sites: tuple

    def embedded(self, n: int) -> np.ndarray:
        return embed_site_operator(self.matrix, list(self.sites), n)


def connected_correlation(psi: np.ndarray, a_op: LocalOperator,
                          b_op: LocalOperator, n: int) -> float:
    """<AB> - <A><B> in `psi` for Hermitian unit-norm operators on disjoint
    supports; always inside [-1, 1]."""
    if set(a_op.sites) & set(b_op.sites):
        raise ValueError("operators must have disjoint supports")
    for op, label in ((a_op, "A"), (b_op, "B")):
        if np.abs(op.matrix - op.matrix.conj().T).max() > NORM_ATOL:
            raise ValueError(f"{label} must be Hermitian")
        if operator_norm(op.matrix) > 1.0 + NORM_ATOL:
            raise ValueError(f"{label} must have operator norm at most 1")
    assert_normalized(psi)
    a = a_op.embedded(n)
    b = b_op.embedded(n)
    ev = lambda op: float(np.real(psi.conj() @ (op @ psi)))
    return ev(a @ b) - ev(a) * ev(b)
