"""Heisenberg evolution and the error quantities it certifies.

Evolution is by full eigendecomposition of the (time-independent, Hermitian)
Hamiltonian: bit-reproducible and exact to roundoff at these dimensions.
"""

from __future__ import annotations

import numpy as np

from ..bounds import chain_bound
from .paulis import (PAULI_MATRICES, HamiltonianSpec, embed_site_operator,
                     frobenius_norm, operator_norm)

HERMITICITY_ATOL = 1e-10


def assert_hermitian(m: np.ndarray, label="operator"):
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.conj().T).max() > HERMITICITY_ATOL * scale:
        raise ValueError(f"{label} is not Hermitian")


def assert_unitary(u: np.ndarray, label="operator"):
    eye = np.eye(u.shape[0])
    if np.abs(u.conj().T @ u - eye).max() > HERMITICITY_ATOL:
        raise ValueError(f"{label} is not unitary")


def evolution_unitary(h: np.ndarray, t: float) -> np.ndarray:
    """exp(i H t) via eigendecomposition of Hermitian H."""
    assert_hermitian(h, "Hamiltonian")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def evolve_operator(h: np.ndarray, a: np.ndarray, t: float) -> np.ndarray:
    """Heisenberg evolution A(t) = e^{iHt} A e^{-iHt}."""
    if h.shape != a.shape:
        raise ValueError("Hamiltonian and operator dimensions differ")
    u = evolution_unitary(h, t)
    return u @ a @ u.conj().T


def evolve_state(h: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    """Schrodinger evolution e^{-iHt} |psi>."""
    assert_hermitian(h, "Hamiltonian")
    w, v = np.linalg.eigh(h)
    return v @ (np.exp(-1j * t * w) * (v.conj().T @ psi))


def commutator_norms(a: np.ndarray, b: np.ndarray):
    """(operator norm, normalized Frobenius norm) of [A, B]."""
    if a.shape != b.shape:
        raise ValueError("operands must share a dimension")
    c = a @ b - b @ a
    return operator_norm(c), frobenius_norm(c)


def duhamel_residual(a: np.ndarray, b: np.ndarray, t: float, quad_points: int) -> float:
    """Max-entry defect of the interaction-picture splitting identity.

    Checks e^{(A+B)t} = e^{At} + integral_0^t e^{(A+B)(t-s)} B e^{As} ds with
    the integral done by Gauss-Legendre quadrature on [0, t]; the residual
    shrinks (down to roundoff) as `quad_points` grows.
    """
    from scipy.linalg import expm

    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError("A and B must be square matrices of the same dimension")
    if quad_points < 2:
        raise ValueError("need at least 2 quadrature points")
    lhs = expm((a + b) * t)
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    s_vals = 0.5 * t * (nodes + 1.0)
    integral = np.zeros_like(lhs)
    for s, w in zip(s_vals, weights):
        integral += w * (expm((a + b) * (t - s)) @ b @ expm(a * s))
    integral *= 0.5 * t
    return float(np.abs(lhs - (expm(a * t) + integral)).max())


# -- 1d chain specs and locality errors ---------------------------------------


def random_chain_spec(n: int, rng, h_max: float = 1.0) -> tuple:
    """Random nearest-neighbor chain with every edge block at norm h_max.

    Each bond carries an independent random Hermitian two-site block rescaled
    to operator norm exactly h_max.  Returns (dense terms by bond, full H).
    """
    dim = 2 ** n
    blocks = []
    total = np.zeros((dim, dim), dtype=complex)
    for j in range(n - 1):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        block = (g + g.conj().T) / 2.0
        block *= h_max / operator_norm(block)
        term = embed_site_operator(block, [j, j + 1], n)
        blocks.append(term)
        total += term
    return blocks, total


def chain_spec_from_hamiltonian(spec: HamiltonianSpec):
    """Dense per-bond terms of a graph-linked nearest-neighbor spec."""
    n = spec.n
    dim = 2 ** n
    bonds = [np.zeros((dim, dim), dtype=complex) for _ in range(n - 1)]
    for coeff, string in spec.terms:
        sup = sorted(string.support)
        if not sup:
            continue
        if len(sup) > 2 or (len(sup) == 2 and sup[1] - sup[0] != 1):
            raise ValueError(f"term {string} is not nearest-neighbor")
        bond = min(sup[0], n - 2)
        bonds[bond] += coeff * string.dense()
    return bonds


def truncation_error(bond_terms, r: int, t: float, site_op: str = "X"):
    """Compare true vs bond-truncated Heisenberg evolution of a site-0 operator.

    `bond_terms` lists the dense two-site terms of an open chain (bond j
    couples sites j, j+1).  Returns (measured, bound): the operator-norm error
    of evolving under only the first r-1 bonds, and the closed-form ceiling
    (2 h |t|)^r / r! at h = max bond norm.
    """
    n = len(bond_terms) + 1
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < {n}")
    if site_op not in "XYZ":
        raise ValueError("site_op must be X, Y or Z")
    h_max = max(operator_norm(b) for b in bond_terms)
    full = sum(bond_terms)
    truncated = sum(bond_terms[:r - 1]) if r > 1 else np.zeros_like(full)
    a0 = embed_site_operator(PAULI_MATRICES[site_op], [0], n)
    exact = evolve_operator(full, a0, t)
    approx = evolve_operator(truncated, a0, t) if r > 1 else a0
    measured = operator_norm(exact - approx)
    return measured, chain_bound(h_max, r, t)


def patching_error(bond_terms, a_sites, b_sites, c_sites, t: float) -> float:
    """Spectral-norm defect of the back-and-forth block splitting.

    For contiguous disjoint chain regions A, B, C with A and C both adjacent
    to B but not to each other, compares e^{i H_ABC t} against
    e^{i H_AB t} e^{-i H_B t} e^{i H_BC t}, each generated by the bond terms
    internal to the named region.
    """
    n = len(bond_terms) + 1
    a_sites, b_sites, c_sites = (sorted(a_sites), sorted(b_sites), sorted(c_sites))
    regions = [set(a_sites), set(b_sites), set(c_sites)]
    if regions[0] & regions[1] or regions[1] & regions[2] or regions[0] & regions[2]:
        raise ValueError("regions must be disjoint")
    for sites in (a_sites, b_sites, c_sites):
        if sites != list(range(sites[0], sites[-1] + 1)):
            raise ValueError("regions must be contiguous")
    if b_sites[0] - a_sites[-1] != 1 or c_sites[0] - b_sites[-1] != 1:
        raise ValueError("B must be adjacent to A on the left and C on the right")

    def region_h(sites):
        dim = 2 ** n
        out = np.zeros((dim, dim), dtype=complex)
        s = set(sites)
        for j, term in enumerate(bond_terms):
            if j in s and j + 1 in s:
                out += term
        return out

    h_abc = region_h(a_sites + b_sites + c_sites)
    h_ab = region_h(a_sites + b_sites)
    h_b = region_h(b_sites)
    h_bc = region_h(b_sites + c_sites)
    u_exact = evolution_unitary(h_abc, t)
    u_patched = evolution_unitary(h_ab, t) @ evolution_unitary(h_b, -t) @ evolution_unitary(h_bc, t)
    return operator_norm(u_exact - u_patched)


def commuting_chain_terms(n: int, coupling: float = 1.0):
    """All-ZZ chain; every bond term commutes with every other."""
    zz = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex) * coupling
    return [embed_site_operator(zz, [j, j + 1], n) for j in range(n - 1)]
