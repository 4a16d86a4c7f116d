"""State-preparation protocols and operator-growth inequalities.

The two preparation protocols evolve a product state under an explicit
all-to-all Hamiltonian and report the overlap with the target entangled state
(fidelity means amplitude magnitude |<target|state>|, not its square).  The
remaining functions certify the operator-growth side: the state-transfer
commutator value, the entanglement-rate inequality, and the construction in
which von Neumann entanglement grows while operators barely do.
"""

from __future__ import annotations

import math

import numpy as np

from ..curves import BoundCurve, complete_graph_bound_curve
from ..errors import ResourceLimitError
from .evolve import assert_unitary, evolve_state
from .paulis import (PAULI_MATRICES, check_qubit_cap, embed_site_operator,
                     operator_norm, project_touching)
from .states import (assert_normalized, basis_state, ghz_state, product_state,
                     renyi_entropy, w_state)


def ghz_hamiltonian(n: int) -> np.ndarray:
    """(I - Z_0) sum_{j>=1} (I - X_j) as a dense matrix."""
    check_qubit_cap(n)
    eye2 = np.eye(2, dtype=complex)
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(1, n):
        block = np.kron(eye2 - PAULI_MATRICES["Z"], eye2 - PAULI_MATRICES["X"])
        out += embed_site_operator(block, [0, j], n)
    return out


def run_ghz_protocol(n: int):
    """Evolve |+>|0...0> for time pi/4 under the GHZ Hamiltonian.

    Returns (final_state, fidelity); the protocol is exact, so the fidelity is
    1 up to roundoff for every n.
    """
    if n < 2:
        raise ValueError("need at least 2 qubits")
    check_qubit_cap(n)
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    psi0 = product_state([plus] + [[1.0, 0.0]] * (n - 1))
    final = evolve_state(ghz_hamiltonian(n), psi0, math.pi / 4.0)
    fidelity = abs(complex(ghz_state(n).conj() @ final))
    return final, fidelity


def w_hamiltonian(n: int) -> np.ndarray:
    """Coherent hop of one excitation between site 0 and every other site:
    i lower_0 (sum_j raise_j) + h.c."""
    check_qubit_cap(n)
    lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
    raise_ = lower.conj().T
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(1, n):
        term = 1j * embed_site_operator(np.kron(lower, raise_), [0, j], n)
        out += term + term.conj().T
    return out


def w_protocol_time(n: int) -> float:
    return math.acos(1.0 / math.sqrt(n)) / math.sqrt(n - 1.0)


def run_w_protocol(n: int):
    """Evolve |1>|0...0> for time arccos(1/sqrt(n))/sqrt(n-1).

    Returns (final_state, fidelity); the dynamics stays in a two-dimensional
    rotation plane, so the fidelity is 1 up to roundoff.
    """
    if n < 3:
        raise ValueError("need at least 3 qubits")
    check_qubit_cap(n)
    psi0 = basis_state(n, [1] + [0] * (n - 1))
    final = evolve_state(w_hamiltonian(n), psi0, w_protocol_time(n))
    fidelity = abs(complex(w_state(n).conj() @ final))
    return final, fidelity


# -- state transfer ------------------------------------------------------------


def state_transfer_commutator(u: np.ndarray, i: int, f: int, n: int) -> float:
    """Operator norm of [U^dag X_f U, Z_i].

    Equals 2 for any unitary implementing a qubit transfer from site i to
    site f, and 0 for the identity with i != f.
    """
    assert_unitary(u, "transfer unitary")
    x_f = embed_site_operator(PAULI_MATRICES["X"], [f], n)
    z_i = embed_site_operator(PAULI_MATRICES["Z"], [i], n)
    heis = u.conj().T @ x_f @ u
    return operator_norm(heis @ z_i - z_i @ heis)


def swap_unitary(i: int, j: int, n: int) -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    s[0, 0] = s[3, 3] = 1.0
    s[1, 2] = s[2, 1] = 1.0
    return embed_site_operator(s, [i, j], n)


def swap_network(path_sites, n: int) -> np.ndarray:
    """Product of adjacent swaps moving a qubit along `path_sites`."""
    u = np.eye(2 ** n, dtype=complex)
    for a, b in zip(path_sites, path_sites[1:]):
        u = swap_unitary(a, b, n) @ u
    return u


# -- entanglement versus operator growth ---------------------------------------


def entanglement_growth_check(u: np.ndarray, a_sites, b_sites,
                              psi_a: np.ndarray, psi_b: np.ndarray):
    """Both sides of the operator-growth floor on Renyi-2 generation.

    lhs is the operator norm of the component of U (|psi_a><psi_a| x I) U^dag
    acting non-trivially on the B sites; rhs is 1 - exp(-S_2/2) of the evolved
    product state.  The inequality lhs >= rhs holds for every unitary.
    """
    a_sites, b_sites = sorted(a_sites), sorted(b_sites)
    n = len(a_sites) + len(b_sites)
    if sorted(a_sites + b_sites) != list(range(n)):
        raise ValueError("a_sites and b_sites must partition 0..n-1")
    assert_unitary(u, "U")
    assert_normalized(psi_a, "psi_a")
    assert_normalized(psi_b, "psi_b")
    proj_a = np.outer(psi_a, psi_a.conj())
    a_op = embed_site_operator(proj_a, a_sites, n)
    grown = u @ a_op @ u.conj().T
    lhs = operator_norm(project_touching(grown, b_sites, n))
    # assemble the product state in site order
    tensor_a = psi_a.reshape((2,) * len(a_sites))
    tensor_b = psi_b.reshape((2,) * len(b_sites))
    prod = np.tensordot(tensor_a, tensor_b, axes=0)
    order = np.argsort(a_sites + b_sites)
    psi = np.transpose(prod, order).reshape(-1)
    final = u @ psi
    s2 = renyi_entropy(final, a_sites, n, 2)
    rhs = 1.0 - math.exp(-0.5 * s2)
    return lhs, rhs


# -- large entanglement with little operator growth -----------------------------


DIAG_CAP = 64


def _diag_rotation_unitary_factors(d: int, eps: float):
    """Low-rank factors of U - I for the plane rotation on span{|00>, |diag>}."""
    q0 = np.zeros(d * d, dtype=complex)
    q0[0] = 1.0
    q1 = np.zeros(d * d, dtype=complex)
    for j in range(1, d):
        q1[j * d + j] = 1.0 / math.sqrt(d - 1.0)
    q = np.stack([q0, q1], axis=1)  # (d^2, 2)
    c, s = math.sqrt(1.0 - eps), math.sqrt(eps)
    u2 = np.array([[c, -s], [s, c]], dtype=complex)
    return q, u2 - np.eye(2)


def _pauli_probes(k: int):
    """Normalized Pauli strings of weight 1 and 2 on k qubits, as dense
    (site_ops) dicts."""
    probes = []
    for i in range(k):
        for p in "XYZ":
            probes.append({i: p})
    for i in range(k):
        for j in range(i + 1, k):
            for p in "XYZ":
                for p2 in "XYZ":
                    probes.append({i: p, j: p2})
    return probes


def _projected_growth_norm(q, m, a_side: np.ndarray, d: int) -> float:
    """Operator norm of the B-touching part of U (A x I) U^dag for
    U = I + q m q^dag, exploiting that the perturbation has rank two.

    With G = q m and Y = (A x I) q, the growth defect is the Hermitian
    rank-four matrix W = G Y^dag + Y G^dag + G Z G^dag (Z = q^dag (A x I) q),
    and the quantity wanted is the norm of W - T x I_B with T = Tr_B(W)/d.
    Rotating the A side into the eigenbasis of T makes T x I block-diagonal;
    the subspace spanned by the per-block components of G and Y (dimension at
    most 4d) is exactly invariant, and on its complement the operator is a
    direct sum of the scalars -tau_alpha.  Everything reduces to one dense
    Hermitian problem of dimension at most 4d.
    """
    y = np.empty_like(q)
    for col in range(q.shape[1]):
        y[:, col] = (a_side @ q[:, col].reshape(d, d)).reshape(-1)
    z = q.conj().T @ y  # 2x2
    g = q @ m

    # T = Tr_B(W)/d via per-column partial traces of the rank-one pieces:
    # W = G Y^dag + Y G^dag + (G Z) G^dag
    t_mat = np.zeros((d, d), dtype=complex)
    left = np.concatenate([g, y, g @ z], axis=1)
    right = np.concatenate([y, g, g], axis=1)
    for col in range(left.shape[1]):
        t_mat += left[:, col].reshape(d, d) @ right[:, col].conj().reshape(d, d).T
    t_mat /= d
    tau, u_t = np.linalg.eigh(t_mat)

    # per-block rows of the rotated factor columns: shape (factor, alpha, d)
    factors = np.concatenate([g, y], axis=1)  # 4 columns
    rot = np.array([u_t.conj().T @ factors[:, k].reshape(d, d)
                    for k in range(factors.shape[1])])

    basis_cols = []  # (alpha, orthonormal d-vector) pairs
    taus = []
    leftover_taus = []
    for alpha in range(d):
        block = rot[:, alpha, :].T  # d x 4
        u_b, s_b, _ = np.linalg.svd(block, full_matrices=False)
        keep = s_b > 1e-13 * max(s_b[0], 1e-300)
        kept = int(keep.sum())
        if kept < d:
            leftover_taus.append(abs(tau[alpha]))
        for vec in u_b[:, keep].T:
            basis_cols.append((alpha, vec))
            taus.append(tau[alpha])
    if not basis_cols:
        return max(leftover_taus, default=0.0)

    # coefficient vectors G^dag e and Y^dag e for each basis element e
    n_basis = len(basis_cols)
    vg = np.empty((g.shape[1], n_basis), dtype=complex)
    vy = np.empty((y.shape[1], n_basis), dtype=complex)
    rot_g = rot[:g.shape[1]]
    rot_y = rot[g.shape[1]:]
    for e, (alpha, vec) in enumerate(basis_cols):
        vg[:, e] = np.conj(rot_g[:, alpha, :] @ vec.conj())
        vy[:, e] = np.conj(rot_y[:, alpha, :] @ vec.conj())
    m_w = vg.conj().T @ vy + vy.conj().T @ vg + vg.conj().T @ z @ vg
    m_full = m_w - np.diag(np.array(taus))
    inside = float(np.abs(np.linalg.eigvalsh(m_full)).max())
    # a block of leftover dimension > 0 contributes the pure eigenvalue -tau
    return max(inside, max(leftover_taus, default=0.0))


def entanglement_without_growth(d: int, eps: float):
    """Von Neumann entanglement versus worst probe growth for the rotation on
    span{|00>, |diag>} of a pair of dimension-d sides.

    Returns (s1, max_growth): the entropy of U|00>, which grows like
    eps * ln d, and the largest B-touching operator norm of U A U^dag over
    single-side Pauli-string probes of weight at most 2, which stays at the
    sqrt(eps) scale.  `d` must be a power of two, at most 64.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    if d < 2 or d > DIAG_CAP:
        raise ResourceLimitError(f"side dimension {d} outside 2..{DIAG_CAP}")
    k = int(round(math.log2(d)))
    if 2 ** k != d:
        raise ValueError("side dimension must be a power of two")

    q, m = _diag_rotation_unitary_factors(d, eps)
    # final state and its entropy, directly from the plane rotation
    psi = np.zeros(d * d, dtype=complex)
    psi[0] = math.sqrt(1.0 - eps)
    for j in range(1, d):
        psi[j * d + j] = math.sqrt(eps / (d - 1.0))
    rho = psi.reshape(d, d) @ psi.reshape(d, d).conj().T
    evals = np.clip(np.linalg.eigvalsh(rho).real, 0.0, None)
    pos = evals[evals > 1e-15]
    s1 = float(-np.sum(pos * np.log(pos)))

    max_growth = 0.0
    for site_ops in _pauli_probes(k):
        a_side = np.array([[1.0 + 0j]])
        for site in range(k):
            a_side = np.kron(a_side, PAULI_MATRICES[site_ops.get(site, "I")])
        max_growth = max(max_growth, _projected_growth_norm(q, m, a_side, d))
    return s1, max_growth


def rotation_unitary_distance(eps: float) -> float:
    """Operator norm of U - I for the plane rotation with angle arcsin(sqrt(eps))."""
    return math.sqrt(2.0 - 2.0 * math.sqrt(1.0 - eps))


# -- preparation-time floor -----------------------------------------------------


def ghz_time_lower_bound_curve(n: int, a: float, b: float, t_grid) -> BoundCurve:
    """Commutator ceiling that forces GHZ preparation to take log(n)/n time:
    the all-to-all matrix-exponential bound (exp(2t(a+b)n) - exp(2tbn))/n."""
    return complete_graph_bound_curve(n, a, b, t_grid)
