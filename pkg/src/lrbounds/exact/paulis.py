"""Pauli strings, symbolic Hamiltonians, and dense operator assembly.

Dense operators are plain complex numpy arrays; site 0 is the leftmost kron
factor.  The qubit cap (default 12, 4096-dimensional matrices) exists because
everything here is dense and exact.

The operator inner product is normalized, ``(A|B) = Tr(A^dag B) / 2^n``, so
Pauli strings form an orthonormal basis.  Full Pauli decompositions are only
taken for n <= 6 (4^n coefficients); the projector weights switch to
partial-trace identities above that, which compute the same quadratic forms
without ever expanding the basis.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ResourceLimitError

QUBIT_CAP = 12
DECOMPOSE_CAP = 6

PAULI_SYMBOLS = "IXYZ"
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of I, X, Y, Z over all sites, e.g. 'IXZI'."""

    symbols: str

    def __post_init__(self):
        bad = set(self.symbols) - set(PAULI_SYMBOLS)
        if bad:
            raise ValueError(f"invalid Pauli symbols {sorted(bad)}")

    @classmethod
    def from_sites(cls, n: int, site_ops: dict) -> "PauliString":
        """Build from {site: 'X'|'Y'|'Z'} on n sites; the rest are identity."""
        symbols = ["I"] * n
        for site, op in site_ops.items():
            if not 0 <= site < n:
                raise ValueError(f"site {site} outside 0..{n - 1}")
            if op not in "XYZ":
                raise ValueError(f"invalid operator {op!r}")
            if symbols[site] != "I":
                raise ValueError(f"duplicate operator on site {site}")
            symbols[site] = op
        return cls("".join(symbols))

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def support(self):
        return frozenset(i for i, s in enumerate(self.symbols) if s != "I")

    @property
    def weight(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for s in self.symbols:
            out = np.kron(out, PAULI_MATRICES[s])
        return out

    def __str__(self):
        return self.symbols


@dataclass
class HamiltonianSpec:
    """Real-coefficient Pauli-term Hamiltonian on n qubits.

    `edge_of_term` optionally maps a term index to the interaction-graph edge
    (or vertex) it realizes.
    """

    n: int
    terms: list  # of (coefficient, PauliString)
    edge_of_term: dict | None = None

    def __post_init__(self):
        for coeff, string in self.terms:
            if isinstance(coeff, complex) and abs(coeff.imag) > 0:
                raise ValueError("coefficients must be real (Hermiticity)")
            if string.n != self.n:
                raise ValueError(
                    f"term {string} has {string.n} sites, expected {self.n}")
            if self.edge_of_term is not None and string.weight > 2:
                raise ValueError("graph-linked terms must touch at most 2 sites")

    def to_json_dict(self):
        return {
            "n": self.n,
            "terms": [
                {"coeff": float(c),
                 "paulis": [{"site": i, "op": s.symbols[i]} for i in sorted(s.support)]}
                for c, s in self.terms
            ],
        }

    @classmethod
    def from_json_dict(cls, data) -> "HamiltonianSpec":
        n = int(data["n"])
        terms = []
        for term in data["terms"]:
            site_ops = {int(p["site"]): p["op"] for p in term["paulis"]}
            terms.append((float(term["coeff"]), PauliString.from_sites(n, site_ops)))
        return cls(n, terms)

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)

    @classmethod
    def load(cls, path) -> "HamiltonianSpec":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))


def check_qubit_cap(n: int, cap: int = QUBIT_CAP):
    if n > cap:
        raise ResourceLimitError(f"{n} qubits exceeds the dense cap ({cap})")


def build_hamiltonian(spec: HamiltonianSpec, cap: int = QUBIT_CAP) -> np.ndarray:
    """Dense Hermitian matrix of the term sum."""
    check_qubit_cap(spec.n, cap)
    dim = 2 ** spec.n
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, string in spec.terms:
        out += float(coeff) * string.dense()
    return out


def embed_site_operator(op: np.ndarray, sites, n: int) -> np.ndarray:
    """Embed an operator on `sites` (in listed order) into the n-site space."""
    sites = list(sites)
    k = len(sites)
    if op.shape != (2 ** k, 2 ** k):
        raise ValueError(f"operator shape {op.shape} does not match {k} sites")
    if len(set(sites)) != k or any(not 0 <= s < n for s in sites):
        raise ValueError("sites must be distinct and in range")
    # reshape to 2k tensor legs, then interleave with identity legs
    op_t = op.reshape((2,) * (2 * k))
    rest = [i for i in range(n) if i not in sites]
    ident = np.eye(2 ** len(rest), dtype=complex).reshape((2,) * (2 * len(rest)))
    combined = np.tensordot(op_t, ident, axes=0)
    # legs: sites-out, sites-in, rest-out, rest-in -> permute to site order
    order = sites + rest
    out_axes = [0] * n
    in_axes = [0] * n
    for pos, site in enumerate(sites):
        out_axes[site] = pos
        in_axes[site] = k + pos
    for pos, site in enumerate(rest):
        out_axes[site] = 2 * k + pos
        in_axes[site] = 2 * k + len(rest) + pos
    combined = np.transpose(combined, out_axes + in_axes)
    return combined.reshape(2 ** n, 2 ** n)


def pauli_basis_iter(n: int):
    """All 4^n Pauli strings on n sites (n <= DECOMPOSE_CAP)."""
    if n > DECOMPOSE_CAP:
        raise ResourceLimitError(
            f"full Pauli basis for n={n} exceeds the decomposition cap ({DECOMPOSE_CAP})")
    for symbols in itertools.product(PAULI_SYMBOLS, repeat=n):
        yield PauliString("".join(symbols))


def pauli_decompose(a: np.ndarray, n: int) -> dict:
    """Coefficients {PauliString: (P|A)} of a dense operator (n <= 6)."""
    dim = 2 ** n
    if a.shape != (dim, dim):
        raise ValueError("operator shape does not match qubit count")
    coeffs = {}
    for string in pauli_basis_iter(n):
        c = complex(np.trace(string.dense().conj().T @ a)) / dim
        if c != 0:
            coeffs[string] = c
    return coeffs


def pauli_recompose(coeffs: dict, n: int) -> np.ndarray:
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for string, c in coeffs.items():
        out += c * string.dense()
    return out


# -- inner product, partial traces, super-projectors --------------------------


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Normalized Hilbert-Schmidt inner product Tr(A^dag B) / dim."""
    if a.shape != b.shape:
        raise ValueError("operands must share a shape")
    return complex(np.einsum("ij,ij->", a.conj(), b)) / a.shape[0]


def frobenius_norm(a: np.ndarray) -> float:
    """Normalized Frobenius norm sqrt(Tr(A^dag A) / dim); equals 1 on Paulis."""
    return float(np.linalg.norm(a)) / math.sqrt(a.shape[0])


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(a, 2))


def partial_trace(a: np.ndarray, keep, n: int) -> np.ndarray:
    """Trace out every site not in `keep` (keep may be empty -> 1x1 matrix)."""
    keep = sorted(keep)
    dim = 2 ** n
    if a.shape != (dim, dim):
        raise ValueError("operator shape does not match qubit count")
    tensor = a.reshape((2,) * (2 * n))
    traced = [i for i in range(n) if i not in keep]
    for offset, site in enumerate(traced):
        ax = site - offset  # earlier traces shifted the remaining axes
        nlegs = tensor.ndim // 2
        tensor = np.trace(tensor, axis1=ax, axis2=ax + nlegs)
    k = len(keep)
    return tensor.reshape(2 ** k, 2 ** k)


def super_project(a: np.ndarray, sites, n: int) -> np.ndarray:
    """Keep the component of `a` supported entirely inside `sites`.

    Realized as the normalized partial trace over the complement tensored back
    with identity; orthogonal projector in the Hilbert-Schmidt inner product
    and non-increasing for every Schatten norm.
    """
    sites = sorted(set(sites))
    if any(not 0 <= s < n for s in sites):
        raise ValueError("sites out of range")
    comp = [i for i in range(n) if i not in sites]
    if not comp:
        return a.copy()
    reduced = partial_trace(a, sites, n) / 2 ** len(comp)
    if not sites:
        return complex(reduced[0, 0]) * np.eye(2 ** n, dtype=complex)
    return embed_site_operator(reduced, sites, n)


def project_touching(a: np.ndarray, sites, n: int) -> np.ndarray:
    """Keep the Pauli components acting non-trivially somewhere in `sites`
    (the complement of super_project onto everything outside)."""
    comp = [i for i in range(n) if i not in set(sites)]
    return a - super_project(a, comp, n)


def projector_weight(a: np.ndarray, sites, n: int) -> float:
    """Fraction (A|P_sites|A)/(A|A) of A acting non-trivially in `sites`.

    Uses the full Pauli decomposition for n <= 6 and the partial-trace
    identity (A|P_S|A) = (A|A) - |super_project(A, S^c)|_F^2 above that.
    """
    norm2 = hs_inner(a, a).real
    if norm2 == 0.0:
        raise ValueError("zero operator has no projector weight")
    sites = set(sites)
    if n <= DECOMPOSE_CAP:
        coeffs = pauli_decompose(a, n)
        kept = sum(abs(c) ** 2 for s, c in coeffs.items() if s.support & sites)
        return float(kept / norm2)
    comp = [i for i in range(n) if i not in sites]
    trivial = super_project(a, comp, n)
    return float((norm2 - hs_inner(trivial, trivial).real) / norm2)


def rightmost_weight(a: np.ndarray, n: int) -> np.ndarray:
    """Weight of A on each rightmost-site class, as an array over sites.

    Entry r is the squared fraction of A (identity component excluded) whose
    rightmost non-trivial site is r: the difference of the squared Frobenius
    norms of A projected inside sites 0..r and 0..r-1.
    """
    norm2 = hs_inner(a, a).real
    if norm2 == 0.0:
        raise ValueError("zero operator has no rightmost-site weights")
    inside = np.empty(n + 1)
    for r in range(n + 1):
        proj = super_project(a, range(r), n)
        inside[r] = hs_inner(proj, proj).real
    return np.diff(inside) / norm2


def operator_size(a: np.ndarray, n: int):
    """Average number of non-identity tensor factors of A.

    Returns ``(size, size_from_commutators)``: the first from per-site
    projector weights, the second from the commutator identity
    (1/8) sum_{j,a} ([A, X_j^a] | [A, X_j^a]) / (A|A), which must agree.
    """
    norm2 = hs_inner(a, a).real
    if norm2 == 0.0:
        raise ValueError("zero operator has no size")
    size = sum(projector_weight(a, {j}, n) for j in range(n))
    acc = 0.0
    for j in range(n):
        for sym in "XYZ":
            p = PauliString.from_sites(n, {j: sym}).dense()
            c = a @ p - p @ a
            acc += hs_inner(c, c).real
    return float(size), float(acc / (8.0 * norm2))
