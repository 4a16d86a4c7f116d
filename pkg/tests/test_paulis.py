"""Pauli algebra, dense assembly, projectors, and norm identities."""

import math

import numpy as np
import pytest

from lrbounds import ResourceLimitError
from lrbounds.exact import paulis as p

X = p.PAULI_MATRICES["X"]
Y = p.PAULI_MATRICES["Y"]
Z = p.PAULI_MATRICES["Z"]


def random_operator(n, rng, hermitian=False):
    dim = 2 ** n
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2 if hermitian else g


def test_pauli_string_basics():
    s = p.PauliString("IXZY")
    assert s.support == {1, 2, 3}
    assert s.weight == 3
    with pytest.raises(ValueError):
        p.PauliString("IXQ")
    s2 = p.PauliString.from_sites(4, {0: "X", 2: "Z"})
    assert s2.symbols == "XIZI"


def test_build_hamiltonian_single_x():
    spec = p.HamiltonianSpec(1, [(1.0, p.PauliString("X"))])
    np.testing.assert_allclose(p.build_hamiltonian(spec), X)


def test_build_hamiltonian_empty():
    spec = p.HamiltonianSpec(2, [])
    np.testing.assert_array_equal(p.build_hamiltonian(spec), np.zeros((4, 4)))


def test_build_hamiltonian_xx_plus_zz_spectrum():
    spec = p.HamiltonianSpec(2, [(1.0, p.PauliString("XX")), (1.0, p.PauliString("ZZ"))])
    h = p.build_hamiltonian(spec)
    evals = np.linalg.eigvalsh(h)
    np.testing.assert_allclose(evals, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_qubit_cap():
    spec = p.HamiltonianSpec(13, [])
    with pytest.raises(ResourceLimitError):
        p.build_hamiltonian(spec)


def test_complex_coefficient_rejected():
    with pytest.raises(ValueError):
        p.HamiltonianSpec(1, [(1.0 + 0.2j, p.PauliString("X"))])


def test_hamiltonian_spec_json_round_trip(tmp_path):
    spec = p.HamiltonianSpec(3, [(0.5, p.PauliString("XIZ")), (-1.25, p.PauliString("IYI"))])
    path = tmp_path / "h.json"
    spec.save(path)
    loaded = p.HamiltonianSpec.load(path)
    assert loaded.n == 3
    np.testing.assert_allclose(p.build_hamiltonian(loaded), p.build_hamiltonian(spec))


def test_embed_matches_kron():
    rng = np.random.default_rng(1)
    op = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    direct = np.kron(np.eye(2), np.kron(op, np.eye(4)))
    np.testing.assert_allclose(p.embed_site_operator(op, [1], 4), direct, atol=1e-14)
    two = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    direct2 = np.kron(two, np.eye(2))
    np.testing.assert_allclose(p.embed_site_operator(two, [0, 1], 3), direct2, atol=1e-14)
    # swapped site order transposes the factors
    swapped = p.embed_site_operator(two, [1, 0], 2)
    perm = two.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    np.testing.assert_allclose(swapped, perm, atol=1e-14)


def test_decompose_recompose_round_trip():
    rng = np.random.default_rng(2)
    for n in (2, 3):
        a = random_operator(n, rng)
        coeffs = p.pauli_decompose(a, n)
        back = p.pauli_recompose(coeffs, n)
        assert np.abs(back - a).max() < 1e-10


def test_pauli_orthonormality():
    for s1 in p.pauli_basis_iter(2):
        for s2 in p.pauli_basis_iter(2):
            ip = p.hs_inner(s1.dense(), s2.dense())
            expected = 1.0 if s1 == s2 else 0.0
            assert abs(ip - expected) < 1e-12


def test_super_project_identities():
    rng = np.random.default_rng(3)
    n = 3
    a = random_operator(n, rng)
    np.testing.assert_allclose(p.super_project(a, range(n), n), a)
    empty = p.super_project(a, [], n)
    np.testing.assert_allclose(empty, np.trace(a) / 2 ** n * np.eye(2 ** n), atol=1e-12)
    # X1 X2 loses both factors when either site is traced out
    x1x2 = p.embed_site_operator(np.kron(X, X), [0, 1], 2)
    assert np.abs(p.super_project(x1x2, [0], 2)).max() < 1e-14


def test_super_project_idempotent_and_contractive():
    rng = np.random.default_rng(4)
    n = 3
    for _ in range(20):
        a = random_operator(n, rng)
        proj = p.super_project(a, [0, 2], n)
        again = p.super_project(proj, [0, 2], n)
        np.testing.assert_allclose(proj, again, atol=1e-12)
        assert p.frobenius_norm(proj) <= p.frobenius_norm(a) + 1e-12
        assert p.operator_norm(proj) <= p.operator_norm(a) + 1e-12


def test_project_touching_norm_bounds():
    rng = np.random.default_rng(5)
    n = 3
    for _ in range(30):
        a = random_operator(n, rng)
        proj = p.project_touching(a, [1], n)
        assert p.frobenius_norm(proj) <= p.frobenius_norm(a) + 1e-12
        assert p.operator_norm(proj) <= 2.0 * p.operator_norm(a) + 1e-12


def test_commutator_ignores_untouching_part():
    # [A, B] = [A, P_A B] for A supported on the projecting set
    rng = np.random.default_rng(6)
    n = 3
    a = p.embed_site_operator(random_operator(1, rng), [1], n)
    b = random_operator(n, rng)
    pb = p.project_touching(b, [1], n)
    lhs = a @ b - b @ a
    rhs = a @ pb - pb @ a
    assert np.abs(lhs - rhs).max() < 1e-10


def test_projector_weight_values():
    n = 2
    x1 = p.embed_site_operator(X, [0], n)
    x2 = p.embed_site_operator(X, [1], n)
    assert p.projector_weight(x1, {0}, n) == pytest.approx(1.0)
    assert p.projector_weight(x1, {1}, n) == pytest.approx(0.0, abs=1e-14)
    mix = (x1 + x2) / math.sqrt(2.0)
    assert p.projector_weight(mix, {1}, n) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ValueError):
        p.projector_weight(np.zeros((4, 4)), {0}, n)


def test_projector_weight_partial_trace_path_matches_decomposition():
    # the n > 6 code path must agree with the Pauli-basis route
    rng = np.random.default_rng(7)
    n = 3
    for _ in range(10):
        a = random_operator(n, rng)
        sites = {0, 2}
        from_decomp = p.projector_weight(a, sites, n)
        comp = [i for i in range(n) if i not in sites]
        trivial = p.super_project(a, comp, n)
        norm2 = p.hs_inner(a, a).real
        from_trace = (norm2 - p.hs_inner(trivial, trivial).real) / norm2
        assert from_decomp == pytest.approx(from_trace, abs=1e-12)


def test_rightmost_weights():
    n = 5
    x3 = p.embed_site_operator(X, [2], n)
    w = p.rightmost_weight(x3, n)
    np.testing.assert_allclose(w, [0, 0, 1, 0, 0], atol=1e-12)
    ident = np.eye(2 ** n, dtype=complex)
    np.testing.assert_allclose(p.rightmost_weight(ident, n), np.zeros(n), atol=1e-12)
    x14 = p.embed_site_operator(np.kron(X, X), [0, 3], n)
    np.testing.assert_allclose(p.rightmost_weight(x14, n), [0, 0, 0, 1, 0], atol=1e-12)


def test_rightmost_weights_sum_to_one_for_traceless():
    rng = np.random.default_rng(8)
    n = 4
    a = random_operator(n, rng)
    a -= np.trace(a) / 2 ** n * np.eye(2 ** n)
    w = p.rightmost_weight(a, n)
    assert w.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.all(w >= -1e-12)


def test_operator_size_values():
    n = 3
    x1 = p.embed_site_operator(X, [0], n)
    size, from_comm = p.operator_size(x1, n)
    assert size == pytest.approx(1.0, abs=1e-12)
    assert from_comm == pytest.approx(1.0, abs=1e-12)
    xyz = p.embed_site_operator(np.kron(X, np.kron(Y, Z)), [0, 1, 2], n)
    size, from_comm = p.operator_size(xyz, n)
    assert size == pytest.approx(3.0, abs=1e-12)
    assert from_comm == pytest.approx(3.0, abs=1e-12)


def test_operator_size_commutator_identity_random():
    rng = np.random.default_rng(9)
    n = 4
    for _ in range(10):
        a = random_operator(n, rng)
        size, from_comm = p.operator_size(a, n)
        assert abs(size - from_comm) < 1e-9


def test_holder_inequality():
    rng = np.random.default_rng(10)
    for _ in range(100):
        a = random_operator(2, rng)
        b = random_operator(2, rng)
        assert p.frobenius_norm(a @ b) <= p.operator_norm(a) * p.frobenius_norm(b) + 1e-12


def test_frobenius_below_operator_norm():
    rng = np.random.default_rng(12)
    for _ in range(50):
        a = random_operator(3, rng)
        assert p.frobenius_norm(a) <= p.operator_norm(a) + 1e-12


def test_partial_trace_basics():
    rng = np.random.default_rng(13)
    a1 = random_operator(1, rng)
    a2 = random_operator(1, rng)
    combined = np.kron(a1, a2)
    np.testing.assert_allclose(p.partial_trace(combined, [0], 2),
                               a1 * np.trace(a2), atol=1e-12)
    np.testing.assert_allclose(p.partial_trace(combined, [1], 2),
                               a2 * np.trace(a1), atol=1e-12)
    full = p.partial_trace(combined, [0, 1], 2)
    np.testing.assert_allclose(full, combined)
