"""Dense exact simulation of small qubit systems."""

from .evolve import (assert_hermitian, assert_unitary, chain_spec_from_hamiltonian,
                     commutator_norms, commuting_chain_terms, duhamel_residual,
                     evolution_unitary, evolve_operator, evolve_state,
                     patching_error, random_chain_spec, truncation_error)
from .paulis import (DECOMPOSE_CAP, PAULI_MATRICES, QUBIT_CAP, HamiltonianSpec,
                     PauliString, build_hamiltonian, embed_site_operator,
                     frobenius_norm, hs_inner, operator_norm, partial_trace,
                     pauli_basis_iter, pauli_decompose, pauli_recompose,
                     project_touching, projector_weight, rightmost_weight,
                     operator_size, super_project)
from .protocols import (entanglement_growth_check, entanglement_without_growth,
                        ghz_hamiltonian, ghz_time_lower_bound_curve,
                        rotation_unitary_distance, run_ghz_protocol,
                        run_w_protocol, state_transfer_commutator,
                        swap_network, swap_unitary, w_hamiltonian,
                        w_protocol_time)
from .states import (LocalOperator, assert_normalized, basis_state,
                     connected_correlation, ghz_state, product_state,
                     reduced_density_matrix, renyi_entropy, w_state)

__all__ = [name for name in dir() if not name.startswith("_")]
