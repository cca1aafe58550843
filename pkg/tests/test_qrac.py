import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rqrao.graph import Graph, cut_weight, generate
from rqrao.oracle import hamiltonian_dense, pauli_dense
from rqrao.qrac import (
    ACTIVE_PAULIS,
    PAULI,
    AssignmentError,
    MagicState,
    PauliAssignment,
    assign_paulis,
    build_terms,
    decode_bits,
    magic_density,
    magic_state_for,
)


@given(st.integers(0, 10_000), st.sampled_from([1, 2, 3]), st.integers(3, 30))
def test_assignment_is_feasible(seed, m, n):
    g = generate({"kind": "random", "n": n, "density": 0.3, "seed": seed})
    a = assign_paulis(g, m, np.random.default_rng(seed))
    a.validate(g)
    assert a.num_qubits >= -(-n // m)
    if m == 1:
        assert a.num_qubits == n


def test_assignment_compresses_sparse_graphs():
    g = Graph(range(6), [(0, 1, 1.0)])
    a = assign_paulis(g, 3, np.random.default_rng(0))
    assert a.num_qubits <= 3


def test_assignment_json_round_trip(square, rng):
    a = assign_paulis(square, 2, rng)
    assert PauliAssignment.from_json(a.to_json()) == a


def test_validate_rejects_bad_assignments(square):
    bad = PauliAssignment(2, 2, {0: (0, "X"), 1: (0, "Z"), 2: (1, "X"), 3: (1, "Z")})
    with pytest.raises(AssignmentError, match="share qubit"):
        bad.validate(square)
    with pytest.raises(AssignmentError, match="share slot"):
        PauliAssignment(2, 1, {0: (0, "X"), 1: (0, "X")}).validate()
    with pytest.raises(AssignmentError, match="not active"):
        PauliAssignment(1, 1, {0: (0, "X")}).validate()
    with pytest.raises(AssignmentError):
        assign_paulis(square, 4, np.random.default_rng(0))


def test_terms_coefficients(square, rng):
    a = assign_paulis(square, 3, rng)
    t = build_terms(square, a)
    assert t.constant == pytest.approx(2.0)
    assert all(c == pytest.approx(-1.5) for c, *_ in t.terms)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_magic_states_are_pure_with_expected_bloch_vector(m):
    for bits in itertools.product([0, 1], repeat=m):
        rho = magic_density(MagicState(m, np.array([bits])), 0)
        assert np.trace(rho @ rho).real == pytest.approx(1.0)
        for p, b in zip(ACTIVE_PAULIS[m], bits):
            assert np.trace(PAULI[p] @ rho).real == pytest.approx((-1) ** b / np.sqrt(m))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hamiltonian_on_magic_state_is_cut_weight(m):
    rng = np.random.default_rng(m)
    g = generate({"kind": "random", "n": 6, "density": 0.6, "seed": m})
    a = assign_paulis(g, m, rng)
    H = hamiltonian_dense(build_terms(g, a))
    for _ in range(10):
        bits = rng.integers(0, 2, g.num_nodes)
        ms = magic_state_for(a, dict(zip(g.nodes, bits.tolist())))
        rho = np.ones((1, 1))
        for q in reversed(range(a.num_qubits)):
            rho = np.kron(rho, magic_density(ms, q))
        assert np.trace(H @ rho).real == pytest.approx(cut_weight(g, bits), abs=1e-12)


def test_decode_bits_signs_and_ties():
    a = PauliAssignment(1, 3, {0: (0, "Z"), 1: (1, "Z"), 2: (2, "Z")})
    bits = decode_bits(a, {0: 0.3, 1: -0.2, 2: 0.0}, np.random.default_rng(0))
    assert bits[:2].tolist() == [0, 1]
    draws = {int(decode_bits(a, {0: 1, 1: 1, 2: 0.0}, np.random.default_rng(s))[2]) for s in range(20)}
    assert draws == {0, 1}


def test_pauli_dense_ordering():
    # qubit 0 is the least significant bit of the basis index
    Z0 = pauli_dense({0: "Z"}, 2)
    assert np.allclose(np.diag(Z0).real, [1, -1, 1, -1])
