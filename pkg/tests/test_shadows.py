import itertools

import numpy as np
import pytest

from rqrao import oracle
from rqrao.qrac import ACTIVE_PAULIS, MagicState, PauliAssignment, magic_density
from rqrao.shadows import (
    ShadowSnapshot,
    _measure_mps,
    estimate_pauli,
    magic_basis,
    magic_measure,
    magic_measure_batch,
    shot_values,
    snapshot_dense,
    write_csv,
)
from rqrao.tensornet import init_mps


@pytest.mark.parametrize("m", [1, 2, 3])
def test_bases_are_antipodal_magic_states(m):
    b = magic_basis(m)
    assert b.num_bases == 2 ** (m - 1)
    for i in range(1, b.num_bases + 1):
        U = b.unitaries[i - 1]
        assert np.allclose(U.conj().T @ U, np.eye(2))
        for o in range(2):
            expect = magic_density(MagicState(m, np.array([b.decode(i, o)])), 0)
            assert np.allclose(b.projector(i, o), expect)


def test_table_for_three_bits():
    b = magic_basis(3)
    assert [b.decode(i, 0) for i in range(1, 5)] == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert all(b.decode(i, 1) == tuple(1 - x for x in b.decode(i, 0)) for i in range(1, 5))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_snapshots_average_to_the_state(m, n, rng):
    rho = oracle.random_density(n, rng)
    b = magic_basis(m)
    B = b.num_bases
    avg = np.zeros_like(rho)
    for bases in itertools.product(range(1, B + 1), repeat=n):
        for outs in itertools.product(range(2), repeat=n):
            s = ShadowSnapshot(m, np.array(bases), np.array(outs))
            proj = np.ones((1, 1))
            for q in reversed(range(n)):
                proj = np.kron(proj, b.projector(bases[q], outs[q]))
            avg += np.trace(proj @ rho).real / B**n * snapshot_dense(s)
    # unbiased on the span of the active Paulis
    for ops in itertools.product(("I",) + ACTIVE_PAULIS[m], repeat=n):
        P = oracle.pauli_dense({q: p for q, p in enumerate(ops) if p != "I"}, n)
        assert np.trace(P @ avg).real == pytest.approx(np.trace(P @ rho).real, abs=1e-12)


@pytest.mark.parametrize("m", [2, 3])
def test_sampled_bits_follow_fidelity_distribution(m, rng):
    n = 2
    v = oracle.random_state(n, rng)
    exact = oracle.magic_distribution(v, PauliAssignment(m, n, {}))
    batch = magic_measure_batch(v, m, 40_000, rng, qubits=[0, 1])
    idx = np.zeros(batch.shots, dtype=np.int64)
    bits = batch.bits  # (shots, 2, m)
    for q in range(n):
        for i in range(m):
            idx |= bits[:, q, i].astype(np.int64) << (q * m + i)
    freq = np.bincount(idx, minlength=exact.probs.size) / batch.shots
    assert np.max(np.abs(freq - exact.probs)) < 0.01
    assert np.all(freq[exact.probs == 0] == 0)


def test_shot_by_shot_and_subset_paths_agree(rng):
    v = oracle.random_state(3, rng)
    obs = {0: "X", 2: "Z"}
    exact = float(np.real(v.conj() @ oracle.pauli_dense(obs, 3) @ v))
    full = magic_measure_batch(v, 3, 4000, rng)
    sub = magic_measure_batch(v, 3, 40_000, rng, qubits=[0, 2])
    assert estimate_pauli(full, obs, clamp=False) == pytest.approx(exact, abs=6 * 3 / np.sqrt(4000))
    assert estimate_pauli(sub, obs, clamp=False) == pytest.approx(exact, abs=6 * 3 / np.sqrt(40_000))


def test_mps_sampler_matches_born_rule(rng):
    psi = init_mps(3, 2, rng)
    v = oracle.dense_from_mps(psi)
    b = magic_basis(3)
    bases = np.array([2, 4, 1])
    rot = v
    for q in range(3):
        rot = oracle.apply_local(rot, 3, q, b.unitaries[bases[q] - 1].conj().T)
    p = np.abs(rot) ** 2
    counts = np.zeros(8)
    for _ in range(6000):
        o = _measure_mps(psi, b, bases, rng)
        counts[int(o @ (1 << np.arange(3)))] += 1
    assert np.max(np.abs(counts / counts.sum() - p)) < 0.03


def test_magic_measure_returns_bits(rng):
    psi = init_mps(4, 2, rng)
    snap, bits = magic_measure(psi, 2, rng)
    assert bits.shape == (4, 2)
    assert np.array_equal(bits, snap.bits)


def test_unnormalized_state_warns(rng):
    v = 2 * oracle.random_state(2, rng)
    with pytest.warns(UserWarning, match="normaliz"):
        magic_measure(v, 3, rng)


def test_estimator_values_and_errors(rng):
    v = oracle.random_state(2, rng)
    batch = magic_measure_batch(v, 3, 10, rng, qubits=[0, 1])
    vals = shot_values(batch, {0: "X", 1: "Y"})
    assert set(np.unique(vals)) <= {-3.0, 3.0}
    with pytest.raises(ValueError, match="not measured"):
        shot_values(magic_measure_batch(v, 3, 5, rng, qubits=[0]), {1: "Z"})
    with pytest.raises(ValueError, match="not encoded"):
        shot_values(magic_measure_batch(v, 2, 5, rng, qubits=[0]), {0: "Y"})
    with pytest.raises(ValueError):
        magic_measure_batch(v, 3, 0, rng)
    with pytest.raises(ValueError):
        magic_measure_batch(v, 3, 5, rng, qubits=[0, 0])
    assert -1 <= estimate_pauli(batch, {0: "X"}) <= 1


def test_csv_layout(rng):
    v = oracle.random_state(2, rng)
    batch = magic_measure_batch(v, 2, 3, rng, qubits=[1, 0])
    lines = write_csv(batch).splitlines()
    assert lines[0] == "shot,qubit,basis,outcome"
    assert len(lines) == 1 + 3 * 2
    assert lines[1].startswith("0,1,")
