import numpy as np
import pytest

from rqrao import oracle
from rqrao.graph import Graph, cut_weight, generate
from rqrao.qrac import PauliAssignment, assign_paulis, build_terms
from rqrao.tensornet import init_mps


def test_brute_force_small_graphs(square, triangle):
    bits, w = oracle.brute_force_maxcut(square)
    assert w == 4 and bits[0] == 0
    assert oracle.brute_force_maxcut(triangle)[1] == 2
    assert oracle.brute_force_maxcut(Graph([5], []))[1] == 0


def test_brute_force_blocks_agree(rng):
    g = generate({"kind": "random", "n": 12, "density": 0.5, "seed": 4})
    a = oracle.brute_force_maxcut(g, block=1 << 16)
    b = oracle.brute_force_maxcut(g, block=37)
    assert a[1] == b[1]
    assert cut_weight(g, a[0]) == a[1]


def test_brute_force_limit():
    with pytest.raises(oracle.SizeError):
        oracle.brute_force_maxcut(Graph(range(oracle.BRUTE_LIMIT + 1)))


def test_distribution_is_normalized(rng):
    rho = oracle.random_density(2, rng)
    d = oracle.magic_distribution(rho, PauliAssignment(3, 2, {}))
    assert d.probs.sum() == pytest.approx(1.0)
    assert d.normalizer == pytest.approx(2 ** ((3 - 1) * 2))
    with pytest.raises(oracle.SizeError):
        oracle.magic_distribution(oracle.random_state(8, rng), PauliAssignment(3, 8, {}))


def test_density_and_pure_paths_agree(rng):
    v = oracle.random_state(3, rng)
    a = PauliAssignment(2, 3, {})
    p1 = oracle.magic_distribution(v, a).probs
    p2 = oracle.magic_distribution(np.outer(v, v.conj()), a).probs
    assert np.allclose(p1, p2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_identity_suite_on_fixed_instance(m):
    rng = np.random.default_rng(10 + m)
    g = generate({"kind": "random", "n": 6, "density": 0.6, "seed": m})
    a = assign_paulis(g, m, rng)
    rho = oracle.random_density(a.num_qubits, rng) if a.num_qubits <= 3 else oracle.random_state(a.num_qubits, rng)
    assert oracle.expected_cut(rho, g, a) == pytest.approx(oracle.expected_cut_formula(rho, g, a), abs=1e-12)
    assert oracle.cut_variance(rho, g, a) == pytest.approx(oracle.cut_variance_moments(rho, g, a), abs=1e-12)
    for j, k, _ in g.edges:
        lhs, rhs, gap = oracle.verify_pauli_estimator(rho, a, {a.slots[j][0]: a.slots[j][1], a.slots[k][0]: a.slots[k][1]})
        assert gap < 1e-12


def test_published_variance_formula_fails_on_one_edge():
    # one edge, m = 3: the exact variance is w^2 (1 - E^2/m^2) / 4, the published one w^2 (1 - E^2) / (4 m^2)
    g = Graph(range(2), [(0, 1, 1.0)])
    a = PauliAssignment(3, 2, {0: (0, "Z"), 1: (1, "Z")})
    v = np.zeros(4)
    v[0] = 1.0  # |00>, E = <Z Z> = 1
    assert oracle.cut_variance(v, g, a) == pytest.approx((1 - 1 / 9) / 4)
    assert oracle.cut_variance_formula(v, g, a) == pytest.approx(0.0)


def test_same_qubit_pairs_are_uncorrelated(rng):
    a = PauliAssignment(3, 1, {0: (0, "X"), 1: (0, "Z")})
    for _ in range(5):
        rho = oracle.random_density(1, rng)
        assert oracle.pair_probabilities(rho, a, 0, 1)[1] == pytest.approx(0.5, abs=1e-14)


def test_channel_identity(rng):
    for m in (1, 2, 3):
        rho = oracle.random_density(2, rng)
        P = {0: "Z", 1: "X" if m > 1 else "Z"}
        assert oracle.channel_gap(rho, m, P) < 1e-12


def test_diagonal_matches_dense(rng):
    g = generate({"kind": "random", "n": 7, "density": 0.5, "seed": 1})
    t = build_terms(g, assign_paulis(g, 1, rng))
    assert np.allclose(oracle.hamiltonian_diagonal(t), np.diag(oracle.hamiltonian_dense(t)).real)
    with pytest.raises(ValueError):
        oracle.hamiltonian_diagonal(build_terms(g, assign_paulis(g, 3, rng)))


def test_dense_helpers(rng):
    psi = init_mps(4, 2, rng)
    v = oracle.dense_from_mps(psi)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    r = oracle.reduced_density(v, 4, [2, 0])
    full = np.outer(v, v.conj())
    Z2 = oracle.pauli_dense({2: "Z"}, 4)
    assert np.trace(r @ np.diag([1, -1, 1, -1])).real == pytest.approx(np.trace(Z2 @ full).real)
    with pytest.raises(oracle.SizeError):
        oracle.qaoa1_state(Graph(range(21)), 0.1, 0.2)
