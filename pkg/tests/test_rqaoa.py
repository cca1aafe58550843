import numpy as np
import pytest

from rqrao.graph import Graph, generate
from rqrao.oracle import brute_force_maxcut, qaoa1_state, zz_dense
from rqrao.solver import best_beta, edge_zz, level1_objective, pair_states, rqaoa_solve, search_gamma
from rqrao.solver.rqaoa import mixer_coefficients


def weighted(seed, n):
    rng = np.random.default_rng(seed)
    g = generate({"kind": "random", "n": n, "density": 0.5, "seed": seed})
    return g.with_weights({(u, v): w * rng.uniform(0.5, 1.5) for u, v, w in g.edges})


@pytest.mark.parametrize("seed", range(4))
def test_pair_states_match_dense(seed):
    g = weighted(seed, 7)
    rng = np.random.default_rng(seed)
    beta, gamma = rng.uniform(0, np.pi, 2)
    v = qaoa1_state(g, beta, gamma)
    zz = edge_zz(pair_states(g, np.array([gamma]))[0], beta)
    for (u, w_, _), e in zip(g.edges, zz):
        assert e == pytest.approx(zz_dense(v, g.num_nodes, g.position(u), g.position(w_)), abs=1e-12)


def test_pair_states_are_density_matrices():
    g = weighted(1, 6)
    R = pair_states(g, np.array([0.3, 1.1]))
    assert R.shape == (2, g.num_edges, 4, 4)
    assert np.allclose(np.trace(R, axis1=2, axis2=3), 1)
    assert np.allclose(R, np.conj(np.swapaxes(R, 2, 3)))
    assert np.min(np.linalg.eigvalsh(R)) > -1e-12


def test_best_beta_beats_grid():
    g = weighted(2, 8)
    w = np.array([x for *_, x in g.edges])
    R = np.einsum("e,eij->ij", w, pair_states(g, np.array([0.7]))[0])
    beta, F = best_beta(R)
    A, B, C = mixer_coefficients(R)
    grid = np.linspace(0, np.pi / 2, 20001)
    Fg = A + B * np.cos(4 * grid) + C * np.sin(4 * grid)
    assert F <= Fg.min() + 1e-12
    assert F == pytest.approx(Fg.min(), abs=1e-6)


def test_search_gamma_returns_consistent_objective():
    g = weighted(3, 8)
    beta, gamma, value = search_gamma(g)
    assert value == pytest.approx(level1_objective(g, beta, gamma))
    coarse = max(level1_objective(g, beta, x) for x in np.linspace(0, np.pi, 50))
    assert value >= coarse - 1e-12


def test_rqaoa_small_instances():
    sq = Graph(range(4), [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])
    assert rqaoa_solve(sq, threshold=2).weight == 4
    g = weighted(5, 14)
    rep = rqaoa_solve(g, threshold=8)
    rep.check(g)
    assert rep.weight <= brute_force_maxcut(g)[1] + 1e-9
    assert all(r["nodes"] > 8 and r["fixed"] == 1 for r in rep.rounds)


def test_rqaoa_is_deterministic():
    g = weighted(6, 14)
    assert rqaoa_solve(g, 10).to_json(timing=False) == rqaoa_solve(g, 10).to_json(timing=False)
