"""Acceptance criteria 1-9. Every test prints one PASS/FAIL line.

Criteria 5 and 6 solve 300 graphs between them and take several minutes on
one core. Criterion 7 needs a local copy of the Gset file G11; point the
``RQRAO_G11`` environment variable at it to run it.
"""

import os
import time

import numpy as np
import pytest
from scipy import stats

from rqrao import oracle
from rqrao.datasets import rnd14, rnd14_optimum_bits
from rqrao.graph import generate, read_graph
from rqrao.qrac import assign_paulis, build_terms
from rqrao.shadows import estimate_pauli, magic_measure_batch
from rqrao.solver import (
    RqraoParams,
    beta_formula,
    edge_zz,
    level1_objective,
    pair_states,
    rank_two_solve,
    rqrao_solve,
    search_gamma,
)
from rqrao.solver.rqaoa import mixer_coefficients
from rqrao.verify import EXACT_TOL, GRAD_TOL, run_suite

_C1_SECONDS: list[float] = []
_C2_SECONDS: list[float] = []


@pytest.fixture
def verdict(capsys):
    """Print one line that survives output capture, then assert."""

    def emit(label: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{label}] {detail}", flush=True)
        assert ok, f"{label}: {detail}"

    return emit


@pytest.fixture(scope="module")
def warm_jit():
    # first call compiles (or loads) the numba kernels; keep that out of timed runs
    rqrao_solve(generate({"kind": "3regular", "n": 14, "seed": 0}), RqraoParams(ensemble=1), rng=0)


# criterion 1: exact identities, >= 50 instances each, max gap < 1e-9

C1_SUITES = [
    ("pauli_estimator", "Pauli estimator unbiased"),
    ("expected_cut", "expected cut affine in energy"),
    ("cut_variance_published", "cut variance, published form"),
    ("bit_prob", "single bit probability"),
    ("pair_prob_distinct", "pair probability, different qubits"),
    ("pair_prob_same_published", "pair probability on one qubit, published form"),
    ("channel", "magic-channel identity"),
    ("hamiltonian_cut", "tr(H_m mu_m(b)) = CW(b)"),
]


@pytest.mark.parametrize("suite, label", C1_SUITES, ids=[s for s, _ in C1_SUITES])
def test_c1_identity(suite, label, verdict):
    r = run_suite(suite, instances=50, seed=2024)
    _C1_SECONDS.append(r.seconds)
    verdict(f"C1 {label}", r.max_gap < EXACT_TOL,
            f"max gap {r.max_gap:.3e} over {r.instances} instances (tol {EXACT_TOL:g}, {r.seconds:.1f} s)")


def test_c1_runtime(verdict):
    total = sum(_C1_SECONDS)
    verdict("C1 runtime", len(_C1_SECONDS) == len(C1_SUITES) and total < 60, f"{total:.1f} s for all suites (< 60 s)")


# criterion 2: tensor network vs dense, gradient vs finite differences


def test_c2_dense_agreement(verdict):
    r = run_suite("mps_dense", instances=50, seed=2024)
    _C2_SECONDS.append(r.seconds)
    verdict("C2 MPS vs dense", r.max_gap < EXACT_TOL,
            f"max gap {r.max_gap:.3e} over 50 states, n <= 10, chi in {{1,2,4}} (tol {EXACT_TOL:g})")


def test_c2_gradient(verdict):
    r = run_suite("gradient", instances=50, seed=2024)
    _C2_SECONDS.append(r.seconds)
    verdict("C2 gradient", r.max_gap <= GRAD_TOL,
            f"max relative error {r.max_gap:.3e} vs central differences over 50 instances (tol {GRAD_TOL:g})")
    total = sum(_C2_SECONDS)
    verdict("C2 runtime", total < 60, f"{total:.1f} s (< 60 s)")


# criterion 3: Rnd14


def test_c3_rnd14_ground_truth(verdict):
    g = rnd14()
    bits, w = oracle.brute_force_maxcut(g)
    n = g.num_nodes
    x = np.arange(1 << (n - 1))
    all_bits = np.zeros((x.size, n), dtype=np.int8)
    all_bits[:, 1:] = (x[:, None] >> np.arange(n - 1)) & 1
    iu, iv, wt = g.edge_arrays()
    cuts = ((all_bits[:, iu] != all_bits[:, iv]) * wt).sum(axis=1)
    maximizers = int(np.sum(cuts == cuts.max()))
    opt = rnd14_optimum_bits()
    same = np.array_equal(bits, opt) or np.array_equal(bits, 1 - opt)
    verdict("C3 Rnd14 brute force", w == 12 and maximizers == 1 and same,
            f"optimum {w:g}, {maximizers} maximizer(s) up to flip, matches 00001101101010: {same}")


def test_c3_rnd14_rqrao(verdict, warm_jit):
    g = rnd14()
    hits, times = 0, []
    for seed in range(10):
        t0 = time.perf_counter()
        rep = rqrao_solve(g, rng=seed)
        times.append(time.perf_counter() - t0)
        hits += rep.weight == 12
    verdict("C3 Rnd14 RQRAO", hits >= 8 and max(times) < 30,
            f"weight 12 in {hits}/10 runs (need >= 8), slowest run {max(times):.2f} s (< 30 s)")


# criterion 4: m = 1 maximal eigenstate decodes to the optimum


def _top_decode(g, a, state):
    """Most probable node bit string under magic measurement of ``state``."""
    d = oracle.magic_distribution(state, a)
    code = np.zeros(d.probs.size, dtype=np.int64)
    for i, u in enumerate(g.nodes):
        code |= d.slot_bits(*a.slots[u]).astype(np.int64) << i
    marg = np.bincount(code, weights=d.probs, minlength=1 << g.num_nodes)
    best = int(np.argmax(marg))
    return np.array([(best >> i) & 1 for i in range(g.num_nodes)], dtype=np.int8), marg


def test_c4_m1_maximal_eigenstate(verdict):
    g = rnd14()
    opt = rnd14_optimum_bits()
    code_opt = int(opt @ (1 << np.arange(14)))
    hits = 0
    rng = np.random.default_rng(4)
    for _ in range(100):
        a = assign_paulis(g, 1, rng)
        diag = oracle.hamiltonian_diagonal(build_terms(g, a))
        state = np.zeros(diag.size)
        state[int(np.argmax(diag))] = 1.0
        bits, _ = _top_decode(g, a, state)
        hits += np.array_equal(bits, opt) or np.array_equal(bits, 1 - opt)
    report = []
    for m in (2, 3):
        top, p_opt, used = 0, [], 0
        for _ in range(20):
            a = assign_paulis(g, m, rng)
            if m * a.num_qubits > oracle.ENUM_LIMIT:
                continue
            used += 1
            H = oracle.hamiltonian_dense(build_terms(g, a))
            _, vecs = np.linalg.eigh(H)
            bits, marg = _top_decode(g, a, vecs[:, -1])
            top += np.array_equal(bits, opt) or np.array_equal(bits, 1 - opt)
            p_opt.append(marg[code_opt] + marg[(1 << 14) - 1 - code_opt])
        report.append(f"m={m}: top decode optimal in {top}/{used}, P(optimum) median {np.median(p_opt):.4f}")
    verdict("C4 m=1 eigenstate decode", hits == 100, f"{hits}/100 assignments; " + "; ".join(report))


# criterion 5: ensemble benefit on 100-node 3-regular graphs


def test_c5_ensemble_benefit(verdict, warm_jit):
    t0 = time.perf_counter()
    n20, n1 = [], []
    for i in range(10):
        g = generate({"kind": "3regular", "n": 100, "weights": "pm1", "seed": 500 + i})
        for seed in range(10):
            n20.append(rqrao_solve(g, RqraoParams(), rng=seed).weight)
            n1.append(rqrao_solve(g, RqraoParams(ensemble=1), rng=seed).weight)
    elapsed = time.perf_counter() - t0
    d = np.array(n20) - np.array(n1)
    p = stats.wilcoxon(d, alternative="greater").pvalue if np.any(d) else 1.0
    ok = np.mean(n20) >= np.mean(n1) and p < 0.05 and elapsed < 1800
    verdict("C5 ensemble N=20 vs N=1", ok,
            f"mean cut {np.mean(n20):.2f} vs {np.mean(n1):.2f}, one-sided Wilcoxon p = {p:.2e} (< 0.05), "
            f"{elapsed / 60:.1f} min (< 30 min)")


# criterion 6: RQRAO vs rank-two at n = 200


def test_c6_baseline_parity(verdict, warm_jit):
    t0 = time.perf_counter()
    rel = []
    for i in range(10):
        g = generate({"kind": "3regular", "n": 200, "weights": "pm1", "seed": 900 + i})
        rel.append(rqrao_solve(g, rng=i).weight / rank_two_solve(g, rng=i).weight)
    elapsed = time.perf_counter() - t0
    mean = float(np.mean(rel))
    trend = "at or above 1.0" if mean >= 1.0 else "below 1.0"
    verdict("C6 relative cut vs rank-two", mean >= 0.98 and elapsed < 7200,
            f"mean {mean:.4f} (>= 0.98; crossover trend {trend}, non-binding), {elapsed / 60:.1f} min")


# criterion 7: Gset G11 (extended, optional)


@pytest.mark.skipif("RQRAO_G11" not in os.environ, reason="set RQRAO_G11 to the path of the Gset G11 file")
def test_c7_gset_g11(verdict, warm_jit):
    g = read_graph(os.environ["RQRAO_G11"])
    best = max(rqrao_solve(g, rng=s).weight for s in range(10))
    verdict("C7 G11 best of 10", best >= 556, f"best {best:g} (>= 556, target 564)")


# criterion 8: shadow estimator concentration


def test_c8_shadow_estimator(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    v = oracle.random_state(10, rng)
    obs = {2: "X", 7: "Y"}
    exact = float(np.real(v.conj() @ oracle.pauli_dense(obs, 10) @ v))
    shots = 10**4
    bound = 3 * np.sqrt(3**2 / shots)
    inside = 0
    for _ in range(100):
        est = estimate_pauli(magic_measure_batch(v, 3, shots, rng, qubits=[2, 7]), obs, clamp=False)
        inside += abs(est - exact) <= bound
    elapsed = time.perf_counter() - t0
    verdict("C8 shadow estimator", inside >= 95 and elapsed < 300,
            f"{inside}/100 estimates within {bound:.3f} of {exact:+.4f} (need >= 95), {elapsed:.1f} s")


# criterion 9: RQAOA closed forms


def test_c9_rqaoa(verdict):
    t0 = time.perf_counter()
    zz_gap, beta_gap, published = 0.0, 0.0, 0
    for i in range(20):
        rng = np.random.default_rng(900 + i)
        n = int(rng.integers(4, 13))
        g = generate({"kind": "random", "n": n, "density": float(rng.uniform(0.3, 0.8)), "seed": i})
        g = g.with_weights({(u, v): w * rng.uniform(0.5, 1.5) for u, v, w in g.edges})
        beta, gamma, value = search_gamma(g)
        state = oracle.qaoa1_state(g, beta, gamma)
        zz = edge_zz(pair_states(g, np.array([gamma]))[0], beta)
        for (u, v, _), e in zip(g.edges, zz):
            zz_gap = max(zz_gap, abs(e - oracle.zz_dense(state, n, g.position(u), g.position(v))))
        grid = np.linspace(0, np.pi / 2, 100_001)
        w = np.array([x for *_, x in g.edges])
        A, B, C = mixer_coefficients(np.einsum("e,eij->ij", w, pair_states(g, np.array([gamma]))[0]))
        best_grid = float(np.max((w.sum() - (A + B * np.cos(4 * grid) + C * np.sin(4 * grid))) / 2))
        beta_gap = max(beta_gap, best_grid - value)
        R = np.einsum("e,eij->ij", w, pair_states(g, np.array([gamma]))[0])
        published += abs(level1_objective(g, beta_formula(R), gamma) - best_grid) < 1e-6
    elapsed = time.perf_counter() - t0
    verdict("C9 analytic <ZZ> vs dense", zz_gap < 1e-8, f"max gap {zz_gap:.3e} on 20 graphs with <= 12 nodes")
    verdict("C9 closed-form beta vs grid", beta_gap < 1e-6 and elapsed < 120,
            f"objective shortfall {beta_gap:.3e} (< 1e-6), {elapsed:.1f} s; "
            f"published arctan expression optimal on {published}/20 (informational)")
