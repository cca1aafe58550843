"""Rank-two relaxation baseline and hyperplane rounding.

Each node gets an angle; the relaxed cut is ``sum w sin^2((t_j - t_k)/2)``.
After a local maximization the angles are rounded by trying every distinct
half-plane ``cos(t_j + alpha) < 0`` and then polished by single flips.
"""

from __future__ import annotations

import time

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import csr_matrix

from ..graph import Graph
from ..rng import as_generator
from .report import SolveReport

__all__ = ["hyperplane_round", "local_search", "rank_two_solve", "relaxed_cut", "round_angles"]


def relaxed_cut(theta: np.ndarray, iu: np.ndarray, iv: np.ndarray, w: np.ndarray) -> tuple[float, np.ndarray]:
    d = theta[iu] - theta[iv]
    val = float(np.sum(w * (1 - np.cos(d))) / 2)
    gd = w * np.sin(d) / 2
    grad = np.zeros_like(theta)
    np.add.at(grad, iu, gd)
    np.add.at(grad, iv, -gd)
    return val, grad


def _cuts(bits: np.ndarray, iu, iv, w) -> np.ndarray:
    return ((bits[:, iu] != bits[:, iv]) * w).sum(axis=1)


def round_angles(theta: np.ndarray, iu, iv, w) -> tuple[np.ndarray, float]:
    """Best of ``b_j = [cos(theta_j + alpha) < 0]`` over all distinct ``alpha``."""
    n = theta.size
    crit = np.mod(np.concatenate([np.pi / 2 - theta, -np.pi / 2 - theta]), 2 * np.pi)
    crit = np.sort(crit)
    mids = (crit + np.roll(crit, -1)) / 2
    mids[-1] = np.mod((crit[-1] + crit[0] + 2 * np.pi) / 2, 2 * np.pi)
    bits = (np.cos(theta[None, :] + mids[:, None]) < 0).astype(np.int8)
    if n == 0:
        return np.zeros(0, dtype=np.int8), 0.0
    c = _cuts(bits, iu, iv, w) if w.size else np.zeros(len(mids))
    i = int(np.argmax(c))
    return bits[i], float(c[i])


def local_search(bits: np.ndarray, A: csr_matrix) -> np.ndarray:
    """Flip single nodes while some flip increases the cut (steepest ascent)."""
    b = bits.astype(np.int8).copy()
    s = 1 - 2 * b.astype(float)
    field = A @ s
    while True:
        gain = s * field  # flipping j changes the cut by s_j * sum_k w_jk s_k
        j = int(np.argmax(gain))
        if gain[j] <= 1e-12:
            return b
        s[j] = -s[j]
        b[j] ^= 1
        col = A.getrow(j)
        field[col.indices] += 2 * s[j] * col.data


def hyperplane_round(vectors: np.ndarray, g: Graph, trials: int, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """Random-hyperplane rounding of unit vectors (rows aligned with ``g.nodes``)."""
    V = np.asarray(vectors, dtype=float)
    if V.shape[0] != g.num_nodes:
        raise ValueError("one vector per node required")
    iu, iv, w = g.edge_arrays()
    r = rng.standard_normal((trials, V.shape[1]))
    bits = (r @ V.T < 0).astype(np.int8)
    c = _cuts(bits, iu, iv, w) if w.size else np.zeros(trials)
    i = int(np.argmax(c))
    return bits[i], float(c[i])


def rank_two_solve(
    g: Graph, restarts: int = 10, rng: np.random.Generator | int | None = None, polish: bool = True
) -> SolveReport:
    """Best rounded rank-two relaxation over random restarts."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    gen = as_generator(rng)
    t0 = time.perf_counter()
    n = g.num_nodes
    iu, iv, w = g.edge_arrays()
    A = csr_matrix((np.concatenate([w, w]), (np.concatenate([iu, iv]), np.concatenate([iv, iu]))), shape=(n, n))
    best_bits, best = np.zeros(n, dtype=np.int8), -np.inf
    rounds = []
    for r in range(restarts):
        theta0 = gen.uniform(0, 2 * np.pi, n)
        res = minimize(lambda t: tuple(-x for x in relaxed_cut(t, iu, iv, w)), theta0, jac=True, method="L-BFGS-B")
        bits, cut = round_angles(res.x, iu, iv, w)
        if polish:
            bits = local_search(bits, A)
            cut = float(_cuts(bits[None], iu, iv, w)[0]) if w.size else 0.0
        rounds.append({"round": r, "nodes": n, "edges": g.num_edges, "fixed": n,
                       "best_objective": round(-float(res.fun), 12), "cut": cut, "seconds": 0.0})
        if cut > best:
            best_bits, best = bits, cut
    params = {"restarts": restarts, "polish": polish}
    return SolveReport.build(g, "rank2", best_bits, None, params, rounds, [], {"total_seconds": time.perf_counter() - t0})
