"""Recursive QAOA at level one, evaluated in closed form.

For ``|psi> = exp(i beta B) exp(i gamma C) |+>^n`` with ``B = sum X`` and
``C = sum w Z Z``, the two-qubit reduced state of ``exp(i gamma C)|+>^n`` on
an edge ``(u, v)`` is

    rho[(a,b),(a',b')] = 1/4 exp(i gamma w_uv (s_a s_b - s_a' s_b'))
                         * prod_l cos(gamma (w_ul (s_a - s_a') + w_vl (s_b - s_b')))

with ``s = 1 - 2 * bit``. Conjugating ``Z Z`` by the mixer gives
``F(beta) = sum w <Z Z> = A + B cos 4 beta + C sin 4 beta``, so the best beta
for each gamma is exact and only gamma is searched on a grid.
"""

from __future__ import annotations

import time

import numpy as np

from ..graph import Graph, ParityRecord, reduce_graph
from ..qrac import PAULI
from ..rng import as_generator
from .report import SolveReport
from .rqrao import _drop_isolated, _finish

__all__ = [
    "best_beta",
    "beta_formula",
    "edge_zz",
    "level1_objective",
    "mixer_coefficients",
    "pair_states",
    "rqaoa_solve",
    "search_gamma",
]

_Z, _Y = PAULI["Z"], PAULI["Y"]
_ZZ = np.kron(_Z, _Z)
_YY = np.kron(_Y, _Y)
_ZY = np.kron(_Z, _Y) + np.kron(_Y, _Z)
_S = np.array([1.0, -1.0])
# (a, b, a', b') for every entry of a 4x4 two-qubit matrix, index = 2a + b
_IDX = np.array([[(r >> 1, r & 1, c >> 1, c & 1) for c in range(4)] for r in range(4)])
_DA = _S[_IDX[..., 0]] - _S[_IDX[..., 2]]
_DB = _S[_IDX[..., 1]] - _S[_IDX[..., 3]]
_PH = _S[_IDX[..., 0]] * _S[_IDX[..., 1]] - _S[_IDX[..., 2]] * _S[_IDX[..., 3]]


def _neighbor_weights(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per edge: ``w_uv`` and padded rows of ``w_ul``, ``w_vl`` over ``l`` adjacent to either end."""
    edges = g.edges
    rows = []
    for u, v, _ in edges:
        nu, nv = g.neighbors(u), g.neighbors(v)
        ls = sorted((set(nu) | set(nv)) - {u, v})
        rows.append(([nu.get(l, 0.0) for l in ls], [nv.get(l, 0.0) for l in ls]))
    D = max((len(r[0]) for r in rows), default=0)
    WU = np.zeros((len(edges), max(D, 1)))
    WV = np.zeros_like(WU)
    for e, (a, b) in enumerate(rows):
        WU[e, : len(a)] = a
        WV[e, : len(b)] = b
    return np.array([w for _, _, w in edges]), WU, WV


def pair_states(g: Graph, gammas: np.ndarray) -> np.ndarray:
    """``rho_uv(gamma)`` for every edge in ``g.edges`` order; shape ``(G, E, 4, 4)``."""
    gammas = np.atleast_1d(np.asarray(gammas, dtype=float))
    w, WU, WV = _neighbor_weights(g)
    if w.size == 0:
        return np.zeros((gammas.size, 0, 4, 4), dtype=complex)
    # the 9 distinct (da, db) pairs
    combos = [(da, db) for da in (-2.0, 0.0, 2.0) for db in (-2.0, 0.0, 2.0)]
    prods = np.empty((gammas.size, 9, w.size))
    for c, (da, db) in enumerate(combos):
        x = da * WU + db * WV  # (E, D)
        prods[:, c, :] = np.prod(np.cos(gammas[:, None, None] * x[None]), axis=2)
    ci = ((_DA + 2) / 2 * 3 + (_DB + 2) / 2).astype(int)  # (4, 4) combo index
    amp = prods[:, ci, :]  # (G, 4, 4, E)
    phase = np.exp(1j * gammas[:, None, None, None] * _PH[None, :, :, None] * w[None, None, None, :])
    return np.moveaxis(0.25 * phase * amp, 3, 1)


def mixer_coefficients(R: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(A, B, C)`` with ``tr(U(beta)^dag ZZ U(beta) R) = A + B cos 4b + C sin 4b``."""
    tr = lambda O: np.real(np.einsum("ij,...ji->...", O, R))  # noqa: E731
    return tr(_ZZ + _YY) / 2, tr(_ZZ - _YY) / 2, -tr(_ZY) / 2


def best_beta(R: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimizing beta in ``[0, pi/2)`` of ``A + B cos 4b + C sin 4b`` and the minimum."""
    A, B, C = mixer_coefficients(R)
    beta = np.mod((np.arctan2(C, B) + np.pi) / 4, np.pi / 2)
    return beta, A - np.hypot(B, C)


def beta_formula(R: np.ndarray) -> float:
    """The published closed form for the optimal mixer angle, kept for comparison."""
    Re, Im = R.real, R.imag
    num = 0.5 * (Re[0, 0] - Re[1, 1] - Re[2, 2] + Re[3, 3]) + Re[0, 3] - Re[1, 2]
    den = -Im[0, 1] - Im[0, 2] + Im[1, 3] + Im[2, 3]
    return float(-0.25 * np.arctan(num / den) + np.pi / 8)


def edge_zz(rho: np.ndarray, beta: float) -> np.ndarray:
    """``<Z_u Z_v>`` after the mixer for a stack of pair states ``(..., 4, 4)``."""
    A, B, C = mixer_coefficients(rho)
    return A + B * np.cos(4 * beta) + C * np.sin(4 * beta)


def level1_objective(g: Graph, beta: float, gamma: float) -> float:
    """``<H_Ising> = sum w (1 - <Z Z>) / 2`` at the given angles."""
    rho = pair_states(g, np.array([gamma]))[0]
    w = np.array([x for _, _, x in g.edges])
    return float(np.sum(w * (1 - edge_zz(rho, beta))) / 2)


def search_gamma(g: Graph, points: int = 50, refinements: int = 2) -> tuple[float, float, float]:
    """Grid search of gamma on ``[0, pi]`` with local refinements; returns ``(beta, gamma, <H>)``."""
    w = np.array([x for _, _, x in g.edges])
    lo, hi = 0.0, np.pi
    best = None
    for level in range(refinements + 1):
        gammas = np.linspace(lo, hi, points)
        R = np.einsum("e,geij->gij", w, pair_states(g, gammas))
        betas, F = best_beta(R)
        i = int(np.argmin(F))
        if best is None or F[i] < best[2]:
            best = (float(betas[i]), float(gammas[i]), float(F[i]))
        step = gammas[1] - gammas[0]
        lo, hi = best[1] - step, best[1] + step
    beta, gamma, F = best
    return beta, gamma, float((w.sum() - F) / 2)


def rqaoa_solve(
    g: Graph, threshold: int = 10, rng: np.random.Generator | int | None = 0, points: int = 50
) -> SolveReport:
    """Fix one edge per round by the largest ``|<Z Z>|`` until ``threshold`` nodes remain."""
    gen = as_generator(rng)
    t0 = time.perf_counter()
    record = ParityRecord()
    flags: list[str] = []
    rounds = []
    work = _drop_isolated(g, record)
    rnd = 0
    while work.num_nodes > threshold:
        tr = time.perf_counter()
        beta, gamma, value = search_gamma(work, points)
        edges = work.edges
        zz = edge_zz(pair_states(work, np.array([gamma]))[0], beta)
        mag = np.abs(zz)
        top = np.flatnonzero(mag == mag.max())
        i = int(top[0] if top.size == 1 else gen.choice(top))
        u, v, _ = edges[i]
        if mag[i] == 0:
            sign = 1 if gen.random() < 0.5 else -1
            flags.append(f"round {rnd}: all edge energies zero; fixed ({u}, {v}) at random")
        else:
            sign = 1 if zz[i] > 0 else -1
        record.add(v, u, sign)
        n_before = work.num_nodes
        work = _drop_isolated(reduce_graph(work, v, u, sign), record)
        rounds.append(
            {
                "round": rnd,
                "nodes": n_before,
                "edges": len(edges),
                "fixed": 1,
                "best_objective": round(value, 12),
                "beta": round(beta, 12),
                "gamma": round(gamma, 12),
                "seconds": time.perf_counter() - tr,
            }
        )
        rnd += 1
    bits = _finish(g, record)
    params = {"threshold": threshold, "points": points, "refinements": 2}
    return SolveReport.build(g, "rqaoa", bits, None, params, rounds, flags, {"total_seconds": time.perf_counter() - t0})
