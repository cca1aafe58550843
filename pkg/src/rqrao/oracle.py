"""Exhaustive and dense-state oracles.

Everything here enumerates: all ``2**(m n)`` magic embeddings, all ``2**(N-1)``
cuts, or the full ``2**n`` state vector. These are the ground truth for the
tests and for the ``verify`` command, not building blocks of the solver.

Bit layout of a magic embedding index: the bit of Pauli ``ACTIVE_PAULIS[m][i]``
on qubit ``q`` is bit ``q * m + i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _dense
from ._dense import (
    DENSE_LIMIT,
    SizeError,
    apply_local,
    as_density,
    dense_from_mps,
    pauli_dense,
    random_density,
    random_state,
    reduced_density,
    sum_dense,
)
from .graph import Graph, cut_weight
from .qrac import ACTIVE_PAULIS, HamiltonianTerms, MagicState, PauliAssignment, build_terms, magic_density
from .shadows import magic_basis

__all__ = [
    "BRUTE_LIMIT",
    "DENSE_LIMIT",
    "ENUM_LIMIT",
    "MagicDistribution",
    "SizeError",
    "apply_local",
    "brute_force_maxcut",
    "channel_gap",
    "cut_variance",
    "cut_variance_formula",
    "cut_variance_moments",
    "dense_from_mps",
    "expected_cut",
    "expected_cut_formula",
    "hamiltonian_dense",
    "hamiltonian_diagonal",
    "magic_distribution",
    "pair_probabilities",
    "pair_probability_formula",
    "pauli_dense",
    "random_density",
    "random_state",
    "reduced_density",
    "slot_moment",
    "sum_dense",
    "qaoa1_state",
    "verify_pauli_estimator",
    "zz_dense",
]

ENUM_LIMIT = 21
BRUTE_LIMIT = 26


@dataclass(frozen=True, eq=False)
class MagicDistribution:
    m: int
    num_qubits: int
    probs: np.ndarray
    normalizer: float

    def slot_bits(self, qubit: int, pauli: str) -> np.ndarray:
        """The bit of slot ``(qubit, pauli)`` for every embedding index."""
        pos = qubit * self.m + ACTIVE_PAULIS[self.m].index(pauli)
        return (np.arange(self.probs.size) >> pos) & 1


def _local_vectors(m: int) -> np.ndarray:
    """``(2**m, 2)`` magic state vectors indexed by the local bit pattern."""
    out = []
    for c in range(2**m):
        bits = np.array([[(c >> i) & 1 for i in range(m)]], dtype=np.int8)
        w, v = np.linalg.eigh(magic_density(MagicState(m, bits), 0))
        out.append(v[:, np.argmax(w)])
    return np.array(out)


def _fidelities(state: np.ndarray, m: int, n: int) -> np.ndarray:
    phi = _local_vectors(m).conj()  # (2**m, 2)
    s = np.asarray(state, dtype=complex)

    def overlaps(v):
        t = v.reshape([2] * n)
        for q in range(n):
            ax = n - 1 - q
            t = np.moveaxis(np.tensordot(phi, t, axes=([1], [ax])), 0, ax)
        return np.abs(t.reshape(-1)) ** 2

    if s.ndim == 1:
        return overlaps(s)
    if n > 10:
        raise SizeError("density-matrix enumeration limited to 10 qubits")
    lam, vecs = np.linalg.eigh(s)
    return sum(l * overlaps(vecs[:, i]) for i, l in enumerate(lam) if abs(l) > 1e-15)


def magic_distribution(rho: np.ndarray, a: PauliAssignment | int, m: int | None = None) -> MagicDistribution:
    """``P_m(b) = tr(mu_m(b) rho) / sum_b' tr(mu_m(b') rho)`` over every embedding ``b``.

    ``rho`` is a state vector or density matrix on ``a.num_qubits`` qubits.
    """
    if isinstance(a, PauliAssignment):
        m, n = a.m, a.num_qubits
    else:
        n = int(a)
    if m * n > ENUM_LIMIT:
        raise SizeError(f"enumeration limited to m*n <= {ENUM_LIMIT}, got {m * n}")
    f = _fidelities(rho, m, n)
    if np.min(f) < -1e-12:
        raise ValueError("negative fidelity; is rho a valid state?")
    f = np.clip(f, 0, None)
    z = float(f.sum())
    return MagicDistribution(m, n, f / z, z)


def _sign_of(d: MagicDistribution, slots: Sequence[tuple[int, str]]) -> np.ndarray:
    par = np.zeros(d.probs.size, dtype=np.int64)
    for q, p in slots:
        par ^= d.slot_bits(q, p)
    return 1 - 2 * par


def verify_pauli_estimator(
    rho: np.ndarray, a: PauliAssignment, observable: Mapping[int, str]
) -> tuple[float, float, float]:
    """``(tr(P rho), m**(k/2) E_b[(-1)^(sum b)], gap)`` for a Pauli string on distinct qubits."""
    d = magic_distribution(rho, a)
    n = a.num_qubits
    lhs = float(np.real(np.trace(pauli_dense(observable, n) @ as_density(rho))))
    sign = _sign_of(d, list(observable.items()))
    rhs = float(a.m ** (len(observable) / 2) * np.dot(d.probs, sign))
    return lhs, rhs, abs(lhs - rhs)


def _node_bits(d: MagicDistribution, a: PauliAssignment, g: Graph) -> np.ndarray:
    return np.stack([d.slot_bits(*a.slots[u]) for u in g.nodes], axis=1)


def _cut_table(d: MagicDistribution, a: PauliAssignment, g: Graph) -> np.ndarray:
    cw = np.zeros(d.probs.size)
    for j, k, w in g.edges:
        cw += w * (d.slot_bits(*a.slots[j]) != d.slot_bits(*a.slots[k]))
    return cw


def expected_cut(rho: np.ndarray, g: Graph, a: PauliAssignment) -> float:
    d = magic_distribution(rho, a)
    return float(np.dot(d.probs, _cut_table(d, a, g)))


def cut_variance(rho: np.ndarray, g: Graph, a: PauliAssignment) -> float:
    d = magic_distribution(rho, a)
    cw = _cut_table(d, a, g)
    mu = np.dot(d.probs, cw)
    return float(np.dot(d.probs, (cw - mu) ** 2))


def hamiltonian_dense(terms: HamiltonianTerms) -> np.ndarray:
    return sum_dense(terms.pauli_terms(), terms.num_qubits)


def hamiltonian_diagonal(terms: HamiltonianTerms) -> np.ndarray:
    """Diagonal of a Hamiltonian made of ``Z`` strings only; basis index bit ``q`` is qubit ``q``."""
    n = terms.num_qubits
    if n > BRUTE_LIMIT:
        raise SizeError(f"diagonal limited to {BRUTE_LIMIT} qubits")
    idx = np.arange(2**n)
    d = np.full(2**n, terms.constant)
    for c, (qa, pa), (qb, pb), _ in terms.terms:
        if pa != "Z" or pb != "Z":
            raise ValueError("Hamiltonian is not diagonal")
        d += c * (1 - 2 * (((idx >> qa) ^ (idx >> qb)) & 1))
    return d


def expected_cut_formula(rho: np.ndarray, g: Graph, a: PauliAssignment) -> float:
    """``(tr(H_m rho) + (m^2 - 1)/2 * W) / m^2``."""
    H = hamiltonian_dense(build_terms(g, a))
    e = float(np.real(np.trace(H @ as_density(rho))))
    m = a.m
    return (e + (m * m - 1) / 2 * g.total_weight()) / (m * m)


def cut_variance_formula(rho: np.ndarray, g: Graph, a: PauliAssignment) -> float:
    """``(tr(H_m^2 rho) - tr(H_m rho)^2) / m^4``."""
    H = hamiltonian_dense(build_terms(g, a))
    R = as_density(rho)
    e1 = float(np.real(np.trace(H @ R)))
    e2 = float(np.real(np.trace(H @ H @ R)))
    return (e2 - e1 * e1) / a.m**4


def slot_moment(rho: np.ndarray, a: PauliAssignment, nodes: Sequence[int]) -> float:
    """``E_b[prod_j (-1)^b_j]`` over ``nodes`` in closed form.

    Repeated nodes cancel. What remains averages to ``m**(-k/2) tr(P rho)``
    when no two nodes share a qubit and to exactly 0 otherwise: on one qubit
    the product of two distinct slot signs has zero mean for every state.
    """
    odd: dict[int, int] = {}
    for u in nodes:
        odd[u] = odd.get(u, 0) ^ 1
    slots = [a.slots[u] for u, c in odd.items() if c]
    qubits = [q for q, _ in slots]
    if len(set(qubits)) < len(qubits):
        return 0.0
    if not slots:
        return 1.0
    P = pauli_dense(dict(slots), a.num_qubits)
    return float(a.m ** (-len(slots) / 2) * np.real(np.trace(P @ as_density(rho))))


def cut_variance_moments(rho: np.ndarray, g: Graph, a: PauliAssignment) -> float:
    """Exact cut variance from second moments of the edge signs, via :func:`slot_moment`."""
    edges = g.edges
    mom = [slot_moment(rho, a, (j, k)) for j, k, _ in edges]
    var = 0.0
    for x, (j, k, w) in enumerate(edges):
        for y, (jj, kk, ww) in enumerate(edges):
            var += w * ww * (slot_moment(rho, a, (j, k, jj, kk)) - mom[x] * mom[y])
    return var / 4


def pair_probabilities(rho: np.ndarray, a: PauliAssignment, j: int, k: int) -> tuple[float, float]:
    """``(P(b_j = 0), P(b_j = b_k))`` under magic measurements, by enumeration."""
    d = magic_distribution(rho, a)
    bj = d.slot_bits(*a.slots[j])
    bk = d.slot_bits(*a.slots[k])
    return float(np.dot(d.probs, bj == 0)), float(np.dot(d.probs, bj == bk))


def pair_probability_formula(rho: np.ndarray, a: PauliAssignment, j: int, k: int) -> tuple[float, float]:
    """The closed forms: ``1/2 + E_j/(2 sqrt m)`` and, for the pair,
    ``1/2 + E_j E_k/(2m)`` on a shared qubit or ``1/2 + E_jk/(2m)`` otherwise."""
    n, m = a.num_qubits, a.m
    R = as_density(rho)
    (qj, pj), (qk, pk) = a.slots[j], a.slots[k]

    def ev(ops):
        return float(np.real(np.trace(pauli_dense(ops, n) @ R)))

    ej = ev({qj: pj})
    if qj == qk:
        pair = 0.5 + ej * ev({qk: pk}) / (2 * m)
    else:
        pair = 0.5 + ev({qj: pj, qk: pk}) / (2 * m)
    return 0.5 + ej / (2 * np.sqrt(m)), pair


def channel_gap(rho: np.ndarray, m: int, observable: Mapping[int, str]) -> float:
    """``|sum_b P(b) tr(P mu(b)) - m**-k tr(P rho)|`` over the exact basis enumeration.

    The identity holds for Pauli strings built from the ``m`` active Paulis.

    The left side averages the measured magic state over uniformly random bases
    and Born-rule outcomes, i.e. the measurement channel applied to ``rho``.
    """
    R = as_density(rho)
    n = int(round(np.log2(R.shape[0])))
    if n > 3:
        raise SizeError("channel enumeration limited to 3 qubits")
    basis = magic_basis(m)
    B = basis.num_bases
    P = pauli_dense(observable, n)
    acc = 0.0
    for combo in range(B**n):
        idx = [(combo // B**q) % B + 1 for q in range(n)]
        for out in range(2**n):
            proj = np.ones((1, 1), dtype=complex)
            for q in reversed(range(n)):
                proj = np.kron(proj, basis.projector(idx[q], (out >> q) & 1))
            acc += np.real(np.trace(proj @ R)) * np.real(np.trace(P @ proj)) / B**n
    exact = m ** (-len(observable)) * float(np.real(np.trace(P @ R)))
    return abs(acc - exact)


def brute_force_maxcut(g: Graph, block: int = 1 << 16) -> tuple[np.ndarray, float]:
    """Exact MAX-CUT by enumeration with the first node fixed to 0."""
    n = g.num_nodes
    if n > BRUTE_LIMIT:
        raise SizeError(f"brute force limited to {BRUTE_LIMIT} nodes, got {n}")
    if n <= 1:
        return np.zeros(n, dtype=np.int8), 0.0
    iu, iv, w = g.edge_arrays()
    total = 1 << (n - 1)
    best_w, best_x = -np.inf, 0
    shifts = np.arange(n - 1, dtype=np.int64)
    for start in range(0, total, block):
        x = np.arange(start, min(start + block, total), dtype=np.int64)
        bits = np.zeros((x.size, n), dtype=np.int8)
        bits[:, 1:] = (x[:, None] >> shifts) & 1
        vals = ((bits[:, iu] != bits[:, iv]) * w).sum(axis=1) if w.size else np.zeros(x.size)
        i = int(np.argmax(vals))
        if vals[i] > best_w + 1e-12:
            best_w, best_x = float(vals[i]), int(x[i])
    bits = np.zeros(n, dtype=np.int8)
    bits[1:] = (best_x >> shifts) & 1
    return bits, cut_weight(g, bits)


def qaoa1_state(g: Graph, beta: float, gamma: float) -> np.ndarray:
    """Dense ``exp(i beta sum X) exp(i gamma sum w Z Z) |+>^n``; node ``g.nodes[i]`` is qubit ``i``."""
    n = g.num_nodes
    if n > DENSE_LIMIT:
        raise SizeError(f"dense QAOA limited to {DENSE_LIMIT} qubits")
    idx = np.arange(2**n)
    s = 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)
    iu, iv, w = g.edge_arrays()
    C = (s[:, iu] * s[:, iv] * w).sum(axis=1) if w.size else np.zeros(2**n)
    v = np.exp(1j * gamma * C) / np.sqrt(2**n)
    mix = np.cos(beta) * np.eye(2) + 1j * np.sin(beta) * np.array([[0, 1], [1, 0]])
    for q in range(n):
        v = apply_local(v, n, q, mix)
    return v


def zz_dense(vec: np.ndarray, n: int, a: int, b: int) -> float:
    s = 1 - 2 * (((np.arange(2**n) >> a) & 1) ^ ((np.arange(2**n) >> b) & 1))
    return float(np.sum(s * np.abs(vec) ** 2))
