"""Small dense-state helpers shared by the oracle and the shadow sampler.

Qubit ``q`` is bit ``q`` of a basis index, so in a ``[2] * n`` reshape of a
state vector qubit ``q`` sits on axis ``n - 1 - q``. Kronecker products put
the highest qubit on the left.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .qrac import PAULI
from .tensornet.mps import MPS

DENSE_LIMIT = 20


class SizeError(ValueError):
    pass


def dense_from_mps(psi: MPS, normalize: bool = True) -> np.ndarray:
    """Full amplitude vector of an MPS (``n <= DENSE_LIMIT``)."""
    n = psi.n
    if n > DENSE_LIMIT:
        raise SizeError(f"dense conversion limited to {DENSE_LIMIT} qubits, got {n}")
    v = psi.tensors[0].reshape(2, -1)  # rows: b0
    for t in psi.tensors[1:]:
        v = np.einsum("xa,asb->sxb", v, t).reshape(-1, t.shape[2])  # new bit is most significant
    v = v.reshape(-1)
    if normalize:
        v = v / np.linalg.norm(v)
    return v


def apply_local(vec: np.ndarray, n: int, q: int, U: np.ndarray) -> np.ndarray:
    """``U`` acting on qubit ``q`` of an ``n``-qubit vector."""
    t = vec.reshape([2] * n)
    ax = n - 1 - q
    t = np.tensordot(U, t, axes=([1], [ax]))
    return np.moveaxis(t, 0, ax).reshape(-1)


def reduced_density(vec: np.ndarray, n: int, qubits: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``qubits``; ``qubits[i]`` is bit ``i`` of its index."""
    t = vec.reshape([2] * n)
    keep = [n - 1 - q for q in reversed(qubits)]
    rest = [a for a in range(n) if a not in keep]
    t = np.transpose(t, keep + rest).reshape(2 ** len(qubits), -1)
    return t @ t.conj().T


def pauli_dense(ops: Mapping[int, str], n: int) -> np.ndarray:
    """Dense Pauli string ``prod_q P_q`` on ``n`` qubits."""
    out = np.ones((1, 1), dtype=complex)
    for q in reversed(range(n)):
        out = np.kron(out, PAULI[ops.get(q, "I")])
    return out


def sum_dense(terms: Iterable[tuple[float, Mapping[int, str]]], n: int) -> np.ndarray:
    H = np.zeros((2**n, 2**n), dtype=complex)
    for c, ops in terms:
        H += c * pauli_dense(ops, n)
    return H


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like pure state: normalized complex Gaussian vector."""
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random mixed state of the given rank (full rank by default)."""
    r = 2**n if rank is None else rank
    G = rng.standard_normal((2**n, r)) + 1j * rng.standard_normal((2**n, r))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def as_density(state: np.ndarray) -> np.ndarray:
    s = np.asarray(state, dtype=complex)
    return np.outer(s, s.conj()) if s.ndim == 1 else s
