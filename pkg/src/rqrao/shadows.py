"""Random magic measurements and the classical-shadow estimator built on them.

Each qubit is measured in one of ``2**(m-1)`` bases whose two outcomes are
antipodal (m,1) magic states. An outcome decodes to one bit per active Pauli.
The resulting bit strings follow ``P(b) = tr(mu_m(b) rho) / 2**((m-1) n)``,
so ``m**(k/2) (-1)^(b_P1 + ... + b_Pk)`` is an unbiased estimate of the
k-local Pauli expectation.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from . import _dense
from .qrac import ACTIVE_PAULIS, PAULI, MagicState, magic_density
from .tensornet.mps import MPS

__all__ = [
    "MagicBasis",
    "ShadowBatch",
    "ShadowSnapshot",
    "estimate_pauli",
    "magic_basis",
    "magic_measure",
    "magic_measure_batch",
    "shot_values",
    "snapshot_dense",
    "snapshot_matrix",
    "write_csv",
]

# basis index (1-based) -> bits decoded from outcome 0 and outcome 1
_TABLES = {
    1: {1: ((0,), (1,))},
    2: {1: ((0, 0), (1, 1)), 2: ((0, 1), (1, 0))},
    3: {
        1: ((0, 0, 0), (1, 1, 1)),
        2: ((0, 1, 1), (1, 0, 0)),
        3: ((1, 0, 1), (0, 1, 0)),
        4: ((1, 1, 0), (0, 0, 1)),
    },
}


@dataclass(frozen=True, eq=False)
class MagicBasis:
    """Measurement bases for (m,1) magic measurements.

    ``unitaries[i - 1]`` maps ``|0>`` and ``|1>`` to the two magic states of
    basis ``i``; ``table[i - 1, o]`` is the decoded bit tuple for outcome ``o``.
    """

    m: int
    unitaries: np.ndarray  # (B, 2, 2)
    table: np.ndarray  # (B, 2, m) int8

    @property
    def num_bases(self) -> int:
        return self.unitaries.shape[0]

    def projector(self, i: int, outcome: int) -> np.ndarray:
        v = self.unitaries[i - 1][:, outcome]
        return np.outer(v, v.conj())

    def decode(self, i: int, outcome: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.table[i - 1, outcome])


def _published_unitaries() -> np.ndarray:
    s = np.pi / 8
    t = np.arccos(np.sqrt((1 + 1 / np.sqrt(3)) / 2))
    u1d = expm(-1j * t * PAULI["X"]) @ expm(-1j * s * PAULI["Z"])
    return np.array([(u1d @ P).conj().T for P in (PAULI["I"], PAULI["X"], PAULI["Y"], PAULI["Z"])])


def _eigen_unitary(m: int, plus: Sequence[int], minus: Sequence[int]) -> np.ndarray:
    cols = []
    for bits in (plus, minus):
        rho = magic_density(MagicState(m, np.array([bits], dtype=np.int8)), 0)
        w, v = np.linalg.eigh(rho)
        cols.append(v[:, np.argmax(w)])
    return np.stack(cols, axis=1)


@lru_cache(maxsize=None)
def magic_basis(m: int) -> MagicBasis:
    if m not in _TABLES:
        raise ValueError(f"m must be 1, 2 or 3, got {m}")
    tab = _TABLES[m]
    if m == 3:
        us = _published_unitaries()
    else:
        us = np.array([_eigen_unitary(m, *tab[i]) for i in sorted(tab)])
    table = np.array([tab[i] for i in sorted(tab)], dtype=np.int8)
    us.setflags(write=False)
    table.setflags(write=False)
    return MagicBasis(m, us, table)


@dataclass(frozen=True, eq=False)
class ShadowSnapshot:
    """One measurement record: basis index (1-based) and outcome per qubit."""

    m: int
    bases: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self):
        if self.bases.shape != self.outcomes.shape or self.bases.ndim != 1:
            raise ValueError("bases and outcomes must be 1-d arrays of equal length")

    @property
    def num_qubits(self) -> int:
        return self.bases.size

    @property
    def bits(self) -> np.ndarray:
        """Decoded bits, shape ``(n, m)`` in ``ACTIVE_PAULIS[m]`` order."""
        return magic_basis(self.m).table[self.bases - 1, self.outcomes]


@dataclass(frozen=True, eq=False)
class ShadowBatch:
    """Many snapshots restricted to ``qubits``: arrays of shape ``(shots, len(qubits))``."""

    m: int
    qubits: tuple[int, ...]
    bases: np.ndarray
    outcomes: np.ndarray

    @property
    def shots(self) -> int:
        return self.bases.shape[0]

    @property
    def bits(self) -> np.ndarray:
        return magic_basis(self.m).table[self.bases - 1, self.outcomes]

    def snapshots(self) -> list[ShadowSnapshot]:
        return [ShadowSnapshot(self.m, b, o) for b, o in zip(self.bases, self.outcomes)]


def _as_vector(state: MPS | np.ndarray) -> tuple[np.ndarray | None, MPS | None, int]:
    if isinstance(state, MPS):
        if state.n <= _dense.DENSE_LIMIT:
            return _dense.dense_from_mps(state, normalize=False), None, state.n
        return None, state, state.n
    v = np.asarray(state, dtype=complex).reshape(-1)
    n = int(round(np.log2(v.size)))
    if 2**n != v.size:
        raise ValueError("state vector length must be a power of two")
    return v, None, n


def _normalized(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    if not nrm > 0:
        raise ValueError("state has zero norm")
    if abs(nrm - 1) > 1e-10:
        warnings.warn("state is not normalized; normalizing before measurement", stacklevel=3)
        v = v / nrm
    return v


def _measure_dense(v: np.ndarray, n: int, basis: MagicBasis, bases: np.ndarray, rng) -> np.ndarray:
    for q in range(n):
        v = _dense.apply_local(v, n, q, basis.unitaries[bases[q] - 1].conj().T)
    p = np.abs(v) ** 2
    idx = rng.choice(p.size, p=p / p.sum())
    return ((idx >> np.arange(n)) & 1).astype(np.int8)


def _measure_mps(psi: MPS, basis: MagicBasis, bases: np.ndarray, rng) -> np.ndarray:
    n = psi.n
    # right norm environments, rescaled at every bond
    R = [None] * (n + 1)
    R[n] = np.ones((1, 1), dtype=complex)
    for i in range(n - 1, -1, -1):
        A = psi.tensors[i]
        r = np.einsum("asc,cd,bsd->ab", A.conj(), R[i + 1], A)
        R[i] = r / np.linalg.norm(r)
    out = np.zeros(n, dtype=np.int8)
    left = np.ones(1, dtype=complex)
    for i in range(n):
        T = np.einsum("a,asb->sb", left, psi.tensors[i])
        T = basis.unitaries[bases[i] - 1].conj().T @ T
        p = np.einsum("oc,cd,od->o", T.conj(), R[i + 1], T).real
        p = np.clip(p, 0, None)
        o = int(rng.random() * p.sum() >= p[0])
        out[i] = o
        left = T[o] / np.linalg.norm(T[o])
    return out


def magic_measure(state: MPS | np.ndarray, m: int, rng: np.random.Generator) -> tuple[ShadowSnapshot, np.ndarray]:
    """One random magic measurement of every qubit; returns the snapshot and its decoded bits."""
    basis = magic_basis(m)
    v, psi, n = _as_vector(state)
    bases = rng.integers(1, basis.num_bases + 1, size=n)
    if v is not None:
        outcomes = _measure_dense(_normalized(v), n, basis, bases, rng)
    else:
        outcomes = _measure_mps(psi, basis, bases, rng)
    snap = ShadowSnapshot(m, bases, outcomes)
    return snap, snap.bits


@lru_cache(maxsize=32)
def _rotations(m: int, k: int) -> np.ndarray:
    """``(B**k, 2**k, 2**k)`` products of basis adjoints; combo digit ``i`` belongs to qubit ``i``."""
    us = magic_basis(m).unitaries
    B = us.shape[0]
    out = []
    for combo in range(B**k):
        digits = [(combo // B**i) % B for i in range(k)]
        R = np.ones((1, 1), dtype=complex)
        for i in reversed(range(k)):
            R = np.kron(R, us[digits[i]].conj().T)
        out.append(R)
    return np.array(out)


def magic_measure_batch(
    state: MPS | np.ndarray,
    m: int,
    shots: int,
    rng: np.random.Generator,
    qubits: Sequence[int] | None = None,
) -> ShadowBatch:
    """Many measurements, keeping only the outcomes on ``qubits``.

    The outcomes on a subset depend only on its reduced density matrix, so
    they are sampled from that matrix directly, one table per basis choice.
    With ``qubits=None`` every qubit is measured shot by shot.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    basis = magic_basis(m)
    B = basis.num_bases
    if qubits is None:
        snaps = [magic_measure(state, m, rng)[0] for _ in range(shots)]
        n = snaps[0].num_qubits
        return ShadowBatch(
            m, tuple(range(n)), np.array([s.bases for s in snaps]), np.array([s.outcomes for s in snaps])
        )
    v, psi, n = _as_vector(state)
    if v is None:
        raise ValueError("subset sampling needs a state of at most 20 qubits")
    qs = tuple(int(q) for q in qubits)
    if any(not 0 <= q < n for q in qs) or len(set(qs)) != len(qs):
        raise ValueError(f"qubits must be distinct and lie in 0..{n - 1}")
    k = len(qs)
    if k > 8:
        raise ValueError("subset sampling supports at most 8 qubits")
    rho = _dense.reduced_density(_normalized(v), n, qs)
    rots = _rotations(m, k)
    probs = np.einsum("cij,jk,cik->ci", rots, rho, rots.conj()).real
    probs = np.clip(probs, 0, None)
    probs /= probs.sum(axis=1, keepdims=True)
    combo = rng.integers(0, B**k, size=shots)
    cdf = np.cumsum(probs, axis=1)[combo]
    u = rng.random(shots)[:, None]
    idx = np.minimum((u >= cdf).sum(axis=1), 2**k - 1)
    bases = np.stack([(combo // B**i) % B + 1 for i in range(k)], axis=1)
    outcomes = np.stack([(idx >> i) & 1 for i in range(k)], axis=1).astype(np.int8)
    return ShadowBatch(m, qs, bases, outcomes)


def snapshot_matrix(s: ShadowSnapshot) -> list[np.ndarray]:
    """Per-qubit factors ``m mu - (m - 1) I / 2`` of the snapshot; their tensor product is the estimate."""
    basis = magic_basis(s.m)
    return [s.m * basis.projector(i, o) - (s.m - 1) / 2 * np.eye(2) for i, o in zip(s.bases, s.outcomes)]


def snapshot_dense(s: ShadowSnapshot) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in reversed(snapshot_matrix(s)):
        out = np.kron(out, f)
    return out


def shot_values(batch: ShadowBatch, observable: Mapping[int, str]) -> np.ndarray:
    """Per-shot estimator ``m**(k/2) (-1)^(sum of decoded bits)``."""
    paulis = ACTIVE_PAULIS[batch.m]
    pos = {q: i for i, q in enumerate(batch.qubits)}
    bits = batch.bits
    parity = np.zeros(batch.shots, dtype=np.int64)
    for q, p in observable.items():
        if q not in pos:
            raise ValueError(f"observable touches qubit {q}, which was not measured")
        if p not in paulis:
            raise ValueError(f"Pauli {p} is not encoded by (m={batch.m},1) magic measurements")
        parity += bits[:, pos[q], paulis.index(p)]
    return batch.m ** (len(observable) / 2) * (1 - 2 * (parity & 1))


def estimate_pauli(
    snapshots: ShadowBatch | Iterable[ShadowSnapshot], observable: Mapping[int, str], clamp: bool = True
) -> float:
    """Mean of the per-shot estimator, optionally truncated to ``[-1, 1]``."""
    if not isinstance(snapshots, ShadowBatch):
        snaps = list(snapshots)
        if not snaps:
            raise ValueError("need at least one snapshot")
        n = snaps[0].num_qubits
        snapshots = ShadowBatch(
            snaps[0].m, tuple(range(n)), np.array([s.bases for s in snaps]), np.array([s.outcomes for s in snaps])
        )
    if snapshots.shots == 0:
        raise ValueError("need at least one snapshot")
    est = float(shot_values(snapshots, observable).mean())
    return float(np.clip(est, -1, 1)) if clamp else est


def write_csv(batch: ShadowBatch, fh: io.TextIOBase | None = None) -> str:
    """Rows ``shot,qubit,basis,outcome``; returns the text when no handle is given."""
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["shot", "qubit", "basis", "outcome"])
    for s in range(batch.shots):
        for i, q in enumerate(batch.qubits):
            w.writerow([s, q, int(batch.bases[s, i]), int(batch.outcomes[s, i])])
    return buf.getvalue() if fh is None else ""
