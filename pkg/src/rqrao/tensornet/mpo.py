"""Sum-of-Pauli-strings Hamiltonians as matrix-product operators.

Each term gets its own channel on the virtual bond, so interior tensors are
block diagonal: ``B[i][k, s, t, k] = P_{k,i}[s, t]`` and the coefficients sit
on site 0. Only the Pauli code per (term, site) is stored; ``coo`` and
``site_tensor`` materialize the tensors on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..qrac import PAULI, HamiltonianTerms

__all__ = ["MPO", "MPOError", "build_mpo", "CODES"]

CODES = {"I": 0, "X": 1, "Y": 2, "Z": 3}
_MATS = [PAULI[p] for p in "IXYZ"]


class MPOError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MPO:
    codes: np.ndarray  # (K, n) int8
    coeffs: np.ndarray  # (K,) float

    @property
    def n(self) -> int:
        return self.codes.shape[1]

    @property
    def K(self) -> int:
        return self.codes.shape[0]

    def bond_dims(self) -> list[int]:
        if self.n == 1:
            return [1, 1]
        return [1] + [self.K] * (self.n - 1) + [1]

    def coo(self, i: int) -> list[tuple[int, int, int, int, complex]]:
        """Nonzero entries ``(left, s, t, right, value)`` of site tensor ``i``."""
        out = []
        n = self.n
        for k in range(self.K):
            mat = _MATS[self.codes[k, i]]
            scale = self.coeffs[k] if i == 0 else 1.0
            left = 0 if i == 0 else k
            right = 0 if i == n - 1 else k
            for s in range(2):
                for t in range(2):
                    if mat[s, t] != 0:
                        out.append((left, s, t, right, complex(scale * mat[s, t])))
        return out

    def site_tensor(self, i: int) -> np.ndarray:
        dims = self.bond_dims()
        B = np.zeros((dims[i], 2, 2, dims[i + 1]), dtype=complex)
        for l, s, t, r, v in self.coo(i):
            B[l, s, t, r] += v
        return B

    def to_dense(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix (qubit ``q`` is bit ``q`` of the index)."""
        if self.n > 14:
            raise MPOError("dense MPO limited to 14 qubits")
        # contract left to right; M[row_bits..., col_bits..., bond]
        M = self.site_tensor(0)[0]  # (2, 2, K)
        for i in range(1, self.n):
            B = self.site_tensor(i)
            M = np.einsum("...k,kstr->...str", M, B)
        M = M[..., 0]
        # axes: s0, t0, s1, t1, ...; reorder so higher qubits are more significant
        n = self.n
        rows = [2 * q for q in reversed(range(n))]
        cols = [2 * q + 1 for q in reversed(range(n))]
        return M.transpose(rows + cols).reshape(2**n, 2**n)

    def kernel_terms(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, float]:
        """``(first, last, codes, coeffs, constant)`` for the compiled kernels."""
        nz = self.codes != 0
        has = nz.any(axis=1)
        constant = float(self.coeffs[~has].sum())
        codes = np.ascontiguousarray(self.codes[has], dtype=np.int64)
        nzh = nz[has]
        first = np.argmax(nzh, axis=1).astype(np.int64)
        last = (self.n - 1 - np.argmax(nzh[:, ::-1], axis=1)).astype(np.int64)
        return first, last, codes, np.ascontiguousarray(self.coeffs[has], dtype=float), constant


def _as_pauli_terms(terms) -> list[tuple[float, Mapping[int, str]]]:
    if isinstance(terms, HamiltonianTerms):
        return terms.pauli_terms()
    return [(float(c), ops) for c, ops in terms]


def build_mpo(terms: HamiltonianTerms | Iterable[tuple[float, Mapping[int, str]]], n: int) -> MPO:
    """MPO of ``sum_k c_k prod_q P_{k,q}`` on ``n`` qubits."""
    items = _as_pauli_terms(terms)
    if n < 1:
        raise MPOError("need at least one qubit")
    codes = np.zeros((len(items), n), dtype=np.int8)
    coeffs = np.zeros(len(items))
    for k, (c, ops) in enumerate(items):
        coeffs[k] = c
        for q, p in ops.items():
            if not 0 <= q < n:
                raise MPOError(f"term {k} acts on qubit {q}, outside 0..{n - 1}")
            if p not in CODES:
                raise MPOError(f"unknown Pauli {p!r}")
            codes[k, q] = CODES[p]
    return MPO(codes, coeffs)
