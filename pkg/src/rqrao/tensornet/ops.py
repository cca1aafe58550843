from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from ..qrac import PauliAssignment
from . import _kernels
from .mpo import CODES, MPO
from .mps import MPS

__all__ = ["edge_energies", "expectation", "gradient", "pauli_expectations", "site_expectations", "value_and_grad"]

_IMAG_TOL = 1e-9


class DimensionError(ValueError):
    pass


def _check(psi: MPS, h: MPO) -> None:
    if psi.n != h.n:
        raise DimensionError(f"MPS has {psi.n} sites, MPO has {h.n}")


def value_and_grad(psi: MPS, h: MPO) -> tuple[float, np.ndarray]:
    """Quotient value and its derivative with respect to ``conj`` of the flat tensors."""
    _check(psi, h)
    off, dl, dr, D = psi.layout()
    first, last, codes, coeffs, const = h.kernel_terms()
    val, g = _kernels.value_and_grad(psi.flat(), off, dl, dr, D, first, last, codes, coeffs, const)
    return float(val), g


def expectation(psi: MPS, h: MPO) -> float:
    """``<psi|H|psi> / <psi|psi>``."""
    _check(psi, h)
    off, dl, dr, D = psi.layout()
    first, last, codes, coeffs, const = h.kernel_terms()
    vals = _kernels.term_values(psi.flat(), off, dl, dr, D, first, last, codes)
    total = complex(np.dot(coeffs, vals)) + const
    if abs(total.imag) > _IMAG_TOL * max(1.0, abs(total.real)):
        raise ArithmeticError(f"expectation has imaginary part {total.imag:.3e}")
    return float(total.real)


def gradient(psi: MPS, h: MPO) -> list[np.ndarray]:
    """Gradient of the quotient per tensor as ``d/dRe + 1j * d/dIm``."""
    _, g = value_and_grad(psi, h)
    g = 2 * g
    off = np.cumsum([0] + [t.size for t in psi.tensors])
    return [g[off[i] : off[i + 1]].reshape(t.shape) for i, t in enumerate(psi.tensors)]


def pauli_expectations(psi: MPS, strings: Sequence[Mapping[int, str]]) -> np.ndarray:
    """Normalized expectations of many Pauli strings in one batched pass."""
    codes = np.zeros((len(strings), psi.n), dtype=np.int64)
    for k, ops in enumerate(strings):
        for q, p in ops.items():
            if not 0 <= q < psi.n:
                raise DimensionError(f"qubit {q} outside 0..{psi.n - 1}")
            codes[k, q] = CODES[p]
    nz = codes != 0
    first = np.where(nz.any(axis=1), np.argmax(nz, axis=1), psi.n).astype(np.int64)
    last = np.where(nz.any(axis=1), psi.n - 1 - np.argmax(nz[:, ::-1], axis=1), 0).astype(np.int64)
    off, dl, dr, D = psi.layout()
    vals = _kernels.term_values(psi.flat(), off, dl, dr, D, first, last, codes)
    if vals.size and np.max(np.abs(vals.imag)) > _IMAG_TOL:
        raise ArithmeticError("Pauli expectation with imaginary part above tolerance")
    re = vals.real
    over = np.max(np.abs(re)) - 1 if re.size else 0.0
    if over > _IMAG_TOL:
        raise ArithmeticError(f"Pauli expectation exceeds 1 by {over:.3e}")
    return np.clip(re, -1.0, 1.0)


def edge_energies(psi: MPS, a: PauliAssignment, edges: Sequence[tuple[int, int]] | Sequence[tuple[int, int, float]]) -> np.ndarray:
    """``<P_<j> P_<k>>`` for each edge ``(j, k, ...)``."""
    strings = []
    for e in edges:
        j, k = e[0], e[1]
        if j not in a.slots or k not in a.slots:
            raise KeyError(f"edge ({j}, {k}) references an unassigned node")
        (qj, pj), (qk, pk) = a.slots[j], a.slots[k]
        strings.append({qj: pj, qk: pk})
    return pauli_expectations(psi, strings)


def site_expectations(psi: MPS, a: PauliAssignment) -> dict[int, float]:
    nodes = a.nodes
    vals = pauli_expectations(psi, [{a.slots[u][0]: a.slots[u][1]} for u in nodes])
    return dict(zip(nodes, vals.tolist()))
