"""Matrix-product states with open boundaries.

``tensors[i]`` has shape ``(left, 2, right)`` and belongs to qubit ``i``. The
amplitude of basis state ``b`` (qubit ``q`` is bit ``q`` of the index) is
``A0[:, b0, :] @ A1[:, b1, :] @ ... @ A_{n-1}[:, b_{n-1}, :]``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["MPS", "MPSError", "bond_dims", "init_mps", "load_mps", "product_mps", "save_mps"]

_DUMP_VERSION = 1


class MPSError(ValueError):
    pass


def bond_dims(n: int, chi: int) -> list[int]:
    """Largest useful bond dimensions ``min(2**b, 2**(n-b), chi)`` for bonds ``0..n``."""
    return [min(2**min(b, 62), 2**min(n - b, 62), chi) for b in range(n + 1)]


@dataclass(frozen=True, eq=False)
class MPS:
    tensors: tuple[np.ndarray, ...]
    chi: int

    def __init__(self, tensors: Sequence[np.ndarray], chi: int | None = None):
        ts = tuple(np.asarray(t, dtype=complex) for t in tensors)
        if not ts:
            raise MPSError("an MPS needs at least one site")
        n = len(ts)
        dims = [ts[0].shape[0]] + [t.shape[2] for t in ts]
        chi = max(dims) if chi is None else int(chi)
        cap = bond_dims(n, chi)
        for i, t in enumerate(ts):
            if t.ndim != 3 or t.shape[1] != 2:
                raise MPSError(f"site {i}: expected shape (left, 2, right), got {t.shape}")
            if i and ts[i - 1].shape[2] != t.shape[0]:
                raise MPSError(f"bond {i}: {ts[i - 1].shape[2]} != {t.shape[0]}")
        if dims[0] != 1 or dims[-1] != 1:
            raise MPSError("boundary bonds must have dimension 1")
        for b, (d, c) in enumerate(zip(dims, cap)):
            if d > c:
                raise MPSError(f"bond {b} has dimension {d} > {c}")
        object.__setattr__(self, "tensors", ts)
        object.__setattr__(self, "chi", chi)

    @property
    def n(self) -> int:
        return len(self.tensors)

    @property
    def bonds(self) -> list[int]:
        return [self.tensors[0].shape[0]] + [t.shape[2] for t in self.tensors]

    # flat packing used by the kernels and the optimizer
    def layout(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
        dl = np.array([t.shape[0] for t in self.tensors], dtype=np.int64)
        dr = np.array([t.shape[2] for t in self.tensors], dtype=np.int64)
        off = np.zeros(self.n + 1, dtype=np.int64)
        off[1:] = np.cumsum(dl * 2 * dr)
        return off, dl, dr, int(max(dl.max(), dr.max()))

    def flat(self) -> np.ndarray:
        return np.concatenate([t.ravel() for t in self.tensors])

    def with_flat(self, z: np.ndarray) -> "MPS":
        off = np.cumsum([0] + [t.size for t in self.tensors])
        ts = [z[off[i] : off[i + 1]].reshape(t.shape).copy() for i, t in enumerate(self.tensors)]
        return MPS(ts, self.chi)

    def norm_squared(self) -> float:
        env = np.ones((1, 1), dtype=complex)
        for t in self.tensors:
            env = np.einsum("ab,asc,bsd->cd", env, t.conj(), t)
        return float(env[0, 0].real)

    def normalized(self) -> "MPS":
        """Same state with ``<psi|psi> = 1``, the factor spread evenly over sites."""
        nrm = self.norm_squared()
        if not nrm > 0:
            raise MPSError("state has zero norm")
        f = nrm ** (-0.5 / self.n)
        return MPS([t * f for t in self.tensors], self.chi)

    def scaled_site(self, i: int, factor: complex) -> "MPS":
        ts = list(self.tensors)
        ts[i] = ts[i] * factor
        return MPS(ts, self.chi)


def init_mps(n: int, chi: int, rng: np.random.Generator) -> MPS:
    """Random complex Gaussian MPS with maximal bonds, normalized to one."""
    if n < 1 or chi < 1:
        raise MPSError("need n >= 1 and chi >= 1")
    dims = bond_dims(n, chi)
    ts = []
    for i in range(n):
        shape = (dims[i], 2, dims[i + 1])
        t = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        ts.append(t / np.sqrt(2 * dims[i]))
    return MPS(ts, chi).normalized()


def product_mps(vectors: Sequence[np.ndarray], chi: int = 1) -> MPS:
    """Bond-dimension-one MPS from single-qubit state vectors."""
    return MPS([np.asarray(v, dtype=complex).reshape(1, 2, 1) for v in vectors], chi)


def save_mps(psi: MPS) -> bytes:
    """Binary dump (npz) with a version tag; for debugging only."""
    buf = io.BytesIO()
    arrays = {f"t{i}": t for i, t in enumerate(psi.tensors)}
    np.savez(buf, version=_DUMP_VERSION, chi=psi.chi, n=psi.n, **arrays)
    return buf.getvalue()


def load_mps(data: bytes) -> MPS:
    with np.load(io.BytesIO(data)) as f:
        if int(f["version"]) != _DUMP_VERSION:
            raise MPSError(f"unsupported dump version {int(f['version'])}")
        n = int(f["n"])
        return MPS([f[f"t{i}"] for i in range(n)], int(f["chi"]))
