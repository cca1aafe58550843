from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = ["ensemble_energy", "ensemble_energies"]


def ensemble_energies(samples: np.ndarray, scale: float) -> np.ndarray:
    """Shrink the mean toward zero by ``scale`` population standard deviations.

    ``samples`` has one row per trial and one column per edge. A column whose
    mean lies within ``scale * sigma`` of zero gets exactly 0.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("need a (trials, edges) array with at least one trial")
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    shrink = np.minimum(scale * sd, np.abs(mu))
    out = mu - np.sign(mu) * shrink
    out[np.abs(mu) <= scale * sd] = 0.0
    return out


def ensemble_energy(samples: Sequence[float], scale: float) -> float:
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    return float(ensemble_energies(x.reshape(-1, 1), scale)[0])
