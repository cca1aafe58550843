"""L-BFGS with a strong-Wolfe line search, and MPS energy maximization on top of it.

The stopping rules follow the usual deep-learning-library semantics: stop when
the objective changes by less than ``tolerance_change`` between iterations,
when the step ``t * d`` is smaller than ``tolerance_change`` in max-norm, when
the gradient max-norm drops below ``tolerance_grad``, or on the iteration cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .mpo import MPO
from .mps import MPS
from .ops import DimensionError

__all__ = ["OptimizerConfig", "OptimizeResult", "lbfgs", "optimize"]


@dataclass(frozen=True)
class OptimizerConfig:
    tolerance_change: float = 1e-2
    tolerance_grad: float = 1e-7
    max_iter: int = 500
    max_eval: int | None = None
    history_size: int = 10
    c1: float = 1e-4
    c2: float = 0.9
    max_ls: int = 25

    def __post_init__(self):
        if self.tolerance_change <= 0 or self.tolerance_grad <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.c1 < self.c2 < 1:
            raise ValueError("need 0 < c1 < c2 < 1")
        if self.max_iter < 1 or self.history_size < 1:
            raise ValueError("max_iter and history_size must be >= 1")


@dataclass
class LBFGSResult:
    x: np.ndarray
    fun: float
    n_iter: int
    n_eval: int
    history: list[float]
    line_search_failed: bool = False
    message: str = ""


def _cubic_min(x1, f1, g1, x2, f2, g2, bounds=None):
    lo, hi = bounds if bounds is not None else (min(x1, x2), max(x1, x2))
    d1 = g1 + g2 - 3 * (f1 - f2) / (x1 - x2)
    d2_sq = d1 * d1 - g1 * g2
    if d2_sq >= 0:
        d2 = np.sqrt(d2_sq)
        if x1 <= x2:
            pos = x2 - (x2 - x1) * ((g2 + d2 - d1) / (g2 - g1 + 2 * d2))
        else:
            pos = x1 - (x1 - x2) * ((g1 + d2 - d1) / (g1 - g2 + 2 * d2))
        return min(max(pos, lo), hi)
    return (lo + hi) / 2


def _strong_wolfe(fun, x, t, d, f, g, gtd, c1, c2, tol, max_ls):
    d_norm = np.max(np.abs(d))
    f_new, g_new = fun(x + t * d)
    evals = 1
    gtd_new = float(g_new @ d)
    t_prev, f_prev, g_prev, gtd_prev = 0.0, f, g, gtd
    done = False
    it = 0
    bracket = bracket_f = bracket_g = bracket_gtd = None
    while it < max_ls:
        if f_new > f + c1 * t * gtd or (it > 1 and f_new >= f_prev):
            bracket, bracket_f = [t_prev, t], [f_prev, f_new]
            bracket_g, bracket_gtd = [g_prev, g_new], [gtd_prev, gtd_new]
            break
        if abs(gtd_new) <= -c2 * gtd:
            bracket, bracket_f, bracket_g, bracket_gtd = [t], [f_new], [g_new], [gtd_new]
            done = True
            break
        if gtd_new >= 0:
            bracket, bracket_f = [t_prev, t], [f_prev, f_new]
            bracket_g, bracket_gtd = [g_prev, g_new], [gtd_prev, gtd_new]
            break
        lo, hi = t + 0.01 * (t - t_prev), t * 10
        t_old = t
        t = _cubic_min(t_prev, f_prev, gtd_prev, t, f_new, gtd_new, bounds=(lo, hi))
        t_prev, f_prev, g_prev, gtd_prev = t_old, f_new, g_new, gtd_new
        f_new, g_new = fun(x + t * d)
        evals += 1
        gtd_new = float(g_new @ d)
        it += 1
    if it == max_ls:
        bracket, bracket_f, bracket_g = [0.0, t], [f, f_new], [g, g_new]
        bracket_gtd = [gtd, gtd_new]

    insuf = False
    low, high = (0, 1) if bracket_f[0] <= bracket_f[-1] else (1, 0)
    while not done and it < max_ls:
        if abs(bracket[1] - bracket[0]) * d_norm < tol:
            break
        t = _cubic_min(bracket[0], bracket_f[0], bracket_gtd[0], bracket[1], bracket_f[1], bracket_gtd[1])
        bmax, bmin = max(bracket), min(bracket)
        eps = 0.1 * (bmax - bmin)
        if min(bmax - t, t - bmin) < eps:
            if insuf or t >= bmax or t <= bmin:
                t = bmax - eps if abs(t - bmax) < abs(t - bmin) else bmin + eps
                insuf = False
            else:
                insuf = True
        else:
            insuf = False
        f_new, g_new = fun(x + t * d)
        evals += 1
        gtd_new = float(g_new @ d)
        it += 1
        if f_new > f + c1 * t * gtd or f_new >= bracket_f[low]:
            bracket[high], bracket_f[high], bracket_g[high], bracket_gtd[high] = t, f_new, g_new, gtd_new
            low, high = (0, 1) if bracket_f[0] <= bracket_f[1] else (1, 0)
        else:
            if abs(gtd_new) <= -c2 * gtd:
                done = True
            elif gtd_new * (bracket[high] - bracket[low]) >= 0:
                bracket[high], bracket_f[high] = bracket[low], bracket_f[low]
                bracket_g[high], bracket_gtd[high] = bracket_g[low], bracket_gtd[low]
            bracket[low], bracket_f[low], bracket_g[low], bracket_gtd[low] = t, f_new, g_new, gtd_new
    if len(bracket) == 1:
        low = 0
    return bracket_f[low], bracket_g[low], bracket[low], evals, done


def lbfgs(fun: Callable[[np.ndarray], tuple[float, np.ndarray]], x0: np.ndarray, cfg: OptimizerConfig) -> LBFGSResult:
    """Minimize ``fun`` (returning value and gradient) from ``x0``."""
    max_eval = cfg.max_eval if cfg.max_eval is not None else int(cfg.max_iter * 1.25)
    tol = cfg.tolerance_change
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    evals = 1
    history = [f]
    if np.max(np.abs(g)) <= cfg.tolerance_grad:
        return LBFGSResult(x, f, 0, evals, history, message="gradient below tolerance")
    dirs: list[np.ndarray] = []
    steps: list[np.ndarray] = []
    rho: list[float] = []
    h_diag = 1.0
    d = -g
    t = 0.0
    prev_g = g
    failed = False
    message = "max_iter reached"
    n_iter = 0
    while n_iter < cfg.max_iter:
        n_iter += 1
        if n_iter > 1:
            y = g - prev_g
            s = d * t
            ys = float(y @ s)
            if ys > 1e-10:
                if len(dirs) == cfg.history_size:
                    dirs.pop(0)
                    steps.pop(0)
                    rho.pop(0)
                dirs.append(y)
                steps.append(s)
                rho.append(1.0 / ys)
                h_diag = ys / float(y @ y)
            q = -g
            al = [0.0] * len(dirs)
            for i in range(len(dirs) - 1, -1, -1):
                al[i] = float(steps[i] @ q) * rho[i]
                q = q - al[i] * dirs[i]
            r = q * h_diag
            for i in range(len(dirs)):
                be = float(dirs[i] @ r) * rho[i]
                r = r + steps[i] * (al[i] - be)
            d = r
        prev_g, prev_f = g, f
        t = min(1.0, 1.0 / np.sum(np.abs(g))) if n_iter == 1 else 1.0
        gtd = float(g @ d)
        if gtd > -tol:
            message = "directional derivative below tolerance"
            break
        f_new, g_new, t, ls_evals, ok = _strong_wolfe(fun, x, t, d, f, g, gtd, cfg.c1, cfg.c2, tol, cfg.max_ls)
        evals += ls_evals
        if f_new > f:
            failed = True
            message = "line search found no decrease"
            break
        if not ok:
            failed = True
        x = x + t * d
        f, g = f_new, g_new
        history.append(f)
        if evals >= max_eval:
            message = "max_eval reached"
            break
        if np.max(np.abs(g)) <= cfg.tolerance_grad:
            message = "gradient below tolerance"
            break
        if np.max(np.abs(d * t)) <= tol:
            message = "parameter change below tolerance"
            break
        if abs(f - prev_f) < tol:
            message = "objective change below tolerance"
            break
    return LBFGSResult(x, f, n_iter, evals, history, failed, message)


@dataclass
class OptimizeResult:
    state: MPS
    value: float
    initial_value: float
    n_iter: int
    n_eval: int
    history: list[float] = field(default_factory=list)
    line_search_failed: bool = False
    message: str = ""


def optimize(psi: MPS, h: MPO, cfg: OptimizerConfig | None = None) -> OptimizeResult:
    """Maximize ``<psi|H|psi>/<psi|psi>`` over all tensor entries."""
    cfg = cfg or OptimizerConfig()
    if psi.n != h.n:
        raise DimensionError(f"MPS has {psi.n} sites, MPO has {h.n}")
    off, dl, dr, D = psi.layout()
    first, last, codes, coeffs, const = h.kernel_terms()
    P = int(off[-1])

    def fun(x):
        z = x[:P] + 1j * x[P:]
        val, gz = _kernels.value_and_grad(z, off, dl, dr, D, first, last, codes, coeffs, const)
        return -val, np.concatenate([-2 * gz.real, -2 * gz.imag])

    z0 = psi.flat()
    res = lbfgs(fun, np.concatenate([z0.real, z0.imag]), cfg)
    state = psi.with_flat(res.x[:P] + 1j * res.x[P:]).normalized()
    return OptimizeResult(
        state,
        -res.fun,
        -res.history[0],
        res.n_iter,
        res.n_eval,
        [-v for v in res.history],
        res.line_search_failed,
        res.message,
    )
