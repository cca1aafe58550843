# %% [markdown]
# # RQRAO against the baselines on 3-regular graphs
#
# Rank-two relaxation with rounding and local search is the reference; each
# cut is reported relative to it. Time is fitted to a power law in n.

# %%
import time

import numpy as np

from rqrao import generate, rank_two_solve, rqaoa_solve, rqrao_solve
from rqrao.cli import fit_exponent

rows = []
for n in (50, 100, 150):
    for i in range(2):
        g = generate({"kind": "3regular", "n": n, "weights": "pm1", "seed": 10 * n + i})
        ref = rank_two_solve(g, rng=i).weight
        for name, solve in (("rqrao", lambda: rqrao_solve(g, rng=i)), ("rqaoa", lambda: rqaoa_solve(g))):
            t0 = time.perf_counter()
            w = solve().weight
            rows.append((name, n, w / ref, time.perf_counter() - t0))
            print(f"{name:5s} n={n:3d} graph {i}: relative cut {w / ref:.3f}  {rows[-1][3]:.1f} s")

# %%
for name in ("rqrao", "rqaoa"):
    sel = [r for r in rows if r[0] == name]
    beta = fit_exponent([r[1] for r in sel], [r[3] for r in sel])
    print(f"{name}: mean relative cut {np.mean([r[2] for r in sel]):.3f}, time ~ n^{beta:.2f}")
