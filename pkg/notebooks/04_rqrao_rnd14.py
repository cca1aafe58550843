# %% [markdown]
# # Recursive QRAO on the 14-node benchmark
#
# Each round runs N independent relaxations, averages the edge energies with
# shrinkage, fixes the parities along a maximum spanning forest and shrinks
# the graph. With at most M nodes left the remainder is brute-forced.

# %%
import time

from rqrao import RqraoParams, brute_solve, qrao_solve, rnd14, rqrao_solve, tree_rounding_solve

g = rnd14()
print("exact optimum:", brute_solve(g).weight)

for seed in range(5):
    t0 = time.perf_counter()
    rep = rqrao_solve(g, rng=seed)
    print(f"seed {seed}: weight {rep.weight:g}  bits {''.join(map(str, rep.bits[::-1]))}"
          f"  rounds {len(rep.rounds)}  {time.perf_counter() - t0:.2f} s")

# %%
print(rep.telemetry_csv())

# %% [markdown]
# Single-shot relatives: Pauli rounding of one state and tree rounding (N=1).

# %%
print("qrao :", [qrao_solve(g, rng=s).weight for s in range(5)])
print("tree :", [tree_rounding_solve(g, rng=s).weight for s in range(5)])
print("N=5  :", [rqrao_solve(g, RqraoParams(ensemble=5), rng=s).weight for s in range(5)])
