# %% [markdown]
# # Optimizing the relaxation on a matrix product state
#
# The relaxed Hamiltonian is built as an MPO and maximized over a bond
# dimension 2 MPS with L-BFGS. Edge energies <P_j P_k> then predict the
# parity of each edge.

# %%
import numpy as np

from rqrao import assign_paulis, build_terms, cut_weight, rnd14
from rqrao.datasets import rnd14_optimum_bits
from rqrao.tensornet import build_mpo, edge_energies, init_mps, optimize

g = rnd14()
rng = np.random.default_rng(1)
a = assign_paulis(g, 3, rng)
h = build_mpo(build_terms(g, a), a.num_qubits)
res = optimize(init_mps(a.num_qubits, 2, rng), h)
print(f"objective {res.initial_value:.3f} -> {res.value:.3f} in {res.n_iter} iterations ({res.message})")

# %% [markdown]
# Compare the sign of each edge energy with the parity in the optimal cut:
# positive energy predicts equal bits.

# %%
opt = rnd14_optimum_bits()
e = edge_energies(res.state, a, g.edges)
agree = sum((x > 0) == (opt[u] == opt[v]) for (u, v, _), x in zip(g.edges, e))
print(f"{agree}/{g.num_edges} edge signs agree with the optimum (cut {cut_weight(g, opt):g})")
order = np.argsort(-np.abs(e))[:8]
for i in order:
    u, v, w = g.edges[i]
    print(f"  edge ({u:2d},{v:2d}) w={w:+.0f}  E={e[i]:+.3f}  optimal parity {'+' if opt[u] == opt[v] else '-'}")
