# %% [markdown]
# # Packing three nodes into one qubit
#
# An (m,1) quantum random access code stores m bits in one qubit by pointing
# its Bloch vector at a corner of a segment, square or cube. For MAX-CUT each
# node gets a slot (qubit, Pauli), with adjacent nodes on different qubits.

# %%
import numpy as np

from rqrao import assign_paulis, build_terms, cut_weight, rnd14
from rqrao.oracle import hamiltonian_dense
from rqrao.qrac import PAULI, MagicState, magic_density, magic_state_for

g = rnd14()
rng = np.random.default_rng(0)
for m in (1, 2, 3):
    a = assign_paulis(g, m, rng)
    print(f"m={m}: {g.num_nodes} nodes on {a.num_qubits} qubits")

# %% [markdown]
# A magic state has expectation +-1/sqrt(m) on each active Pauli.

# %%
rho = magic_density(MagicState(3, np.array([[0, 1, 1]])), 0)
for p in "XYZ":
    print(p, np.round(np.trace(PAULI[p] @ rho).real, 4))

# %% [markdown]
# On the product magic state of a bit string the relaxed Hamiltonian returns
# the cut weight exactly, so its maximum is at least the maximum cut.

# %%
a = assign_paulis(g, 3, rng)
H = hamiltonian_dense(build_terms(g, a))
bits = rng.integers(0, 2, g.num_nodes)
ms = magic_state_for(a, dict(zip(g.nodes, bits.tolist())))
state = np.ones((1, 1))
for q in reversed(range(a.num_qubits)):
    state = np.kron(state, magic_density(ms, q))
print("tr(H mu(b)) =", np.trace(H @ state).real, " CW(b) =", cut_weight(g, bits))
print("top eigenvalue of H:", np.linalg.eigvalsh(H)[-1].round(3), " max cut: 12")
