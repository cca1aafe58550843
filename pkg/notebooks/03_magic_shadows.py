# %% [markdown]
# # Random magic measurements as classical shadows
#
# Measuring every qubit in a random magic basis gives bit strings whose
# signed parities are unbiased estimates of Pauli expectations, scaled by
# m^(k/2). The single-shot variance is m^k.

# %%
import numpy as np

from rqrao import oracle
from rqrao.shadows import estimate_pauli, magic_basis, magic_measure_batch, shot_values

rng = np.random.default_rng(3)
v = oracle.random_state(10, rng)
obs = {2: "X", 7: "Y"}
exact = float(np.real(v.conj() @ oracle.pauli_dense(obs, 10) @ v))

for shots in (100, 1_000, 10_000, 100_000):
    batch = magic_measure_batch(v, 3, shots, rng, qubits=[2, 7])
    est = estimate_pauli(batch, obs, clamp=False)
    print(f"{shots:>7d} shots: estimate {est:+.4f}  exact {exact:+.4f}  error {abs(est - exact):.4f}"
          f"  3 sigma bound {3 * 3 / np.sqrt(shots):.4f}")

# %%
print("single-shot variance:", shot_values(magic_measure_batch(v, 3, 50_000, rng, qubits=[2, 7]), obs).var().round(3))
b = magic_basis(3)
for i in range(1, b.num_bases + 1):
    print(f"basis {i}: outcome 0 -> {b.decode(i, 0)}, outcome 1 -> {b.decode(i, 1)}")
