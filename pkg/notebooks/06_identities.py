# %% [markdown]
# # Which sampling identities hold
#
# The expected cut under random magic measurement is an affine function of
# the relaxed energy for every m. The cut variance is not a function of
# <H^2> and <H> once m > 1: two slot signs on the same qubit are
# uncorrelated for every state, while the operator product P_a P_b on that
# qubit is not zero. The exact variance follows from second moments instead.

# %%
import numpy as np

from rqrao import oracle
from rqrao.graph import Graph
from rqrao.qrac import PauliAssignment
from rqrao.verify import run_verify

g = Graph(range(2), [(0, 1, 1.0)])
a = PauliAssignment(3, 2, {0: (0, "Z"), 1: (1, "Z")})
v = np.zeros(4)
v[0] = 1.0
print("one edge, |00>, m=3")
print("  enumerated variance     ", oracle.cut_variance(v, g, a))
print("  (<H^2> - <H>^2) / m^4   ", oracle.cut_variance_formula(v, g, a))
print("  second-moment formula   ", oracle.cut_variance_moments(v, g, a))

# %%
a = PauliAssignment(3, 1, {0: (0, "X"), 1: (0, "Z")})
rho = oracle.random_density(1, np.random.default_rng(0))
print("same qubit P(b_j = b_k):", oracle.pair_probabilities(rho, a, 0, 1)[1],
      " published form:", oracle.pair_probability_formula(rho, a, 0, 1)[1])

# %%
ok, report = run_verify(instances=10)
for name, s in report["suites"].items():
    print(f"{name:26s} max gap {s['max_gap']:.2e}  {'gating' if s['gating'] else 'reported only'}")
