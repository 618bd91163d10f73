# %% [markdown]
# # Heralding on mode B
#
# A vacuum click on B reweights each coherent atom by its vacuum probability.
# The conditional state computed in Fock space matches the one rebuilt from the
# reweighted P function.

# %%
import numpy as np

from nonclassical.criteria import Povm, conditional_state
from nonclassical.fock_core import coherent_ket, partial_trace, trace_distance
from nonclassical.phase_space import PointMixtureP, conditional_P, synthesize_state

d = 40
P = PointMixtureP([0.5, 0.5], [1.0, -1.0], [0.0, 2.0])
rho = synthesize_state(P, d)
vac = Povm.vacuum(d).elements[0]
cond, prob = conditional_state(rho, vac)
print("herald probability:", prob)


# %%
def response(z):
    k = coherent_ket(z, d).amps
    return float(np.real(k.conj() @ vac.mat @ k))


P_cond, q = conditional_P(P, response, mode=1)
print("reweighted atoms:", P_cond.atoms)
print("probabilities agree:", abs(prob - q))
print("trace distance:", trace_distance(cond, partial_trace(synthesize_state(P_cond, d), 0)))

# %% heralding on n photons, one outcome at a time
counts = Povm.photon_counting(12)
small = synthesize_state(P, 12)
for n in range(4):
    _, p = conditional_state(small, counts.elements[n])
    print(f"n={n}  p={p:.5f}")
