# %% [markdown]
# # Classical-classical states and the commutator test
#
# Conditioning mode B on the vacuum leaves mode A in an unnormalised state.
# For a classical-classical state this commutes with the reduced state of A.
# Mixtures of non-orthogonal coherent states generally fail the test.

# %%
import numpy as np

from nonclassical.cc_states import JointDistribution, LocalBasis, cc_state
from nonclassical.criteria import Povm, cc_commutator_witness, commutator_matrix
from nonclassical.phase_space import PointMixtureP, synthesize_state
from nonclassical.sweeps import random_local_basis

d = 40
two_atom = PointMixtureP([0.5, 0.5], [1.0, -1.0], [0.0, 2.0])
rho = synthesize_state(two_atom, d)
r = cc_commutator_witness(rho)
print(r.name, r.value, r.verdict)

# %% closed form for this pair of atoms
e = np.exp
closed = 0.25 * (1 - e(-4)) * e(-2) * np.sqrt(2 - 2 * e(-4))
print("closed form:", closed, " difference:", abs(r.value - closed))

# %% [markdown]
# A CC state in rotated local bases passes, whatever the rotation.

# %%
rng = np.random.default_rng(5)
F = JointDistribution(rng.dirichlet(np.ones(16)).reshape(4, 4))
ua, ub = random_local_basis(rng, 6), random_local_basis(rng, 6)
sigma = cc_state(F, ua, ub)
print("CC in random bases:", cc_commutator_witness(sigma).value)
print("CC in Fock bases:  ", cc_commutator_witness(cc_state(F, LocalBasis.fock(6), LocalBasis.fock(6))).value)

# %% pairwise commutators over photon-counting outcomes on B
C = commutator_matrix(synthesize_state(two_atom, 20), Povm.photon_counting(20))
np.set_printoptions(precision=4, suppress=True)
print(C[:4, :4])
