# %% [markdown]
# # Small admixtures of a displaced single photon
#
# Mixing a little of D(a)|1><1|D(a)^dagger into a classical state gives
# something arbitrarily close to classical yet nonclassical. Undoing the
# displacement exposes negative Mandel Q when the background sits at the same
# point.

# %%
import numpy as np

from nonclassical.criteria import (
    displaced_frame, mandel_q, mandel_q_witness, nowhere_dense_perturbation,
)
from nonclassical.fock_core import coherent_ket, thermal_state, trace_distance

d = 40
alpha = 1.0 + 0.5j
background = coherent_ket(alpha, d).projector()

for eps in (0.001, 0.01, 0.1):
    rho = nowhere_dense_perturbation(background, alpha, eps)
    q = mandel_q(displaced_frame(rho, alpha))
    print(f"eps={eps:<6} distance={trace_distance(rho, background):.4f}  Q in displaced frame={q:+.6f}")

# %% [markdown]
# A thermal background hides the admixture for small eps, so the Q test alone
# is not decisive there.

# %%
for eps in (0.01, 0.1, 0.5):
    rho = nowhere_dense_perturbation(thermal_state(0.5, d), 0.0, eps)
    r = mandel_q_witness(rho)
    print(f"eps={eps:<5} Q={r.value:+.4f}  {r.verdict}")

# %%
print("vacuum background, eps=0.05:", mandel_q(nowhere_dense_perturbation(coherent_ket(0, d).projector(), 0, 0.05)))
assert np.isclose(mandel_q(nowhere_dense_perturbation(coherent_ket(0, d).projector(), 0, 0.05)), -0.05)
