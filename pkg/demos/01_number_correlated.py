# %% [markdown]
# # A classically correlated state that no coherent mixture can produce
#
# Two modes share a geometric photon-number distribution with perfectly
# correlated counts. The state is diagonal in the product Fock basis, so it is
# classical-classical. Its number difference never fluctuates, which is below
# the floor any mixture of coherent states must respect.

# %%
import numpy as np

from nonclassical.cc_states import geometric_distribution, number_correlated
from nonclassical.criteria import number_difference, total_number, variance_witness
from nonclassical.fock_core import expectation, variance

d = 30
p_n = geometric_distribution(0.5, d)
rho = number_correlated(p_n, d)
print("trace:", rho.trace())

# %%
var_d = variance(rho, number_difference(rho.dims))
mean_n = expectation(rho, total_number(rho.dims)).real
print(f"Var(n_a - n_b) = {var_d:.3e}")
print(f"<n_a + n_b>    = {mean_n:.6f}")

# %% [markdown]
# The witness is the gap between the two. A negative value rules out any
# P-classical description.

# %%
report = variance_witness(rho)
print(report.name, report.value, report.verdict)

# %% the witness scales with the mean photon number of the shared distribution
for ratio in (0.1, 0.3, 0.5, 0.7):
    r = variance_witness(number_correlated(geometric_distribution(ratio, 60), 60))
    print(f"ratio={ratio:.1f}  witness={r.value:+.4f}  analytic={-2 * ratio / (1 - ratio):+.4f}")

# %%
print("max |witness - analytic| at ratio 0.5:", abs(report.value + 2.0))
assert np.isclose(report.value, -2.0, atol=1e-6)
