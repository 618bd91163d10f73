"""Phase-space versus classical-classical notions of classicality for two bosonic modes.

Truncated-Fock-space constructions of mixtures of coherent states and of
classical-classical states, plus witnesses that tell the two families apart.
"""
__version__ = "0.1.0"

from .fock_core import (  # noqa: E402
    DensityMatrix, Ket, Operator, TruncationWarning, annihilation, coherent_ket, commutator,
    creation, displacement_operator, expectation, fock_ket, identity, number_op, partial_trace,
    suggest_cutoff, tensor, thermal_state, trace_distance, validate_density, variance,
)
from .phase_space import (  # noqa: E402
    GaussianP, PointMixtureP, conditional_P, p_moments, predicted_variance_floor, sample,
    synthesize_state,
)
from .cc_states import (  # noqa: E402
    JointDistribution, LocalBasis, cc_state, geometric_distribution, is_cc_in_bases,
    number_correlated,
)
from .criteria import (  # noqa: E402
    Povm, WitnessReport, cc_commutator_witness, commutator_matrix, conditional_state,
    mandel_q, mandel_q_witness, nowhere_dense_perturbation, perturb_mode_a, variance_witness,
)

__all__ = [
    "DensityMatrix", "Ket", "Operator", "TruncationWarning", "annihilation", "coherent_ket",
    "commutator", "creation", "displacement_operator", "expectation", "fock_ket", "identity",
    "number_op", "partial_trace", "suggest_cutoff", "tensor", "thermal_state", "trace_distance",
    "validate_density", "variance",
    "GaussianP", "PointMixtureP", "conditional_P", "p_moments", "predicted_variance_floor",
    "sample", "synthesize_state",
    "JointDistribution", "LocalBasis", "cc_state", "geometric_distribution", "is_cc_in_bases",
    "number_correlated",
    "Povm", "WitnessReport", "cc_commutator_witness", "commutator_matrix", "conditional_state",
    "mandel_q", "mandel_q_witness", "nowhere_dense_perturbation", "perturb_mode_a",
    "variance_witness",
]
