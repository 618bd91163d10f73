"""Randomized soundness and separation sweeps over both families of states.

Each sweep draws ``n`` independent cases from per-draw seeds spawned off a
master seed, so single draws can be replayed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .cc_states import JointDistribution, LocalBasis, cc_state, number_correlated
from .criteria import (
    NONCLASSICAL, Povm, cc_commutator_witness, commutator_matrix, mandel_q_witness,
    variance_witness,
)
from .fock_core import Operator, partial_trace
from .phase_space import GaussianP, PointMixtureP, synthesize_state

__all__ = [
    "SweepResult", "random_point_mixture", "random_gaussian_p", "random_joint_distribution",
    "random_local_basis", "random_povm", "p_soundness_sweep", "cc_soundness_sweep",
    "p_to_c_separation_sweep", "c_to_p_separation_sweep",
]


@dataclass
class SweepResult:
    name: str
    draws: int
    passed: int
    worst: float
    values: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"name": self.name, "draws": self.draws, "passed": self.passed, "worst": self.worst}


def _rngs(seed, n):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def _disk(rng, radius, size=None):
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


def random_point_mixture(rng, n_atoms: int, radius: float = 1.5) -> PointMixtureP:
    w = rng.dirichlet(np.ones(n_atoms))
    return PointMixtureP(w / w.sum(), _disk(rng, radius, n_atoms), _disk(rng, radius, n_atoms))


def random_gaussian_p(rng, radius: float = 1.0, max_var: float = 0.4) -> GaussianP:
    m = rng.normal(size=(4, 4))
    cov = m @ m.T
    cov *= max_var / np.linalg.eigvalsh(cov)[-1]
    return GaussianP((_disk(rng, radius), _disk(rng, radius)), 0.5 * (cov + cov.T))


def random_joint_distribution(rng, max_shape: int = 8) -> JointDistribution:
    k, s = rng.integers(1, max_shape + 1, size=2)
    p = rng.dirichlet(np.ones(k * s)).reshape(k, s)
    return JointDistribution(p / p.sum())


def random_local_basis(rng, d: int) -> LocalBasis:
    return LocalBasis(unitary_group.rvs(d, random_state=rng))


def random_povm(rng, d: int, n_outcomes: int = 3) -> Povm:
    gs = []
    for _ in range(n_outcomes):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        gs.append(g @ g.conj().T)
    w, v = np.linalg.eigh(sum(gs))
    s_inv = (v / np.sqrt(w)) @ v.conj().T
    elems = []
    for g in gs:
        e = s_inv @ g @ s_inv
        elems.append(Operator(0.5 * (e + e.conj().T), (d,), True))
    # absorb rounding so the elements sum to the identity
    fix = np.eye(d) - sum(e.mat for e in elems)
    elems[-1] = Operator(elems[-1].mat + fix, (d,), True)
    return Povm(tuple(elems))


def p_soundness_sweep(n: int = 100, seed=0, cutoff: int = 12, samples: int = 2000) -> SweepResult:
    """Variance and marginal Mandel-Q witnesses never flag P-classical inputs.

    Even draws are Gaussian P (Monte Carlo), odd draws point mixtures (exact).
    """
    passed, worst, vals = 0, np.inf, []
    for i, rng in enumerate(_rngs(seed, n)):
        if i % 2 == 0:
            P = random_gaussian_p(rng)
            rho = synthesize_state(P, cutoff, "monte_carlo", n=samples, seed=rng.integers(2**63))
        else:
            P = random_point_mixture(rng, int(rng.integers(1, 6)), radius=1.2)
            rho = synthesize_state(P, cutoff)
        reports = [variance_witness(rho), mandel_q_witness(partial_trace(rho, 0)),
                   mandel_q_witness(partial_trace(rho, 1))]
        ok = all(r.verdict != NONCLASSICAL for r in reports)
        margin = min(r.value + r.diagnostics["tolerance"] for r in reports if r.value == r.value)
        passed += int(ok)
        worst = min(worst, margin)
        vals.append(reports[0].value)
    return SweepResult("p_soundness", n, passed, float(worst), vals)


def cc_soundness_sweep(n: int = 100, seed=0, cutoff: int = 8, threshold: float = 1e-10
                       ) -> SweepResult:
    """Commutator witnesses vanish on CC states in random local bases."""
    passed, worst, vals = 0, 0.0, []
    for rng in _rngs(seed, n):
        F = random_joint_distribution(rng, cutoff)
        rho = cc_state(F, random_local_basis(rng, cutoff), random_local_basis(rng, cutoff))
        w = cc_commutator_witness(rho).value
        m = commutator_matrix(rho, random_povm(rng, cutoff)).max()
        passed += int(w <= threshold and m <= threshold)
        worst = max(worst, w, m)
        vals.append(w)
    return SweepResult("cc_soundness", n, passed, float(worst), vals)


def p_to_c_separation_sweep(n: int = 100, seed=0, cutoff: int = 20, threshold: float = 1e-10
                            ) -> SweepResult:
    """Random multi-atom coherent mixtures fail the CC commutator test."""
    passed, worst, vals = 0, np.inf, []
    for rng in _rngs(seed, n):
        P = random_point_mixture(rng, int(rng.integers(2, 5)), radius=1.5)
        w = cc_commutator_witness(synthesize_state(P, cutoff)).value
        passed += int(w > threshold)
        worst = min(worst, w)
        vals.append(w)
    return SweepResult("p_to_c_separation", n, passed, float(worst), vals)


def c_to_p_separation_sweep(n: int = 100, seed=0, cutoff: int = 10) -> SweepResult:
    """Random number-correlated states violate the variance floor."""
    passed, worst, vals = 0, -np.inf, []
    for rng in _rngs(seed, n):
        k = int(rng.integers(2, cutoff + 1))
        p = rng.dirichlet(np.ones(k))
        r = variance_witness(number_correlated(p / p.sum(), cutoff))
        passed += int(r.verdict == NONCLASSICAL)
        worst = max(worst, r.value)
        vals.append(r.value)
    return SweepResult("c_to_p_separation", n, passed, float(worst), vals)
