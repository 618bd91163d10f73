"""Exit criteria for the library, one test group per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""
import math
import time

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from nonclassical import cli
from nonclassical.cc_states import geometric_distribution, number_correlated
from nonclassical.criteria import (
    NONCLASSICAL, Povm, cc_commutator_witness, conditional_state, mandel_q,
    nowhere_dense_perturbation, number_difference, variance_witness,
)
from nonclassical.fock_core import (
    coherent_ket, fock_ket, partial_trace, thermal_state, trace_distance, variance,
)
from nonclassical.phase_space import GaussianP, PointMixtureP, conditional_P, synthesize_state
from nonclassical.sweeps import cc_soundness_sweep, p_to_c_separation_sweep

# closed form of ||[rho_A, rho_0]||_F for atoms (1, 0), (-1, 2) with equal weights
TWO_ATOM_ORACLE = 0.046539729139349194
TWO_ATOM = PointMixtureP([0.5, 0.5], [1.0, -1.0], [0.0, 2.0])


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.mark.criterion(1, "number-correlated state: Var(O_D) = 0 and witness <= -1.9, < 1 s")
def test_c1_number_correlated():
    with Timer() as t:
        rho = number_correlated(geometric_distribution(0.5, 30), 30)
        var_d = variance(rho, number_difference(rho.dims))
        r = variance_witness(rho)
    assert var_d <= 1e-10
    assert r.value <= -1.9 and r.verdict == NONCLASSICAL
    assert t.elapsed < 1.0


@pytest.mark.criterion(2, "variance floor on P-classical states (single atom, thermal MC), < 60 s")
def test_c2_variance_floor():
    with Timer() as t:
        a, b = 1.0, 0.5j
        rho = synthesize_state(PointMixtureP([1.0], [a], [b]), 40)
        assert abs(variance(rho, number_difference(rho.dims)) - (abs(a) ** 2 + abs(b) ** 2)) <= 1e-6

        na, nb = 0.5, 1.0
        rho = synthesize_state(GaussianP.thermal(na, nb), 24, "monte_carlo", n=100_000, seed=2024)
        r = variance_witness(rho)
    expected = na ** 2 + na + nb ** 2 + nb
    var_d, se = r.diagnostics["variance_number_difference"], r.diagnostics["mc_error_variance"]
    assert abs(var_d - expected) <= 3 * se
    assert r.value >= -r.diagnostics["tolerance"]
    assert r.verdict != NONCLASSICAL
    assert t.elapsed < 60


@pytest.mark.criterion(3, "commutator witness vanishes on 100/100 random CC states, < 30 s")
def test_c3_cc_soundness():
    with Timer() as t:
        res = cc_soundness_sweep(100, seed=3, cutoff=8, threshold=1e-10)
    assert res.passed == 100 and res.worst <= 1e-10
    assert t.elapsed < 30


@pytest.mark.criterion(4, "coherent mixtures fail CC: pinned two-atom value, >= 99/100 random")
def test_c4_p_classical_not_cc():
    r = cc_commutator_witness(synthesize_state(TWO_ATOM, 40))
    assert r.value > 0 and abs(r.value - TWO_ATOM_ORACLE) <= 1e-10
    res = p_to_c_separation_sweep(100, seed=4)
    assert res.passed >= 99


def _laguerre_displacement(alpha, d):
    out = np.zeros((d, d), dtype=complex)
    x = abs(alpha) ** 2
    for m in range(d):
        for n in range(m + 1):
            out[m, n] = (math.sqrt(math.factorial(n) / math.factorial(m)) * alpha ** (m - n)
                         * math.exp(-x / 2) * eval_genlaguerre(n, m - n, x))
            out[n, m] = (math.sqrt(math.factorial(n) / math.factorial(m))
                         * (-np.conj(alpha)) ** (m - n) * math.exp(-x / 2) * eval_genlaguerre(n, m - n, x))
    return out


@pytest.mark.criterion(5, "perturbation: Q = -eps at vacuum; displaced thermal matches oracle")
def test_c5_perturbation():
    for eps in (0.01, 0.1):
        rho = nowhere_dense_perturbation(fock_ket(0, 40).projector(), 0.0, eps)
        assert abs(mandel_q(rho) + eps) <= 1e-10

    nbar, alpha, eps, d = 0.5, 1 + 0.5j, 0.1, 40
    got = mandel_q(nowhere_dense_perturbation(thermal_state(nbar, d), alpha, eps))
    # brute force: Laguerre matrix elements of D, direct matrix algebra
    dk = _laguerre_displacement(alpha, d)[:, 1]
    mix = (1 - eps) * np.diag((1 / (1 + nbar)) * (nbar / (1 + nbar)) ** np.arange(d)) \
        + eps * np.outer(dk, dk.conj())
    p = np.diag(mix).real
    n = np.arange(d)
    m1, m2 = p @ n, p @ n ** 2
    brute = (m2 - m1 ** 2 - m1) / m1
    a2 = abs(alpha) ** 2
    c1 = (1 - eps) * nbar + eps * (1 + a2)
    c2 = (1 - eps) * (2 * nbar ** 2 + nbar) + eps * ((1 + a2) ** 2 + 3 * a2)
    closed = (c2 - c1 ** 2 - c1) / c1
    assert abs(brute - closed) <= 1e-10
    assert abs(got - brute) <= 1e-8


@pytest.mark.criterion(6, "conditioning on vacuum: Fock vs conditional-P trace distance <= 1e-8")
def test_c6_conditional_consistency():
    d = 40
    rho = synthesize_state(TWO_ATOM, d)
    elem = Povm.vacuum(d).elements[0]
    cond, p = conditional_state(rho, elem)

    def response(z):
        k = coherent_ket(z, d).amps
        return float(np.real(k.conj() @ elem.mat @ k))

    P_cond, q = conditional_P(TWO_ATOM, response, mode=1)
    assert abs(p - q) <= 1e-12
    assert np.all(P_cond.weights > 0) and abs(P_cond.weights.sum() - 1) <= 1e-12
    assert np.allclose(P_cond.weights, np.array([1, math.exp(-4)]) / (1 + math.exp(-4)), atol=1e-14)
    assert trace_distance(cond, partial_trace(synthesize_state(P_cond, d), 0)) <= 1e-8


@pytest.mark.criterion(7, "every scenario gives byte-identical reports for identical seeds")
@pytest.mark.parametrize("scenario", cli.SCENARIOS)
def test_c7_determinism(tmp_path, scenario):
    out = tmp_path / f"{scenario}.json"
    args = ["--scenario", scenario, "--seed", "7", "--output", str(out)]
    assert cli.main(args) == 0
    first = out.read_bytes()
    out.unlink()
    assert cli.main(args) == 0
    assert out.read_bytes() == first
