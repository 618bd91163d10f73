"""Non-classicality witnesses for truncated one- and two-mode bosonic states.

Two families of witnesses are implemented:

* photon-number-difference variance and Mandel Q, which are nonnegative on
  every mixture of coherent states (violation => not P-classical);
* commutators of conditioned reduced states, which vanish on every
  classical-classical state (violation => not CC, positive A-discord).

None of them is complete: a state that passes is not certified classical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock_core import (
    DensityMatrix, Operator, displacement_operator, expectation, fock_ket, identity, number_op,
    partial_trace, tensor, variance,
)

__all__ = [
    "CLASSICAL", "NONCLASSICAL", "INCONCLUSIVE", "DEFAULT_TOLERANCES",
    "WitnessReport", "Povm", "number_difference", "total_number",
    "variance_witness", "conditional_state", "cc_commutator_witness",
    "commutator_matrix", "nowhere_dense_perturbation", "perturb_mode_a",
    "displaced_frame", "mandel_q", "mandel_q_witness",
]

CLASSICAL = "classical-consistent"
NONCLASSICAL = "nonclassical"
INCONCLUSIVE = "inconclusive"

DEFAULT_TOLERANCES = {
    "exact": 1e-10,        # exact constructions
    "mc_sigmas": 3.0,      # band width in Monte-Carlo standard errors
    "psd": 1e-8,
    "min_probability": 1e-14,
}


@dataclass(frozen=True)
class WitnessReport:
    name: str
    value: float
    threshold: float
    verdict: str
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "threshold": self.threshold,
                "verdict": self.verdict, "diagnostics": dict(self.diagnostics)}


def _tolerances(overrides) -> dict:
    tol = dict(DEFAULT_TOLERANCES)
    if overrides:
        unknown = set(overrides) - set(tol)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        tol.update({k: float(v) for k, v in overrides.items()})
    return tol


def _below_verdict(value, threshold, hard_tol, band):
    # violation-type witness: classical states satisfy value >= threshold
    if value < threshold - hard_tol - band:
        return NONCLASSICAL
    if value < threshold - hard_tol:
        return INCONCLUSIVE
    return CLASSICAL


def _above_verdict(value, threshold, band):
    # classical states satisfy value <= threshold
    if value > threshold + band:
        return NONCLASSICAL
    if value > threshold:
        return INCONCLUSIVE
    return CLASSICAL


def _truncation_allowance(rho: DensityMatrix) -> float:
    # photon-number moments up to second order: the lost tail weighs roughly d^2 each
    return 4.0 * rho.trace_deficit * sum(rho.dims) ** 2


# ------------------------------------------------------------ POVMs

@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("a POVM needs at least one element")
        dims = elems[0].dims
        if len(dims) != 1 or any(e.dims != dims for e in elems):
            raise ValueError("POVM elements must act on one and the same mode")
        for i, e in enumerate(elems):
            h = 0.5 * (e.mat + e.mat.conj().T)
            if np.max(np.abs(e.mat - h)) > 1e-10 or np.linalg.eigvalsh(h)[0] < -1e-10:
                raise ValueError(f"POVM element {i} is not positive semidefinite")
        total = sum(e.mat for e in elems)
        if np.max(np.abs(total - np.eye(dims[0]))) > 1e-10:
            raise ValueError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", elems)

    @property
    def dims(self):
        return self.elements[0].dims

    def __len__(self):
        return len(self.elements)

    @classmethod
    def vacuum(cls, d: int) -> "Povm":
        """On/off detection: {|0><0|, I - |0><0|}."""
        p0 = fock_ket(0, d).projector().mat
        return cls((Operator(p0, (d,), True), Operator(np.eye(d) - p0, (d,), True)))

    @classmethod
    def photon_counting(cls, d: int) -> "Povm":
        return cls(tuple(Operator(fock_ket(n, d).projector().mat, (d,), True) for n in range(d)))

    @classmethod
    def from_dict(cls, doc: dict) -> "Povm":
        return cls(tuple(Operator.from_dict(e) for e in doc["elements"]))

    def to_dict(self) -> dict:
        return {"elements": [e.to_dict() for e in self.elements]}


# ------------------------------------------------- two-mode observables

def number_difference(dims) -> Operator:
    da, db = dims
    return tensor(number_op(da), identity(db)) - tensor(identity(da), number_op(db))


def total_number(dims) -> Operator:
    da, db = dims
    return tensor(number_op(da), identity(db)) + tensor(identity(da), number_op(db))


def _se(influence: np.ndarray) -> float:
    n = influence.size
    if n < 2:
        return 0.0
    return float(np.std(influence, ddof=1) / math.sqrt(n))


def _variance_witness_mc_errors(samples: np.ndarray) -> tuple[float, float]:
    # per-sample coherent moments; delta-method influence functions
    x = np.abs(samples[:, 0]) ** 2
    y = np.abs(samples[:, 1]) ** 2
    u = x - y
    m1 = u.mean()
    var_err = _se(u ** 2 + x + y - 2 * m1 * u)
    value_err = _se(u ** 2 - 2 * m1 * u)
    return value_err, var_err


def variance_witness(rho: DensityMatrix, tolerances=None, mc_error: float | None = None
                     ) -> WitnessReport:
    """Var(n_a - n_b) - <n_a + n_b>, nonnegative on every mixture of coherent states.

    A significantly negative value certifies the state is not P-classical.
    ``mc_error`` is the standard error of the value; if omitted it is
    estimated from the state's Monte-Carlo samples when present.
    """
    if rho.n_modes != 2:
        raise ValueError("variance_witness needs a two-mode state")
    tol = _tolerances(tolerances)
    var_d = variance(rho, number_difference(rho.dims))
    mean_n = expectation(rho, total_number(rho.dims)).real
    value = var_d - mean_n
    var_err = 0.0
    if mc_error is None:
        mc_error = 0.0
        if rho.mc_samples is not None:
            mc_error, var_err = _variance_witness_mc_errors(rho.mc_samples)
    trunc = _truncation_allowance(rho)
    hard = tol["exact"] + trunc
    band = tol["mc_sigmas"] * mc_error
    return WitnessReport(
        name="variance_witness",
        value=float(value),
        threshold=0.0,
        verdict=_below_verdict(value, 0.0, hard, band),
        diagnostics={
            "variance_number_difference": float(var_d),
            "mean_total_number": float(mean_n),
            "trace_deficit": rho.trace_deficit,
            "truncation_allowance": trunc,
            "mc_error": float(mc_error),
            "mc_error_variance": float(var_err),
            "tolerance": hard + band,
            "tolerances": tol,
        },
    )


# ----------------------------------------------------- conditioning

def _conditioned(rho: DensityMatrix, element: Operator) -> np.ndarray:
    """Tr_B[rho (I (x) Pi)], unnormalised."""
    da, db = rho.dims
    if element.dims != (db,):
        raise ValueError(f"POVM element dims {element.dims} do not match mode B ({db},)")
    t = rho.mat.reshape(da, db, da, db)
    return np.einsum("ajbk,kj->ab", t, element.mat)


def conditional_state(rho: DensityMatrix, element: Operator, min_probability: float = 1e-14
                      ) -> tuple[DensityMatrix, float]:
    """State of A after outcome ``element`` on B, with the outcome probability."""
    if rho.n_modes != 2:
        raise ValueError("conditional_state needs a two-mode state")
    h = 0.5 * (element.mat + element.mat.conj().T)
    if np.max(np.abs(element.mat - h)) > 1e-10 or np.linalg.eigvalsh(h)[0] < -1e-10:
        raise ValueError("POVM element is not positive semidefinite")
    m = _conditioned(rho, element)
    p = float(np.trace(m).real)
    if p < min_probability:
        raise ValueError(f"outcome probability {p:.3g} too small to condition on")
    m = m / p
    return DensityMatrix(0.5 * (m + m.conj().T), (rho.dims[0],)), p


def cc_commutator_witness(rho: DensityMatrix, tolerances=None, mc_allowance: float = 0.0
                          ) -> WitnessReport:
    """Frobenius norm of [Tr_B rho, Tr_B(rho |0><0|_B)].

    Zero for every classical-classical state; a value above the threshold
    certifies the state is not CC and has positive A-discord.  The vacuum
    matrix element of the same commutator is reported alongside.
    """
    if rho.n_modes != 2:
        raise ValueError("cc_commutator_witness needs a two-mode state")
    tol = _tolerances(tolerances)
    db = rho.dims[1]
    rho_a = _conditioned(rho, identity(db))
    rho_0 = _conditioned(rho, Operator(fock_ket(0, db).projector().mat, (db,), True))
    comm = rho_a @ rho_0 - rho_0 @ rho_a
    value = float(np.linalg.norm(comm))
    vac = complex(comm[0, 0])
    threshold = tol["exact"]
    return WitnessReport(
        name="cc_commutator_witness",
        value=value,
        threshold=threshold,
        verdict=_above_verdict(value, threshold, mc_allowance),
        diagnostics={
            "vacuum_element": [vac.real, vac.imag],
            "trace_deficit": rho.trace_deficit,
            "mc_allowance": mc_allowance,
            "tolerances": tol,
        },
    )


def commutator_matrix(rho: DensityMatrix, povm: Povm) -> np.ndarray:
    """Pairwise Frobenius norms of commutators of the A-states conditioned on each outcome."""
    if rho.n_modes != 2:
        raise ValueError("commutator_matrix needs a two-mode state")
    if not isinstance(povm, Povm):
        povm = Povm(tuple(povm))
    cond = [_conditioned(rho, e) for e in povm.elements]
    k = len(cond)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = np.linalg.norm(cond[i] @ cond[j] - cond[j] @ cond[i])
    return out


# ------------------------------------------------ perturbation, Mandel Q

def nowhere_dense_perturbation(rho_bar: DensityMatrix, alpha_bar: complex, eps: float
                               ) -> DensityMatrix:
    """(1 - eps) rho_bar + eps D(alpha_bar)|1><1|D(alpha_bar)^+ on a single mode."""
    if rho_bar.n_modes != 1:
        raise ValueError("nowhere_dense_perturbation acts on a single mode")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    d = rho_bar.dims[0]
    dk = displacement_operator(alpha_bar, d) @ fock_ket(1, d)
    mix = (1 - eps) * rho_bar.mat + eps * np.outer(dk.amps, dk.amps.conj())
    return DensityMatrix(mix, rho_bar.dims, (1 - eps) * rho_bar.trace_deficit)


def perturb_mode_a(rho: DensityMatrix, alpha_bar: complex, eps: float) -> DensityMatrix:
    """Two-mode version: (1 - eps) rho + eps D|1><1|D^+ (x) Tr_A rho.

    The A marginal is exactly the single-mode perturbation of Tr_B rho; mode
    B is untouched.
    """
    if rho.n_modes != 2:
        raise ValueError("perturb_mode_a needs a two-mode state")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    da = rho.dims[0]
    dk = displacement_operator(alpha_bar, da) @ fock_ket(1, da)
    rho_b = partial_trace(rho, 1)
    mix = (1 - eps) * rho.mat + eps * np.kron(np.outer(dk.amps, dk.amps.conj()), rho_b.mat)
    return DensityMatrix(mix, rho.dims, rho.trace_deficit)


def displaced_frame(rho: DensityMatrix, alpha: complex) -> DensityMatrix:
    """D(-alpha) rho D(-alpha)^+ on a single mode."""
    if rho.n_modes != 1:
        raise ValueError("displaced_frame acts on a single mode")
    dm = displacement_operator(-alpha, rho.dims[0]).mat
    m = dm @ rho.mat @ dm.conj().T
    return DensityMatrix(0.5 * (m + m.conj().T), rho.dims, rho.trace_deficit)


def _photon_moments(rho: DensityMatrix) -> tuple[float, float]:
    n = np.arange(rho.dims[0])
    p = np.diag(rho.mat).real
    return float(p @ n), float(p @ n ** 2)


def mandel_q(rho: DensityMatrix) -> float:
    """(Var n - <n>) / <n>; NaN when <n> = 0."""
    if rho.n_modes != 1:
        raise ValueError("mandel_q needs a single-mode state")
    m1, m2 = _photon_moments(rho)
    if m1 <= 0.0:
        return math.nan
    return (m2 - m1 ** 2 - m1) / m1


def _mandel_mc_error(samples: np.ndarray) -> float:
    x = np.abs(samples[:, 0]) ** 2
    b = x.mean()
    if b <= 0:
        return 0.0
    a = np.mean(x ** 2 + x)
    return _se((x ** 2 + x) / b - (a / b ** 2 + 1.0) * x)


def mandel_q_witness(rho: DensityMatrix, tolerances=None, mc_error: float | None = None
                     ) -> WitnessReport:
    """Mandel Q as a report; Q < 0 certifies a single mode is not P-classical."""
    tol = _tolerances(tolerances)
    q = mandel_q(rho)
    if mc_error is None:
        mc_error = _mandel_mc_error(rho.mc_samples) if rho.mc_samples is not None else 0.0
    trunc = _truncation_allowance(rho)
    hard = tol["exact"] + trunc
    band = tol["mc_sigmas"] * mc_error
    diag = {"mean_number": _photon_moments(rho)[0], "trace_deficit": rho.trace_deficit,
            "truncation_allowance": trunc, "mc_error": float(mc_error),
            "tolerance": hard + band, "tolerances": tol}
    if math.isnan(q):
        diag["note"] = "undefined for zero mean photon number"
        return WitnessReport("mandel_q", q, 0.0, INCONCLUSIVE, diag)
    return WitnessReport("mandel_q", float(q), 0.0, _below_verdict(q, 0.0, hard, band), diag)
