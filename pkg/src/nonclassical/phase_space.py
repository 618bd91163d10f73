"""Positive P-function models and the P-classical states they describe.

Two models are provided: a Gaussian over the four real quadratures
``(Re a, Im a, Re b, Im b)`` and a weighted cloud of coherent amplitude
pairs.  States are built by averaging two-mode coherent projectors, either
exactly (point clouds) or by Monte-Carlo sampling.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .fock_core import DensityMatrix, TruncationWarning, coherent_amplitudes, mode_dims, DEFICIT_WARN

__all__ = [
    "GaussianP", "PointMixtureP", "p_moments", "sample", "synthesize_state",
    "predicted_variance_floor", "conditional_P", "p_from_dict",
]

DEFAULT_CHUNK = 2048


def _as_complex_pair(x) -> tuple[complex, complex]:
    if len(x) != 2:
        raise ValueError("expected a pair of complex amplitudes")
    out = []
    for z in x:
        if isinstance(z, (list, tuple)):
            z = complex(z[0], z[1])
        out.append(complex(z))
    return out[0], out[1]


@dataclass(frozen=True, eq=False)
class GaussianP:
    """Gaussian P-function.

    ``cov`` is the 4x4 covariance over ``(Re a, Im a, Re b, Im b)``, so
    ``trace(cov)`` is ``E|a - a0|^2 + E|b - b0|^2``.
    """

    mean: tuple
    cov: np.ndarray

    def __post_init__(self):
        mean = _as_complex_pair(self.mean)
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (4, 4):
            raise ValueError("cov must be 4x4")
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise ValueError("cov must be symmetric")
        if np.linalg.eigvalsh(cov)[0] < -1e-12:
            raise ValueError("cov must be positive semidefinite")
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @classmethod
    def thermal(cls, nbar_a: float, nbar_b: float, mean=(0, 0)) -> "GaussianP":
        """Independent (displaced) thermal modes: quadrature variance nbar/2 each."""
        return cls(mean, np.diag([nbar_a / 2, nbar_a / 2, nbar_b / 2, nbar_b / 2]))

    def mean_vector(self) -> np.ndarray:
        a, b = self.mean
        return np.array([a.real, a.imag, b.real, b.imag])

    def to_dict(self) -> dict:
        a, b = self.mean
        return {"type": "gaussian", "mean": [[a.real, a.imag], [b.real, b.imag]],
                "cov": self.cov.tolist()}


@dataclass(frozen=True, eq=False)
class PointMixtureP:
    """Weighted mixture of two-mode coherent projectors.

    Atomic P-functions are singular, so these sit on the boundary of the
    positive, non-singular class; they are treated as classical here.
    """

    weights: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        a = np.array(self.alphas, dtype=complex).reshape(-1)
        b = np.array(self.betas, dtype=complex).reshape(-1)
        if not (w.size == a.size == b.size) or w.size == 0:
            raise ValueError("weights, alphas and betas must be nonempty and equally long")
        if np.any(w <= 0):
            raise ValueError("atom weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"atom weights must sum to 1, got {w.sum()!r}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("atom amplitudes must be finite")
        for arr in (w, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    @classmethod
    def from_atoms(cls, atoms, normalize: bool = False) -> "PointMixtureP":
        """Build from ``(weight, alpha, beta)`` triples."""
        w, a, b = zip(*atoms)
        w = np.asarray(w, dtype=float)
        if normalize:
            w = w / w.sum()
        return cls(w, a, b)

    def __len__(self):
        return self.weights.size

    @property
    def atoms(self) -> list[tuple[float, complex, complex]]:
        return [(float(w), complex(a), complex(b)) for w, a, b in zip(self.weights, self.alphas, self.betas)]

    def to_dict(self) -> dict:
        return {"type": "points", "atoms": [
            {"w": w, "alpha": [a.real, a.imag], "beta": [b.real, b.imag]} for w, a, b in self.atoms]}


PDistribution = Union[GaussianP, PointMixtureP]


def p_from_dict(doc: dict) -> PDistribution:
    kind = doc.get("type")
    if kind == "gaussian":
        return GaussianP(doc["mean"], doc["cov"])
    if kind == "points":
        return PointMixtureP.from_atoms(
            [(a["w"], complex(*a["alpha"]), complex(*a["beta"])) for a in doc["atoms"]])
    raise ValueError(f"unknown P-distribution type {kind!r}")


def _quadratures(alphas, betas) -> np.ndarray:
    return np.stack([alphas.real, alphas.imag, betas.real, betas.imag], axis=-1)


def p_moments(P: PDistribution) -> tuple[complex, complex, np.ndarray]:
    """Mean amplitudes and 4x4 quadrature covariance of P."""
    if isinstance(P, GaussianP):
        return P.mean[0], P.mean[1], P.cov.copy()
    x = _quadratures(P.alphas, P.betas)
    mu = P.weights @ x
    dx = x - mu
    cov = (dx * P.weights[:, None]).T @ dx
    return complex(mu[0], mu[1]), complex(mu[2], mu[3]), cov


def predicted_variance_floor(P: PDistribution) -> float:
    """|a0|^2 + |b0|^2 + Tr C, the photon-number-difference variance floor."""
    a0, b0, cov = p_moments(P)
    return abs(a0) ** 2 + abs(b0) ** 2 + float(np.trace(cov))


def sample(P: PDistribution, n: int, seed) -> np.ndarray:
    """Draw ``n`` i.i.d. amplitude pairs, returned as a complex ``(n, 2)`` array."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    if isinstance(P, GaussianP):
        x = rng.multivariate_normal(P.mean_vector(), P.cov, size=n, method="eigh")
        return np.stack([x[:, 0] + 1j * x[:, 1], x[:, 2] + 1j * x[:, 3]], axis=1)
    idx = rng.choice(len(P), size=n, p=P.weights)
    return np.stack([P.alphas[idx], P.betas[idx]], axis=1)


def _projector_sum(amps: np.ndarray, weights: np.ndarray, dims, chunk: int):
    da, db = dims
    acc = np.zeros((da * db, da * db), dtype=complex)
    kept = 0.0
    for start in range(0, amps.shape[0], chunk):
        a = coherent_amplitudes(amps[start:start + chunk, 0], da)
        b = coherent_amplitudes(amps[start:start + chunk, 1], db)
        v = (a[:, :, None] * b[:, None, :]).reshape(a.shape[0], -1)
        w = weights[start:start + chunk]
        acc += (v * w[:, None]).T @ v.conj()
        kept += float(w @ (np.sum(np.abs(v) ** 2, axis=1)))
    acc = 0.5 * (acc + acc.conj().T)
    return acc, max(0.0, 1.0 - kept)


def synthesize_state(P: PDistribution, dims, method: str = "exact", n: int | None = None,
                     seed=None, chunk: int = DEFAULT_CHUNK) -> DensityMatrix:
    """Average two-mode coherent projectors over P.

    ``method="exact"`` sums the atoms of a point mixture with their weights;
    ``method="monte_carlo"`` averages ``n`` seeded draws in fixed-size chunks,
    so the result is bit-stable for a given ``(seed, chunk)``.
    """
    dims = mode_dims(dims)
    if len(dims) == 1:
        dims = dims * 2
    if method == "exact":
        if not isinstance(P, PointMixtureP):
            raise ValueError("exact synthesis needs a point-mixture P; use method='monte_carlo'")
        amps = np.stack([P.alphas, P.betas], axis=1)
        mat, deficit = _projector_sum(amps, P.weights, dims, chunk)
        samples = None
    elif method == "monte_carlo":
        if n is None or seed is None:
            raise ValueError("monte_carlo synthesis needs both n and seed")
        amps = sample(P, n, seed)
        mat, deficit = _projector_sum(amps, np.full(n, 1.0 / n), dims, chunk)
        samples = amps
    else:
        raise ValueError(f"unknown synthesis method {method!r}")
    if deficit > DEFICIT_WARN:
        warnings.warn(f"synthesized state lost {deficit:.3g} trace to truncation at dims={dims}",
                      TruncationWarning, stacklevel=2)
    return DensityMatrix(mat, dims, deficit, samples)


def conditional_P(P: PointMixtureP, g: Callable[[complex], float], mode: int = 1
                  ) -> tuple[PointMixtureP, float]:
    """Reweight atoms by the coherent-state response ``g`` of a POVM element on ``mode``.

    ``g(z)`` must be ``<z|Pi|z>``.  Returns the renormalised mixture and the
    outcome probability.  Atoms with zero response are dropped.
    """
    if not isinstance(P, PointMixtureP):
        raise TypeError("conditional_P needs a point-mixture P")
    if mode not in (0, 1):
        raise ValueError(f"invalid mode index {mode!r}")
    amps = P.alphas if mode == 0 else P.betas
    resp = np.array([float(g(complex(z))) for z in amps])
    if np.any(resp < -1e-12) or np.any(resp > 1 + 1e-12):
        raise ValueError("POVM response must lie in [0, 1]")
    resp = np.clip(resp, 0.0, 1.0)
    w = P.weights * resp
    prob = float(w.sum())
    if prob <= 0.0:
        raise ValueError("conditioning outcome has zero probability")
    keep = w > 0
    w = w[keep] / prob
    w /= w.sum()
    return PointMixtureP(w, P.alphas[keep], P.betas[keep]), prob
