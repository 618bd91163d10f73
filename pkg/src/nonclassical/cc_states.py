"""Classical-classical states: joint probability tables in product local bases."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock_core import DensityMatrix, matrix_from_list, matrix_to_list, mode_dims

__all__ = [
    "JointDistribution", "LocalBasis", "cc_state", "number_correlated",
    "geometric_distribution", "is_cc_in_bases",
]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise ValueError("joint distribution must be a nonempty 2-D table")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("joint distribution entries must be finite and nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"joint distribution must sum to 1, got {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def product(cls, f, g) -> "JointDistribution":
        return cls(np.outer(f, g))

    @classmethod
    def from_dict(cls, doc: dict) -> "JointDistribution":
        return cls(doc["p"])

    def to_dict(self) -> dict:
        return {"p": self.p.tolist()}


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """Orthonormal basis of one mode; the columns of ``u`` are the basis kets."""

    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("basis matrix must be square")
        if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
            raise ValueError("basis matrix is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def fock(cls, d: int) -> "LocalBasis":
        return cls(np.eye(d))

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    @classmethod
    def from_dict(cls, doc: dict) -> "LocalBasis":
        return cls(matrix_from_list(doc["matrix"]))

    def to_dict(self) -> dict:
        return {"dims": [self.dim], "matrix": matrix_to_list(self.u)}


def cc_state(F: JointDistribution, basis_a: LocalBasis, basis_b: LocalBasis) -> DensityMatrix:
    """sum_ks p_ks |theta_k><theta_k| (x) |eta_s><eta_s|.

    A table smaller than the bases is padded with zeros.
    """
    da, db = basis_a.dim, basis_b.dim
    k, s = F.p.shape
    if k > da or s > db:
        raise ValueError(f"joint table {F.p.shape} does not fit bases of size ({da}, {db})")
    p = np.zeros((da, db))
    p[:k, :s] = F.p
    u = np.kron(basis_a.u, basis_b.u)
    mat = (u * p.reshape(-1)) @ u.conj().T
    return DensityMatrix(0.5 * (mat + mat.conj().T), (da, db))


def geometric_distribution(ratio: float, d: int) -> np.ndarray:
    """p_n proportional to ratio**n for n < d, normalised."""
    if not 0 <= ratio < 1:
        raise ValueError("ratio must lie in [0, 1)")
    p = ratio ** np.arange(d, dtype=float)
    return p / p.sum()


def number_correlated(p_n, dims) -> DensityMatrix:
    """sum_n p_n |n><n| (x) |n><n|."""
    dims = mode_dims(dims)
    if len(dims) == 1:
        dims = dims * 2
    p_n = np.asarray(p_n, dtype=float).reshape(-1)
    if p_n.size > min(dims):
        raise ValueError(f"{p_n.size} number levels do not fit dims {dims}")
    if np.any(p_n < 0) or abs(p_n.sum() - 1.0) > 1e-12:
        raise ValueError("p_n must be a normalised probability vector")
    da, db = dims
    diag = np.zeros(da * db)
    n = np.arange(p_n.size)
    diag[n * db + n] = p_n
    return DensityMatrix(np.diag(diag), dims)


def is_cc_in_bases(rho: DensityMatrix, basis_a: LocalBasis, basis_b: LocalBasis,
                   tol: float = 1e-10) -> tuple[bool, float]:
    """Check whether rho is diagonal in the given product basis.

    Returns ``(verdict, residual)`` with residual the Frobenius norm of the
    off-diagonal part after rotating into the bases.
    """
    if rho.dims != (basis_a.dim, basis_b.dim):
        raise ValueError(f"dimension mismatch: {rho.dims} vs ({basis_a.dim}, {basis_b.dim})")
    u = np.kron(basis_a.u, basis_b.u)
    r = u.conj().T @ rho.mat @ u
    off = r - np.diag(np.diag(r))
    residual = float(np.linalg.norm(off))
    return residual <= tol, residual
