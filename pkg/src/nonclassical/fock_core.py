"""Dense linear algebra on a truncated one- or two-mode Fock space.

States and operators are small immutable wrappers around numpy arrays that
carry the per-mode cutoffs.  Coherent kets are never renormalised: the
probability mass lost beyond the cutoff is tracked as ``trace_deficit``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.linalg
from scipy.stats import poisson

__all__ = [
    "TruncationWarning", "ModeDims", "Ket", "DensityMatrix", "Operator",
    "DensityDiagnostics", "mode_dims", "coherent_amplitudes", "coherent_ket",
    "fock_ket", "annihilation", "creation", "number_op", "identity",
    "displacement_operator", "thermal_state", "tensor", "partial_trace",
    "expectation", "variance", "commutator", "frobenius", "trace_distance",
    "validate_density", "clip_eigenvalues", "suggest_cutoff",
    "matrix_to_list", "matrix_from_list",
]

DEFICIT_WARN = 1e-6

ModeDims = tuple  # tuple[int] or tuple[int, int]


class TruncationWarning(UserWarning):
    """Probability mass lost beyond the Fock cutoff exceeds the warning level."""


def mode_dims(dims: Union[int, Sequence[int]]) -> ModeDims:
    if isinstance(dims, (int, np.integer)):
        dims = (int(dims),)
    dims = tuple(int(d) for d in dims)
    if len(dims) not in (1, 2):
        raise ValueError(f"only one- or two-mode spaces are supported, got dims={dims}")
    if any(d < 2 for d in dims):
        raise ValueError(f"every Fock cutoff must be >= 2, got dims={dims}")
    return dims


def _frozen(a, dtype=complex) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _warn_deficit(deficit: float, what: str) -> None:
    if deficit > DEFICIT_WARN:
        warnings.warn(f"{what}: truncation deficit {deficit:.3g} exceeds {DEFICIT_WARN:g}; "
                      "raise the cutoff", TruncationWarning, stacklevel=3)


@dataclass(frozen=True, eq=False)
class Ket:
    amps: np.ndarray
    dims: ModeDims

    def __post_init__(self):
        dims = mode_dims(self.dims)
        amps = _frozen(self.amps).reshape(-1)
        if amps.size != math.prod(dims):
            raise ValueError(f"ket length {amps.size} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def projector(self) -> "DensityMatrix":
        """|psi><psi| with the missing norm recorded as trace deficit."""
        deficit = max(0.0, 1.0 - self.norm() ** 2)
        return DensityMatrix(np.outer(self.amps, self.amps.conj()), self.dims, deficit)

    def inner(self, other: "Ket") -> complex:
        """<self|other>."""
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A (possibly truncated) density operator.

    ``mc_samples`` holds the coherent amplitudes a Monte-Carlo synthesis was
    averaged over, shape ``(n, n_modes)``; witnesses use it for error bars.
    """

    mat: np.ndarray
    dims: ModeDims
    trace_deficit: float = 0.0
    mc_samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        dims = mode_dims(self.dims)
        mat = _frozen(self.mat)
        n = math.prod(dims)
        if mat.shape != (n, n):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "trace_deficit", float(self.trace_deficit))
        if self.mc_samples is not None:
            s = _frozen(self.mc_samples)
            if s.ndim != 2 or s.shape[1] != len(dims):
                raise ValueError("mc_samples must have shape (n, n_modes)")
            object.__setattr__(self, "mc_samples", s)

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "trace_deficit": self.trace_deficit,
                "matrix": matrix_to_list(self.mat)}

    @classmethod
    def from_dict(cls, doc: dict) -> "DensityMatrix":
        return cls(matrix_from_list(doc["matrix"]), doc["dims"], doc.get("trace_deficit", 0.0))


@dataclass(frozen=True, eq=False)
class Operator:
    mat: np.ndarray
    dims: ModeDims
    hermitian: bool = False

    def __post_init__(self):
        dims = mode_dims(self.dims)
        mat = _frozen(self.mat)
        n = math.prod(dims)
        if mat.shape != (n, n):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if self.hermitian and _herm_residual(mat) > 1e-10:
            raise ValueError("operator flagged hermitian is not hermitian")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    def _check(self, other):
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch: {self.dims} vs {other.dims}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.mat + other.mat, self.dims, self.hermitian and other.hermitian)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.mat - other.mat, self.dims, self.hermitian and other.hermitian)

    def __neg__(self) -> "Operator":
        return Operator(-self.mat, self.dims, self.hermitian)

    def __mul__(self, c) -> "Operator":
        c = complex(c)
        return Operator(c * self.mat, self.dims, self.hermitian and c.imag == 0)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Ket):
            self._check(other)
            return Ket(self.mat @ other.amps, self.dims)
        self._check(other)
        return Operator(self.mat @ other.mat, self.dims)

    def dag(self) -> "Operator":
        return Operator(self.mat.conj().T, self.dims, self.hermitian)

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "matrix": matrix_to_list(self.mat)}

    @classmethod
    def from_dict(cls, doc: dict) -> "Operator":
        mat = matrix_from_list(doc["matrix"])
        return cls(mat, doc["dims"], _herm_residual(mat) <= 1e-10)


def matrix_to_list(mat: np.ndarray) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    mat = np.asarray(mat, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_list(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("matrix must be a 2-D array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _herm_residual(mat: np.ndarray) -> float:
    scale = np.max(np.abs(mat)) if mat.size else 0.0
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(mat - mat.conj().T)) / scale)


# ---------------------------------------------------------------- kets

def coherent_amplitudes(alphas, d: int) -> np.ndarray:
    """Truncated coherent amplitudes for an array of alphas, shape ``alphas.shape + (d,)``."""
    alphas = np.asarray(alphas, dtype=complex)
    if not np.all(np.isfinite(alphas)):
        raise ValueError("coherent amplitude must be finite")
    out = np.empty(alphas.shape + (d,), dtype=complex)
    out[..., 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for k in range(1, d):
        out[..., k] = out[..., k - 1] * alphas / math.sqrt(k)
    return out


def coherent_ket(alpha: complex, d: int) -> Ket:
    d = mode_dims(d)[0]
    amps = coherent_amplitudes(complex(alpha), d)
    _warn_deficit(1.0 - float(np.vdot(amps, amps).real), f"coherent_ket({alpha}, {d})")
    return Ket(amps, (d,))


def fock_ket(n: int, d: int) -> Ket:
    if not 0 <= n < d:
        raise ValueError(f"Fock level {n} outside cutoff {d}")
    amps = np.zeros(d, dtype=complex)
    amps[n] = 1.0
    return Ket(amps, (d,))


# ----------------------------------------------------------- operators

def annihilation(d: int) -> Operator:
    d = mode_dims(d)[0]
    return Operator(np.diag(np.sqrt(np.arange(1, d)), 1), (d,))


def creation(d: int) -> Operator:
    return annihilation(d).dag()


def number_op(d: int) -> Operator:
    d = mode_dims(d)[0]
    return Operator(np.diag(np.arange(d, dtype=float)), (d,), hermitian=True)


def identity(d: int) -> Operator:
    d = mode_dims(d)[0]
    return Operator(np.eye(d), (d,), hermitian=True)


def displacement_operator(alpha: complex, d: int) -> Operator:
    """exp(alpha a^+ - conj(alpha) a) of the truncated generator."""
    alpha = complex(alpha)
    if not np.isfinite(alpha):
        raise ValueError("displacement amplitude must be finite")
    d = mode_dims(d)[0]
    if abs(alpha) ** 2 + 6 * abs(alpha) > d:
        warnings.warn(f"displacement by |alpha|={abs(alpha):.3g} is close to the cutoff d={d}",
                      TruncationWarning, stacklevel=2)
    a = annihilation(d).mat
    gen = alpha * a.conj().T - alpha.conjugate() * a
    return Operator(scipy.linalg.expm(gen), (d,))


def thermal_state(nbar: float, d: int) -> DensityMatrix:
    """Geometric photon-number diagonal with mean ``nbar`` (unrenormalised)."""
    if nbar < 0:
        raise ValueError("mean photon number must be nonnegative")
    d = mode_dims(d)[0]
    r = nbar / (1.0 + nbar)
    diag = (1.0 - r) * r ** np.arange(d)
    return DensityMatrix(np.diag(diag), (d,), r ** d)


def suggest_cutoff(alpha_max: float, tail: float = 1e-8, headroom: int = 6) -> int:
    """Smallest d whose Poisson tail mass beyond d is below ``tail``, plus headroom."""
    mu = abs(alpha_max) ** 2
    d = 1
    while poisson.sf(d - 1, mu) >= tail:
        d += 1
    return max(2, d + headroom)


# ----------------------------------------------------- bipartite tools

def tensor(x, y):
    if type(x) is not type(y):
        raise TypeError(f"cannot tensor {type(x).__name__} with {type(y).__name__}")
    if len(x.dims) != 1 or len(y.dims) != 1:
        raise ValueError("tensor expects two single-mode objects")
    dims = x.dims + y.dims
    if isinstance(x, Ket):
        return Ket(np.kron(x.amps, y.amps), dims)
    if isinstance(x, DensityMatrix):
        deficit = 1.0 - (1.0 - x.trace_deficit) * (1.0 - y.trace_deficit)
        return DensityMatrix(np.kron(x.mat, y.mat), dims, deficit)
    if isinstance(x, Operator):
        return Operator(np.kron(x.mat, y.mat), dims, x.hermitian and y.hermitian)
    raise TypeError(f"unsupported type {type(x).__name__}")


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state of mode ``keep`` (0 = A, 1 = B)."""
    if rho.n_modes != 2:
        raise ValueError("partial_trace expects a two-mode state")
    if keep not in (0, 1):
        raise ValueError(f"invalid mode index {keep!r}")
    da, db = rho.dims
    t = rho.mat.reshape(da, db, da, db)
    red = np.einsum("ajbj->ab", t) if keep == 0 else np.einsum("iaib->ab", t)
    samples = None if rho.mc_samples is None else rho.mc_samples[:, keep:keep + 1]
    return DensityMatrix(red, (rho.dims[keep],), rho.trace_deficit, samples)


def _is_diagonal(mat: np.ndarray) -> bool:
    return not np.any(mat - np.diag(np.diag(mat)))


def expectation(rho: DensityMatrix, op: Operator) -> complex:
    if rho.dims != op.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {op.dims}")
    return complex(np.einsum("ij,ji->", rho.mat, op.mat))


def variance(rho: DensityMatrix, op: Operator) -> float:
    """Tr(rho O^2) - Tr(rho O)^2 for hermitian O."""
    if not op.hermitian:
        raise ValueError("variance requires a hermitian operator")
    mean = expectation(rho, op).real
    if _is_diagonal(op.mat):
        second = float(np.real(np.diag(rho.mat) @ np.diag(op.mat).real ** 2))
    else:
        second = expectation(rho, op @ op).real
    return second - mean ** 2


def commutator(x, y) -> Operator:
    if x.dims != y.dims:
        raise ValueError(f"dimension mismatch: {x.dims} vs {y.dims}")
    return Operator(x.mat @ y.mat - y.mat @ x.mat, x.dims)


def frobenius(x) -> float:
    mat = x.mat if hasattr(x, "mat") else np.asarray(x)
    return float(np.linalg.norm(mat))


def trace_distance(x: DensityMatrix, y: DensityMatrix) -> float:
    if x.dims != y.dims:
        raise ValueError(f"dimension mismatch: {x.dims} vs {y.dims}")
    diff = x.mat - y.mat
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))


# ---------------------------------------------------------- validation

@dataclass(frozen=True)
class DensityDiagnostics:
    hermiticity_residual: float
    trace: float
    min_eigenvalue: float
    trace_deficit: float
    hermitian_ok: bool
    trace_ok: bool
    psd_ok: bool
    deficit_ok: bool

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok


def validate_density(rho: DensityMatrix, herm_tol: float = 1e-10, trace_tol: float = 1e-10,
                     psd_tol: float = 1e-8, deficit_warn: float = DEFICIT_WARN) -> DensityDiagnostics:
    """Report hermiticity, trace, smallest eigenvalue and truncation deficit."""
    herm = _herm_residual(rho.mat)
    tr = rho.trace()
    hmat = 0.5 * (rho.mat + rho.mat.conj().T)
    lmin = float(np.linalg.eigvalsh(hmat)[0])
    return DensityDiagnostics(
        hermiticity_residual=herm,
        trace=tr,
        min_eigenvalue=lmin,
        trace_deficit=rho.trace_deficit,
        hermitian_ok=herm <= herm_tol,
        trace_ok=1.0 - rho.trace_deficit - trace_tol <= tr <= 1.0 + trace_tol,
        psd_ok=lmin >= -psd_tol,
        deficit_ok=rho.trace_deficit <= deficit_warn,
    )


def clip_eigenvalues(rho: DensityMatrix) -> DensityMatrix:
    """Opt-in repair: zero negative eigenvalues and restore the original trace."""
    hmat = 0.5 * (rho.mat + rho.mat.conj().T)
    w, v = np.linalg.eigh(hmat)
    tr = w.sum()
    w = np.clip(w, 0.0, None)
    if w.sum() > 0:
        w *= tr / w.sum()
    return DensityMatrix((v * w) @ v.conj().T, rho.dims, rho.trace_deficit)
