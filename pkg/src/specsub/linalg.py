"""Dense Hermitian linear algebra.

Matrices are plain numpy arrays (real symmetric or complex Hermitian);
every public operation validates its input against the Hermiticity
tolerance 1e-12 * (1 + max|entry|) before touching it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConvergenceFailure, IndexOutOfRange, NonHermitianInput

HERMITICITY_RTOL = 1e-12
DECOMPOSITION_RTOL = 1e-10


def require_hermitian(a, name: str = "matrix") -> np.ndarray:
    """Return `a` as a float64/complex128 array after checking it is Hermitian."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise NonHermitianInput(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise NonHermitianInput(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise NonHermitianInput(f"{name} contains non-finite entries")
    tol = HERMITICITY_RTOL * (1.0 + float(np.max(np.abs(arr))))
    defect = float(np.max(np.abs(arr - arr.conj().T)))
    if defect > tol:
        raise NonHermitianInput(
            f"{name} is not Hermitian: max asymmetry {defect:.3e} exceeds {tol:.3e}"
        )
    return arr


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])


def eigh(h) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The result is checked: eigenvector Gram defect at most 1e-10 and
    column residuals ||H u_k - w_k u_k|| at most 1e-10 * (1 + ||H||).
    Deterministic for a fixed input on a fixed build of the solver.
    """
    arr = require_hermitian(h)
    try:
        w, u = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    n = arr.shape[0]
    gram_defect = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    norm_h = float(np.max(np.abs(w)))
    residual = float(np.max(np.linalg.norm(arr @ u - u * w, axis=0)))
    if gram_defect > DECOMPOSITION_RTOL or residual > DECOMPOSITION_RTOL * (1.0 + norm_h):
        raise ConvergenceFailure(
            f"decomposition failed verification: gram defect {gram_defect:.3e}, "
            f"residual {residual:.3e}"
        )
    return SpectralDecomposition(eigenvalues=w, eigenvectors=u)


def operator_norm(h) -> float:
    """Spectral norm of a Hermitian matrix, i.e. max |eigenvalue|."""
    arr = require_hermitian(h)
    try:
        w = np.linalg.eigvalsh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    return float(np.max(np.abs(w)))


@dataclass(frozen=True)
class PerturbationSplit:
    """V = V+ - V- with both parts positive semidefinite on orthogonal ranges."""

    v: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    norm_plus: float
    norm_minus: float
    norm_v: float

    @property
    def norm_sum(self) -> float:
        return self.norm_plus + self.norm_minus


def sign_split(v) -> PerturbationSplit:
    """Split a Hermitian matrix into its positive and negative spectral parts.

    Eigenpairs with |eigenvalue| <= 1e-12 * (1 + ||V||) are dropped from both
    parts; they contribute the zero operator either way.  norm_plus and
    norm_minus are the spectral norms of the two parts (0 for an empty part).
    """
    arr = require_hermitian(v)
    dec = eigh(arr)
    w, u = dec.eigenvalues, dec.eigenvectors
    norm_v = float(np.max(np.abs(w)))
    zero_tol = HERMITICITY_RTOL * (1.0 + norm_v)
    pos = w > zero_tol
    neg = w < -zero_tol
    v_plus = (u[:, pos] * w[pos]) @ u[:, pos].conj().T
    v_minus = (u[:, neg] * (-w[neg])) @ u[:, neg].conj().T
    norm_plus = float(np.max(w[pos])) if pos.any() else 0.0
    norm_minus = float(np.max(-w[neg])) if neg.any() else 0.0
    return PerturbationSplit(
        v=arr,
        v_plus=0.5 * (v_plus + v_plus.conj().T),
        v_minus=0.5 * (v_minus + v_minus.conj().T),
        norm_plus=norm_plus,
        norm_minus=norm_minus,
        norm_v=norm_v,
    )


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector stored as a dense Hermitian matrix, with its rank."""

    matrix: np.ndarray
    rank: int

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


def spectral_projector(decomp: SpectralDecomposition, indices: Iterable[int]) -> Projector:
    """Projector onto the span of the selected eigenvector columns.

    `indices` is treated as a set; rank equals its size.
    """
    idx = sorted({int(i) for i in indices})
    if idx and (idx[0] < 0 or idx[-1] >= decomp.n):
        raise IndexOutOfRange(f"indices must lie in 0..{decomp.n - 1}, got {idx}")
    cols = decomp.eigenvectors[:, idx]
    p = cols @ cols.conj().T
    return Projector(matrix=0.5 * (p + p.conj().T), rank=len(idx))
