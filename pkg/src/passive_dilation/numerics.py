"""Tolerance-aware dense linear algebra used throughout the package.

All routines take plain ``numpy`` arrays and a :class:`Tolerance`. Ranks are
decided with the threshold ``tol.rel * sigma_max + tol.abs``.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Relative and absolute thresholds for numerical decisions."""

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if self.rel < 0 or self.abs < 0:
            raise ValueError("tolerances must be nonnegative")

    def bound(self, scale: float) -> float:
        """Threshold for a quantity whose natural magnitude is ``scale``."""
        return self.rel * scale + self.abs


DEFAULT_TOL = Tolerance()


@dataclass
class CheckResult:
    """Outcome of a numerical check together with the residuals behind it.

    Truthiness follows ``ok`` so results can be used directly in conditions.
    """

    ok: bool
    residuals: dict = field(default_factory=dict)
    message: str = ""

    def __bool__(self):
        return bool(self.ok)


def max_norm(A) -> float:
    """Largest absolute entry; zero for empty arrays."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def _as_finite(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def _threshold(s, tol):
    smax = s[0] if s.size else 0.0
    return tol.rel * smax + tol.abs


def pseudo_inverse(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values at or below ``tol.rel * sigma_max + tol.abs`` are treated
    as zero, so ``A @ A⁺`` is the orthogonal projector onto the numerical
    range of ``A`` and ``A⁺ @ A`` the one onto the range of ``A.T``.
    """
    A = _as_finite(A)
    k, m = A.shape
    if A.size == 0:
        return np.zeros((m, k))
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    keep = s > _threshold(s, tol)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vh.T * inv) @ U.T


def numerical_rank(A, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above the tolerance threshold."""
    A = _as_finite(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > _threshold(s, tol)))


def kernel_projector(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the numerical kernel of ``A``."""
    A = _as_finite(A)
    m = A.shape[1]
    if A.size == 0:
        return np.eye(m)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > _threshold(s, tol)))
    N = Vh[r:].T
    return N @ N.T


def _check_symmetric(A, tol, name="matrix"):
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if max_norm(A - A.T) > tol.bound(max_norm(A)):
        raise ValueError(f"{name} is not symmetric")


def sqrt_psd(A, tol: Tolerance = DEFAULT_TOL, truncate: bool = False) -> np.ndarray:
    """Unique symmetric positive semidefinite square root of ``A``.

    Eigenvalues in ``[-tol.rel * ||A||, 0)`` are clamped to zero. With
    ``truncate=True`` every eigenvalue at or below the rank threshold is
    dropped as well, so the root has the same numerical kernel as ``A``.

    Raises:
        ValueError: if ``A`` is not symmetric or has a clearly negative
            eigenvalue.
    """
    A = _as_finite(A)
    _check_symmetric(A, tol)
    if A.size == 0:
        return A.copy()
    w, V = np.linalg.eigh(0.5 * (A + A.T))
    scale = float(np.max(np.abs(w)))
    if w[0] < -(tol.rel * scale + tol.abs):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    cutoff = tol.rel * scale + tol.abs if truncate else 0.0
    w = np.where(w > cutoff, w, 0.0)
    B = (V * np.sqrt(w)) @ V.T
    return 0.5 * (B + B.T)


def is_psd_hermitian_embedding(Sreal, Aanti, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Decide whether ``Sreal - i*Aanti`` is positive semidefinite.

    With ``Aanti = sigma`` this is the uncertainty relation ``gamma >= i sigma``;
    with ``Aanti = sigma - X sigma X^T`` it is complete positivity of ``(X, Y)``.
    """
    Sreal = _as_finite(Sreal, "symmetric part")
    Aanti = _as_finite(Aanti, "antisymmetric part")
    if Sreal.shape != Aanti.shape or Sreal.shape[0] != Sreal.shape[1]:
        raise ValueError("arguments must be square matrices of equal shape")
    if Sreal.shape[0] % 2:
        raise ValueError("dimension must be even")
    _check_symmetric(Sreal, tol, "symmetric part")
    if max_norm(Aanti + Aanti.T) > tol.bound(max_norm(Aanti)):
        raise ValueError("antisymmetric part is not antisymmetric")
    H = Sreal - 1j * Aanti
    H = 0.5 * (H + H.conj().T)
    w = np.linalg.eigvalsh(H)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    min_eig = float(w[0]) if w.size else 0.0
    ok = min_eig >= -(tol.rel * scale + tol.abs)
    return CheckResult(ok, {"min_eigenvalue": min_eig, "norm": scale})
