"""Dense Hermitian numerics: extremal eigenvalues, norms, condition numbers.

Matrices are plain complex (or real) numpy arrays. ``as_hermitian`` checks the
Hermitian property and symmetrizes away roundoff; the other functions call it
on their input.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .errors import EigensolverError, NotPSDError

HERMITIAN_TOL = 1e-12
RESIDUAL_TOL = 1e-10
PSD_TOL = 1e-10
SINGULAR_TOL = 1e-12


def fingerprint(a: np.ndarray) -> str:
    a = np.ascontiguousarray(a)
    return hashlib.sha256(a.tobytes()).hexdigest()[:16] + f"-{a.shape}"


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(a + a^*) / 2`` after checking ``a`` is Hermitian to ``tol``."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(float)
    err = np.max(np.abs(a - a.conj().T))
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    return (a + a.conj().T) / 2


def eigvalsh_checked(h) -> np.ndarray:
    """All eigenvalues (ascending) with an eigenvector residual check."""
    h = as_hermitian(h)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failure on matrix {fingerprint(h)}") from exc
    scale = max(1.0, np.linalg.norm(h))
    for idx in (0, -1):
        res = np.linalg.norm(h @ v[:, idx] - w[idx] * v[:, idx])
        if not res <= RESIDUAL_TOL * scale:
            raise EigensolverError(
                f"eigensolver failure on matrix {fingerprint(h)}: residual {res:.3e}"
            )
    return w


def eig_extremes(h) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix."""
    w = eigvalsh_checked(h)
    return float(w[0]), float(w[-1])


def op_norm(h) -> float:
    """Spectral norm of a Hermitian matrix, max(|lambda_min|, |lambda_max|)."""
    lo, hi = eig_extremes(h)
    return max(abs(lo), abs(hi))


def frobenius_norm(a) -> float:
    a = np.asarray(a)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def condition_number(h) -> float:
    """lambda_max / lambda_min of a positive semidefinite Hermitian matrix.

    Roundoff negatives down to ``-1e-10 * ||h||_F`` are clamped to zero.
    Returns ``inf`` when ``lambda_min <= 1e-12 * lambda_max``.
    """
    h = as_hermitian(h)
    lo, hi = eig_extremes(h)
    if lo < -PSD_TOL * frobenius_norm(h):
        raise NotPSDError(f"matrix is not PSD: lambda_min = {lo:.3e}")
    lo = max(lo, 0.0)
    if lo <= SINGULAR_TOL * hi or hi == 0.0:
        return float("inf")
    return hi / lo
