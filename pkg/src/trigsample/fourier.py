"""Random Fourier sample matrices, Gram matrices and least-squares recovery."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import rng
from .errors import SingularNormalMatrixError
from .hermitian import as_hermitian, condition_number, op_norm
from .spectrum import Spectrum

MAX_NORMAL_CONDITION = 1e12


@dataclass(frozen=True)
class SampleSet:
    """``n`` points in the unit cube [0, 1]^dim, with their provenance."""

    dim: int
    points: np.ndarray
    seed: int | None = None
    distribution: str = "uniform"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1 and self.dim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[1] != self.dim or pts.shape[0] < 1:
            raise ValueError(f"points must have shape (n >= 1, {self.dim}), got {pts.shape}")
        if np.any(pts < 0.0) or np.any(pts > 1.0) or not np.all(np.isfinite(pts)):
            raise ValueError("all coordinates must lie in [0, 1]")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "seed": self.seed,
            "distribution": self.distribution,
            "points": self.points.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> SampleSet:
        return cls(
            int(data["dim"]),
            np.asarray(data["points"], dtype=float),
            data.get("seed"),
            data.get("distribution", "uniform"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> SampleSet:
        return cls.from_dict(json.loads(text))


def uniform_samples(n: int, d: int, seed: int, trial: int = 0) -> SampleSet:
    """i.i.d. uniform points on [0, 1]^d from stream ``(seed, trial)``."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    pts = rng.stream(seed, trial).random((n, d))
    return SampleSet(d, pts, seed, "uniform")


@dataclass(frozen=True)
class FourierSystem:
    spectrum: Spectrum
    samples: SampleSet
    matrix: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def D(self) -> int:
        return self.matrix.shape[1]


def fourier_matrix(freqs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Entries exp(2 pi i k.x_t), rows indexed by points, columns by frequencies.

    Each product k_j x_j is reduced modulo 1 before summing so that large
    frequencies do not lose phase accuracy.
    """
    phase = np.mod(points[:, None, :] * freqs[None, :, :], 1.0).sum(axis=-1)
    phase = np.mod(phase, 1.0)
    return np.exp(2j * np.pi * phase)


def build_matrix(s: Spectrum, x: SampleSet) -> FourierSystem:
    if s.dim != x.dim:
        raise ValueError(f"dimension mismatch: spectrum dim {s.dim}, samples dim {x.dim}")
    u = fourier_matrix(s.array().astype(float), x.points)
    u.setflags(write=False)
    return FourierSystem(s, x, u)


def second_moment(u: np.ndarray) -> np.ndarray:
    """n^{-1} U^* U for an arbitrary (real or complex) n x D matrix."""
    u = np.asarray(u)
    g = u.conj().T @ u / u.shape[0]
    return (g + g.conj().T) / 2


def gram(fs: FourierSystem) -> np.ndarray:
    """Normalized Gram matrix n^{-1} U^* U.

    The diagonal is set to exactly 1, which is its exact value since every
    entry of a Fourier matrix has modulus one.
    """
    g = second_moment(fs.matrix)
    np.fill_diagonal(g, 1.0)
    return g


def deviation(fs: FourierSystem, q=None) -> float:
    """Spectral norm of n^{-1} U^* U - q (q defaults to the identity)."""
    g = gram(fs)
    q = np.eye(fs.D) if q is None else as_hermitian(q)
    if q.shape != g.shape:
        raise ValueError(f"order mismatch: gram {g.shape}, q {q.shape}")
    return op_norm(g - q)


def evaluate(fs: FourierSystem, coeffs) -> np.ndarray:
    """Sample values y = U a of the polynomial with coefficients ``coeffs``."""
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (fs.D,):
        raise ValueError(f"expected {fs.D} coefficients, got shape {coeffs.shape}")
    return fs.matrix @ coeffs


def solve_normal(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a x = rhs for Hermitian positive definite ``a``.

    Cholesky factorization plus one step of iterative refinement. Refuses
    matrices with condition number above 1e12.
    """
    a = as_hermitian(a, tol=1e-8 * max(1.0, np.abs(a).max()))
    kappa = condition_number(a)
    if not kappa <= MAX_NORMAL_CONDITION:
        raise SingularNormalMatrixError(f"singular normal matrix (condition number {kappa:.3e})")
    factor = scipy.linalg.cho_factor(a)
    x = scipy.linalg.cho_solve(factor, rhs)
    x = x + scipy.linalg.cho_solve(factor, rhs - a @ x)
    return x


def reconstruct(fs: FourierSystem, y) -> np.ndarray:
    """Least-squares coefficients from samples: solves U^* U a = U^* y."""
    y = np.asarray(y, dtype=complex)
    if y.shape != (fs.n,):
        raise ValueError(f"expected {fs.n} sample values, got shape {y.shape}")
    if fs.n < fs.D:
        raise SingularNormalMatrixError(f"need n >= D samples, got n={fs.n} < D={fs.D}")
    u = fs.matrix
    return solve_normal(u.conj().T @ u, u.conj().T @ y)
