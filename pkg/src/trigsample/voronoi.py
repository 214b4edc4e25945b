"""Voronoi quadrature weights of sample points and the weighted matrix U^* W U.

Cells are nearest-point regions of [0, 1]^d under the plain Euclidean metric
(no periodic wrap-around). In one dimension the weights are exact interval
lengths; in higher dimensions they are Monte Carlo estimates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import rng
from .errors import DegenerateVoronoiCellError
from .fourier import FourierSystem, SampleSet

MAX_PROBES = 10_000_000
PROBE_CHUNK = 200_000


@dataclass(frozen=True)
class WeightVector:
    weights: np.ndarray
    method: str
    probe_count: int = 0
    mc_std_error: float = 0.0

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "weights": self.weights.tolist(),
            "probe_count": self.probe_count,
            "mc_std_error": self.mc_std_error,
        }


def voronoi_weights_1d(points) -> WeightVector:
    """Exact cell lengths of distinct points in [0, 1], in input order.

    Cell boundaries are midpoints of sorted neighbours. A final correction
    makes the weights sum to 1 under exactly rounded summation.
    """
    x = np.asarray(points, dtype=float).reshape(-1)
    if x.size < 1:
        raise ValueError("need at least one point")
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("points must lie in [0, 1]")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if np.any(np.diff(xs) == 0):
        raise DegenerateVoronoiCellError("degenerate Voronoi cell: duplicate points")
    edges = np.concatenate([[0.0], (xs[:-1] + xs[1:]) / 2, [1.0]])
    cells = np.diff(edges)
    for _ in range(4):
        resid = math.fsum([1.0, *(-cells)])
        if resid == 0.0:
            break
        i = int(np.argmax(cells))
        cells[i] += resid
    w = np.empty_like(cells)
    w[order] = cells
    return WeightVector(w, "exact-1d")


def _nearest(tree: cKDTree, probes: np.ndarray, n: int) -> np.ndarray:
    if n == 1:
        return np.zeros(len(probes), dtype=np.intp)
    dist, idx = tree.query(probes, k=2)
    # ties go to the smaller sample index
    tie = dist[:, 0] == dist[:, 1]
    return np.where(tie, idx.min(axis=1), idx[:, 0])


def default_probes(n: int) -> int:
    return int(min(max(200 * n, 1000), MAX_PROBES))


def voronoi_weights_mc(samples: SampleSet, probes: int | None = None, seed: int = 0) -> WeightVector:
    """Monte Carlo Voronoi weights: the fraction of uniform probe points whose
    nearest sample (Euclidean) is x_t. Probe chunk ``c`` is drawn from stream
    ``(seed, VORONOI_STREAM, c)``.
    """
    pts = samples.points
    n, d = pts.shape
    probes = default_probes(n) if probes is None else int(probes)
    if probes < 1000:
        raise ValueError("need at least 1000 probes")
    if n == 1:
        return WeightVector(np.ones(1), "monte-carlo", probes, 0.0)
    tree = cKDTree(pts)
    counts = np.zeros(n, dtype=np.int64)
    for c, start in enumerate(range(0, probes, PROBE_CHUNK)):
        size = min(PROBE_CHUNK, probes - start)
        y = rng.stream(seed, rng.VORONOI_STREAM, c).random((size, d))
        counts += np.bincount(_nearest(tree, y, n), minlength=n)
    w = counts / probes
    se = math.sqrt(float(np.max(w * (1 - w))) / probes)
    return WeightVector(w, "monte-carlo", probes, se)


def voronoi_weights(samples: SampleSet, probes: int | None = None, seed: int = 0) -> WeightVector:
    """Exact weights in one dimension, Monte Carlo estimates otherwise."""
    if samples.dim == 1:
        return voronoi_weights_1d(samples.points[:, 0])
    return voronoi_weights_mc(samples, probes, seed)


def _weights_array(fs: FourierSystem, w) -> np.ndarray:
    w = np.asarray(w.weights if isinstance(w, WeightVector) else w, dtype=float)
    if w.shape != (fs.n,):
        raise ValueError(f"weight length {w.shape} does not match n = {fs.n}")
    return w


def weighted_gram(fs: FourierSystem, w) -> np.ndarray:
    """T^w = U^* W U with W = diag(w). Not divided by n."""
    w = _weights_array(fs, w)
    u = fs.matrix
    t = u.conj().T @ (w[:, None] * u)
    return (t + t.conj().T) / 2


def weighted_rhs(fs: FourierSystem, w, y) -> np.ndarray:
    """U^* W y, the right-hand side of the weighted normal equation."""
    w = _weights_array(fs, w)
    return fs.matrix.conj().T @ (w * np.asarray(y))
