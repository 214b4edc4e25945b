"""Associated Stirling numbers of the second kind and the polynomials F_m, G_m.

``S2(m, k)`` counts partitions of an m-element set into k blocks, none of
them a singleton. With them

    F_m(z) = sum_k S2(m, k) z^k,        G_m(z) = z^{-m} F_m(z),

and ``D * G_{2m}(n / D)`` bounds the expected squared Frobenius norm of
``(n^{-1} U^* U - I)^m`` for a uniformly sampled Fourier matrix.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .errors import TrigSampleError

EXACT_MAX_M = 400


class AssocStirlingTable:
    """Exact table of S2(m, k) for 0 <= m <= max_m, built by recurrence.

    Element m either joins one of the k blocks of a partition of the other
    m - 1 elements, or forms a pair with one of them, leaving a partition of
    m - 2 elements into k - 1 blocks:

        S2(m, k) = k S2(m-1, k) + (m-1) S2(m-2, k-1).
    """

    def __init__(self, max_m: int):
        if max_m < 0:
            raise ValueError("max_m must be nonnegative")
        self.max_m = max_m
        rows: list[list[int]] = [[1]]  # S2(0, 0) = 1
        for m in range(1, max_m + 1):
            row = [0] * (m // 2 + 1)
            for k in range(1, m // 2 + 1):
                a = k * rows[m - 1][k] if k < len(rows[m - 1]) else 0
                b = (m - 1) * rows[m - 2][k - 1] if m >= 2 and k - 1 < len(rows[m - 2]) else 0
                row[k] = a + b
            rows.append(row)
        self._rows = rows

    def __call__(self, m: int, k: int) -> int:
        if m < 0 or m > self.max_m:
            raise IndexError(f"m={m} outside table range 0..{self.max_m}")
        row = self._rows[m]
        return row[k] if 0 <= k < len(row) else 0

    def row(self, m: int) -> list[int]:
        """Coefficients [S2(m, 0), ..., S2(m, m // 2)] of F_m."""
        return list(self._rows[m])


@lru_cache(maxsize=8)
def _table(max_m: int) -> AssocStirlingTable:
    return AssocStirlingTable(max_m)


def table(max_m: int) -> AssocStirlingTable:
    # round up so repeated calls share a handful of cached tables
    size = 64
    while size < max_m:
        size *= 2
    return _table(size)


def assoc_stirling2(m: int, k: int) -> int:
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    if k > m // 2:
        return 0
    return table(m)(m, k)


def f_poly(m: int, z):
    """F_m(z); exact when ``z`` is an int or Fraction."""
    total = 0
    for k, s in enumerate(table(m).row(m)):
        if s:
            total += s * z**k
    return total


def g_exact(m: int, theta) -> Fraction:
    """G_m(theta) in rational arithmetic (``theta`` int or Fraction)."""
    theta = Fraction(theta)
    if theta <= 0:
        raise ValueError("theta must be positive")
    return f_poly(m, theta) / theta**m


class _LogTable:
    """Rows of log S2(m, k), k = 0..m//2, grown on demand with the same
    recurrence as the exact table, in floating point."""

    def __init__(self):
        self.rows = [np.zeros(1), np.full(1, -np.inf)]
        self.lock = threading.Lock()

    def row(self, m: int) -> np.ndarray:
        with self.lock:
            while len(self.rows) <= m:
                i = len(self.rows)
                prev, prev2 = self.rows[i - 1], self.rows[i - 2]
                k = np.arange(i // 2 + 1)
                a = np.full(k.size, -np.inf)
                a[1 : prev.size] = np.log(k[1 : prev.size]) + prev[1:]
                b = np.full(k.size, -np.inf)
                b[1 : prev2.size + 1] = math.log(i - 1) + prev2
                self.rows.append(np.logaddexp(a, b))
            return self.rows[m]


_log_table = _LogTable()


def log_stirling_row(m: int) -> np.ndarray:
    """log S2(m, k) for k = 0..m//2 (``-inf`` where S2 vanishes)."""
    return _log_table.row(m)


def _g_ratio(m: int, theta) -> tuple[int, int]:
    """Integers (num, den) with G_m(theta) = num / den, exact for float theta.

    Writing theta = p / q, G_m(theta) = sum_k S2(m, k) p^k q^(m-k) / p^m.
    """
    p, q = Fraction(theta).as_integer_ratio()
    num = sum(s * p**k * q ** (m - k) for k, s in enumerate(table(m).row(m)) if s)
    return num, p**m


def _check_g_args(m, theta):
    if m < 1:
        raise ValueError("m must be positive")
    if not theta > 0 or not math.isfinite(theta):
        raise ValueError("theta must be positive and finite")


def log_g_eval(m: int, theta: float) -> float:
    """log G_m(theta); ``-inf`` when G_m vanishes (m = 1)."""
    _check_g_args(m, theta)
    if m <= EXACT_MAX_M:
        num, den = _g_ratio(m, theta)
        return -math.inf if num == 0 else math.log(num) - math.log(den)
    logs = log_stirling_row(m)
    k = np.arange(logs.size)
    return float(logsumexp(logs + (k - m) * math.log(theta)))


def g_eval(m: int, theta: float) -> float:
    """G_m(theta) = theta^{-m} sum_k S2(m, k) theta^k.

    For m <= 400 the sum is formed exactly in integer arithmetic and rounded
    once; larger m use log-domain summation. Neither route overflows before
    the result itself does.
    """
    _check_g_args(m, theta)
    if m > EXACT_MAX_M:
        return math.exp(log_g_eval(m, theta))
    num, den = _g_ratio(m, theta)
    try:
        return num / den
    except OverflowError:
        return math.inf


def g_tail_bound(m: int, theta: float) -> float:
    """Closed-form upper bound on G_{2m}(theta), valid when 3m / theta < 1:

        (3m/theta)^m (1 - (3m/theta)^m) / (1 - 3m/theta).
    """
    if m < 1:
        raise ValueError("m must be positive")
    r = 3 * m / theta
    if not 0 < r < 1:
        raise TrigSampleError(f"ratio out of range: 3m/theta = {r} must lie in (0, 1)")
    rm = r**m
    return rm * (1 - rm) / (1 - r)


def g_tail_bound_exact(m: int, theta) -> Fraction:
    r = Fraction(3 * m) / Fraction(theta)
    if not 0 < r < 1:
        raise TrigSampleError(f"ratio out of range: 3m/theta = {float(r)} must lie in (0, 1)")
    return r**m * (1 - r**m) / (1 - r)
