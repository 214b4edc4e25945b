"""Closed-form failure-probability bounds and sample-size formulas.

Every ``*_bound`` function returns an upper bound on

    P( ||n^{-1} U^* U - Q|| >= eps )

clamped to [0, 1]. Every ``*_min_n`` function returns the smallest integer
sample size satisfying the corresponding sufficient condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import TrigSampleError, UnsatisfiableError
from .stirling import log_g_eval

SQRT2 = math.sqrt(2.0)
MP_CAVEAT = "non-verifiable: depends on unspecified absolute constant c"


def _check_open_unit(name, value):
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def _exp_clamped(log_prefactor: float, exponent: float) -> float:
    """min(1, exp(log_prefactor + exponent)) without overflow."""
    s = log_prefactor + exponent
    return 1.0 if s >= 0 else math.exp(s)


def _union(prefactor: float, exponent: float) -> float:
    """min(1, prefactor * exp(exponent)) for exponent <= 0."""
    return min(1.0, prefactor * math.exp(exponent))


# moment profiles ---------------------------------------------------------


@dataclass(frozen=True)
class MomentProfile:
    """Constants of the moment condition E|X|^l <= l! M^{l-2} v / 2.

    ``variant="iid"`` carries the scalars (M, v), maximized over all entries
    (k, j) and over real and imaginary parts.

    ``variant="non-iid"`` carries arrays of shape (2, D, D) indexed by
    (part, k, j), part 0 real and part 1 imaginary: ``v_table`` holds the
    per-row constants summed over rows, ``M_table`` their maxima over rows.
    """

    variant: str
    M: float = 0.0
    v: float = 0.0
    v_table: np.ndarray | None = field(default=None, repr=False)
    M_table: np.ndarray | None = field(default=None, repr=False)
    audited: bool = True

    def __post_init__(self):
        if self.variant == "iid":
            if self.M < 0 or self.v < 0:
                raise ValueError("moment constants must be nonnegative")
        elif self.variant == "non-iid":
            vt = np.asarray(self.v_table, dtype=float)
            mt = np.asarray(self.M_table, dtype=float)
            if vt.ndim != 3 or vt.shape[0] != 2 or vt.shape[1] != vt.shape[2] or vt.shape != mt.shape:
                raise ValueError("v_table and M_table must both have shape (2, D, D)")
            if np.any(vt < 0) or np.any(mt < 0):
                raise ValueError("moment constants must be nonnegative")
            object.__setattr__(self, "v_table", vt)
            object.__setattr__(self, "M_table", mt)
            # scalar summaries are always recomputed from the tables
            object.__setattr__(self, "v", float(vt.max()))
            object.__setattr__(self, "M", float(mt.max()))
        else:
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def iid(cls, M: float, v: float) -> MomentProfile:
        return cls("iid", M=float(M), v=float(v))

    @classmethod
    def bounded(cls, C: float, b: float) -> MomentProfile:
        """Entries bounded by C with variances at most b: M = C/3, v = b."""
        return cls.iid(C / 3, b)

    @classmethod
    def from_rows(cls, v_rows, M_rows) -> MomentProfile:
        """Aggregate per-row constants of shape (n, 2, D, D)."""
        v_rows = np.asarray(v_rows, dtype=float)
        M_rows = np.asarray(M_rows, dtype=float)
        return cls("non-iid", v_table=v_rows.sum(axis=0), M_table=M_rows.max(axis=0))

    @property
    def D(self) -> int | None:
        return None if self.v_table is None else self.v_table.shape[1]

    @property
    def v_n(self) -> float:
        return self.v

    @property
    def M_n(self) -> float:
        return self.M


# Bennett / Bernstein ------------------------------------------------------


def bennett_tail(x: float, M: float, v_sum: float) -> float:
    """Bennett's bound on P(|X_1 + ... + X_n| >= x) for centered summands
    satisfying the moment condition with constants M and v_t (v_sum = sum v_t).
    Zero when M = v_sum = 0.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    if M < 0 or v_sum < 0:
        raise ValueError("M and v_sum must be nonnegative")
    denom = 2 * (v_sum + M * x)
    if denom == 0:
        return 0.0
    return _union(2.0, -(x * x) / denom)


def _entry_exponent(n, D, eps, v_avg, M):
    """Exponent -n eps^2 / (D^2 (4 v_avg + 2 sqrt2 M eps / D)); -inf if degenerate."""
    denom = D * D * (4 * v_avg + 2 * SQRT2 * M * eps / D)
    if denom == 0:
        return -math.inf
    return -n * eps * eps / denom


def main_failure_bound(n: int, D: int, eps: float, profile: MomentProfile, real_valued: bool = False) -> float:
    """Union-bound failure probability for i.i.d. rows.

    complex: 4 D^2 exp(-n eps^2 / (D^2 (4v + 2 sqrt2 M eps / D)))
    real:    2 D^2 exp(-n eps^2 / (2 D^2 (v + M eps / D)))
    """
    if profile.variant != "iid":
        raise ValueError("main_failure_bound needs an i.i.d. moment profile")
    if n < 1 or D < 1 or not eps > 0:
        raise ValueError("need n >= 1, D >= 1, eps > 0")
    M, v = profile.M, profile.v
    if real_valued:
        denom = 2 * D * D * (v + M * eps / D)
        expo = -math.inf if denom == 0 else -n * eps * eps / denom
        return _union(2 * D * D, expo)
    return _union(4 * D * D, _entry_exponent(n, D, eps, v, M))


def bounded_failure_bound(n: int, D: int, eps: float, C: float, b: float, improved: bool = False) -> float:
    """Failure bound for rows whose centered entries are bounded by C.

    The plain form is ``main_failure_bound`` with M = C/3, v = b. The improved
    form uses Bennett's sharper inequality for bounded summands:

        4 D^2 exp(-n b ((1+u) ln(1+u) - u) / C^2),  u = C eps / (sqrt2 D b).
    """
    if not improved:
        return main_failure_bound(n, D, eps, MomentProfile.bounded(C, b))
    if not (C > 0 and b > 0):
        raise TrigSampleError("improved bound undefined: needs C > 0 and b > 0")
    if n < 1 or D < 1 or not eps > 0:
        raise ValueError("need n >= 1, D >= 1, eps > 0")
    u = C * eps / (SQRT2 * D * b)
    h = (1 + u) * math.log1p(u) - u
    return _union(4 * D * D, -n * b * h / (C * C))


def noniid_psi(n: int, D: int, eps: float, profile: MomentProfile, refine: bool = False) -> float:
    """Failure bound for independent, not identically distributed rows:

        Psi = 2 sum_{part, k, j} exp(-n eps^2 / (D^2 (4 v_kj/n + 2 sqrt2 M_kj eps / D)))

    Entries with v = M = 0 vanish almost surely and contribute nothing. With
    ``refine=True`` each term of row k uses D_k, the number of entries of row
    k that are not identically zero, in place of D.
    """
    if profile.variant != "non-iid":
        raise ValueError("noniid_psi needs a non-i.i.d. moment profile")
    if profile.D != D:
        raise ValueError(f"table shape mismatch: tables are {profile.D}x{profile.D}, D={D}")
    if n < 1 or not eps > 0:
        raise ValueError("need n >= 1 and eps > 0")
    vt, mt = profile.v_table, profile.M_table
    live = (vt > 0) | (mt > 0)
    if refine:
        dk = np.any(live, axis=0).sum(axis=1)  # per row k, over j and both parts
    terms = []
    for part in range(2):
        for k in range(D):
            Dk = int(dk[k]) if refine else D
            for j in range(D):
                if not live[part, k, j]:
                    continue
                expo = _entry_exponent(n, Dk, eps, vt[part, k, j] / n, mt[part, k, j])
                terms.append(math.exp(expo))
    return _clamp(2 * math.fsum(terms))


def noniid_coarse_bound(n: int, D: int, eps: float, profile: MomentProfile) -> float:
    """4 D^2 exp(-n eps^2 / (D^2 (4 v_n/n + 2 sqrt2 M_n eps / D))), which dominates Psi."""
    if profile.variant != "non-iid":
        raise ValueError("needs a non-i.i.d. moment profile")
    return _union(4 * D * D, _entry_exponent(n, D, eps, profile.v_n / n, profile.M_n))


# uniformly sampled Fourier matrices ---------------------------------------


def fourier_failure_bound(n: int, D: int, eps: float) -> float:
    """4 D (D-1) exp(-n eps^2 / (2 ((D-1)^2 + sqrt2 (D-1) eps / 3))); 0 for D = 1."""
    if n < 1 or D < 1 or not eps > 0:
        raise ValueError("need n >= 1, D >= 1, eps > 0")
    if D == 1:
        return 0.0
    a = D - 1
    expo = -n * eps * eps / (2 * (a * a + SQRT2 * a * eps / 3))
    return _union(4 * D * a, expo)


def fourier_min_n_real(D: int, eps: float, delta: float) -> float:
    a = D - 1
    return (2 / eps**2) * (a * a + SQRT2 * a * eps / 3) * math.log(4 * D * a / delta)


def fourier_min_n(D: int, eps: float, delta: float) -> int:
    """Smallest n with n >= (2/eps^2)((D-1)^2 + sqrt2 (D-1) eps/3) ln(4 D (D-1)/delta)."""
    _check_open_unit("eps", eps)
    _check_open_unit("delta", delta)
    if D < 1:
        raise ValueError("D must be positive")
    if D == 1:
        return 1
    return max(1, math.ceil(fourier_min_n_real(D, eps, delta)))


# Mendelson-Pajor ------------------------------------------------------------


@dataclass(frozen=True)
class MPParams:
    """Parameters of the Mendelson-Pajor bound.

    rho: fourth-moment constant of the rows; z_orlicz: psi_alpha Orlicz norm of
    the row Euclidean norm; c: the unspecified absolute constant.
    """

    rho: float
    z_orlicz: float
    alpha: float
    lambda_max_q: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if min(self.rho, self.z_orlicz, self.lambda_max_q, self.c) <= 0:
            raise ValueError("MP parameters must be positive")
        if self.alpha < 1:
            raise ValueError("alpha must be >= 1")

    @classmethod
    def fourier_symmetric(cls, D: int, alpha: float = 2.0, c: float = 1.0) -> MPParams:
        """Constants for a Fourier matrix over a symmetric spectrum."""
        return cls(rho=D**0.25, z_orlicz=math.sqrt(D) * math.log(2) ** (-1 / alpha), alpha=alpha, c=c)


def mp_terms(n: int, D: int, params: MPParams) -> tuple[float, float]:
    """(A_n, B_n) of the Mendelson-Pajor bound."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a_n = params.z_orlicz * math.sqrt(math.log(min(D, n))) * math.log(n) ** (1 / params.alpha) / math.sqrt(n)
    b_n = params.rho**2 / math.sqrt(n) + math.sqrt(params.lambda_max_q) * a_n
    return a_n, b_n


def mp_failure_bound(n: int, D: int, params: MPParams, eps: float) -> float:
    """2 exp(-(c eps / max(B_n, A_n^2))^{alpha/(alpha+2)}). See ``MP_CAVEAT``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    a_n, b_n = mp_terms(n, D, params)
    scale = max(b_n, a_n * a_n)
    expo = -((params.c * eps / scale) ** (params.alpha / (params.alpha + 2)))
    return _union(2.0, expo)


def better_bound_terms(D: int, eps: float, delta: float, c: float = 1.0) -> tuple[float, float, float]:
    """The three lower bounds on n whose maximum is the symmetric-spectrum sample size."""
    _check_open_unit("eps", eps)
    _check_open_unit("delta", delta)
    if c <= 0 or D < 1:
        raise ValueError("need c > 0 and D >= 1")
    L = math.log(2 / delta) / (c * eps)
    dlog = D * math.log(D)
    return float(D), L * dlog, L * L * (math.sqrt(D) + math.sqrt(dlog)) ** 2


def better_bound_min_n(D: int, eps: float, delta: float, c: float = 1.0) -> int:
    return math.ceil(max(better_bound_terms(D, eps, delta, c)))


# Voronoi-weighted matrix ------------------------------------------------


def detprob_threshold(m: int, d: int, gamma: float, delta: float) -> float:
    """K ln(K / delta) with K = (2 pi d / (gamma ln 2))^d m^d."""
    _check_open_unit("gamma", gamma)
    _check_open_unit("delta", delta)
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    K = (2 * math.pi * d / (gamma * math.log(2))) ** d * m**d
    return K * math.log(K / delta)


def detprob_min_n(m: int, d: int, gamma: float, delta: float) -> int:
    """Sample size after which the Voronoi-weighted matrix T^w of a full cube
    spectrum of degree m has condition number at most ``detprob_cond_bound``
    with probability at least 1 - delta.
    """
    return math.ceil(detprob_threshold(m, d, gamma, delta))


def detprob_cond_bound(gamma: float) -> float:
    """(1 - 2^{gamma-1})^{-2}, equal to 4 (2 - 2^gamma)^{-2}."""
    _check_open_unit("gamma", gamma)
    return (1 - 2 ** (gamma - 1)) ** -2


# moment method ----------------------------------------------------------


def log_moment_failure_bound(n: int, D: int, eps: float, m: int) -> float:
    if n < 1 or D < 1 or m < 1 or not eps > 0:
        raise ValueError("need n, D, m >= 1 and eps > 0")
    return -2 * m * math.log(eps) + math.log(D) + log_g_eval(2 * m, n / D)


def moment_failure_bound(n: int, D: int, eps: float, m: int) -> float:
    """eps^{-2m} D G_{2m}(n / D), clamped to 1."""
    return _exp_clamped(0.0, log_moment_failure_bound(n, D, eps, m))


MAX_MOMENT_ORDER = 2000


def moment_best_m(n: int, D: int, eps: float, m_cap: int | None = None) -> tuple[int, float]:
    """Moment order m in [1, m_cap] minimizing the moment bound; ties go to the smaller m.

    ``m_cap`` defaults to floor(n / (3D)) + 5, limited to ``MAX_MOMENT_ORDER``.
    """
    if m_cap is None:
        m_cap = min(n // (3 * D) + 5, MAX_MOMENT_ORDER)
    best_m, best_log = 1, log_moment_failure_bound(n, D, eps, 1)
    for m in range(2, m_cap + 1):
        lb = log_moment_failure_bound(n, D, eps, m)
        if lb < best_log:
            best_m, best_log = m, lb
    return best_m, _exp_clamped(0.0, best_log)


def uniform_required_m(D: int, eps: float, alpha: float, delta: float) -> float:
    """[ln(eps^2 / alpha)]^{-1} ln(D / (delta (1 - alpha)))."""
    _check_open_unit("eps", eps)
    if not 0 < alpha < eps * eps:
        raise TrigSampleError(f"alpha out of range: need 0 < alpha < eps^2 = {eps * eps}")
    if not delta > 0:
        raise ValueError("delta must be positive")
    return math.log(D / (delta * (1 - alpha))) / math.log(eps * eps / alpha)


def uniform_condition_holds(n: int, D: int, eps: float, alpha: float, delta: float) -> bool:
    """floor(alpha n / (3D)) >= max(1, required m)."""
    m = math.floor(alpha * n / (3 * D))
    return m >= 1 and m >= uniform_required_m(D, eps, alpha, delta)


def uniform_min_n(D: int, eps: float, alpha: float, delta: float) -> int:
    """Smallest n satisfying ``uniform_condition_holds``."""
    req = max(1, math.ceil(uniform_required_m(D, eps, alpha, delta)))
    n = max(1, math.ceil(3 * D * req / alpha))
    # settle floating-point edge cases against the predicate itself
    while not uniform_condition_holds(n, D, eps, alpha, delta):
        n += 1
    while n > 1 and uniform_condition_holds(n - 1, D, eps, alpha, delta):
        n -= 1
    return n


def uniform_simple_threshold(D: int, eps: float, delta: float) -> float:
    return 3 * D * math.e / eps**2 * (math.log(D / delta) + 2 - math.log(math.e - 1))


def uniform_simple_min_n(D: int, eps: float, delta: float) -> int:
    """ceil((3 D e / eps^2)(ln(D/delta) + 2 - ln(e - 1))): the moment-method
    condition with alpha = eps^2 / e, relaxed to a closed form.
    """
    _check_open_unit("eps", eps)
    if not delta > 0 or D < 1:
        raise ValueError("need delta > 0 and D >= 1")
    return math.ceil(uniform_simple_threshold(D, eps, delta))


# generic solver -----------------------------------------------------------

N_LIMIT = 2**62


def solve_min_n(bound: Callable[[int], float], delta: float, n_start: int = 1) -> int:
    """Smallest n >= n_start with bound(n) <= delta, for bound nonincreasing in n.

    Exponential search for a feasible n, then bisection. Monotonicity is
    spot-checked along the search path.
    """
    _check_open_unit("delta", delta)
    lo, hi = n_start - 1, n_start
    prev = bound(hi)
    while prev > delta:
        if hi >= N_LIMIT:
            raise UnsatisfiableError(f"bound({N_LIMIT}) = {prev} > delta = {delta}")
        lo, hi = hi, min(2 * hi, N_LIMIT)
        cur = bound(hi)
        if cur > prev * (1 + 1e-12) + 1e-300:
            raise ValueError(f"bound is not nonincreasing: bound({lo})={prev} < bound({hi})={cur}")
        prev = cur
    # invariant: bound(hi) <= delta and (lo < n_start or bound(lo) > delta)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= delta:
            hi = mid
        else:
            lo = mid
    return hi


# certificates -------------------------------------------------------------


def certified_condition_number(eps: float, lambda_min_q: float = 1.0, lambda_max_q: float = 1.0) -> float:
    """Condition number implied by ||n^{-1} U^* U - Q|| < eps:
    (lambda_max(Q) + eps) / (lambda_min(Q) - eps), infinite if eps >= lambda_min(Q).
    """
    if eps >= lambda_min_q:
        return math.inf
    return (lambda_max_q + eps) / (lambda_min_q - eps)


@dataclass(frozen=True)
class Certificate:
    """A probability statement about the deviation of the sample Gram matrix.

    With probability at least ``1 - failure_probability`` the deviation is
    below ``eps``; the condition number is then at most
    ``certified_condition_number``.
    """

    formula: str
    eps: float
    failure_probability: float | None = None
    n: int | None = None
    lambda_min_q: float = 1.0
    lambda_max_q: float = 1.0
    caveats: tuple[str, ...] = ()

    @property
    def certified_condition_number(self) -> float:
        return certified_condition_number(self.eps, self.lambda_min_q, self.lambda_max_q)
