"""Seeded Monte Carlo experiments checking the bounds against simulation.

A row family knows how to draw a random n x D matrix with independent rows,
its expected second moment Q_n and its exact moment constants. Trial ``t``
of an experiment with master seed ``s`` draws from ``rng.stream(s, t)``, so
reports are bit-identical regardless of how many workers run the trials.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import beta

from . import bounds, rng
from .fourier import fourier_matrix, second_moment
from .hermitian import eigvalsh_checked
from .spectrum import Spectrum, is_symmetric
from .stirling import g_eval

SCHEMA_VERSION = 1
CONFIDENCE = 0.99
RANK_TOL = 1e-10
THREADS_ENV = "TRIGSAMPLE_THREADS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def clopper_pearson(k: int, trials: int, level: float = CONFIDENCE) -> tuple[float, float]:
    """Exact two-sided binomial confidence interval for k successes in ``trials``."""
    a = (1 - level) / 2
    lo = 0.0 if k == 0 else float(beta.ppf(a, k, trials - k + 1))
    hi = 1.0 if k == trials else float(beta.ppf(1 - a, k + 1, trials - k))
    return lo, hi


# row families ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundValue:
    name: str
    value: float
    verifiable: bool = True
    caveat: str = ""


class RowFamily:
    """Distribution of a random matrix with independent rows."""

    kind = "abstract"
    real_valued = False
    audited = True

    D: int

    def sample(self, n: int, gen: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def gram(self, u: np.ndarray) -> np.ndarray:
        return second_moment(u)

    def target(self, n: int) -> np.ndarray:
        """Q_n, the expectation of n^{-1} U^* U."""
        raise NotImplementedError

    def profile(self, n: int) -> bounds.MomentProfile:
        raise NotImplementedError

    def theoretical_bounds(self, n: int, eps: float) -> list[BoundValue]:
        p = self.profile(n)
        return [
            BoundValue("noniid_psi", bounds.noniid_psi(n, self.D, eps, p)),
            BoundValue("noniid_psi_refined", bounds.noniid_psi(n, self.D, eps, p, refine=True)),
            BoundValue("noniid_coarse", bounds.noniid_coarse_bound(n, self.D, eps, p)),
        ]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "D": self.D}


class FourierUniform(RowFamily):
    """Rows exp(2 pi i k.x_t), k over a spectrum, x_t uniform on [0, 1]^d."""

    kind = "fourier-uniform"

    def __init__(self, spectrum: Spectrum):
        self.spectrum = spectrum
        self.D = spectrum.size
        self._freqs = spectrum.array().astype(float)

    def sample(self, n, gen):
        return fourier_matrix(self._freqs, gen.random((n, self.spectrum.dim)))

    def gram(self, u):
        g = second_moment(u)
        np.fill_diagonal(g, 1.0)
        return g

    def target(self, n):
        return np.eye(self.D)

    def iid_profile(self) -> bounds.MomentProfile:
        # |Re|, |Im| of centered entries are at most 1, variances 1/2
        return bounds.MomentProfile.bounded(1.0, 0.5)

    def profile(self, n):
        off = 1.0 - np.eye(self.D)
        v = np.stack([off, off]) * (0.5 * n)
        M = np.stack([off, off]) / 3
        return bounds.MomentProfile("non-iid", v_table=v, M_table=M)

    def theoretical_bounds(self, n, eps):
        D = self.D
        out = [
            BoundValue("fourier", bounds.fourier_failure_bound(n, D, eps)),
            BoundValue("main", bounds.main_failure_bound(n, D, eps, self.iid_profile())),
            BoundValue("noniid_psi_refined", bounds.noniid_psi(n, D, eps, self.profile(n), refine=True)),
            BoundValue("moment", bounds.moment_best_m(n, D, eps)[1]),
        ]
        if D > 1 and n >= 2 and is_symmetric(self.spectrum):
            mp = bounds.mp_failure_bound(n, D, bounds.MPParams.fourier_symmetric(D), eps)
            out.append(BoundValue("mp", mp, verifiable=False, caveat=bounds.MP_CAVEAT))
        return out

    def descriptor(self):
        return {"kind": self.kind, "D": self.D, "spectrum": self.spectrum.to_dict()}


class ScaledSign(RowFamily):
    """Row t has independent entries +-sigma_t with equal probability.

    ``sigmas`` is cycled over rows: row t uses sigmas[t % len(sigmas)].
    Q^(t) = sigma_t^2 I; off-diagonal entries of the row outer product are
    bounded by sigma_t^2 with variance sigma_t^4, so M^(t) = sigma_t^2 / 3.
    """

    kind = "scaled-sign"
    real_valued = True

    def __init__(self, sigmas, D: int):
        self.sigmas = np.asarray(sigmas, dtype=float).reshape(-1)
        if self.sigmas.size < 1 or np.any(self.sigmas <= 0):
            raise ValueError("sigmas must be a non-empty sequence of positive scales")
        if D < 1:
            raise ValueError("D must be positive")
        self.D = D

    def row_sigmas(self, n: int) -> np.ndarray:
        return np.resize(self.sigmas, n)

    def sample(self, n, gen):
        signs = 2.0 * gen.integers(0, 2, size=(n, self.D)) - 1.0
        return self.row_sigmas(n)[:, None] * signs

    def target(self, n):
        return np.mean(self.row_sigmas(n) ** 2) * np.eye(self.D)

    def profile(self, n):
        s = self.row_sigmas(n)
        off = 1.0 - np.eye(self.D)
        zero = np.zeros((self.D, self.D))
        v = np.stack([off * np.sum(s**4), zero])
        M = np.stack([off * np.max(s**2) / 3, zero])
        return bounds.MomentProfile("non-iid", v_table=v, M_table=M)

    def descriptor(self):
        return {"kind": self.kind, "D": self.D, "sigmas": self.sigmas.tolist()}


class CustomFamily(RowFamily):
    """User-supplied family; its moment profile is not audited."""

    kind = "custom"
    audited = False

    def __init__(self, name: str, D: int, sampler: Callable, target: Callable, profile: Callable):
        self.name = name
        self.D = D
        self._sampler, self._target, self._profile = sampler, target, profile

    def sample(self, n, gen):
        return np.asarray(self._sampler(n, gen))

    def target(self, n):
        return np.asarray(self._target(n))

    def profile(self, n):
        return self._profile(n)

    def descriptor(self):
        return {"kind": self.kind, "D": self.D, "id": self.name}


# trial machinery ------------------------------------------------------------


@dataclass(frozen=True)
class TrialStats:
    """Per-trial arrays: spectral deviation, extremal Gram eigenvalues and the
    eigenvalues of the deviation matrix n^{-1} U^* U - Q_n.
    """

    deviation: np.ndarray
    lambda_min: np.ndarray
    lambda_max: np.ndarray
    dev_eigs: np.ndarray


def _one_trial(family: RowFamily, n: int, q: np.ndarray, seed: int, t: int):
    u = family.sample(n, rng.stream(seed, t))
    if u.shape != (n, family.D):
        raise ValueError(f"family produced shape {u.shape}, expected {(n, family.D)}")
    g = family.gram(u)
    ev = eigvalsh_checked(g - q)
    gv = eigvalsh_checked(g)
    return max(abs(ev[0]), abs(ev[-1])), gv[0], gv[-1], ev


def run_trials(family: RowFamily, n: int, trials: int, seed: int, workers: int | None = None,
               indices=None) -> TrialStats:
    """Run trials ``indices`` (default 0..trials-1); results follow index order."""
    if n < 1:
        raise ValueError("n must be positive")
    idx = list(range(trials)) if indices is None else list(indices)
    q = family.target(n)
    if q.shape != (family.D, family.D):
        raise ValueError(f"Q_n has shape {q.shape}, expected {(family.D, family.D)}")
    workers = default_workers() if workers is None else workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(lambda t: _one_trial(family, n, q, seed, t), idx))
    else:
        res = [_one_trial(family, n, q, seed, t) for t in idx]
    dev, lo, hi, ev = zip(*res) if res else ((), (), (), ())
    return TrialStats(np.array(dev), np.array(lo), np.array(hi), np.array(ev).reshape(len(res), family.D))


# reports ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    verdict: str
    verifiable: bool = True
    caveat: str = ""


CSV_COLUMNS = [
    "schema", "family", "n", "D", "eps", "trials", "seed", "failure_count",
    "empirical_rate", "cp_lower", "cp_upper", "bound", "bound_value", "verdict", "verifiable",
]


@dataclass(frozen=True)
class ExperimentReport:
    family: dict
    n: int
    D: int
    eps: float
    trials: int
    seed: int
    failure_count: int
    empirical_rate: float
    cp_lower: float
    cp_upper: float
    bounds: tuple[BoundCheck, ...]
    rank_deficient_trials: int = 0
    audited: bool = True
    caveats: tuple[str, ...] = ()
    confidence: float = CONFIDENCE

    @property
    def violated(self) -> bool:
        """True if any verifiable bound is contradicted by the simulation."""
        return any(b.verdict == "violated" and b.verifiable for b in self.bounds)

    def bound(self, name: str) -> BoundCheck:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "n": self.n,
            "D": self.D,
            "eps": self.eps,
            "trials": self.trials,
            "seed": self.seed,
            "failure_count": self.failure_count,
            "empirical_rate": self.empirical_rate,
            "confidence": self.confidence,
            "cp_lower": self.cp_lower,
            "cp_upper": self.cp_upper,
            "rank_deficient_trials": self.rank_deficient_trials,
            "audited": self.audited,
            "bounds": [
                {"name": b.name, "value": b.value, "verdict": b.verdict,
                 "verifiable": b.verifiable, "caveat": b.caveat}
                for b in self.bounds
            ],
            "caveats": list(self.caveats),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for b in self.bounds:
            w.writerow([
                SCHEMA_VERSION, self.family["kind"], self.n, self.D, repr(self.eps), self.trials,
                self.seed, self.failure_count, repr(self.empirical_rate), repr(self.cp_lower),
                repr(self.cp_upper), b.name, repr(b.value), b.verdict, int(b.verifiable),
            ])
        return buf.getvalue()


def _verdict(cp_lower: float, bound_value: float) -> str:
    return "violated" if cp_lower > bound_value else "consistent"


def run_tail_experiment(family: RowFamily, n: int, eps: float, trials: int, seed: int,
                        workers: int | None = None) -> ExperimentReport:
    """Estimate P(||n^{-1} U^* U - Q_n|| >= eps) and compare with every bound
    that applies to the family. A bound is "violated" when the lower 99%
    Clopper-Pearson limit of the empirical failure rate exceeds it.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if not eps > 0:
        raise ValueError("eps must be positive")
    stats = run_trials(family, n, trials, seed, workers)
    failures = int(np.count_nonzero(stats.deviation >= eps))
    lo, hi = clopper_pearson(failures, trials)
    checks = tuple(
        BoundCheck(b.name, b.value, _verdict(lo, b.value), b.verifiable, b.caveat)
        for b in family.theoretical_bounds(n, eps)
    )
    caveats = []
    if not family.audited:
        caveats.append("unaudited: moment profile supplied by caller")
    if any(not b.verifiable for b in checks):
        caveats.append(bounds.MP_CAVEAT)
    return ExperimentReport(
        family=family.descriptor(), n=n, D=family.D, eps=eps, trials=trials, seed=seed,
        failure_count=failures, empirical_rate=failures / trials, cp_lower=lo, cp_upper=hi,
        bounds=checks, rank_deficient_trials=int(np.count_nonzero(stats.lambda_min <= RANK_TOL)),
        audited=family.audited, caveats=tuple(caveats),
    )


@dataclass(frozen=True)
class SandwichResult:
    fraction: float
    inside: np.ndarray = field(repr=False)
    norm_ok: np.ndarray = field(repr=False)
    lower: float = 0.0
    upper: float = 0.0
    cp_lower: float = 0.0
    cp_upper: float = 1.0


def run_eigen_sandwich(family: RowFamily, n: int, eps: float, trials: int, seed: int,
                       workers: int | None = None) -> SandwichResult:
    """Fraction of trials with lambda_min(Q_n) - eps < lambda_min and
    lambda_max < lambda_max(Q_n) + eps for the sample Gram matrix.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    qv = eigvalsh_checked(family.target(n))
    lower, upper = float(qv[0]) - eps, float(qv[-1]) + eps
    stats = run_trials(family, n, trials, seed, workers)
    inside = (stats.lambda_min > lower) & (stats.lambda_max < upper)
    k = int(np.count_nonzero(inside))
    lo, hi = clopper_pearson(k, trials)
    return SandwichResult(k / trials, inside, stats.deviation < eps, lower, upper, lo, hi)


@dataclass(frozen=True)
class FrobeniusMomentResult:
    empirical_mean: float
    theoretical: float
    standard_error: float
    m: int
    n: int
    D: int
    trials: int


def run_frobenius_moment(family: FourierUniform, n: int, m: int, trials: int, seed: int,
                         workers: int | None = None) -> FrobeniusMomentResult:
    """Mean of ||(n^{-1} U^* U - I)^m||_F^2 against D G_{2m}(n / D)."""
    if not isinstance(family, FourierUniform):
        raise TypeError("Frobenius moment comparison applies to fourier-uniform families")
    if m < 1:
        raise ValueError("m must be positive")
    if trials < 500:
        raise ValueError("need at least 500 trials")
    stats = run_trials(family, n, trials, seed, workers)
    # ||H^m||_F^2 = sum_i lambda_i(H)^{2m} for Hermitian H
    vals = np.sum(stats.dev_eigs ** (2 * m), axis=1)
    mean = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(trials))
    theo = family.D * g_eval(2 * m, n / family.D)
    return FrobeniusMomentResult(mean, theo, se, m, n, family.D, trials)


def family_from_descriptor(desc: dict) -> RowFamily:
    kind = desc["kind"]
    if kind in ("fourier", "fourier-uniform"):
        return FourierUniform(Spectrum.from_dict(desc["spectrum"]))
    if kind in ("scaledsign", "scaled-sign"):
        return ScaledSign(desc["sigmas"], int(desc["D"]))
    raise ValueError(f"cannot rebuild family of kind {kind!r}")
