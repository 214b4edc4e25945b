import csv
import io
import json

import numpy as np
import pytest

from trigsample import bounds
from trigsample.montecarlo import (
    CSV_COLUMNS,
    CustomFamily,
    FourierUniform,
    ScaledSign,
    clopper_pearson,
    family_from_descriptor,
    run_eigen_sandwich,
    run_frobenius_moment,
    run_tail_experiment,
    run_trials,
)
from trigsample.spectrum import cube_spectrum, line_spectrum


def test_fourier_single_frequency_never_fails():
    rep = run_tail_experiment(FourierUniform(line_spectrum(1)), 5, 0.1, 100, seed=1)
    assert rep.failure_count == 0
    assert rep.empirical_rate == 0.0
    assert not rep.violated


def test_scaled_sign_unit_scalar_deviation_zero():
    stats = run_trials(ScaledSign([1.0], 1), 30, 100, seed=2)
    assert np.all(stats.deviation == 0.0)


def test_report_deterministic_and_worker_independent():
    fam = FourierUniform(line_spectrum(4, -2))
    a = run_tail_experiment(fam, 60, 0.3, 200, seed=11, workers=1)
    b = run_tail_experiment(fam, 60, 0.3, 200, seed=11, workers=4)
    assert a == b
    assert a.to_dict() == b.to_dict()


def test_trial_permutation_invariance():
    fam = ScaledSign([1.0, 2.0], 3)
    idx = np.random.default_rng(0).permutation(150)
    base = run_trials(fam, 40, 150, seed=5)
    perm = run_trials(fam, 40, 150, seed=5, indices=idx)
    assert np.array_equal(base.deviation[idx], perm.deviation)
    assert np.count_nonzero(base.deviation >= 0.5) == np.count_nonzero(perm.deviation >= 0.5)


def test_sandwich_contains_norm_event():
    for fam, q in [(FourierUniform(line_spectrum(4, -2)), 1.0), (ScaledSign([1] * 7 + [2], 3), 11 / 8)]:
        res = run_eigen_sandwich(fam, 24, 0.3, 300, seed=3)
        assert np.all(res.inside[res.norm_ok])
        assert res.lower == pytest.approx(q - 0.3)
        assert res.upper == pytest.approx(q + 0.3)


def test_scaled_sign_target():
    fam = ScaledSign([1, 1, 1, 2], 3)
    np.testing.assert_allclose(fam.target(8), 1.75 * np.eye(3))
    # cycled scales: 1, 1, 1, 2, 1
    np.testing.assert_allclose(fam.target(5), 1.6 * np.eye(3))
    p = fam.profile(4)
    assert p.v_table[0, 0, 1] == 3 + 16
    assert p.M_table[0, 0, 1] == pytest.approx(4 / 3)
    assert not p.v_table[1].any() and not p.M_table[1].any()
    assert p.v_table[0, 1, 1] == 0


def test_fourier_profile():
    fam = FourierUniform(line_spectrum(4))
    assert np.array_equal(fam.target(10), np.eye(4))
    p = fam.profile(10)
    assert p.v_table[0, 0, 1] == 5.0 and p.v_table[0, 2, 2] == 0
    assert p.M_table[1, 3, 0] == pytest.approx(1 / 3)


def test_frobenius_single_frequency():
    res = run_frobenius_moment(FourierUniform(line_spectrum(1)), 16, 2, 500, seed=0)
    assert res.empirical_mean == 0.0
    assert res.theoretical > 0


def test_frobenius_theoretical_m1():
    res = run_frobenius_moment(FourierUniform(line_spectrum(4, -2)), 64, 1, 500, seed=0)
    assert res.theoretical == pytest.approx(0.25, rel=1e-14)
    assert res.empirical_mean <= res.theoretical + 3 * res.standard_error


def test_frobenius_preconditions():
    fam = FourierUniform(line_spectrum(2))
    with pytest.raises(ValueError):
        run_frobenius_moment(fam, 10, 1, 100, seed=0)
    with pytest.raises(ValueError):
        run_frobenius_moment(fam, 10, 0, 500, seed=0)


def test_full_rank_when_n_at_least_D():
    fam = FourierUniform(cube_spectrum(1, 2))
    rep = run_tail_experiment(fam, fam.D, 0.5, 100, seed=4)
    assert rep.rank_deficient_trials == 0


def test_too_few_trials():
    with pytest.raises(ValueError):
        run_tail_experiment(FourierUniform(line_spectrum(2)), 10, 0.5, 99, seed=0)


def test_report_json_and_csv():
    fam = FourierUniform(line_spectrum(3, -1))
    rep = run_tail_experiment(fam, 50, 0.5, 100, seed=7)
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["schema"] == 1
    assert d["failure_count"] <= d["trials"]
    assert d["empirical_rate"] == d["failure_count"] / d["trials"]
    names = [b["name"] for b in d["bounds"]]
    assert names[:4] == ["fourier", "main", "noniid_psi_refined", "moment"]
    assert "mp" in names and bounds.MP_CAVEAT in d["caveats"]
    assert family_from_descriptor(d["family"]).spectrum == fam.spectrum
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 1 + len(names)
    assert rep.bound("fourier").value == bounds.fourier_failure_bound(50, 3, 0.5)


def test_mp_not_verifiable():
    rep = run_tail_experiment(FourierUniform(line_spectrum(3, -1)), 20, 0.2, 100, seed=1)
    assert rep.bound("mp").verifiable is False


def test_custom_family_unaudited():
    fam = CustomFamily(
        "gauss", 2,
        sampler=lambda n, g: g.standard_normal((n, 2)),
        target=lambda n: np.eye(2),
        profile=lambda n: bounds.MomentProfile("non-iid", v_table=np.full((2, 2, 2), 2.0 * n),
                                               M_table=np.full((2, 2, 2), 1.0)),
    )
    rep = run_tail_experiment(fam, 200, 0.5, 100, seed=3)
    assert rep.audited is False
    assert any("unaudited" in c for c in rep.caveats)


def test_shape_mismatch():
    fam = CustomFamily("bad", 3, lambda n, g: np.ones((n, 2)), lambda n: np.eye(3),
                       lambda n: None)
    with pytest.raises(ValueError):
        run_trials(fam, 5, 3, seed=0)


def test_clopper_pearson():
    assert clopper_pearson(0, 100) == (0.0, pytest.approx(1 - 0.005 ** (1 / 100)))
    lo, hi = clopper_pearson(100, 100)
    assert hi == 1.0 and lo == pytest.approx(0.005 ** (1 / 100))
    lo, hi = clopper_pearson(30, 100)
    assert lo < 0.3 < hi
