"""
Checking tail bounds by simulation
==================================

Estimate how often the Gram matrix deviates from its mean by more than eps
and compare with every bound that applies.
"""

from trigsample import bounds
from trigsample.montecarlo import FourierUniform, ScaledSign, run_frobenius_moment, run_tail_experiment
from trigsample.spectrum import line_spectrum

D, eps = 4, 0.5
n = bounds.fourier_min_n(D, eps, 0.1)
rep = run_tail_experiment(FourierUniform(line_spectrum(D)), n, eps, trials=500, seed=7)
print(f"fourier D={D} n={n}: {rep.failure_count}/{rep.trials} failures, 99% upper limit {rep.cp_upper:.4f}")
for b in rep.bounds:
    print(f"  {b.name:20s} {b.value:.3e} {b.verdict}")

# rows with different scales: +-1 and +-2 alternating
rep = run_tail_experiment(ScaledSign([1.0, 2.0], 2), 400, 1.0, trials=500, seed=8)
print(f"scaled sign: rate {rep.empirical_rate:.3f}, psi bound {rep.bound('noniid_psi').value:.3f}")

# Frobenius moments against D G_2m(n/D)
r = run_frobenius_moment(FourierUniform(line_spectrum(4)), 64, 2, 1000, seed=9)
print(f"mean {r.empirical_mean:.4f} +- {r.standard_error:.4f} vs {r.theoretical:.4f}")
