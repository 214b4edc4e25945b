"""
Voronoi-weighted sampling
=========================

Weighting each sample by the size of its Voronoi cell keeps the matrix
U* W U well conditioned even when points cluster.
"""

import numpy as np

from trigsample import bounds, build_matrix, cube_spectrum, uniform_samples
from trigsample.hermitian import condition_number
from trigsample.voronoi import voronoi_weights, weighted_gram

m, gamma, delta = 5, 0.5, 0.05
n = bounds.detprob_min_n(m, 1, gamma, delta)
cap = bounds.detprob_cond_bound(gamma)
print(f"degree {m}: n = {n} samples, condition number at most {cap:.3f} w.p. {1 - delta}")

spec = cube_spectrum(m, 1)
conds = []
for t in range(50):
    s = uniform_samples(n, 1, seed=4, trial=t)
    w = voronoi_weights(s)
    conds.append(condition_number(weighted_gram(build_matrix(spec, s), w)))
print("observed condition numbers: max %.3f, median %.3f" % (max(conds), np.median(conds)))

# in two dimensions the weights are Monte Carlo estimates
s2 = uniform_samples(10, 2, seed=5)
w2 = voronoi_weights(s2, probes=200_000, seed=5)
print("2d weights:", np.round(w2.weights, 3), "std error", round(w2.mc_std_error, 4))
