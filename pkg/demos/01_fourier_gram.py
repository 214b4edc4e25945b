"""
Random Fourier matrices and their Gram matrix
=============================================

Sample a trigonometric polynomial at uniform random points and watch the
normalized Gram matrix approach the identity as the sample grows.
"""

import numpy as np

from trigsample import build_matrix, cube_spectrum, gram, reconstruct, uniform_samples
from trigsample.fourier import evaluate
from trigsample.hermitian import condition_number, op_norm

# all frequencies of degree at most 2 in two variables, 25 of them
spec = cube_spectrum(2, 2)
print("spectrum size D =", spec.size)

# deviation of the Gram matrix from the identity for growing n
for n in [50, 200, 1000, 5000]:
    fs = build_matrix(spec, uniform_samples(n, 2, seed=1))
    g = gram(fs)
    print(f"n={n:5d}  ||G - I|| = {op_norm(g - np.eye(spec.size)):.3f}  cond(G) = {condition_number(g):.2f}")

# with enough samples the coefficients come back from exact values
rng = np.random.default_rng(0)
coeffs = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
fs = build_matrix(spec, uniform_samples(100, 2, seed=2))
a = reconstruct(fs, evaluate(fs, coeffs))
print("relative reconstruction error:", np.linalg.norm(a - coeffs) / np.linalg.norm(coeffs))
