"""
Associated Stirling numbers and the moment method
=================================================

S2(m, k) counts partitions of m items into k blocks of size at least two.
They give the polynomial G_m(theta) behind the moment bound.
"""

from trigsample import bounds
from trigsample.stirling import assoc_stirling2, g_eval, g_tail_bound

# first rows of the triangle
for m in range(2, 9):
    print(m, [assoc_stirling2(m, k) for k in range(1, m // 2 + 1)])

# G_{2m}(theta) and its geometric tail bound
theta = 50.0
for m in [1, 2, 4, 8]:
    print(f"m={m}  G_2m = {g_eval(2 * m, theta):.3e}  tail bound = {g_tail_bound(m, theta):.3e}")

# the best moment order for a given sample size
n, D, eps = 4000, 16, 0.5
m, b = bounds.moment_best_m(n, D, eps)
print(f"n={n} D={D}: best m = {m}, failure bound {b:.3e}")
