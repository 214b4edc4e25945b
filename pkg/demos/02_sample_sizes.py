"""
How many samples are enough?
============================

Compare the sample sizes guaranteed by the Bernstein-type bound for Fourier
matrices (order D^2 log D) with the moment-method bound (order D log D).
"""

import math

from trigsample import bounds

eps, delta = 0.5, 0.01
print(f"eps = {eps}, delta = {delta}")
print(f"{'D':>5} {'fourier':>10} {'simple':>10} {'uniform':>10}")
for D in [10, 50, 100, 200, 400]:
    nf = bounds.fourier_min_n(D, eps, delta)
    ns = bounds.uniform_simple_min_n(D, eps, delta)
    nu = bounds.uniform_min_n(D, eps, eps**2 / math.e, delta)
    print(f"{D:5d} {nf:10d} {ns:10d} {nu:10d}")

# normalizing by the growth orders shows slowly drifting constants
for D in [50, 100, 200, 400]:
    print(D, round(bounds.uniform_simple_min_n(D, eps, delta) / (D * math.log(D)), 2),
          round(bounds.fourier_min_n(D, eps, delta) / (D * D * math.log(D)), 2))

# any decreasing bound can be inverted numerically
n = bounds.solve_min_n(lambda k: bounds.fourier_failure_bound(k, 20, eps), delta)
print("solver:", n, " closed form:", bounds.fourier_min_n(20, eps, delta))

# the certified condition number for deviation eps around Q = I
print("condition number at most", bounds.certified_condition_number(eps))
