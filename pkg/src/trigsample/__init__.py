"""Random sampling of trigonometric polynomials.

Random Fourier sample matrices, the spectrum of their normalized Gram matrix,
explicit concentration bounds and sample-size formulas for it, and seeded
Monte Carlo experiments that check those bounds.
"""
from .bounds import (
    Certificate,
    MomentProfile,
    MPParams,
    bennett_tail,
    better_bound_min_n,
    bounded_failure_bound,
    certified_condition_number,
    detprob_cond_bound,
    detprob_min_n,
    fourier_failure_bound,
    fourier_min_n,
    main_failure_bound,
    moment_best_m,
    moment_failure_bound,
    mp_failure_bound,
    noniid_psi,
    solve_min_n,
    uniform_min_n,
    uniform_simple_min_n,
)
from .fourier import SampleSet, build_matrix, deviation, gram, reconstruct, uniform_samples
from .hermitian import condition_number, eig_extremes, frobenius_norm, op_norm
from .montecarlo import (
    FourierUniform,
    ScaledSign,
    run_eigen_sandwich,
    run_frobenius_moment,
    run_tail_experiment,
)
from .spectrum import Spectrum, cube_spectrum, is_symmetric, line_spectrum
from .stirling import assoc_stirling2, g_eval, g_tail_bound
from .voronoi import voronoi_weights_1d, voronoi_weights_mc, weighted_gram

__version__ = "0.1.0"
