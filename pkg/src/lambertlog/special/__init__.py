"""Special functions: gamma family, zeta, psi_1, Shi/Chi kernels and Mittag-Leffler."""

from .asymptotic import AsymptoticSeries, TruncatedSum
from .constants import EULER_GAMMA, glaisher_log_A, stieltjes, stieltjes_constants
from .expint import exp_integral_ei, shi_chi, sinhshi_minus_coshchi
from .gamma import digamma, gamma_dw, harmonic, log_gamma, trigamma
from .mittag import hyp1f2, mittag_leffler_e2b, ml_d2b_at1
from .psi1 import psi1, psi1_asymptotic, psi1_optimal_index
from .zeta import zeta, zeta_pair_array, zeta_prime, zeta_prime_even, zeta_real

__all__ = [
    "AsymptoticSeries", "EULER_GAMMA", "TruncatedSum", "digamma", "exp_integral_ei",
    "gamma_dw", "glaisher_log_A", "harmonic", "hyp1f2", "log_gamma", "mittag_leffler_e2b",
    "ml_d2b_at1", "psi1", "psi1_asymptotic", "psi1_optimal_index", "shi_chi",
    "sinhshi_minus_coshchi", "stieltjes", "stieltjes_constants", "trigamma", "zeta",
    "zeta_pair_array", "zeta_prime", "zeta_prime_even", "zeta_real",
]
