"""Central derivatives of quadratic twists of a modular L-function: exact
cutoff series, brute-force-verified character-sum identities, and family scans."""

__version__ = "0.1.0"

from .arith import (DiscriminantFamily, Factorization, enumerate_family, factorize,
                    is_fundamental_discriminant, kronecker, multiplicative_stats)
from .bumps import eval_bump, f_partial, g_exact, g_infinity, j_scan, v1_hat, v_hat
from .central import (TwistPoint, finite_difference_oracle, l_central,
                      lprime_central, lprime_from_relation, oracle_central_value,
                      root_number, twist_point)
from .gauss import GaussSumValue, gauss_sum_bruteforce, gauss_sum_closed
from .kernels import CutoffKernel, fourier_check_transform, mellin
from .moments import (MomentRecord, first_moment, largesieve_diagnostic,
                      nonvanishing_count, second_moment_scan)
from .newform import (CurveCoefficients, EigenvalueTable, NewformSpec,
                      ap_point_count, determine_fricke_sign, lambda_table,
                      level11_spec)
from .poisson import PoissonReport, poisson_verify

__all__ = [
    "DiscriminantFamily", "Factorization", "enumerate_family", "factorize",
    "is_fundamental_discriminant", "kronecker", "multiplicative_stats",
    "eval_bump", "f_partial", "g_exact", "g_infinity", "j_scan", "v1_hat", "v_hat",
    "TwistPoint", "finite_difference_oracle", "l_central", "lprime_central",
    "lprime_from_relation", "oracle_central_value", "root_number", "twist_point",
    "GaussSumValue", "gauss_sum_bruteforce", "gauss_sum_closed",
    "CutoffKernel", "fourier_check_transform", "mellin",
    "MomentRecord", "first_moment", "largesieve_diagnostic",
    "nonvanishing_count", "second_moment_scan",
    "CurveCoefficients", "EigenvalueTable", "NewformSpec", "ap_point_count",
    "determine_fricke_sign", "lambda_table", "level11_spec",
    "PoissonReport", "poisson_verify",
]
