"""Root numbers and central (derivative) values of twisted L-functions.

For a fundamental discriminant D coprime to the odd level q, the twisted
L-function satisfies Lambda(s) = omega Lambda(1-s) with completed form
Lambda(s) = (|D| sqrt(q)/2 pi)^s Gamma(s + (k-1)/2) L(s) and root number
omega = i^k eta chi_D(-q).

Odd sign (omega = -1) forces L(1/2) = 0 and the derivative is an exact
rapidly-convergent series

    L'(1/2) = 2 sum_n lam(n) chi_D(n) n^(-1/2) w(n/|D|),

with w the double-pole cutoff kernel; the prefactor (1 - omega) collapses it
to 0 identically at even sign.  Even sign (omega = +1) gives the central
value through the single-pole kernel w1, and the derivative follows from the
vanishing of Lambda'(1/2):

    L'(1/2) = -L(1/2) (log(|D| sqrt(q)/(2 pi)) + psi(k/2)).

An independent finite-difference oracle evaluates the completed Lambda(s) at
general s through two differently-smoothed incomplete-gamma series and
differentiates numerically (Richardson-extrapolated central differences).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.special import gammaincc, gammaln, psi

from . import _fast
from .arith import is_fundamental_discriminant, kronecker
from .kernels import CutoffKernel, InterpTable
from .newform import EigenvalueTable, NewformSpec, determine_fricke_sign


@dataclass(frozen=True)
class TwistPoint:
    """One family member: discriminant, sign, values, truncation evidence."""

    d: int
    D: int
    omega: int
    lprime: float | None
    lvalue: float | None
    trunc_N: int
    tail_bound: float


def root_number(spec: NewformSpec, D: int, eta: int | None = None) -> int:
    """omega = i^k eta chi_D(-q); for D > 0, chi_D(-1) = +1."""
    if D == 0 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if gcd(D, spec.level) != 1:
        raise ValueError(f"discriminant {D} shares a factor with the level {spec.level}")
    if eta is None:
        eta = spec.fricke_eta if spec.fricke_eta in (-1, 1) else determine_fricke_sign(spec)
    i_k = (-1) ** (spec.weight // 2)
    chi_minus_one = 1 if D > 0 else -1
    return i_k * eta * chi_minus_one * kronecker(D, spec.level)


def _series_value(table: EigenvalueTable, kernel: CutoffKernel, D: int,
                  trunc_N: int, poles: int) -> float:
    tab: InterpTable = kernel.table(poles=poles)
    out = _fast.twist_series_bulk(
        np.array([abs(D)], dtype=np.int64), np.array([trunc_N], dtype=np.int64),
        table.spf, table.values, table.inv_sqrt, table.log_n,
        tab.t_lo, tab.inv_h, tab.knots,
        tab.coeffs[0], tab.coeffs[1], tab.coeffs[2], tab.coeffs[3], tab.t_hi)
    return 2.0 * float(out[0])


def lprime_central(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                   D: int, tol: float = 1e-6,
                   trunc_N: int | None = None) -> tuple[float, float]:
    """(L'(1/2), tail bound) for the twist by D.

    Returns exactly (0.0, 0.0) when omega = +1, without touching the series.
    The truncation is chosen (or validated) against the shifted-contour tail
    bound at tolerance tol.
    """
    if D < 0 or D % 2 != 0:
        # the bulk evaluator skips even n, which is only the character's own
        # vanishing when the conductor is even; the family is 8d > 0 anyway
        raise ValueError("the series path requires a positive even discriminant")
    omega = root_number(spec, D)
    if omega == +1:
        return 0.0, 0.0
    if trunc_N is None:
        trunc_N, tail = kernel.choose_truncation(abs(D), tol=tol, poles=2)
    else:
        tail = kernel.series_tail_bound(trunc_N, abs(D), poles=2)
    if trunc_N > table.N:
        raise ValueError(f"eigenvalue table reaches {table.N}, need {trunc_N}")
    return _series_value(table, kernel, D, trunc_N, poles=2), tail


def l_central(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
              D: int, tol: float = 1e-6, trunc_N: int | None = None,
              zero_if_odd: bool = False) -> tuple[float, float]:
    """(L(1/2), tail bound) at even sign, via the single-pole kernel.

    Odd sign is rejected unless zero_if_odd explicitly requests the exact 0.
    """
    if D < 0 or D % 2 != 0:
        raise ValueError("the series path requires a positive even discriminant")
    omega = root_number(spec, D)
    if omega == -1:
        if zero_if_odd:
            return 0.0, 0.0
        raise ValueError("omega = -1 forces L(1/2) = 0; pass zero_if_odd=True for the 0")
    if trunc_N is None:
        trunc_N, tail = kernel.choose_truncation(abs(D), tol=tol, poles=1)
    else:
        tail = kernel.series_tail_bound(trunc_N, abs(D), poles=1)
    if trunc_N > table.N:
        raise ValueError(f"eigenvalue table reaches {table.N}, need {trunc_N}")
    return _series_value(table, kernel, D, trunc_N, poles=1), tail


def derivative_factor(spec: NewformSpec, D: int) -> float:
    """log(|D| sqrt(q)/(2 pi)) + psi(k/2), the even-sign conversion factor."""
    return float(np.log(abs(D) * np.sqrt(spec.level) / (2 * np.pi)) + psi(spec.weight / 2))


def lprime_from_relation(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                         D: int, tol: float = 1e-6) -> tuple[float, float]:
    """L'(1/2) at even sign: -L(1/2) (log(|D| sqrt(q)/2 pi) + psi(k/2))."""
    lv, tail = l_central(spec, table, kernel, D, tol=tol)
    factor = derivative_factor(spec, D)
    return -lv * factor, tail * factor


# -- independent oracle -------------------------------------------------------


class OracleConvergenceError(RuntimeError):
    """Richardson extrapolation of the central differences did not settle."""


def _chi_vector(table: EigenvalueTable, D: int, N: int) -> np.ndarray:
    """chi_D(1..N) by the completely multiplicative sieve."""
    chi = np.zeros(N + 1, dtype=np.int8)
    chi[1] = 1
    spf = table.spf
    for m in range(3, N + 1, 2):
        p = int(spf[m])
        chi[m] = kronecker(D, p) if m == p else chi[p] * chi[m // p]
    if D % 2 != 0:
        chi2 = kronecker(D, 2)
        for m in range(2, N + 1, 2):
            chi[m] = chi2 * chi[m // 2]
    return chi[1:].astype(float)


class _SmoothedLambda:
    """Lambda(s) = I_theta(s) + omega I_(1/theta)(1-s), each a smoothed series

        I_t(s) = A^s sum lam(n) chi_D(n) n^(-s) Gamma(s + (k-1)/2, n/(A t)),

    A = |D| sqrt(q)/(2 pi).  theta != 1 makes the two pieces genuinely
    different smoothings, so their assembly tests the functional equation
    instead of restating it.  Holds the character vector so repeated
    evaluations near s = 1/2 stay cheap.
    """

    def __init__(self, table: EigenvalueTable, D: int, omega: int, theta: float, N: int):
        self.table, self.D, self.omega, self.theta, self.N = table, D, omega, theta, N
        self.spec = table.spec
        self.A = abs(D) * np.sqrt(self.spec.level) / (2.0 * np.pi)
        self.n = np.arange(1, N + 1, dtype=float)
        self.coeff = table.values[1: N + 1] * _chi_vector(table, D, N)

    def one_side(self, s: float, theta: float) -> float:
        a = s + (self.spec.weight - 1) / 2.0
        g = gammaincc(a, self.n / (self.A * theta)) * np.exp(gammaln(a))
        return float(self.A ** s * np.sum(self.coeff * self.n ** (-s) * g))

    def __call__(self, s: float) -> float:
        return self.one_side(s, self.theta) \
            + self.omega * self.one_side(1.0 - s, 1.0 / self.theta)


def _oracle_lambda_series_length(spec: NewformSpec, D: int, theta: float) -> int:
    A = abs(D) * np.sqrt(spec.level) / (2.0 * np.pi)
    return int(np.ceil(46.0 * A * max(theta, 1.0 / theta))) + 64


def finite_difference_oracle(spec: NewformSpec, table: EigenvalueTable, D: int,
                             h: float = 2e-3, theta: float = 1.25,
                             conv_tol: float = 1e-6) -> float:
    """Central-difference L'(1/2), Richardson-extrapolated over h and h/2.

    omega = -1 differentiates the completed Lambda directly (Lambda(1/2) = 0,
    odd symmetry); omega = +1 differentiates L(s) = Lambda(s)/(A^s Gamma(...)).
    Raises OracleConvergenceError when the h and h/2 extrapolants disagree
    beyond conv_tol.
    """
    if not 1e-4 <= h <= 1e-2:
        raise ValueError("h must lie in [1e-4, 1e-2]")
    omega = root_number(spec, D)
    N = _oracle_lambda_series_length(spec, D, theta)
    if N > table.N:
        raise ValueError(f"oracle needs eigenvalues to {N}, table reaches {table.N}")
    A = abs(D) * np.sqrt(spec.level) / (2.0 * np.pi)
    lam_s = _SmoothedLambda(table, D, omega, theta, N)

    if omega == -1:
        f = lam_s
        norm = A ** 0.5 * np.exp(gammaln(spec.weight / 2.0))
    else:
        def f(s):
            lg = gammaln(s + (spec.weight - 1) / 2.0)
            return lam_s(s) / (A ** s * np.exp(lg))
        norm = 1.0

    def central(hh):
        return (f(0.5 + hh) - f(0.5 - hh)) / (2.0 * hh)

    d_h, d_h2, d_h4 = central(h), central(h / 2), central(h / 4)
    r1 = (4.0 * d_h2 - d_h) / 3.0
    r2 = (4.0 * d_h4 - d_h2) / 3.0
    if abs(r2 - r1) > conv_tol * max(1.0, abs(r2)):
        raise OracleConvergenceError(
            f"extrapolants differ by {abs(r2 - r1):.2e} at D={D}")
    return r2 / norm


def oracle_central_value(spec: NewformSpec, table: EigenvalueTable, D: int,
                         theta: float = 1.25) -> float:
    """The oracle's direct L(1/2) = Lambda(1/2)/(A^(1/2) Gamma(k/2)).

    At odd sign the two smoothed series must cancel; the returned magnitude
    is a genuine numerical test of the sign and the coefficients.
    """
    omega = root_number(spec, D)
    N = _oracle_lambda_series_length(spec, D, theta)
    if N > table.N:
        raise ValueError(f"oracle needs eigenvalues to {N}, table reaches {table.N}")
    A = abs(D) * np.sqrt(spec.level) / (2.0 * np.pi)
    lam_half = _SmoothedLambda(table, D, omega, theta, N)(0.5)
    return float(lam_half / (A ** 0.5 * np.exp(gammaln(spec.weight / 2.0))))


def oracle_difference_quotients(spec: NewformSpec, table: EigenvalueTable, D: int,
                                h: float = 2e-3, theta: float = 1.25) -> list[float]:
    """Raw central-difference quotients at h, h/2, h/4 (for convergence-order
    diagnostics; the quotient error should fall ~4x per halving)."""
    omega = root_number(spec, D)
    N = _oracle_lambda_series_length(spec, D, theta)
    A = abs(D) * np.sqrt(spec.level) / (2.0 * np.pi)
    lam_s = _SmoothedLambda(table, D, omega, theta, N)
    if omega == -1:
        f = lambda s: lam_s(s) / (A ** 0.5 * np.exp(gammaln(spec.weight / 2.0)))
    else:
        def f(s):
            lg = gammaln(s + (spec.weight - 1) / 2.0)
            return lam_s(s) / (A ** s * np.exp(lg))
    return [(f(0.5 + hh) - f(0.5 - hh)) / (2.0 * hh) for hh in (h, h / 2, h / 4)]


def twist_point(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                d: int, tol: float = 1e-6) -> TwistPoint:
    """Evaluate one family member d (D = 8d): the exact series at odd sign,
    the central value plus derivative relation at even sign."""
    D = 8 * d
    omega = root_number(spec, D)
    if omega == -1:
        ntrunc, tail = kernel.choose_truncation(abs(D), tol=tol, poles=2)
        lp, _ = lprime_central(spec, table, kernel, D, tol=tol, trunc_N=ntrunc)
        return TwistPoint(d=d, D=D, omega=omega, lprime=lp, lvalue=None,
                          trunc_N=ntrunc, tail_bound=tail)
    ntrunc, tail_v = kernel.choose_truncation(abs(D), tol=tol, poles=1)
    lv, _ = l_central(spec, table, kernel, D, tol=tol, trunc_N=ntrunc)
    lp = -lv * derivative_factor(spec, D)
    return TwistPoint(d=d, D=D, omega=omega, lprime=lp, lvalue=lv,
                      trunc_N=ntrunc, tail_bound=tail_v)
