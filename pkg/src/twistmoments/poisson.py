"""Numerical verification of quadratic Poisson summation.

For odd n and a compactly supported weight H on (0, inf), the identity reads

    sum_{d odd > 0} (8d/n) H(d/X)
      = delta_sq(n) (X/2) Hv(0) prod_{p|n} (1 - 1/p)
        + (X/2) sum_{k != 0} (-1)^k (G_k(n)/n) Hv(Xk/(2n)),

with Hv the cos+sin Fourier-type transform (cos-sin at negative arguments)
and delta_sq the perfect-square indicator.  Both sides are computed
independently: the left side is a finite character sum, the right side uses
closed-form Gauss sums and the folded-FFT transform grid.

The dual sum is truncated adaptively.  (-1)^k G_k(n)/n is periodic in k with
period 2n and mean zero, so partial sums converge much faster than the
absolute-value envelope suggests; truncation K doubles until the observed
last-octave drift |S(K) - S(K/2)| falls below a fraction of the tolerance,
and that drift (a conservative proxy for the remaining tail, which shrinks
at least geometrically in octaves) is reported as tail_estimate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np
from scipy.integrate import quad

from .arith import factorize, kronecker
from .bumps import bump_support, eval_bump
from .gauss import gauss_sum_all_k, jacobi_vector
from .kernels import fourier_grid


@dataclass(frozen=True)
class PoissonReport:
    n: int
    X: float
    K_trunc: int
    lhs: float
    rhs_main: float
    rhs_dual: float
    residual: float
    tail_estimate: float

    @property
    def rhs(self) -> float:
        return self.rhs_main + self.rhs_dual


class TruncationError(RuntimeError):
    """The dual sum did not stabilize within the allowed truncation."""


def _lhs_character_sum(n: int, X: float, H_kind: str) -> float:
    lo, hi = bump_support(H_kind)
    d_lo = max(1, int(np.floor(lo * X)))
    d_hi = int(np.ceil(hi * X)) + 1
    d = np.arange(d_lo | 1, d_hi + 1, 2, dtype=np.int64)
    if n == 1:
        chi = np.ones(len(d))
    else:
        chi = kronecker(8, n) * jacobi_vector(n)[d % n].astype(float)
    return float(np.sum(chi * eval_bump(H_kind, d / X)))


def _dual_partial_sums(n: int, X: float, H_kind: str, K: int) -> float:
    """(X/2) sum_{0 < |k| <= K} (-1)^k (G_k(n)/n) Hv(Xk/2n)."""
    delta = X / (2.0 * n)
    hv_pos, hv_neg = fourier_grid(H_kind, delta, K)
    g_all = gauss_sum_all_k(n)
    ks = np.arange(1, K + 1)
    gk = g_all[ks % n]
    gmk = g_all[(-ks) % n]
    sgn = np.where(ks % 2 == 0, 1.0, -1.0)
    terms = sgn * (gk * hv_pos[1:] + gmk * hv_neg[1:]) / n
    if np.max(np.abs(terms.imag), initial=0.0) > 1e-9:
        raise ArithmeticError("dual terms acquired a nonreal component")
    return (X / 2.0) * float(np.sum(terms.real))


def poisson_verify(n: int, X: float, H_kind: str = "g_infinity",
                   K_trunc: int | None = None, tol: float = 1e-6,
                   K_max: int = 1 << 22) -> PoissonReport:
    """Verify the identity for one (n, X, H); raises TruncationError if the
    dual sum cannot be certified below tol within K_max terms."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be an odd positive integer")
    if X <= 0:
        raise ValueError("X must be positive")

    lhs = _lhs_character_sum(n, X, H_kind)

    lo, hi = bump_support(H_kind)
    h0 = quad(lambda x: float(eval_bump(H_kind, x)), lo, hi, epsabs=1e-13, limit=400)[0]
    if isqrt(n) ** 2 == n:
        euler = 1.0
        for p, _ in factorize(n).factors:
            euler *= 1.0 - 1.0 / p
        rhs_main = (X / 2.0) * h0 * euler
    else:
        rhs_main = 0.0

    if K_trunc is not None:
        dual = _dual_partial_sums(n, X, H_kind, K_trunc)
        prev = _dual_partial_sums(n, X, H_kind, K_trunc // 2)
        tail = abs(dual - prev)
        K = K_trunc
        if tail >= tol:
            raise TruncationError(
                f"K_trunc={K_trunc} leaves an estimated tail {tail:.2e} >= tol {tol:.2e}")
    else:
        K = 8192
        prev = _dual_partial_sums(n, X, H_kind, K // 2)
        while True:
            dual = _dual_partial_sums(n, X, H_kind, K)
            tail = abs(dual - prev)
            if tail < 0.3 * tol:
                break
            if K >= K_max:
                raise TruncationError(
                    f"dual sum drift {tail:.2e} still above tol {tol:.2e} at K={K}")
            prev, K = dual, 2 * K

    residual = lhs - rhs_main - dual
    return PoissonReport(n=n, X=float(X), K_trunc=K, lhs=lhs, rhs_main=rhs_main,
                         rhs_dual=dual, residual=abs(residual), tail_estimate=tail)
