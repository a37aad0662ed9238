"""Quadratic Gauss-type sums

    G_k(n) = ((1-i)/2 + (-1/n)(1+i)/2) * sum_{a mod n} (a/n) e(ak/n),  n odd,

by direct summation (the oracle) and by the multiplicative closed form.

Closed form at prime powers, with alpha = v_p(k) (alpha = infinity for k = 0):

    beta <= alpha        : 0 if beta odd, phi(p^beta) if beta even
    beta  = alpha + 1    : -p^alpha if beta even, (k p^-alpha / p) p^alpha sqrt(p) if beta odd
    beta >= alpha + 2    : 0

The printed table behind this omits the case beta >= alpha + 2 with beta even;
the oracle sweep establishes that it vanishes as well (for even beta the sum
collapses to a Ramanujan sum, which is 0 once beta >= alpha + 2), and the
closed form adopts that value.  G_k(n) is multiplicative in odd n and depends
on k only through k mod n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import factorize, jacobi


@dataclass(frozen=True)
class GaussSumValue:
    k: int
    n: int
    value: complex
    route: str  # "brute" | "closed"


def _prefactor(n: int) -> complex:
    # (-1/n) = +1 for n = 1 mod 4, -1 for n = 3 mod 4
    return 1.0 + 0.0j if n % 4 == 1 else -1.0j


def gauss_sum_bruteforce(k: int, n: int) -> complex:
    """Defining sum, O(n); the phase argument is reduced mod n before exp."""
    if n < 1 or n % 2 == 0:
        raise ValueError("gauss_sum_bruteforce requires odd positive n")
    if n > 10 ** 6:
        raise ValueError("brute force capped at n <= 10^6")
    if n == 1:
        return 1.0 + 0.0j  # single a = 0 term with (0/1) = 1
    a = np.arange(n, dtype=np.int64)
    ja = jacobi_vector(n)
    phase = np.exp(2j * np.pi * ((a * (k % n)) % n) / n)
    return complex(_prefactor(n) * np.sum(ja * phase))


@lru_cache(maxsize=4)
def _spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor of 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i:: i][spf[i:: i] == 0] = i
    return spf


def jacobi_vector(n: int) -> np.ndarray:
    """(a/n) for a = 0..n-1 as int8, via the completely multiplicative sieve."""
    if n == 1:
        return np.ones(1, dtype=np.int8)
    out = np.zeros(n, dtype=np.int8)
    out[1] = 1
    limit = 1 << 12
    while limit < n - 1:
        limit <<= 1
    spf = _spf_table(limit)
    for a in range(2, n):
        p = spf[a]
        out[a] = jacobi(p, n) if a == p else out[p] * out[a // p]
    return out


def gauss_sum_all_k(n: int) -> np.ndarray:
    """G_k(n) for every k mod n at once: one DFT of the symbol vector.

    Mathematically identical to gauss_sum_bruteforce (same defining sum,
    different summation order); used for oracle sweeps.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("gauss_sum_all_k requires odd positive n")
    if n == 1:
        return np.array([1.0 + 0.0j])
    ja = jacobi_vector(n).astype(np.float64)
    return _prefactor(n) * np.fft.ifft(ja) * n  # ifft carries e(+ak/n)


def _vp(k: int, p: int) -> int:
    v = 0
    k = abs(k)
    while k % p == 0:
        k //= p
        v += 1
    return v


def gauss_sum_closed(k: int, n: int) -> complex:
    """Closed form, multiplicative over the prime powers of odd n."""
    if n < 1 or n % 2 == 0:
        raise ValueError("gauss_sum_closed requires odd positive n")
    val = 1.0
    for p, beta in factorize(n).factors:
        alpha = None if k == 0 else _vp(k, p)
        if alpha is None or beta <= alpha:
            if beta % 2 == 1:
                return 0.0 + 0.0j
            f = float(p ** beta - p ** (beta - 1))  # phi(p^beta)
        elif beta == alpha + 1:
            if beta % 2 == 0:
                f = -float(p ** alpha)
            else:
                leg = jacobi((k // p ** alpha) % p, p)
                f = leg * p ** alpha * np.sqrt(p)
        else:
            return 0.0 + 0.0j
        val *= f
    return complex(val)


def gauss_sum(k: int, n: int, route: str = "closed") -> GaussSumValue:
    fn = gauss_sum_closed if route == "closed" else gauss_sum_bruteforce
    return GaussSumValue(k, n, fn(k, n), route)


def oracle_sweep(n_max: int, k_lo: int, k_hi: int):
    """Compare closed form against the DFT oracle for all odd n <= n_max.

    Yields (k, n, closed, brute, abs_err) rows; abs_err should stay below
    1e-9 * n throughout.
    """
    for n in range(1, n_max + 1, 2):
        brute_all = gauss_sum_all_k(n)
        closed_cache: dict[int, complex] = {}
        for k in range(k_lo, k_hi + 1):
            km = k % n
            # k and k mod n agree except at k = 0 (alpha = infinity), which only
            # matters when some beta exceeds every finite alpha; key on (km, k==0)
            key = km if k != 0 else -1
            if key not in closed_cache:
                closed_cache[key] = gauss_sum_closed(k, n)
            c = closed_cache[key]
            b = complex(brute_all[km])
            yield k, n, c, b, abs(c - b)
