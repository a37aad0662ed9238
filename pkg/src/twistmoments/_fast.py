"""Compiled hot loops (numba): sieves, point counts, and bulk twist series.

Everything here operates on plain arrays so the jitted code stays simple.
All parallel loops write to disjoint per-item slots; reductions happen in
numpy afterwards in fixed index order, so results do not depend on the
thread count.
"""

from __future__ import annotations

import numpy as np
import numba
from numba import njit, prange, set_num_threads, get_num_threads

# the portable layer: always present, and the per-slot writes below make
# results independent of scheduling anyway
numba.config.THREADING_LAYER = "workqueue"


@njit(cache=True)
def spf_sieve(N):
    """Smallest prime factor for 0..N (spf[0] = spf[1] = 0)."""
    spf = np.zeros(N + 1, dtype=np.int32)
    for i in range(2, N + 1):
        if spf[i] == 0:
            for j in range(i, N + 1, i):
                if spf[j] == 0:
                    spf[j] = i
    return spf


@njit(cache=True)
def primes_from_spf(spf):
    N = len(spf) - 1
    count = 0
    for i in range(2, N + 1):
        if spf[i] == i:
            count += 1
    out = np.empty(count, dtype=np.int64)
    k = 0
    for i in range(2, N + 1):
        if spf[i] == i:
            out[k] = i
            k += 1
    return out


@njit(cache=True)
def _trace_char_count(p, b2, b4, b6):
    """-sum_x chi_p(4x^3 + b2 x^2 + 2 b4 x + b6) via an incremental cubic
    and a quadratic-residue table; p odd, good reduction."""
    qr = np.full(p, np.int8(-1))
    z = 0
    for t in range((p - 1) // 2 + 1):
        qr[z] = 1
        z += 2 * t + 1  # (t+1)^2 - t^2
        while z >= p:
            z -= p
    qr[0] = 0
    # f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6; finite differences mod p
    b2m = b2 % p
    b4m = (2 * b4) % p
    b6m = b6 % p
    f = b6m
    d1 = (4 + b2m + b4m) % p          # f(1) - f(0)
    d2 = (24 + 2 * b2m) % p           # second difference at x=0
    d3 = 24 % p
    total = 0
    for _ in range(p):
        total += qr[f]
        f += d1
        if f >= p:
            f -= p
        d1 += d2
        if d1 >= p:
            d1 -= p
        d2 += d3
        if d2 >= p:
            d2 -= p
    return -total


@njit(cache=True, parallel=True)
def ap_table_curve(primes, b2, b4, b6, supplied_p, supplied_ap):
    """a_p for every listed prime: odd good primes by trace counting, the
    rest (p = 2 and bad reduction) from the supplied lists.  Work is strided
    across chunks so small and large primes land on every thread."""
    m = len(primes)
    out = np.zeros(m, dtype=np.int64)
    nchunks = 256
    for c in prange(nchunks):
        for i in range(c, m, nchunks):
            p = primes[i]
            done = False
            for j in range(len(supplied_p)):
                if p == supplied_p[j]:
                    out[i] = supplied_ap[j]
                    done = True
            if not done:
                out[i] = _trace_char_count(p, b2, b4, b6)
    return out


@njit(cache=True)
def lambda_fill(N, spf, prime_index, lam_p, is_bad):
    """Normalized eigenvalues lam[0..N] from lam(p) via the Hecke recursion
    lam(p^(j+1)) = lam(p) lam(p^j) - [p good] lam(p^(j-1)) and multiplicativity."""
    lam = np.zeros(N + 1)
    lam[1] = 1.0
    for n in range(2, N + 1):
        p = spf[n]
        m = n // p
        if m % p != 0:
            if m == 1:
                lam[n] = lam_p[prime_index[p]]
            else:
                lam[n] = lam[p] * lam[m]
        else:
            # n = p^e * m' with e >= 2: peel the full prime power
            pe = p * p
            mm = m // p
            while mm % p == 0:
                pe *= p
                mm //= p
            if mm > 1:
                lam[n] = lam[pe] * lam[mm]
            else:
                lp = lam_p[prime_index[p]]
                if is_bad[prime_index[p]]:
                    lam[n] = lp * lam[n // p]
                else:
                    lam[n] = lp * lam[n // p] - lam[n // (p * p)]
    return lam


@njit(cache=True)
def an_fill_integer(N, spf, prime_index, a_p, is_bad, p_of):
    """Unnormalized integer coefficients a(n) (weight 2 recursion), exact."""
    an = np.zeros(N + 1, dtype=np.int64)
    an[1] = 1
    for n in range(2, N + 1):
        p = spf[n]
        m = n // p
        if m % p != 0:
            if m == 1:
                an[n] = a_p[prime_index[p]]
            else:
                an[n] = an[p] * an[m]
        else:
            pe = p * p
            mm = m // p
            while mm % p == 0:
                pe *= p
                mm //= p
            if mm > 1:
                an[n] = an[pe] * an[mm]
            else:
                ap = a_p[prime_index[p]]
                if is_bad[prime_index[p]]:
                    an[n] = ap * an[n // p]
                else:
                    an[n] = ap * an[n // p] - p_of[prime_index[p]] * an[n // (p * p)]
    return an


@njit(cache=True)
def _modpow(base, exp, mod):
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = result * base % mod
        base = base * base % mod
        exp >>= 1
    return result


@njit(cache=True)
def _legendre(a, p):
    """(a/p) for odd prime p via Euler's criterion; p < 2^31 keeps int64 safe."""
    a %= p
    if a == 0:
        return np.int8(0)
    r = _modpow(a, (p - 1) >> 1, p)
    return np.int8(1) if r == 1 else np.int8(-1)


@njit(cache=True)
def _twist_series_one(D, N, spf, lam, inv_sqrt, log_n,
                      t_lo, inv_h, knots, c0, c1, c2, c3, t_hi):
    """sum over odd n <= N of lam(n) (D/n) n^(-1/2) K(n/D) with K from the
    log-log interpolation table (0 beyond its right edge)."""
    chi = np.zeros(N + 1, dtype=np.int8)
    chi[1] = 1
    # character at odd primes by Euler's criterion, then full multiplicativity
    for n in range(3, N + 1, 2):
        p = spf[n]
        if n == p:
            chi[n] = _legendre(D % p, p)
        else:
            chi[n] = chi[p] * chi[n // p]
    logD = np.log(float(D))
    m = len(knots) - 1
    acc = 0.0
    for n in range(1, N + 1, 2):
        c = chi[n]
        if c == 0:
            continue
        t = log_n[n] - logD
        if t > t_hi:
            break  # arguments only grow with n
        i = int((t - t_lo) * inv_h)
        if i < 0:
            i = 0
        elif i >= m:
            i = m - 1
        dt = t - knots[i]
        z = ((c0[i] * dt + c1[i]) * dt + c2[i]) * dt + c3[i]
        acc += c * lam[n] * inv_sqrt[n] * np.exp(z)
    return acc


@njit(cache=True, parallel=True)
def twist_series_bulk(Ds, Ns, spf, lam, inv_sqrt, log_n,
                      t_lo, inv_h, knots, c0, c1, c2, c3, t_hi):
    """The twist series for many discriminants in parallel (one slot each)."""
    out = np.zeros(len(Ds))
    for i in prange(len(Ds)):
        out[i] = _twist_series_one(Ds[i], Ns[i], spf, lam, inv_sqrt, log_n,
                                   t_lo, inv_h, knots, c0, c1, c2, c3, t_hi)
    return out


@njit(cache=True, parallel=True)
def character_inner_sums(ms, lam_re, lam_im, spf, N_lo, N_hi):
    """|sum_n lam(n) chi_m(n) G(n/N)|^2-style inner sums for the mean-value
    diagnostic: returns the complex inner sum per m, where lam_re/lam_im
    already carry lam(n) n^(-1/2-it) G(n/N)."""
    out_re = np.zeros(len(ms))
    out_im = np.zeros(len(ms))
    N = len(lam_re) - 1
    for j in prange(len(ms)):
        m = ms[j]
        chi = np.zeros(N + 1, dtype=np.int8)
        if N >= 1:
            chi[1] = 1
        for n in range(2, N + 1):
            p = spf[n]
            if n == p:
                if p == 2:
                    r = m & 7
                    if m % 2 == 0:
                        chi[n] = 0
                    elif r == 1 or r == 7:
                        chi[n] = 1
                    else:
                        chi[n] = -1
                else:
                    chi[n] = _legendre(m % p, p)
            else:
                chi[n] = chi[p] * chi[n // p]
        sre = 0.0
        sim = 0.0
        for n in range(N_lo, min(N_hi, N) + 1):
            c = chi[n]
            if c != 0:
                sre += c * lam_re[n]
                sim += c * lam_im[n]
        out_re[j] = sre
        out_im[j] = sim
    return out_re, out_im


def configure_threads(threads: int) -> int:
    """Set the worker-pool width; 0 keeps the autodetected count."""
    if threads > 0:
        set_num_threads(threads)
    return get_num_threads()
