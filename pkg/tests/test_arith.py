from math import gcd, isqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmoments.arith import (DiscriminantFamily, Factorization, enumerate_family,
                                factorize, is_fundamental_discriminant, is_prime,
                                jacobi, kronecker, multiplicative_stats,
                                squarefree_odd_sieve)


class TestFactorize:
    def test_one_gives_empty_product(self):
        assert factorize(1).factors == ()

    def test_twelve(self):
        assert factorize(12).factors == ((2, 2), (3, 1))

    def test_million_and_three_is_prime(self):
        # fixed by the trial-division oracle below
        assert factorize(1000003).factors == ((1000003, 1),)

    def test_trial_division_oracle_for_1000003(self):
        n = 1000003
        assert all(n % d for d in range(2, isqrt(n) + 1))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            factorize(0)

    def test_large_semiprime(self):
        p, q = 1_000_003, 1_000_033
        assert factorize(p * q).factors == ((p, 1), (q, 1))

    def test_prime_power_past_trial_range(self):
        p = 1_000_003
        assert factorize(p * p).factors == ((p, 2),)

    @given(st.integers(min_value=1, max_value=10 ** 12))
    @settings(max_examples=200, deadline=None)
    def test_reconstruction(self, n):
        fac = factorize(n)
        prod = 1
        for p, e in fac.factors:
            prod *= p ** e
        assert prod == n

    def test_reconstruction_exhaustive_small(self):
        for n in range(1, 100_001):
            prod = 1
            for p, e in factorize(n).factors:
                prod *= p ** e
            assert prod == n

    def test_invalid_factorization_rejected(self):
        with pytest.raises(ValueError):
            Factorization(6, ((3, 1), (2, 1)))  # primes out of order
        with pytest.raises(ValueError):
            Factorization(6, ((2, 1),))  # wrong product


class TestMultiplicativeStats:
    def test_conventions_at_one(self):
        assert multiplicative_stats(1) == (1, 1, 1)

    def test_four(self):
        assert multiplicative_stats(4) == (0, 3, 2)

    def test_thirty(self):
        assert multiplicative_stats(30) == (-1, 8, 8)

    def test_against_direct_enumeration(self):
        N = 10_000
        # tau by direct divisor count, mu by the recursive divisor identity
        # sum_{d|n} mu(d) = [n == 1], phi by the divisor identity
        # sum_{d|n} phi(d) = n; all three independent of factorize().
        tau = np.zeros(N + 1, dtype=np.int64)
        mu = np.zeros(N + 1, dtype=np.int64)
        mu[1] = 1
        phi = np.zeros(N + 1, dtype=np.int64)
        for d in range(1, N + 1):
            tau[d:: d] += 1
        for n in range(2, N + 1):
            s = 0
            d = 1
            while d * d <= n:
                if n % d == 0:
                    if d < n:
                        s += mu[d]
                    other = n // d
                    if other != d and other < n:
                        s += mu[other]
                d += 1
            mu[n] = -s
        phi[1] = 1
        for n in range(2, N + 1):
            s = 0
            d = 1
            while d * d <= n:
                if n % d == 0:
                    if d < n:
                        s += phi[d]
                    other = n // d
                    if other != d and other < n:
                        s += phi[other]
                d += 1
            phi[n] = n - s
        for n in range(1, N + 1):
            assert multiplicative_stats(n) == (mu[n], tau[n], phi[n]), n

    def test_phi_gcd_count_spot(self, rng):
        for n in rng.integers(2, 3000, size=25):
            n = int(n)
            direct = sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)
            assert multiplicative_stats(n)[2] == direct


class TestKronecker:
    def test_top_one(self):
        assert kronecker(1, 47) == 1

    def test_eight_over_three(self):
        # squares mod 3 are {0, 1}; 8 = 2 mod 3
        assert kronecker(8, 3) == -1

    def test_forty_over_seven(self):
        # squares mod 7 are {1, 2, 4}; 40 = 5 mod 7
        assert kronecker(40, 7) == -1

    def test_bottom_one_and_zero_top(self):
        assert kronecker(12345, 1) == 1
        assert kronecker(0, 5) == 0
        assert kronecker(0, 1) == 1

    def test_two_conventions(self):
        assert kronecker(7, 2) == 1     # 7 = -1 mod 8
        assert kronecker(17, 2) == 1
        assert kronecker(3, 2) == -1
        assert kronecker(5, 2) == -1
        assert kronecker(6, 2) == 0

    def test_zero_iff_common_factor(self):
        for D in range(-40, 41):
            if D == 0:
                continue
            for n in range(1, 60):
                val = kronecker(D, n)
                assert (val == 0) == (gcd(D, n) > 1), (D, n)

    @given(st.integers(min_value=-10 ** 6, max_value=10 ** 6).filter(lambda d: d != 0),
           st.integers(min_value=1, max_value=10 ** 4),
           st.integers(min_value=1, max_value=10 ** 4))
    @settings(max_examples=1000, deadline=None)
    def test_completely_multiplicative_in_n(self, D, m, n):
        assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)

    def test_matches_legendre_at_odd_primes(self):
        for p in (3, 5, 7, 11, 13, 101):
            for D in range(1, p):
                euler = pow(D, (p - 1) // 2, p)
                expected = 0 if euler == 0 else (1 if euler == 1 else -1)
                assert kronecker(D, p) == expected

    def test_jacobi_requires_odd(self):
        with pytest.raises(ValueError):
            jacobi(3, 4)


class TestFundamentalDiscriminants:
    def test_examples(self):
        assert is_fundamental_discriminant(5)
        assert not is_fundamental_discriminant(9)
        assert is_fundamental_discriminant(24)  # 4*6 with 6 = 2 mod 4 squarefree

    def test_negative(self):
        assert is_fundamental_discriminant(-3)
        assert is_fundamental_discriminant(-4)
        assert is_fundamental_discriminant(-8)
        assert not is_fundamental_discriminant(-5)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            is_fundamental_discriminant(0)

    def test_eight_d_for_odd_squarefree_d(self):
        for d in squarefree_odd_sieve(1, 10_000):
            assert is_fundamental_discriminant(8 * int(d))

    def test_eight_d_fails_for_non_squarefree(self):
        assert not is_fundamental_discriminant(8 * 9)


class TestEnumerateFamily:
    def test_example_x80_q11(self):
        fam = enumerate_family(80, 11)
        assert list(fam.members) == [5, 7, 13, 15, 17, 19]

    def test_example_x16_q1(self):
        assert list(enumerate_family(16, 1).members) == [1, 3]

    def test_even_level_rejected(self):
        with pytest.raises(ValueError):
            enumerate_family(100, 2)

    def test_window_and_properties(self):
        fam = enumerate_family(3000, 11)
        d = fam.members
        assert np.all(8 * d >= 1500) and np.all(8 * d <= 6000)
        assert np.all(d % 2 == 1)
        for x in d:
            assert gcd(int(x), 11) == 1
            _, _, _ = multiplicative_stats(int(x))
            assert multiplicative_stats(int(x))[0] != 0  # squarefree

    def test_type_invariants_enforced(self):
        with pytest.raises(ValueError, match="window"):
            DiscriminantFamily(80.0, 11, np.array([100], dtype=np.int64))
        with pytest.raises(ValueError, match="odd"):
            DiscriminantFamily(80.0, 11, np.array([6], dtype=np.int64))
        with pytest.raises(ValueError, match="coprime"):
            DiscriminantFamily(80.0, 11, np.array([11], dtype=np.int64))
        with pytest.raises(ValueError, match="fundamental"):
            DiscriminantFamily(160.0, 11, np.array([25], dtype=np.int64))
