import numpy as np
import pytest
from scipy.special import exp1, psi

from twistmoments.bumps import bump_support, eval_bump
from twistmoments.kernels import (CutoffKernel, fourier_check_transform, fourier_grid,
                                  fourier_transform_mellin_route, mellin)


@pytest.fixture(scope="module")
def ck():
    return CutoffKernel(2, 11)


class TestCutoffKernel:
    def test_two_route_agreement(self, ck):
        for y in (0.1, 1.0, 10.0):
            assert abs(ck.w(y) - ck.w_vertical(y)) <= 1e-9

    def test_weight_two_closed_form(self, ck):
        # single independent check: at k = 2 the kernel is the exponential
        # integral E1(2 pi y/sqrt(q))
        for y in (0.05, 0.7, 4.0, 15.0):
            assert ck.w(y) == pytest.approx(float(exp1(ck.scale * y)), rel=1e-11)

    def test_small_y_residue_law(self, ck):
        for y in (1e-3, 1e-6):
            resid = ck.w(y) - (psi(1.0) - np.log(ck.scale * y))
            assert abs(resid) <= 2.0 * ck.scale * y + 1e-9

    def test_cubic_decay_bound(self, ck):
        c3 = ck.decay_constant(3.0)
        for y in (20.0, 1e3):
            assert ck.w(y) <= c3 * (ck.scale * y) ** -3

    def test_decay_bound_nonvacuous(self, ck):
        assert ck.w(20.0) > 0.0

    def test_monotone_decreasing(self, ck):
        ys = np.logspace(-4, 4, 81)
        vals = [ck.w(float(y)) for y in ys]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_single_pole_kernel_routes(self, ck):
        for y in (0.1, 1.0, 5.0):
            assert abs(float(ck.w1(y)) - ck.w1_vertical(y)) <= 1e-9

    def test_table_relative_accuracy(self, ck, rng):
        tab = ck.table()
        ys = np.exp(rng.uniform(np.log(1e-6), np.log(20.0), 1000))
        direct = np.array([ck.w(float(y)) for y in ys])
        rel = np.abs(tab(ys) - direct) / direct
        assert np.max(rel) <= 1e-8

    def test_table_single_pole_accuracy(self, ck, rng):
        tab = ck.table(poles=1)
        ys = np.exp(rng.uniform(np.log(1e-6), np.log(20.0), 1000))
        rel = np.abs(tab(ys) - ck.w1(ys)) / ck.w1(ys)
        assert np.max(rel) <= 1e-8

    def test_table_vanishes_beyond_range(self, ck):
        assert ck.table()(np.array([1e4]))[0] == 0.0

    def test_truncation_bound_decreases(self, ck):
        t1 = ck.series_tail_bound(10_000, 1600.0)
        t2 = ck.series_tail_bound(20_000, 1600.0)
        t3 = ck.series_tail_bound(40_000, 1600.0)
        assert t1 > t2 > t3

    def test_choose_truncation_meets_tol(self, ck):
        for cond in (8.0, 1600.0, 64000.0):
            N, tail = ck.choose_truncation(cond, tol=1e-6)
            assert tail <= 1e-6
            assert ck.series_tail_bound(N, cond) == tail

    def test_invalid_weight(self):
        with pytest.raises(ValueError):
            CutoffKernel(3, 11)
        with pytest.raises(ValueError):
            CutoffKernel(0, 11)

    def test_requires_positive_argument(self, ck):
        with pytest.raises(ValueError):
            ck.w(0.0)
        with pytest.raises(ValueError):
            ck.w1(np.array([-1.0]))


class TestTransforms:
    def test_mellin_linearity(self):
        sup = bump_support("g_exact")
        base = mellin(lambda x: float(eval_bump("g_exact", x)), 1.5, sup)
        scaled = mellin(lambda x: 3.0 * float(eval_bump("g_exact", x)), 1.5, sup)
        assert scaled == pytest.approx(3.0 * base, rel=1e-10)

    def test_mellin_at_one_is_mass(self):
        sup = bump_support("g_exact")
        g = lambda x: float(eval_bump("g_exact", x))
        m1 = mellin(g, 1.0, sup)
        h0 = fourier_check_transform(g, 0.0, sup)
        assert m1.real == pytest.approx(h0, abs=1e-10)
        assert m1.imag == 0.0

    def test_mellin_at_two_is_first_moment(self):
        sup = bump_support("g_exact")
        g = lambda x: float(eval_bump("g_exact", x))
        m2 = mellin(g, 2.0, sup)
        xg = fourier_check_transform(lambda x: x * g(x), 0.0, sup)
        assert m2.real == pytest.approx(xg, abs=1e-10)

    def test_parity_relation(self):
        # with the cos+sin kernel, the transform at -y is the cos-sin
        # transform at y
        sup = bump_support("g_exact")
        g = lambda x: float(eval_bump("g_exact", x))
        minus = fourier_check_transform(g, -0.3, sup)
        from scipy.integrate import quad
        direct = quad(lambda x: (np.cos(2 * np.pi * 0.3 * x) - np.sin(2 * np.pi * 0.3 * x)) * g(x),
                      sup[0], sup[1], epsabs=1e-12, limit=300)[0]
        assert minus == pytest.approx(direct, abs=1e-9)

    def test_mellin_route_matches_quadrature(self):
        sup = bump_support("g_infinity")
        g = lambda x: float(eval_bump("g_infinity", x))
        for y in (1.0, -1.0, 2.5):
            direct = fourier_check_transform(g, y, sup)
            contour = fourier_transform_mellin_route(g, y, sup)
            assert abs(direct - contour) <= 1e-6, y

    def test_grid_matches_pointwise(self):
        for kind in ("g_exact", "g_infinity"):
            sup = bump_support(kind)
            g = lambda x: float(eval_bump(kind, x))
            delta = 0.7
            plus, minus = fourier_grid(kind, delta, 8)
            for k in (1, 3, 8):
                assert plus[k] == pytest.approx(
                    fourier_check_transform(g, k * delta, sup), abs=1e-9)
                assert minus[k] == pytest.approx(
                    fourier_check_transform(g, -k * delta, sup), abs=1e-9)

    def test_grid_zero_frequency_is_mass(self):
        plus, minus = fourier_grid("g_exact", 2.0, 4)
        sup = bump_support("g_exact")
        h0 = fourier_check_transform(lambda x: float(eval_bump("g_exact", x)), 0.0, sup)
        assert plus[0] == pytest.approx(h0, abs=1e-10)
        assert minus[0] == pytest.approx(h0, abs=1e-10)
