"""Acceptance suite: one test per criterion, each printing a pass line with
the measured quantity (run with pytest -s to watch them stream)."""

import json

import numpy as np
import pytest

from twistmoments.arith import enumerate_family
from twistmoments.bumps import eval_bump, f_partial, v_hat
from twistmoments.central import (finite_difference_oracle, lprime_central,
                                  lprime_from_relation, oracle_central_value,
                                  root_number)
from twistmoments.cli import main as cli_main
from twistmoments.gauss import oracle_sweep
from twistmoments.kernels import CutoffKernel
from twistmoments.moments import largesieve_diagnostic, second_moment_scan
from twistmoments.poisson import poisson_verify

SCAN_GRID = [1000.0, 2000.0, 4000.0, 8000.0, 16000.0, 32000.0]  # CI cap


@pytest.fixture(scope="module")
def scan_results(spec11, table_big, kernel11):
    return second_moment_scan(spec11, table_big, kernel11, SCAN_GRID)


def _report(num, text):
    print(f"\n[criterion {num:02d}] PASS  {text}")


def test_criterion_01_gauss_oracle_equivalence():
    worst = 0.0
    count = 0
    for k, n, closed, brute, err in oracle_sweep(3000, -50, 50):
        assert err <= 1e-9 * n, (k, n)
        worst = max(worst, err / n)
        count += 1
    _report(1, f"closed vs brute on {count} (k, n) pairs, worst |err|/n = {worst:.2e}")


def test_criterion_02_poisson_identity():
    worst = 0.0
    for bump in ("g_exact", "g_infinity"):
        for n in range(1, 100, 2):
            for X in (200.0, 1000.0):
                rep = poisson_verify(n, X, bump, tol=1e-6)
                assert rep.residual <= 1e-6, (bump, n, X, rep.residual)
                worst = max(worst, rep.residual)
    _report(2, f"residual <= 1e-6 for odd n <= 99, X in (200, 1000), both bumps; "
               f"worst = {worst:.2e}")


def test_criterion_03_partition_identities(rng):
    H = 20
    x = np.exp(rng.uniform(np.log(1.0), np.log(3.0 * 2.0 ** (H - 1)), 10_000))
    err_f = float(np.max(np.abs(f_partial(x, H) - 1.0)))
    assert err_f <= 1e-12
    xv = rng.uniform(0.5, 3.0, 1000)
    err_v = float(np.max(np.abs(v_hat(xv) - 1.0)))
    assert err_v <= 1e-12
    _report(3, f"dyadic partition off by {err_f:.1e} on 1e4 points; "
               f"three-scale hat off by {err_v:.1e}")


def test_criterion_04_cutoff_kernel_checks(kernel11):
    worst = 0.0
    for y in (0.1, 1.0, 10.0):
        diff = abs(kernel11.w(y) - kernel11.w_vertical(y))
        assert diff <= 1e-9
        worst = max(worst, diff)
    from scipy.special import psi
    resids = []
    for y in (1e-3, 1e-6):
        resid = abs(kernel11.w(y) - (psi(1.0) - np.log(kernel11.scale * y)))
        assert resid <= 2.0 * kernel11.scale * y + 1e-9
        resids.append(resid)
    c3 = kernel11.decay_constant(3.0)
    assert kernel11.w(1e3) <= c3 * (kernel11.scale * 1e3) ** -3
    assert kernel11.w(20.0) <= c3 * (kernel11.scale * 20.0) ** -3  # nonvacuous
    _report(4, f"two-route agreement worst {worst:.1e}; small-y residuals "
               f"{resids[0]:.1e}, {resids[1]:.1e}; cubic decay bound holds")


def test_criterion_05_eigenvalue_suite(spec11, table_big):
    N = 1_000_000
    tau = np.zeros(N + 1)
    for d in range(1, N + 1):
        tau[d:: d] += 1.0
    slack = float(np.max(np.abs(table_big.values[1: N + 1]) - tau[1:]))
    assert slack <= 1e-9
    an = table_big.integer_coefficients()
    spf = table_big.spf
    hasse_margin = 0.0
    for p in range(2, 10_001):
        if spf[p] == p and p != spec11.level:
            assert abs(an[p]) <= 2.0 * np.sqrt(p), p
            hasse_margin = max(hasse_margin, abs(an[p]) / (2.0 * np.sqrt(p)))
    from twistmoments.arith import factorize
    lam = table_big.values
    for n in range(1, 10_001):
        direct = 1.0
        for p, e in factorize(n).factors:
            direct *= lam[p ** e]
        assert lam[n] == pytest.approx(direct, rel=5e-13, abs=1e-300), n
    _report(5, f"Deligne slack {slack:.1e} to n = 1e6; Hasse margin "
               f"{hasse_margin:.3f} to p = 1e4; sieve = direct to n = 1e4")


ODD_SIGN_D = [1, 3, 5, 15, 23]


def test_criterion_06_central_value_oracle(spec11, table_big, kernel11):
    worst_pair = 0.0
    worst_zero = 0.0
    for d in ODD_SIGN_D:
        D = 8 * d
        assert D <= 1600
        series, tail = lprime_central(spec11, table_big, kernel11, D)
        oracle = finite_difference_oracle(spec11, table_big, D)
        assert abs(series - oracle) <= 1e-4, (d, series, oracle)
        direct = abs(oracle_central_value(spec11, table_big, D))
        assert direct <= 1e-6, d
        worst_pair = max(worst_pair, abs(series - oracle))
        worst_zero = max(worst_zero, direct)
    _report(6, f"series vs oracle on 5 odd-sign twists: worst {worst_pair:.2e}; "
               f"direct central value at odd sign <= {worst_zero:.1e}")


def test_criterion_07_indicator_and_relation(spec11, table_big, kernel11):
    fam = enumerate_family(10_000.0, spec11.level)
    even = [int(d) for d in fam.members if root_number(spec11, 8 * int(d)) == +1]
    assert even, "family has even-sign members"
    for d in even:
        value, tail = lprime_central(spec11, table_big, kernel11, 8 * d)
        assert value == 0.0 and tail == 0.0
    worst = 0.0
    for d in even[:2]:
        D = 8 * d
        rel, _ = lprime_from_relation(spec11, table_big, kernel11, D)
        oracle = finite_difference_oracle(spec11, table_big, D)
        assert abs(rel - oracle) <= 1e-4, (d, rel, oracle)
        worst = max(worst, abs(rel - oracle))
    _report(7, f"exact 0 on all {len(even)} even-sign members of the X=1e4 family; "
               f"relation vs oracle on d={even[0]},{even[1]}: worst {worst:.2e}")


def test_criterion_08_moment_growth_shape(scan_results):
    records, _ = scan_results
    by_x = {r.X: r for r in records}
    checked = []
    for r in records:
        if r.X >= 16_000.0 and 2.0 * r.X in by_x:
            ratio = by_x[2.0 * r.X].S2 / r.S2
            model = 2.0 * (np.log(2.0 * r.X) / np.log(r.X)) ** 3
            dev = ratio / model - 1.0
            assert abs(dev) <= 0.20, (r.X, ratio, model)
            checked.append((r.X, ratio, model, dev))
    assert checked, "the grid must contain at least one doubling pair above 1.6e4"
    msg = "; ".join(f"S2({2 * x:g})/S2({x:g}) = {r:.3f} vs {m:.3f} ({d:+.1%})"
                    for x, r, m, d in checked)
    _report(8, msg)


def test_criterion_09_nonvanishing(scan_results):
    records, _ = scan_results
    stability = []
    for r in records:
        if r.S2 > 0:
            assert r.cs_lower_bound <= r.N_X + r.cs_slack + 1e-9 * r.cs_lower_bound, r.X
        stability.append((r.X, r.N_X * np.log(r.X) / r.X))
    seq = ", ".join(f"X={x:g}: {v:.3f}" for x, v in stability)
    _report(9, f"cs_lower_bound <= N_X on every row; N_X log X/X sequence: {seq}")


def test_criterion_10_large_sieve_diagnostics(spec11, table_big):
    ratios = {}
    for M in (100, 1000):
        for N in (100, 1000):
            for t in (0.0, 5.0):
                lhs, shape, ratio = largesieve_diagnostic(spec11, table_big, M, N, t)
                assert np.isfinite(ratio)
                ratios[(M, N, t)] = ratio
    for M in (100, 1000):
        for N in (100, 1000):
            assert ratios[(M, N, 5.0)] <= 10.0 * ratios[(M, N, 0.0)], (M, N)
    peak = max(ratios.values())
    _report(10, f"ratios finite on the (M, N, t) grid, max = {peak:.4f}; "
                f"t-shape margin holds")


def test_criterion_11_manifest_determinism(tmp_path):
    form = tmp_path / "form.txt"
    form.write_text("weight=2\nlevel=11\ncurve=0,-1,1,-10,-20\nbad_ap=11:1\nfricke_eta=-1\n")
    out1 = tmp_path / "run1"
    rc = cli_main(["scan-moment", "--form", str(form), "--out-dir", str(out1),
                   "--set", "x_grid=500,1000", "--set", "threads=1"])
    assert rc == 0
    manifest = json.loads((out1 / "manifest.json").read_text())
    manifest["config"]["out_dir"] = str(tmp_path / "run2")
    manifest["config"]["threads"] = "2"  # thread count must not alter the data
    patched = tmp_path / "patched.json"
    patched.write_text(json.dumps(manifest))
    assert cli_main(["rerun", str(patched)]) == 0
    for name in ("scan.csv", "ratio_log3.dat"):
        b1 = (out1 / name).read_bytes()
        b2 = (tmp_path / "run2" / name).read_bytes()
        assert b1 == b2, name
    a, b = tmp_path / "ga", tmp_path / "gb"
    assert cli_main(["gauss-verify", "--out-dir", str(a), "--set", "n_max=25"]) == 0
    assert cli_main(["gauss-verify", "--out-dir", str(b), "--set", "n_max=25"]) == 0
    assert (a / "gauss.csv").read_bytes() == (b / "gauss.csv").read_bytes()
    _report(11, "scan-moment rerun from manifest (different thread count) and "
                "repeated gauss-verify both byte-identical")
