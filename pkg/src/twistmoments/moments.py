"""Family scans: smoothed moments of central derivatives, growth diagnostics,
nonvanishing counts with the Cauchy-Schwarz lower bound, and a mean-value
(large-sieve shape) diagnostic.

The smoothed second moment over the odd-sign family,

    S2(X) = sum*_{(d,2q)=1, omega=-1} |L'(1/2)|^2 J(8d/X),

is expected to grow like a constant times X log^3 X; the scan records the
dimensionless ratio S2/(X log^3 X) and leaves any statement about the
constant to the data.  The weighted Cauchy-Schwarz inequality
S1^2 <= (sum of weights over nonvanishing members) * S2 turns the first and
second moments into a lower bound for the count of members with |L'| above
the certified numerical floor.

Per-member evaluations run as a parallel map with one output slot per member;
all reductions happen afterwards in ascending-d order, so identical
configurations produce bit-identical results regardless of thread count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _fast
from .arith import enumerate_family, is_fundamental_discriminant
from .bumps import bump_support, eval_bump
from .central import derivative_factor, root_number
from .kernels import CutoffKernel
from .newform import EigenvalueTable, NewformSpec

ORACLE_TOL = 1e-4  # certified agreement of the series path with the oracle


@dataclass(frozen=True)
class MomentRecord:
    """One scan row; S1/S2 aggregate the odd-sign family, the _plus fields
    the even-sign family (derivative through the relation path)."""

    X: float
    family_size: int
    n_omega_minus: int
    n_omega_plus: int
    S1: float
    S2: float
    ratio_log3: float
    cs_lower_bound: float
    N_X: int
    cs_slack: float
    S1_plus: float
    S2_plus: float
    max_tail_bound: float
    wall_seconds: float


@dataclass
class ScanPoints:
    """Per-member values persisted for round-trip checks and reporting."""

    X: float
    d: np.ndarray
    omega: np.ndarray
    weight: np.ndarray
    lprime: np.ndarray
    lvalue: np.ndarray  # nan where omega = -1
    tail_bound: np.ndarray
    trunc_N: np.ndarray


def _bulk_series(table: EigenvalueTable, kernel: CutoffKernel, Ds: np.ndarray,
                 tol: float, poles: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Series values (times 2), truncations, and tail bounds for many D."""
    if len(Ds) == 0:
        z = np.zeros(0)
        return z, np.zeros(0, dtype=np.int64), z
    Ns = np.empty(len(Ds), dtype=np.int64)
    tails = np.empty(len(Ds))
    for i, D in enumerate(Ds):
        Ns[i], tails[i] = kernel.choose_truncation(float(abs(D)), tol=tol, poles=poles)
    if Ns.max() > table.N:
        raise ValueError(
            f"eigenvalue table reaches {table.N}; the scan needs {int(Ns.max())}")
    tab = kernel.table(poles=poles)
    vals = _fast.twist_series_bulk(
        Ds.astype(np.int64), Ns, table.spf, table.values, table.inv_sqrt, table.log_n,
        tab.t_lo, tab.inv_h, tab.knots,
        tab.coeffs[0], tab.coeffs[1], tab.coeffs[2], tab.coeffs[3], tab.t_hi)
    return 2.0 * vals, Ns, tails


def scan_single_x(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                  X: float, J_kind: str = "j_scan", tol: float = 1e-6,
                  vanish_eps: float = 1e-3) -> tuple[MomentRecord, ScanPoints]:
    """Evaluate every family member at scale X and aggregate one record."""
    t0 = time.monotonic()
    fam = enumerate_family(X, spec.level)
    d = fam.members
    n_members = len(d)
    omega = np.array([root_number(spec, 8 * int(x)) for x in d], dtype=np.int64) \
        if n_members else np.zeros(0, dtype=np.int64)
    weight = np.asarray(eval_bump(J_kind, 8.0 * d / X)) if n_members else np.zeros(0)

    minus = omega == -1
    plus = ~minus
    lprime = np.zeros(n_members)
    lvalue = np.full(n_members, np.nan)
    tails = np.zeros(n_members)
    truncs = np.zeros(n_members, dtype=np.int64)

    v_minus, n_minus_tr, t_minus = _bulk_series(table, kernel, 8 * d[minus], tol, poles=2)
    lprime[minus] = v_minus
    tails[minus] = t_minus
    truncs[minus] = n_minus_tr

    factors = np.array([derivative_factor(spec, 8 * int(x)) for x in d[plus]])
    # the relation multiplies the series tail by the log factor; absorb it
    tol_plus = tol / float(np.max(factors)) if len(factors) else tol
    v_plus, n_plus_tr, t_plus = _bulk_series(table, kernel, 8 * d[plus], tol_plus, poles=1)
    lvalue[plus] = v_plus
    lprime[plus] = -v_plus * factors
    tails[plus] = t_plus * factors if len(t_plus) else t_plus
    truncs[plus] = n_plus_tr

    # fixed ascending-d reduction order
    w_m, lp_m = weight[minus], lprime[minus]
    S1 = float(np.sum(w_m * lp_m))
    S2 = float(np.sum(w_m * lp_m * lp_m))
    S1_plus = float(np.sum(weight[plus] * lprime[plus]))
    S2_plus = float(np.sum(weight[plus] * lprime[plus] ** 2))
    logX = np.log(X)
    ratio_log3 = S2 / (X * logX ** 3) if X > 1 else np.nan
    nonzero = np.abs(lp_m) > vanish_eps
    N_X = int(np.sum(nonzero))
    cs_lower = S1 * S1 / S2 if S2 > 0 else 0.0
    slack = float(np.sum(w_m[~nonzero]))
    rec = MomentRecord(
        X=float(X), family_size=n_members, n_omega_minus=int(np.sum(minus)),
        n_omega_plus=int(np.sum(plus)), S1=S1, S2=S2, ratio_log3=ratio_log3,
        cs_lower_bound=cs_lower, N_X=N_X, cs_slack=slack,
        S1_plus=S1_plus, S2_plus=S2_plus,
        max_tail_bound=float(np.max(tails, initial=0.0)),
        wall_seconds=time.monotonic() - t0,
    )
    pts = ScanPoints(X=float(X), d=d.copy(), omega=omega, weight=weight,
                     lprime=lprime, lvalue=lvalue, tail_bound=tails, trunc_N=truncs)
    return rec, pts


def scan_table_requirement(spec: NewformSpec, kernel: CutoffKernel, X_max: float,
                           tol: float = 1e-6) -> int:
    """Eigenvalue-table length needed to scan up to X_max at tolerance tol."""
    worst_D = 2.0 * X_max
    need_minus, _ = kernel.choose_truncation(worst_D, tol=tol, poles=2)
    tol_plus = tol / derivative_factor(spec, int(worst_D))
    need_plus, _ = kernel.choose_truncation(worst_D, tol=tol_plus, poles=1)
    return max(need_minus, need_plus)


def second_moment_scan(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                       X_grid, J_kind: str = "j_scan", tol: float = 1e-6,
                       vanish_eps: float = 1e-3) -> tuple[list[MomentRecord], list[ScanPoints]]:
    """One record per X, ascending; raises before computing anything if the
    eigenvalue table cannot cover the largest truncation in the grid."""
    X_grid = sorted(float(x) for x in X_grid)
    if X_grid and X_grid[0] < 16:
        raise ValueError("scan scales must be >= 16")
    if X_grid:
        need = scan_table_requirement(spec, kernel, X_grid[-1], tol)
        if need > table.N:
            raise ValueError(
                f"table reaches {table.N}; scanning X = {X_grid[-1]:g} needs {need}")
    records, points = [], []
    for X in X_grid:
        rec, pts = scan_single_x(spec, table, kernel, X, J_kind, tol, vanish_eps)
        records.append(rec)
        points.append(pts)
    return records, points


def first_moment(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                 X: float, J_kind: str = "j_scan", tol: float = 1e-6,
                 include_even_sign: bool = False) -> float:
    """Smoothed first moment of L'(1/2) over the family (odd sign by default;
    even-sign members enter through the relation path when requested)."""
    _, pts = scan_single_x(spec, table, kernel, X, J_kind, tol)
    mask = np.ones(len(pts.d), dtype=bool) if include_even_sign else pts.omega == -1
    return float(np.sum(pts.weight[mask] * pts.lprime[mask]))


def certified_floor(max_tail_bound: float, oracle_tol: float = ORACLE_TOL) -> float:
    """Smallest admissible vanishing threshold: ten times the per-point tail
    budget plus the oracle agreement tolerance."""
    return 10.0 * max_tail_bound + oracle_tol


def nonvanishing_count(spec: NewformSpec, table: EigenvalueTable, kernel: CutoffKernel,
                       X: float, vanish_eps: float = 1e-3,
                       J_kind: str = "j_scan", tol: float = 1e-6) -> tuple[int, float]:
    """(N_X, cs_lower_bound) at scale X.

    N_X counts odd-sign members with |L'| above vanish_eps; the bound
    S1^2/S2 <= N_X + slack comes with the scan row.  vanish_eps below the
    certified numerical floor is rejected.
    """
    if vanish_eps <= 0:
        raise ValueError("vanish_eps must be positive")
    rec, _ = scan_single_x(spec, table, kernel, X, J_kind, tol, vanish_eps)
    floor = certified_floor(rec.max_tail_bound)
    if vanish_eps < floor:
        raise ValueError(
            f"vanish_eps {vanish_eps:g} is below the certified floor {floor:g}")
    return rec.N_X, rec.cs_lower_bound


def fundamental_discriminants_in(lo: int, hi: int) -> np.ndarray:
    """All fundamental discriminants m with lo <= |m| <= hi, both signs,
    ordered by |m| then sign."""
    out = []
    for a in range(lo, hi + 1):
        for m in (a, -a):
            if m != 0 and is_fundamental_discriminant(m):
                out.append(m)
    return np.array(out, dtype=np.int64)


def largesieve_diagnostic(spec: NewformSpec, table: EigenvalueTable,
                          M: int, N: int, t: float,
                          G_kind: str = "g_exact") -> tuple[float, float, float]:
    """Mean-value diagnostic over the dyadic discriminant window:

        lhs = sum*_{M <= |m| <= 2M} |sum_n lam(n) n^(-1/2-it) (m/n) G(n/N)|^2,

    reported against the shape (1+|t|)^2 (M + N log(2 + N/M)).  The ratio is
    informational; no implied constant is asserted.
    """
    if M < 1 or N < 1:
        raise ValueError("M and N must be positive")
    if M > 10 ** 4 or N > 10 ** 4:
        raise ValueError("brute-force diagnostic capped at M, N <= 1e4")
    lo, hi = bump_support(G_kind)
    n_hi = min(int(np.ceil(hi * N)), table.N)
    n = np.arange(n_hi + 1, dtype=float)
    n[0] = 1.0
    g_weights = np.asarray(eval_bump(G_kind, np.arange(n_hi + 1) / N))
    base = table.values[: n_hi + 1] * n ** (-0.5) * g_weights
    phase = -t * np.log(n)
    lam_re = base * np.cos(phase)
    lam_im = base * np.sin(phase)
    ms = fundamental_discriminants_in(M, 2 * M)
    n_lo = max(1, int(lo * N))
    sre, sim = _fast.character_inner_sums(ms, lam_re, lam_im, table.spf[: n_hi + 1],
                                          n_lo, n_hi)
    lhs = float(np.sum(sre ** 2 + sim ** 2))
    bound_shape = (1.0 + abs(t)) ** 2 * (M + N * np.log(2.0 + N / M))
    return lhs, float(bound_shape), lhs / float(bound_shape)
