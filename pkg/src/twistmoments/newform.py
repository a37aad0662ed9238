"""The fixed newform: normalized Hecke eigenvalues and the Fricke sign.

Eigenvalues come either from counting points on a rational Weierstrass model
(weight 2) or from a user-supplied table of prime coefficients.  Tables are
normalized, lam(p) = a_p / p^((k-1)/2), filled to a bound by a linear sieve,
and immutable once built.

The functional-equation sign eta (Fricke eigenvalue) is never assumed: it is
fixed numerically by testing which sign makes two differently-smoothed
evaluations of the completed untwisted L-function agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, gammaln

from . import _fast
from .arith import factorize, is_prime


@dataclass(frozen=True)
class CurveCoefficients:
    """Integral Weierstrass model y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def b_invariants(self) -> tuple[int, int, int]:
        b2 = self.a1 ** 2 + 4 * self.a2
        b4 = 2 * self.a4 + self.a1 * self.a3
        b6 = self.a3 ** 2 + 4 * self.a6
        return b2, b4, b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6 = self.b_invariants
        b8 = (b2 * b6 - b4 ** 2) // 4
        return -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6


@dataclass(frozen=True)
class NewformSpec:
    """Weight k, odd level q, optional known Fricke sign (0 = determine
    numerically), and the eigenvalue source."""

    weight: int
    level: int
    fricke_eta: int = 0
    curve: CurveCoefficients | None = None
    ap_table: dict[int, int] | None = None
    bad_ap: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.weight < 2 or self.weight % 2 != 0:
            raise ValueError("weight must be an even integer >= 2")
        if self.level < 1 or self.level % 2 == 0:
            raise ValueError("level must be odd (the twists have conductor 8d)")
        if self.fricke_eta not in (-1, 0, 1):
            raise ValueError("fricke_eta must be -1, 0, or +1")
        if (self.curve is None) == (self.ap_table is None):
            raise ValueError("exactly one of curve or ap_table must be given")
        if self.curve is not None and self.weight != 2:
            raise ValueError("curve sources define weight-2 forms")


def ap_point_count(curve: CurveCoefficients, p: int) -> int:
    """Trace of Frobenius at an odd prime of good reduction, by summing the
    quadratic character of the completed-square cubic over x mod p."""
    if p == 2 or not is_prime(p):
        raise ValueError("ap_point_count requires an odd prime")
    if curve.discriminant % p == 0:
        raise ValueError(f"bad reduction at {p}: supply a_p explicitly")
    b2, b4, b6 = curve.b_invariants
    return int(_fast._trace_char_count(p, b2 % p, b4 % p, b6 % p))


def ap_full_enumeration(curve: CurveCoefficients, p: int) -> int:
    """Trace at any good prime by counting all (x, y) in F_p^2; O(p^2), used
    for p = 2 and as an independent check at small p."""
    if curve.discriminant % p == 0:
        raise ValueError(f"bad reduction at {p}")
    count = 1  # point at infinity
    c = curve
    for x in range(p):
        rhs = (x ** 3 + c.a2 * x * x + c.a4 * x + c.a6) % p
        for y in range(p):
            if (y * y + c.a1 * x * y + c.a3 * y) % p == rhs:
                count += 1
    return p + 1 - count


class IncompleteSourceError(ValueError):
    """A required prime coefficient is not obtainable from the source."""


@dataclass
class EigenvalueTable:
    """lam(1..N) as a dense array (index 0 unused), plus shared sieve data."""

    spec: NewformSpec
    N: int
    values: np.ndarray
    spf: np.ndarray
    log_n: np.ndarray
    inv_sqrt: np.ndarray

    def lam(self, n: int) -> float:
        if not 1 <= n <= self.N:
            raise IndexError(f"table holds n <= {self.N}")
        return float(self.values[n])

    def integer_coefficients(self) -> np.ndarray:
        """Exact integer a(n) for weight-2 curve sources (a(n) = lam(n) sqrt(n))."""
        if self.spec.weight != 2:
            raise ValueError("integer coefficients only at weight 2")
        primes = _fast.primes_from_spf(self.spf)
        prime_index = np.zeros(self.N + 1, dtype=np.int32)
        prime_index[primes] = np.arange(len(primes), dtype=np.int32)
        a_p = np.array([round(self.values[p] * np.sqrt(p)) for p in primes], dtype=np.int64)
        is_bad = np.array([self.spec.level % int(p) == 0 for p in primes], dtype=np.bool_)
        return _fast.an_fill_integer(self.N, self.spf, prime_index, a_p, is_bad,
                                     primes.astype(np.int64))


def lambda_table(spec: NewformSpec, N: int) -> EigenvalueTable:
    """Build lam(1..N): prime values from the source, the Hecke recursion at
    prime powers (second term dropped at p | level), multiplicativity elsewhere."""
    if N < 1:
        raise ValueError("N must be positive")
    spf = _fast.spf_sieve(N)
    primes = _fast.primes_from_spf(spf) if N >= 2 else np.zeros(0, dtype=np.int64)
    prime_index = np.zeros(N + 1, dtype=np.int32)
    if len(primes):
        prime_index[primes] = np.arange(len(primes), dtype=np.int32)

    if spec.curve is not None:
        b2, b4, b6 = spec.curve.b_invariants
        disc = spec.curve.discriminant
        supplied: dict[int, int] = dict(spec.bad_ap)
        for p, _ in factorize(abs(disc)).factors:
            # singular reduction of this model; counting would be wrong there
            if p <= N and p not in supplied:
                raise IncompleteSourceError(
                    f"model is singular mod {p}: supply bad_ap[{p}] explicitly")
        if N >= 2 and 2 not in supplied:
            supplied[2] = ap_full_enumeration(spec.curve, 2)
        sp = np.array(sorted(supplied), dtype=np.int64)
        sap = np.array([supplied[int(p)] for p in sp], dtype=np.int64)
        a_p = _fast.ap_table_curve(primes, b2, b4, b6, sp, sap)
    else:
        missing = [int(p) for p in primes if int(p) not in spec.ap_table]
        if missing:
            raise IncompleteSourceError(
                f"ap table lacks {len(missing)} primes up to {N}, first {missing[:5]}")
        a_p = np.array([spec.ap_table[int(p)] for p in primes], dtype=np.int64)

    lam_p = a_p / np.asarray(primes, dtype=float) ** ((spec.weight - 1) / 2.0)
    is_bad = np.array([spec.level % int(p) == 0 for p in primes], dtype=np.bool_)
    values = _fast.lambda_fill(N, spf, prime_index, lam_p, is_bad)
    n = np.arange(N + 1, dtype=float)
    n[0] = 1.0
    return EigenvalueTable(spec=spec, N=N, values=values, spf=spf,
                           log_n=np.log(n), inv_sqrt=1.0 / np.sqrt(n))


class AmbiguousSignError(RuntimeError):
    """Neither candidate functional-equation sign is numerically consistent."""


def _completed_untwisted(table: EigenvalueTable, s: float, theta: float, N: int) -> float:
    """One-sided smoothed series I_theta(s) for the untwisted completed L:
    A^s sum lam(n) n^(-s) Gamma(s + (k-1)/2, n/(A theta)), A = sqrt(q)/(2 pi)."""
    spec = table.spec
    A = np.sqrt(spec.level) / (2.0 * np.pi)
    n = np.arange(1, N + 1, dtype=float)
    a = s + (spec.weight - 1) / 2.0
    g = gammaincc(a, n / (A * theta)) * np.exp(gammaln(a))
    return float(A ** s * np.sum(table.values[1: N + 1] * n ** (-s) * g))


def determine_fricke_sign(spec: NewformSpec, table: EigenvalueTable | None = None,
                          s0: float = 0.75, thetas: tuple[float, float] = (1.5, 2.0 / 3.0),
                          win_tol: float = 1e-6, lose_tol: float = 1e-2) -> int:
    """Fricke sign eta from the untwisted functional equation.

    For the candidate sign s the completed value Lambda(s0) is assembled as
    I_theta(s0) + (i^k eta) I_(1/theta)(1 - s0); only the true sign makes the
    assembly independent of theta.  The winning sign must leave a residual
    below win_tol while the losing sign exceeds lose_tol, otherwise the
    eigenvalue data is inconsistent and AmbiguousSignError is raised.
    """
    if spec.fricke_eta in (-1, 1):
        return spec.fricke_eta
    need = int(50 * np.sqrt(spec.level)) + 64
    if table is None:
        table = lambda_table(spec, need)
    if table.N < need:
        raise ValueError(f"eigenvalue table must reach {need}")
    n_series = min(table.N, need)
    i_k = (-1) ** (spec.weight // 2)
    th1, th2 = thetas
    resid = {}
    for eta in (+1, -1):
        eps = i_k * eta
        v1 = _completed_untwisted(table, s0, th1, n_series) \
            + eps * _completed_untwisted(table, 1 - s0, 1 / th1, n_series)
        v2 = _completed_untwisted(table, s0, th2, n_series) \
            + eps * _completed_untwisted(table, 1 - s0, 1 / th2, n_series)
        resid[eta] = abs(v1 - v2) / max(1.0, abs(v1))
    winner = min(resid, key=resid.get)
    loser = -winner
    if resid[winner] < win_tol and resid[loser] > lose_tol:
        return winner
    raise AmbiguousSignError(
        f"functional-equation residuals {resid} identify no sign "
        f"(need < {win_tol:g} vs > {lose_tol:g}); eigenvalue data inconsistent?")


def parse_ap_table_file(path: str) -> dict[int, int]:
    """Read 'p a_p' pairs, one per line; '#' starts a comment."""
    out: dict[int, int] = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 'p a_p', got {line!r}")
            p, ap = int(parts[0]), int(parts[1])
            if not is_prime(p):
                raise ValueError(f"{path}:{line_no}: {p} is not prime")
            out[p] = ap
    return out


def level11_spec(fricke_eta: int = 0) -> NewformSpec:
    """The standard level-11 weight-2 form, via the curve
    y^2 + y = x^3 - x^2 - 10 x - 20 (split multiplicative at 11, a_11 = +1)."""
    return NewformSpec(weight=2, level=11, fricke_eta=fricke_eta,
                       curve=CurveCoefficients(0, -1, 1, -10, -20),
                       bad_ap={11: 1})
