"""Normalized Hecke eigenvalues of the level-11 weight-2 form.

Prime coefficients come from counting points on the curve
y^2 + y = x^3 - x^2 - 10x - 20 over F_p; the Hecke recursion and
multiplicativity fill a dense table.  The classical eta-product expansion of
this form provides an exact independent oracle, and the functional-equation
sign is pinned down numerically rather than assumed.
"""

import numpy as np

from twistmoments import determine_fricke_sign, lambda_table, level11_spec
from twistmoments.newform import ap_full_enumeration, ap_point_count

spec = level11_spec()
print("prime coefficients by two independent counts")
for p in (3, 5, 7, 13, 17):
    fast = ap_point_count(spec.curve, p)
    slow = ap_full_enumeration(spec.curve, p)
    print(f"  a_{p} = {fast:+d} (character count) = {slow:+d} (full enumeration)")

print("\nnormalized table")
table = lambda_table(spec, 100_000)
for n in (1, 2, 4, 11, 121, 12, 1000):
    print(f"  lam({n}) = {table.lam(n):+.10f}")

print("\nexact match against the eta-product expansion (integer coefficients)")
an = table.integer_coefficients()
print(f"  a_1..a_12: {an[1:13].tolist()}")

print("\nbound checks on the table")
N = table.N
tau = np.zeros(N + 1)
for d in range(1, N + 1):
    tau[d:: d] += 1.0
print(f"  max |lam(n)| - tau(n) over n <= {N}: "
      f"{np.max(np.abs(table.values[1:]) - tau[1:]):.1e} (must be <= 0)")

print("\nthe functional-equation sign of the untwisted form")
eta = determine_fricke_sign(spec, table)
print(f"  determined numerically: eta = {eta:+d}")
