"""Central derivatives of quadratic twists: exact series vs oracle.

Twisting by chi_(8d) flips the functional-equation sign with chi_(8d)(q).
Odd sign forces L(1/2) = 0 and the derivative is an exact rapidly-cut-off
series; even sign gives L(1/2) by the single-pole kernel and the derivative
by a closed-form relation.  A finite-difference oracle built from general-s
smoothed series validates every path.
"""

from twistmoments import (CutoffKernel, finite_difference_oracle, lambda_table,
                          level11_spec, lprime_central, lprime_from_relation,
                          l_central, oracle_central_value, root_number, twist_point)

spec = level11_spec(fricke_eta=-1)
kernel = CutoffKernel(k=2, q=11)
table = lambda_table(spec, 60_000)

print("root numbers of the first few twists")
for d in range(1, 24, 2):
    if d % 11 == 0 or any(d % (p * p) == 0 for p in (3, 5, 7)) or d == 9:
        continue
    print(f"  d = {d:2d}: omega = {root_number(spec, 8 * d):+d}")

print("\nodd sign: exact derivative series against the finite-difference oracle")
for d in (1, 3, 5, 15, 23):
    D = 8 * d
    series, tail = lprime_central(spec, table, kernel, D)
    oracle = finite_difference_oracle(spec, table, D)
    zero = oracle_central_value(spec, table, D)
    print(f"  d = {d:2d}: L' = {series:+.10f} (tail {tail:.1e}), oracle "
          f"{oracle:+.10f}, |diff| {abs(series - oracle):.1e}, L(1/2) -> {zero:+.1e}")

print("\neven sign: central value and the derivative relation")
for d in (7, 13):
    D = 8 * d
    lv, _ = l_central(spec, table, kernel, D)
    lp, _ = lprime_from_relation(spec, table, kernel, D)
    oracle = finite_difference_oracle(spec, table, D)
    print(f"  d = {d:2d}: L(1/2) = {lv:+.10f}, L' = {lp:+.10f}, oracle "
          f"{oracle:+.10f}, |diff| {abs(lp - oracle):.1e}")

print("\na family member bundled as one record")
print(" ", twist_point(spec, table, kernel, 5))
