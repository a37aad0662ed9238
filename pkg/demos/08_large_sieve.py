"""Mean-value (large-sieve shape) diagnostics for twisted coefficient sums.

For fundamental discriminants m in a dyadic window, the mean square of the
bump-weighted coefficient sums is compared against the shape
(1 + |t|)^2 (M + N log(2 + N/M)).  The ratios are reported as data; no
implied constant is asserted, but the t-dependence must stay within a
generous margin once the shape factor is divided out.
"""

from twistmoments import lambda_table, largesieve_diagnostic, level11_spec

spec = level11_spec(fricke_eta=-1)
table = lambda_table(spec, 4001)

print("  M      N      t     lhs            shape          ratio")
ratios = {}
for M in (100, 1000):
    for N in (100, 1000):
        for t in (0.0, 5.0):
            lhs, shape, ratio = largesieve_diagnostic(spec, table, M, N, t)
            ratios[(M, N, t)] = ratio
            print(f"  {M:5d}  {N:5d}  {t:4.1f}  {lhs:13.6e}  {shape:13.6e}  {ratio:.6f}")

print("\nmax ratio over the grid (the empirical constant):",
      f"{max(ratios.values()):.6f}")

print("\nt-shape check: ratio growth after dividing by (1 + |t|)^2")
for M in (100, 1000):
    for N in (100, 1000):
        growth = ratios[(M, N, 5.0)] / ratios[(M, N, 0.0)]
        print(f"  M = {M:5d}, N = {N:5d}: ratio(5)/ratio(0) = {growth:.4f} (margin 10)")
