"""Smooth cutoff weights and their dyadic partition identities.

Two bump variants share the support [3/4, 2] and plateau [1, 3/2]: the exact
piecewise formula (whose dilates telescope to 1 in floating point) and a
C-infinity variant for transform work.  Their rescalings tile the half-line.
"""

import numpy as np

from twistmoments import eval_bump, f_partial, v_hat, v1_hat

print("pointwise values of the exact bump")
for x in (0.5, 7 / 8, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5):
    print(f"  g_exact({x:5.3f}) = {eval_bump('g_exact', x):.6e}")
print(f"  (at 7/8 the formula gives e^-48 = {np.exp(-48.0):.6e})")

print("\ntwo-scale identity g(x) + g(x/2) = 1 on [1, 3]")
x = np.linspace(1.0, 3.0, 7)
for xi in x:
    s = eval_bump("g_exact", xi) + eval_bump("g_exact", xi / 2)
    print(f"  x = {xi:4.2f}: sum = {s:.17f}")

print("\nthree-scale hat v(x) = g(2x) + g(x) + g(x/2) is 1 on [1/2, 3]")
xs = np.linspace(0.5, 3.0, 1001)
print(f"  max |v - 1| on 1001 points: {np.max(np.abs(v_hat(xs) - 1.0)):.2e}")

print("\nfive-scale hat v1 is 1 on [1/4, 6]")
xs = np.linspace(0.25, 6.0, 1001)
print(f"  max |v1 - 1| on 1001 points: {np.max(np.abs(v1_hat(xs) - 1.0)):.2e}")

print("\ntruncated dyadic partition sum_(h<=H) g(x/2^h) = 1 on [1, 3*2^(H-1)]")
rng = np.random.default_rng(1)
for H in (5, 10, 20):
    xs = np.exp(rng.uniform(np.log(1.0), np.log(3.0 * 2.0 ** (H - 1)), 2000))
    err = np.max(np.abs(f_partial(xs, H) - 1.0))
    print(f"  H = {H:2d}: max deviation {err:.2e} over [1, {3 * 2 ** (H - 1):.0f}]")

print("\nthe smooth variant obeys the same identities")
xs = np.linspace(1.0, 3.0, 501)
pair = eval_bump("g_infinity", xs) + eval_bump("g_infinity", xs / 2)
print(f"  max |g_inf(x) + g_inf(x/2) - 1| on [1, 3]: {np.max(np.abs(pair - 1)):.2e}")
