"""Smooth cutoff weights on the positive axis.

Two bump variants share the support [3/4, 2] and the plateau [1, 3/2]:

* ``g_exact``   -- an explicit piecewise formula whose dyadic dilates sum to
  one exactly: g(x) + g(x/2) = 1 on [1, 3].  Its first derivative jumps at
  x = 1 (slope 128 from the left, 0 from the right); the formula is kept
  as written because the partition identities do not need smoothness.
* ``g_infinity`` -- a C-infinity bump with the same support and plateau,
  built from the standard exp(-1/t) step, for transforms whose decay rate
  matters.

From either g one builds the three-scale hat v, the five-scale hat v1, the
truncated dyadic partition f_H, and the scan weight j_scan (supported in
[1/2, 2]).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

SUPPORT = (0.75, 2.0)
PLATEAU = (1.0, 1.5)


def g_exact(x) -> np.ndarray:
    """Piecewise bump: 0 below 3/4, e^16 e^{-1/(x-3/4)^2} on [3/4,1),
    1 on [1,3/2], 1 - g(x/2) on (3/2,2], 0 above 2."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m = (x >= 0.75) & (x < 1.0)
    if np.any(m):
        t = x[m] - 0.75
        with np.errstate(divide="ignore"):
            out[m] = np.exp(16.0 - 1.0 / (t * t))
    out[(x >= 1.0) & (x <= 1.5)] = 1.0
    m = (x > 1.5) & (x <= 2.0)
    if np.any(m):
        out[m] = 1.0 - g_exact(x[m] / 2.0)
    return out[0] if scalar else out


def _step(t: np.ndarray) -> np.ndarray:
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1, s(t)+s(1-t)=1."""
    t = np.asarray(t, dtype=float)
    a = np.zeros_like(t)
    b = np.zeros_like(t)
    m = t > 0
    a[m] = np.exp(-1.0 / t[m])
    m = t < 1
    b[m] = np.exp(-1.0 / (1.0 - t[m]))
    return a / (a + b)


def g_infinity(x) -> np.ndarray:
    """C-infinity bump with support [3/4, 2], plateau [1, 3/2], and the same
    two-scale identity g(x) + g(x/2) = 1 on [1, 3]."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    m = (x > 0.75) & (x < 1.0)
    out[m] = _step((x[m] - 0.75) * 4.0)
    out[(x >= 1.0) & (x <= 1.5)] = 1.0
    m = (x > 1.5) & (x < 2.0)
    # falling edge mirrors the rising edge of g(x/2), so the pair sums to 1
    out[m] = _step((2.0 - x[m]) * 2.0)
    return out[0] if scalar else out


def v_hat(x, g: Callable = g_exact) -> np.ndarray:
    """g(2x) + g(x) + g(x/2); identically 1 on [1/2, 3]."""
    x = np.asarray(x, dtype=float)
    return g(2.0 * x) + g(x) + g(x / 2.0)


def v1_hat(x, g: Callable = g_exact) -> np.ndarray:
    """Five-scale hat g(4x) + g(2x) + g(x) + g(x/2) + g(x/4); 1 on [1/4, 6]."""
    x = np.asarray(x, dtype=float)
    return g(4.0 * x) + g(2.0 * x) + g(x) + g(x / 2.0) + g(x / 4.0)


def f_partial(x, H: int, g: Callable = g_exact) -> np.ndarray:
    """Truncated dyadic partition g(x) + g(x/2) + ... + g(x/2^H).

    Equals 1 on [1, 3*2^(H-1)] and is supported in [3/4, 2^(H+1)].
    """
    if H < 0:
        raise ValueError("H must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    out = g(x)
    for h in range(1, H + 1):
        out = out + g(x / 2.0 ** h)
    return out


# affine map sending [1/2, 2] onto [3/4, 2]: the scan weight uses the full window
_J_SLOPE = (2.0 - 0.75) / (2.0 - 0.5)


def j_scan(x) -> np.ndarray:
    """Default scan weight: smooth, nonnegative, supported in [1/2, 2]."""
    x = np.asarray(x, dtype=float)
    return g_infinity(0.75 + (x - 0.5) * _J_SLOPE)


BUMPS: dict[str, Callable] = {
    "g_exact": g_exact,
    "g_infinity": g_infinity,
    "j_scan": j_scan,
}


def eval_bump(kind: str, x, H: int | None = None):
    """Evaluate a named weight at x.

    kind is one of 'g_exact', 'g_infinity', 'j_scan', 'v', 'v1', or 'f'
    (the last requires the truncation order H).
    """
    if kind in BUMPS:
        return BUMPS[kind](x)
    if kind == "v":
        return v_hat(x)
    if kind == "v1":
        return v1_hat(x)
    if kind == "f":
        if H is None:
            raise ValueError("kind 'f' requires the truncation order H")
        return f_partial(x, H)
    raise ValueError(f"unknown bump kind {kind!r}")


def bump_support(kind: str, H: int | None = None) -> tuple[float, float]:
    """Closed interval outside of which the named weight vanishes."""
    if kind in ("g_exact", "g_infinity"):
        return SUPPORT
    if kind == "j_scan":
        return (0.5, 2.0)
    if kind == "v":
        return (0.375, 4.0)
    if kind == "v1":
        return (0.1875, 8.0)
    if kind == "f":
        if H is None:
            raise ValueError("kind 'f' requires H")
        return (0.75, 2.0 ** (H + 1))
    raise ValueError(f"unknown bump kind {kind!r}")
