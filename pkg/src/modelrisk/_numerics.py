"""Small numerical kernels: monotone bisection and Gauss-Legendre panels."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import RootBracketError

XTOL = 1e-12
_MAX_EXPAND = 1100


def bracket_increasing(f, target, start=1.0):
    """Return (lo, hi) with f(lo) < target <= f(hi) for a non-decreasing f.

    ``target`` may be an array; ``f`` must accept arrays.
    """
    target = np.asarray(target, dtype=float)
    lo = np.full(target.shape, -abs(start))
    hi = np.full(target.shape, abs(start))
    for _ in range(_MAX_EXPAND):
        bad = f(lo) >= target
        if not bad.any():
            break
        lo = np.where(bad, 2.0 * lo, lo)
    else:
        raise RootBracketError("could not bracket from below")
    for _ in range(_MAX_EXPAND):
        bad = f(hi) < target
        if not bad.any():
            break
        hi = np.where(bad, 2.0 * hi, hi)
    else:
        raise RootBracketError("could not bracket from above")
    return lo, hi


def bisect_increasing(f, target, lo=None, hi=None, xtol=XTOL):
    """Smallest x (to ``xtol``) with f(x) >= target, f non-decreasing.

    Works elementwise on arrays of targets. The invariant f(lo) < target <=
    f(hi) is kept throughout, so the returned ``hi`` satisfies the lower
    quantile definition exactly.
    """
    target = np.asarray(target, dtype=float)
    if lo is None or hi is None:
        lo, hi = bracket_increasing(f, target)
    else:
        lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
        if np.any(f(lo) >= target) or np.any(f(hi) < target):
            raise RootBracketError("supplied bracket does not straddle the target")
    for _ in range(400):
        tol = np.maximum(xtol, 4 * np.finfo(float).eps * np.maximum(abs(lo), abs(hi)))
        active = (hi - lo) > tol
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        up = f(mid) >= target
        hi = np.where(active & up, mid, hi)
        lo = np.where(active & ~up, mid, lo)
    return hi


def bisect_decreasing_root(g, lo, hi, xtol=1e-15):
    """Root of a scalar strictly decreasing g on [lo, hi] with g(lo) > 0 > g(hi)."""
    glo, ghi = g(lo), g(hi)
    if not (glo > 0 > ghi):
        raise RootBracketError(f"g({lo})={glo}, g({hi})={ghi} do not bracket a root")
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= xtol:
            break
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=8)
def gauss_legendre(n=64):
    """Nodes and weights of the n-point rule mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w
