"""Small one-dimensional search routines."""

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-10, max_iter=200):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x))``. The bracket endpoints are compared at the end so a
    maximum sitting on the boundary is not missed.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
    candidates = [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
    return max(candidates, key=lambda c: c[1])


def scan_then_golden(f, lo, hi, n_scan=1025, tol=1e-10):
    """Grid scan to bracket the global maximum, then golden-section refine.

    ``f`` must accept numpy arrays for the scan and floats for refinement.
    """
    if hi <= lo:
        return lo, f(lo)
    xs = np.linspace(lo, hi, n_scan)
    i = int(np.argmax(f(xs)))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, n_scan - 1)]
    return golden_max(f, a, b, tol=tol * max(1.0, abs(hi)))


def bisect_increasing(f, target, lo, hi, rtol=1e-13, max_iter=400):
    """Solve ``f(x) = target`` for ``f`` increasing on ``[lo, hi]``.

    Assumes ``f(lo) <= target <= f(hi)``; stops when the bracket is below
    ``rtol`` relative width or the function hits the target exactly.
    """
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        v = f(mid)
        if v == target:
            return mid
        if v < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)
