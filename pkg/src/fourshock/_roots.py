"""Bracketed scalar root finding used by every solver in the package."""

from __future__ import annotations

import math

from scipy.optimize import brentq

XTOL = 1e-15
RTOL = 4.0 * 2.220446049250313e-16
MAXITER = 200


def find_root(f, lo: float, hi: float, xtol: float = XTOL, rtol: float = RTOL) -> float:
    """Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.

    Endpoint zeros are returned as-is.
    """
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ValueError(f"root not bracketed on [{lo!r}, {hi!r}]: f = {flo!r}, {fhi!r}")
    return brentq(f, lo, hi, xtol=xtol, rtol=rtol, maxiter=MAXITER)


def expand_upper(f, lo: float, hi: float, factor: float = 2.0, limit: float = 1e300) -> float:
    """Grow hi geometrically (relative to lo) until f changes sign from f(lo)."""
    flo = f(lo)
    step = hi - lo
    if not step > 0.0:
        raise ValueError("hi must exceed lo")
    while True:
        fhi = f(hi)
        if fhi == 0.0 or math.copysign(1.0, fhi) != math.copysign(1.0, flo):
            return hi
        step *= factor
        hi = lo + step
        if hi > limit:
            raise ValueError("failed to bracket a root")
