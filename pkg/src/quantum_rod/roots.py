"""Bracketed scalar root finding: bisection, then a secant polish."""
from __future__ import annotations

from typing import Callable

from .errors import InvalidParameterError


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    f_lo: float | None = None,
    f_hi: float | None = None,
    bisect_rtol: float = 1e-6,
    polish_rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Find a root of f in [lo, hi].

    Bisection narrows the bracket to `bisect_rtol`, after which secant
    iterations polish the estimate to `polish_rtol` (relative).  The
    secant step is rejected whenever it leaves the current bracket, so
    the result can never escape [lo, hi].
    """
    if f_lo is None:
        f_lo = f(lo)
    if f_hi is None:
        f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise InvalidParameterError(f"no sign change in [{lo}, {hi}]")

    scale = max(1.0, abs(lo), abs(hi))
    for _ in range(max_iter):
        if hi - lo <= bisect_rtol * scale:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid

    # Secant polish, keeping the bracket as a safety net.
    a, fa = lo, f_lo
    b, fb = hi, f_hi
    x_prev, f_prev = a, fa
    x, fx = b, fb
    for _ in range(60):
        if fx == f_prev:
            break
        step = fx * (x - x_prev) / (fx - f_prev)
        candidate = x - step
        if not (lo <= candidate <= hi):
            candidate = 0.5 * (a + b)
        f_cand = f(candidate)
        x_prev, f_prev = x, fx
        x, fx = candidate, f_cand
        if fx == 0.0 or abs(x - x_prev) <= polish_rtol * max(1.0, abs(x)):
            break
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
    return x
