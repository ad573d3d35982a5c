"""Levels of the linearized wall-side well via the Airy function.

Deep below the barrier the rod oscillates against the wall where the
potential is effectively linear, so the exact deep levels are

    E_n = B^(2/3) * lambda_n,     Ai(-lambda_n) = 0,

while the corresponding WKB condition gives the slightly smaller
lambda_n(WKB) = [3*pi/2*(n + 3/4)]^(2/3).

Ai is evaluated in house: Maclaurin series near the origin, the
standard large-argument asymptotic expansions beyond, truncated at the
smallest term.  The series cutoff is asymmetric because the series
loses digits to cancellation much faster on the decaying (positive)
side than on the oscillatory side.  Zeros come from a Newton polish of
the asymptotic zero formula, which is all that is needed on the
negative axis near the first dozen zeros.
"""
from __future__ import annotations

import math

from .errors import DomainError, InvalidParameterError

_AI0 = 0.35502805388781724    # Ai(0)  = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.25881940379280680  # Ai'(0) = -3^(-1/3)/Gamma(1/3)
_SERIES_CUT_NEG = 8.0
_SERIES_CUT_POS = 5.5

# u_k from the asymptotic expansions; v_k = -(6k+1)/(6k-1) * u_k.
_N_ASY = 26
_U = [1.0]
for _k in range(1, _N_ASY):
    _U.append(_U[-1] * (6 * _k - 5) * (6 * _k - 3) * (6 * _k - 1) / (216.0 * _k * (2 * _k - 1)))
_V = [-(6 * k + 1) / (6 * k - 1) * u if k else 1.0 for k, u in enumerate(_U)]


def _series_pair(x: float) -> tuple[float, float]:
    """Maclaurin values (Ai, Ai') at x, valid to |x| ~ 8."""
    x3 = x * x * x
    # f = sum x^{3k} prod, g = sum x^{3k+1} prod; derivatives termwise.
    f_term, g_term = 1.0, x
    f_sum, g_sum = f_term, g_term
    fp_sum, gp_sum = 0.0, 1.0
    k = 0
    while True:
        f_next = f_term * x3 / ((3 * k + 2) * (3 * k + 3))
        g_next = g_term * x3 / ((3 * k + 3) * (3 * k + 4))
        k += 1
        f_sum += f_next
        g_sum += g_next
        if x != 0.0:
            fp_sum += f_next * (3 * k) / x
            gp_sum += g_next * (3 * k + 1) / x
        f_term, g_term = f_next, g_next
        if abs(f_next) < 1e-18 * (1.0 + abs(f_sum)) and abs(g_next) < 1e-18 * (1.0 + abs(g_sum)):
            break
        if k > 200:
            break
    ai = _AI0 * f_sum + _AIP0 * g_sum
    aip = _AI0 * fp_sum + _AIP0 * gp_sum
    return ai, aip


def _asy_cutoff(zeta: float) -> int:
    """Optimal truncation: stop before the terms u_k/zeta^k start growing."""
    last = math.inf
    for k in range(_N_ASY):
        term = _U[k] / zeta**k
        if term >= last:
            return k
        last = term
    return _N_ASY


def _asymptotic_neg(z: float) -> tuple[float, float]:
    """(Ai(-z), Ai'(-z)) for large positive z."""
    zeta = (2.0 / 3.0) * z**1.5
    stop = _asy_cutoff(zeta)
    p = q = r = w = 0.0
    sign = 1.0
    for k in range(0, (stop + 1) // 2):
        p += sign * _U[2 * k] / zeta ** (2 * k)
        r += sign * _V[2 * k] / zeta ** (2 * k)
        if 2 * k + 1 < stop:
            q += sign * _U[2 * k + 1] / zeta ** (2 * k + 1)
            w += sign * _V[2 * k + 1] / zeta ** (2 * k + 1)
        sign = -sign
    arg = zeta + 0.25 * math.pi
    pref = 1.0 / (math.sqrt(math.pi) * z**0.25)
    ai = pref * (math.sin(arg) * p - math.cos(arg) * q)
    aip = -(z**0.25 / math.sqrt(math.pi)) * (math.cos(arg) * r + math.sin(arg) * w)
    return ai, aip


def _asymptotic_pos(z: float) -> tuple[float, float]:
    """(Ai(z), Ai'(z)) for large positive z (decaying branch)."""
    zeta = (2.0 / 3.0) * z**1.5
    su = sv = 0.0
    sign = 1.0
    for k in range(_asy_cutoff(zeta)):
        su += sign * _U[k] / zeta**k
        sv += sign * _V[k] / zeta**k
        sign = -sign
    pref = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * su / z**0.25, -pref * sv * z**0.25


def ai(x: float) -> float:
    """Airy function Ai(x)."""
    return _ai_pair(x)[0]


def ai_deriv(x: float) -> float:
    """Derivative Ai'(x)."""
    return _ai_pair(x)[1]


def _ai_pair(x: float) -> tuple[float, float]:
    if -_SERIES_CUT_NEG <= x <= _SERIES_CUT_POS:
        return _series_pair(x)
    if x > 0.0:
        return _asymptotic_pos(x)
    return _asymptotic_neg(-x)


def airy_zero(n: int) -> float:
    """Magnitude lambda_n of the (n+1)-th negative zero of Ai, n = 0, 1, ...

    Starts from the asymptotic zero formula and polishes with Newton
    iterations on the in-house Ai; accurate to ~1e-12 for n < 12.
    """
    if n < 0:
        raise InvalidParameterError("n must be >= 0")
    if n >= 12:
        raise DomainError("zeros implemented for the first 12 only")
    t = 3.0 * math.pi * (4.0 * (n + 1) - 1.0) / 8.0
    lam = t ** (2.0 / 3.0) * (1.0 + 5.0 / 48.0 / t**2 - 5.0 / 36.0 / t**4
                              + 77125.0 / 82944.0 / t**6)
    for _ in range(30):
        val, slope = _ai_pair(-lam)
        step = val / slope  # d/d(lam) Ai(-lam) = -Ai'(-lam)
        lam += step
        if abs(step) < 1e-14 * lam:
            break
    return lam


def wkb_lambda(n: int) -> float:
    """Semiclassical stand-in for the Airy zero: [3*pi/2*(n+3/4)]^(2/3)."""
    if n < 0:
        raise InvalidParameterError("n must be >= 0")
    return (1.5 * math.pi * (n + 0.75)) ** (2.0 / 3.0)


def linear_well_energy(n: int, B: float, exact: bool = True) -> float:
    """Deep level B^(2/3)*lambda_n using the exact Airy zero (or WKB)."""
    if B < 0.0:
        raise InvalidParameterError("B must be non-negative")
    lam = airy_zero(n) if exact else wkb_lambda(n)
    return B ** (2.0 / 3.0) * lam
