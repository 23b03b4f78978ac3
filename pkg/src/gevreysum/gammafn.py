"""Gamma function for real arguments via a Lanczos approximation.

Only arguments x >= 0.5 are supported; every call site in this package
evaluates Gamma(1 + k/m) with k >= 0 and m > 0.  The g = 7, nine-term
coefficient set keeps the relative error below 1e-13 throughout that range
(integer arguments take an exact factorial path).
"""

from __future__ import annotations

import math

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _lanczos_series(x: float) -> float:
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (x - 1.0 + i)
    return acc


def gamma(x: float) -> float:
    """Gamma(x) for real x >= 0.5; returns inf on overflow (x > 171.62)."""
    if x < 0.5:
        raise ValueError("gamma: argument must be >= 0.5")
    if x == math.floor(x) and x <= 180.0:
        # integer arguments take the exact factorial path
        try:
            return float(math.factorial(int(x) - 1))
        except OverflowError:
            return math.inf
    t = x + _LANCZOS_G - 0.5
    a = _lanczos_series(x)
    # Split the power so intermediates stay finite up to the true overflow.
    try:
        half = math.pow(t, 0.5 * x - 0.25)
        value = (_SQRT_TWO_PI * a) * (half * math.exp(-t)) * half
    except OverflowError:
        return math.inf
    return value


def log_gamma(x: float) -> float:
    """log Gamma(x) for real x >= 0.5."""
    if x < 0.5:
        raise ValueError("log_gamma: argument must be >= 0.5")
    t = x + _LANCZOS_G - 0.5
    a = _lanczos_series(x)
    return math.log(_SQRT_TWO_PI * a) + (x - 0.5) * math.log(t) - t
