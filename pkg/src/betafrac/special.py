"""Gamma function for positive real arguments.

Lanczos approximation with g = 7 and nine coefficients on the core range
[0.5, 12); arguments below are lifted with Gamma(x) = Gamma(x + 1) / x and
arguments above are reduced with Gamma(x) = (x - 1) Gamma(x - 1).  The nine
published coefficients carry an asymptotic relative error of about 2e-13
(the leading coefficient is not exactly 1), so the core range is kept short.
"""

from __future__ import annotations

import math

__all__ = ["gamma", "ln_gamma", "GAMMA_MAX_ARG"]

# Gamma(171.62...) exceeds the largest binary64 value.
GAMMA_MAX_ARG = 171.6

_G = 7.0
_LANCZOS = (
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
_CORE_TOP = 12.0
# Stirling correction coefficients B_2k / (2k (2k - 1)), k = 1..7
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _check(x: float) -> float:
    x = float(x)
    if math.isnan(x) or x <= 0.0:
        raise ValueError(f"gamma domain error: x must be > 0, got {x!r}")
    return x


def _series(z: float) -> float:
    # z = x - 1 with x >= 0.5
    acc = _LANCZOS[0]
    for i, coef in enumerate(_LANCZOS[1:], start=1):
        acc += coef / (z + i)
    return acc


def gamma(x: float) -> float:
    """Gamma(x) for 0 < x <= 171.6, relative error around 1e-15."""
    x = _check(x)
    if x > GAMMA_MAX_ARG:
        raise OverflowError(f"gamma overflow: x = {x!r} > {GAMMA_MAX_ARG}")
    if x.is_integer():
        # exact factorials; 1/Gamma(1) must be exactly 1
        return float(math.factorial(int(x) - 1))
    if x < 0.5:
        return gamma(x + 1.0) / x
    if x >= _CORE_TOP:
        k = int(x - _CORE_TOP) + 1
        y = x - k
        out = _lanczos(y)
        for j in range(k):
            out *= y + j
        return out
    return _lanczos(x)


def _lanczos(x: float) -> float:
    z = x - 1.0
    t = z + _G + 0.5
    # split the power so t**(z + 0.5) never overflows before exp(-t) scales it
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * _series(z)


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0 (no upper limit)."""
    x = _check(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return ln_gamma(x + 1.0) - math.log(x)
    if x >= _CORE_TOP:
        inv = 1.0 / x
        inv2 = inv * inv
        corr = 0.0
        power = inv
        for coef in _STIRLING:
            corr += coef * power
            power *= inv2
        return (x - 0.5) * math.log(x) - x + _LOG_SQRT_2PI + corr
    z = x - 1.0
    t = z + _G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(_series(z))
