"""Brute-force reference values that share no code with the main pipeline.

``oracle_integral`` is a composite trapezoid rule with one Richardson step
(equivalently composite Simpson) on the plain numpy evaluation of f.
``oracle_derivative`` is a central difference tableau with step halving and
Richardson extrapolation, falling back to forward differences near 0.
"""

from __future__ import annotations

import math

import numpy as np

from ..jets import FunctionModel

__all__ = ["oracle_integral", "oracle_derivative"]


def _plain(f):
    if isinstance(f, FunctionModel):
        return f.evaluate_plain
    return f


def _trapezoid(y: np.ndarray, h: float) -> float:
    return h * (math.fsum(y[1:-1]) + 0.5 * (y[0] + y[-1]))


def oracle_integral(
    f,
    weightexp: float,
    shift: float,
    iv,
    levels: int = 14,
) -> float:
    """``int_a^b (t + shift)**weightexp * f(t) dt`` by trapezoid plus one Richardson step."""
    if levels < 4:
        raise ValueError("levels must be >= 4")
    a, b = float(iv[0]), float(iv[1])
    fn = _plain(f)
    n = 2**levels
    x = np.linspace(a, b, n + 1)
    y = np.asarray(fn(x), dtype=float) * (x + shift) ** weightexp
    fine = _trapezoid(y, (b - a) / n)
    coarse = _trapezoid(y[::2], 2 * (b - a) / n)
    return fine + (fine - coarse) / 3.0


def _central(fn, x: float, h: float, order: int) -> float:
    j = np.arange(order + 1)
    pts = x + (0.5 * order - j) * h
    w = np.array([(-1) ** int(i) * math.comb(order, int(i)) for i in j], dtype=float)
    return float(np.dot(w, fn(pts))) / h**order


def _forward(fn, x: float, h: float, order: int) -> float:
    j = np.arange(order + 1)
    pts = x + j * h
    w = np.array([(-1) ** (order - int(i)) * math.comb(order, int(i)) for i in j], dtype=float)
    return float(np.dot(w, fn(pts))) / h**order


def oracle_derivative(f, x: float, order: int, step: float = 0.2, levels: int = 12) -> float:
    """The ordinary derivative ``f^(order)(x)`` by Ridders-style extrapolation.

    The step shrinks by 1.4 per level and each new difference quotient is
    Richardson-extrapolated against the previous row.  Central differences
    are used when every sample stays in [0, inf); otherwise forward
    differences, whose error series has every power of h.  The entry with the
    smallest error estimate wins, and the tableau stops once the estimate
    grows past twice the best.
    """
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    fn = _plain(f)
    x = float(x)
    h = step
    if x > 0.0:
        h = min(step, 2.0 * x / order)
    central = x - 0.5 * order * h >= 0.0 and x > 0.0
    rule = _central if central else _forward
    if not central:
        # one-sided quotients start smaller; their leading error is O(h)
        h = 0.25 * step
    con = 1.4
    con_factor = con * con if central else con
    prev: list[float] = []
    best, best_err = rule(fn, x, h, order), math.inf
    for _ in range(levels):
        row = [rule(fn, x, h, order)]
        factor = 1.0
        for k in range(1, len(prev) + 1):
            factor *= con_factor
            row.append(row[k - 1] + (row[k - 1] - prev[k - 1]) / (factor - 1.0))
            err = max(abs(row[k] - row[k - 1]), abs(row[k] - prev[k - 1]))
            if err <= best_err:
                best, best_err = row[k], err
        if prev and abs(row[-1] - prev[-1]) >= 2.0 * best_err:
            break
        prev = row
        h /= con
    return best
