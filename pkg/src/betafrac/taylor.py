"""Beta-Taylor expansion and its remainders.

With ``u(t) = (t + c)**beta`` the degree-n expansion of f about s is

    P_n(t) = sum_k beta**-k / k! * (u(t) - u(s))**k * D^{k beta} f(s)

and the remainder that makes ``f(t) = P_n(t) + R_n(s, t)`` exact is

    R_n(s, t) = beta**-n / n! * int_s^t (u(t) - u(tau))**n D^{(n+1) beta} f(tau) d_beta tau.

The Lagrange form uses the constant ``beta**-(n+1) / (n+1)!``: the mean value
of ``D^{(n+1) beta} f`` is pulled out and the remaining weight integrates to
``(u(t) - u(s))**(n+1) / ((n+1) beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .calculus import (
    DEFAULT_TOL,
    BetaParam,
    Interval,
    _param,
    beta_derivatives,
    weighted_integral,
)
from .jets import FunctionModel
from .quadrature import QuadratureResult, integrate, integrate_many

__all__ = [
    "TaylorExpansion",
    "RemainderValue",
    "IdentityResult",
    "LagrangeBracketError",
    "taylor_expansion",
    "taylor_polynomial",
    "integral_remainder",
    "integral_remainders",
    "lagrange_remainder",
    "mean_value_point",
    "remainder_integral_identity",
    "corollary_identities",
]

_SCAN_POINTS = 64
_REFINE_POINTS = 33
_REFINE_ROUNDS = 12


class LagrangeBracketError(ArithmeticError):
    """No sign change of ``h(c) - target`` on the scan grid."""


@dataclass(frozen=True, eq=False)
class TaylorExpansion:
    p: BetaParam
    f: FunctionModel
    s: float
    n: int
    coefficients: np.ndarray

    def __call__(self, t):
        du = self.p.u(t) - self.p.u(self.s)
        acc = np.zeros_like(du, dtype=float) + self.coefficients[-1]
        for coef in self.coefficients[-2::-1]:
            acc = acc * du + coef
        return float(acc) if np.ndim(acc) == 0 else acc


@dataclass(frozen=True)
class RemainderValue:
    integral_form: float
    lagrange_point: float | None = None
    lagrange_form: float | None = None
    evaluations: int = 0


@dataclass(frozen=True)
class IdentityResult:
    """Both sides of an integral identity; unpacks as ``lhs, rhs``."""

    lhs: float
    rhs: float
    evaluations: int = 0

    def __iter__(self) -> Iterator[float]:
        return iter((self.lhs, self.rhs))

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)


def taylor_expansion(p: BetaParam | float, f: FunctionModel, s: float, n: int) -> TaylorExpansion:
    p = _param(p)
    if n < 0:
        raise ValueError("degree n must be >= 0")
    d = beta_derivatives(p, f, float(s), n)
    k = np.arange(n + 1)
    scale = np.array([p.beta ** (-int(j)) / math.factorial(int(j)) for j in k])
    coefficients = scale * d
    # entry 0 is f(s) itself, untouched by scaling
    coefficients[0] = d[0]
    return TaylorExpansion(p, f, float(s), n, coefficients)


def taylor_polynomial(p: BetaParam | float, f: FunctionModel, s: float, n: int, t):
    """Degree-n beta-Taylor polynomial of f about s, evaluated at t."""
    return taylor_expansion(p, f, s, n)(t)


def integral_remainders(
    p: BetaParam | float,
    f: FunctionModel,
    s,
    n: int,
    ts,
    tol: float = DEFAULT_TOL,
) -> list[QuadratureResult]:
    """``R_n(s_i, t_i)`` for arrays of expansion and evaluation points.

    ``s`` may be a scalar shared by every ``t``.  The integrals run in lockstep
    so all quadrature nodes go through one jet evaluation per round.
    """
    p = _param(p)
    if n < 0:
        raise ValueError("degree n must be >= 0")
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    ss = np.broadcast_to(np.asarray(s, dtype=float), ts.shape)
    ut = p.u(ts)
    scale = p.beta ** (-n) / math.factorial(n)
    shift, expo = p.shift, p.beta - 1.0

    def integrand(x, owner):
        d = beta_derivatives(p, f, x, n + 1)[n + 1]
        return (ut[owner] - p.u(x)) ** n * d * (x + shift) ** expo

    results = integrate_many(integrand, ss, ts, tol)
    return [QuadratureResult(scale * r.value, scale * r.error_estimate, r.evaluations) for r in results]


def integral_remainder(
    p: BetaParam | float,
    f: FunctionModel,
    s: float,
    n: int,
    t: float,
    tol: float = DEFAULT_TOL,
) -> float:
    """Integral form of the degree-n remainder; ``s == t`` gives exactly 0."""
    if s == t:
        return 0.0
    return integral_remainders(p, f, s, n, [t], tol)[0].value


def _bracket_root(h, lo: float, hi: float, target: float, scale: float, tol: float):
    """Find c in [lo, hi] with ``scale * (h(c) - target)`` within ``tol`` of 0.

    A 64-interval scan supplies the bracket; each refinement round samples
    the current bracket at 33 points in one vectorised call, shrinking it 32
    times.  Returns ``(c, h(c))``; a constant h returns the midpoint.
    """
    xs = np.linspace(lo, hi, _SCAN_POINTS + 1)
    vals = np.asarray(h(xs), dtype=float)
    spread = float(np.ptp(vals))
    if spread <= 1e-13 * max(1.0, float(np.max(np.abs(vals)))):
        mid = 0.5 * (lo + hi)
        return mid, float(h(np.array([mid]))[0])
    resid = vals - target
    best = int(np.argmin(np.abs(resid)))
    change = np.nonzero(resid[:-1] * resid[1:] <= 0.0)[0]
    if change.size == 0:
        if abs(scale * resid[best]) <= tol:
            return float(xs[best]), float(vals[best])
        raise LagrangeBracketError(
            f"mean value {target:.6g} outside sampled range [{vals.min():.6g}, {vals.max():.6g}]"
        )
    for _ in range(_REFINE_ROUNDS):
        best = int(np.argmin(np.abs(resid)))
        if abs(scale * resid[best]) <= 1e-3 * tol or resid[best] == 0.0:
            break
        i = int(change[0])
        a, b = float(xs[i]), float(xs[i + 1])
        if not a < 0.5 * (a + b) < b:
            break
        xs = np.linspace(a, b, _REFINE_POINTS)
        vals = np.asarray(h(xs), dtype=float)
        resid = vals - target
        change = np.nonzero(resid[:-1] * resid[1:] <= 0.0)[0]
        if change.size == 0:
            # rounding noise flattened the bracket; keep the closest sample
            best = int(np.argmin(np.abs(resid)))
            break
    best = int(np.argmin(np.abs(resid)))
    if abs(scale * resid[best]) > tol:
        raise LagrangeBracketError(f"sign change near {xs[best]:.6g} without a root; h looks discontinuous")
    return float(xs[best]), float(vals[best])


def lagrange_remainder(
    p: BetaParam | float,
    f: FunctionModel,
    s: float,
    n: int,
    t: float,
    tol: float = DEFAULT_TOL,
) -> RemainderValue:
    """Integral and Lagrange forms of the remainder, with the mean-value point."""
    p = _param(p)
    s, t = float(s), float(t)
    if s == t:
        return RemainderValue(0.0, s, 0.0, 0)
    res = integral_remainders(p, f, s, n, [t], tol)[0]
    factor = p.beta ** (-(n + 1)) / math.factorial(n + 1) * (p.u(t) - p.u(s)) ** (n + 1)
    target = res.value / factor

    def h(x):
        return beta_derivatives(p, f, x, n + 1)[n + 1]

    c, dc = _bracket_root(h, min(s, t), max(s, t), target, factor, tol)
    return RemainderValue(res.value, c, dc * factor, res.evaluations)


def _mean_value(p: BetaParam, f, g, a: float, b: float, tol: float) -> tuple[float, float, float, int]:
    """Mean-value point and the two integrals it balances: ``(c, int f g, int g, evaluations)``."""
    fg = weighted_integral(p, lambda x: f(x) * g(x), a, b, tol)
    gi = weighted_integral(p, g, a, b, tol)
    evals = fg.evaluations + gi.evaluations
    if abs(gi.value) <= tol:
        return a, fg.value, gi.value, evals
    c, _ = _bracket_root(f, a, b, fg.value / gi.value, gi.value, tol)
    return c, fg.value, gi.value, evals


def mean_value_point(
    p: BetaParam | float,
    f: FunctionModel,
    g: FunctionModel,
    iv: Interval | tuple[float, float],
    tol: float = DEFAULT_TOL,
) -> float:
    """c in [a, b] with ``int f g d_beta = f(c) int g d_beta`` (g >= 0).

    The sampled extremes of f bracket the weighted mean; bracket refinement then
    matches ``f(c) int g`` to ``int f g`` within ``tol``.  A vanishing
    ``int g`` makes every point valid and returns a.
    """
    p = _param(p)
    a, b = (iv.a, iv.b) if isinstance(iv, Interval) else (float(iv[0]), float(iv[1]))
    return _mean_value(p, f, g, a, b, tol)[0]


def _nested_remainder_integral(
    p: BetaParam,
    f: FunctionModel,
    s: float,
    lo: float,
    hi: float,
    n: int,
    tol: float,
) -> QuadratureResult:
    """``int_lo^hi R_n(s, tau) d_beta tau`` with the inner remainders at ``tol / 10``."""
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 0)
    inner_evals = 0
    shift, expo = p.shift, p.beta - 1.0

    def outer(tau):
        nonlocal inner_evals
        inner = integral_remainders(p, f, s, n, tau, tol / 10.0)
        inner_evals += sum(r.evaluations for r in inner)
        return np.array([r.value for r in inner]) * (tau + shift) ** expo

    res = integrate(outer, lo, hi, tol)
    return QuadratureResult(res.value, res.error_estimate, res.evaluations + inner_evals)


def remainder_integral_identity(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    t: float,
    n: int,
    tol: float = DEFAULT_TOL,
) -> IdentityResult:
    """Both sides of the remainder-integral identity at the split point t.

    lhs = int_a^b beta**-(n+1)/(n+1)! (u(t) - u(tau))**(n+1) D^{(n+1)beta} f d_beta tau
    rhs = int_a^t R_n(a, tau) d_beta tau + int_t^b R_n(b, tau) d_beta tau
    """
    p = _param(p)
    a, b = (iv.a, iv.b) if isinstance(iv, Interval) else (float(iv[0]), float(iv[1]))
    if not a <= t <= b:
        raise ValueError(f"split point {t} outside [{a}, {b}]")
    if n < 0:
        raise ValueError("degree n must be >= 0")
    ut = p.u(t)
    scale = p.beta ** (-(n + 1)) / math.factorial(n + 1)

    def lhs_integrand(x):
        d = beta_derivatives(p, f, x, n + 1)[n + 1]
        return (ut - p.u(x)) ** (n + 1) * d

    lhs = weighted_integral(p, lhs_integrand, a, b, tol)
    left = _nested_remainder_integral(p, f, a, a, t, n, tol)
    right = _nested_remainder_integral(p, f, b, t, b, n, tol)
    return IdentityResult(
        scale * lhs.value,
        left.value + right.value,
        lhs.evaluations + left.evaluations + right.evaluations,
    )


def corollary_identities(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    n: int,
    tol: float = DEFAULT_TOL,
) -> tuple[IdentityResult, IdentityResult]:
    """The endpoint specialisations of the remainder-integral identity.

    Returns ``(a_form, b_form)``: the a-form weights by ``(u(a) - u(tau))**(n+1)``
    and equals ``int_a^b R_n(b, tau)``; the b-form weights by
    ``(u(b) - u(tau))**(n+1)`` and equals ``int_a^b R_n(a, tau)``.
    """
    a, b = (iv.a, iv.b) if isinstance(iv, Interval) else (float(iv[0]), float(iv[1]))
    return (
        remainder_integral_identity(p, f, (a, b), a, n, tol),
        remainder_integral_identity(p, f, (a, b), b, n, tol),
    )
