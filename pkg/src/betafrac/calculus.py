"""The beta-derivative and beta-integral.

With the shift ``c = 1/Gamma(beta)`` and ``u(t) = (t + c)**beta``:

* ``D^beta f(x) = (x + c)**(1 - beta) * f'(x)``
* ``int_a^b f(t) d_beta t = int_a^b (t + c)**(beta - 1) * f(t) dt``

The two exponents are opposite, so ``int_a^b D^beta f d_beta t = f(b) - f(a)``.
Iterated derivatives ``D^{k beta} f`` are evaluated by pushing a jet of f
through k rounds of "differentiate, multiply by the co-weight jet".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .jets import FunctionModel, Jet, JetError, MAX_ORDER
from .quadrature import QuadratureResult, integrate
from .special import gamma

__all__ = [
    "BetaParam",
    "Interval",
    "weight",
    "beta_derivative",
    "beta_derivatives",
    "beta_derivative_model",
    "beta_integral",
    "weighted_integral",
    "weighted_integral_of_power",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class BetaParam:
    """Order ``beta`` in (0, 1] and the derived shift ``1/Gamma(beta)``."""

    beta: float
    shift: float = field(init=False)

    def __post_init__(self):
        beta = float(self.beta)
        if not 0.0 < beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {beta!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "shift", 1.0 / gamma(beta))

    def u(self, t):
        """The beta-linear variable ``(t + c)**beta``."""
        return _pow(t, self.shift, self.beta)

    def measure(self, a: float, b: float) -> float:
        """``int_a^b d_beta t`` in closed form."""
        return (self.u(b) - self.u(a)) / self.beta


def _pow(t, shift: float, expo: float):
    if np.ndim(t):
        return (np.asarray(t, dtype=float) + shift) ** expo
    return (float(t) + shift) ** expo


def _param(p) -> BetaParam:
    return p if isinstance(p, BetaParam) else BetaParam(p)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not 0.0 <= a < b:
            raise ValueError(f"interval needs 0 <= a < b, got [{a!r}, {b!r}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def parse(cls, text: str) -> Interval:
        a, b = (float(v) for v in text.split(","))
        return cls(a, b)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def __iter__(self):
        return iter((self.a, self.b))


def _check_nonneg(x) -> np.ndarray | float:
    if (np.asarray(x) < 0.0).any():
        raise ValueError("beta-calculus is defined on [0, inf); got a negative argument")
    return x


def weight(p: BetaParam | float, t):
    """Density ``(t + c)**(beta - 1)`` of the beta-integral."""
    p = _param(p)
    _check_nonneg(t)
    return _pow(t, p.shift, p.beta - 1.0)


def _coweight_jet(p: BetaParam, x, order: int) -> Jet:
    return (Jet.variable(x, order) + p.shift).pow(1.0 - p.beta)


def beta_derivatives(p: BetaParam | float, f: FunctionModel, x, kmax: int) -> np.ndarray:
    """``[D^{0} f(x), D^{beta} f(x), ..., D^{kmax beta} f(x)]`` stacked on axis 0."""
    p = _param(p)
    _check_nonneg(x)
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    if kmax > MAX_ORDER:
        raise JetError(f"iteration count {kmax} exceeds the jet order limit {MAX_ORDER}")
    g = f.jet(x, kmax)
    if g.order < kmax:
        raise JetError(f"model {f.name!r} returned order {g.order} < {kmax}")
    out = [g.coeffs[0]]
    if kmax == 0:
        return np.asarray(out)
    co = _coweight_jet(p, x, kmax - 1)
    for k in range(1, kmax + 1):
        g = g.derivative() * co.truncate(kmax - k)
        out.append(g.coeffs[0])
    return np.asarray(out)


def beta_derivative(p: BetaParam | float, f: FunctionModel, k: int, x):
    """The k-fold beta-derivative ``D^{k beta} f`` at ``x`` (scalar or array)."""
    if k < 1:
        raise ValueError("iteration count k must be >= 1")
    vals = beta_derivatives(p, f, x, k)[k]
    return float(vals) if np.ndim(vals) == 0 else vals


def beta_derivative_model(p: BetaParam | float, f: FunctionModel, k: int) -> FunctionModel:
    """``D^{k beta} f`` as a model that can itself produce jets."""
    p = _param(p)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return f

    def evaluator(x, order):
        g = f.jet(x, order + k)
        co = _coweight_jet(p, x, order + k - 1)
        for i in range(1, k + 1):
            g = g.derivative() * co.truncate(order + k - i)
        return g

    return FunctionModel(f"D^{k}b[{f.name}]", evaluator, domain=f.domain)


def weighted_integral(
    p: BetaParam | float,
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
) -> QuadratureResult:
    """``int_a^b func(t) d_beta t`` for a vectorised callable; ``b < a`` is allowed."""
    p = _param(p)
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    _check_nonneg(min(a, b))
    shift, expo = p.shift, p.beta - 1.0
    if expo == 0.0:
        return integrate(func, a, b, tol)
    return integrate(lambda t: (t + shift) ** expo * func(t), a, b, tol)


def beta_integral(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    tol: float = DEFAULT_TOL,
) -> QuadratureResult:
    """``int_a^b f(t) d_beta t`` by adaptive quadrature.

    A degenerate interval ``a == b`` returns exactly 0 with no evaluations.
    """
    a, b = (iv.a, iv.b) if isinstance(iv, Interval) else (float(iv[0]), float(iv[1]))
    if b < a:
        raise ValueError(f"interval needs a <= b, got [{a}, {b}]")
    return weighted_integral(p, f, a, b, tol)


def weighted_integral_of_power(
    p: BetaParam | float,
    t_ref: float,
    iv: Interval | tuple[float, float],
    n: int,
) -> float:
    """Closed form of ``int_a^b [u(t_ref) - u(tau)]**n d_beta tau``.

    The antiderivative in tau is ``-[u(t_ref) - u(tau)]**(n+1) / ((n+1) beta)``.
    Limits may be given in either order.
    """
    p = _param(p)
    if n < 0:
        raise ValueError("n must be >= 0")
    a, b = (iv.a, iv.b) if isinstance(iv, Interval) else (float(iv[0]), float(iv[1]))
    ur = p.u(t_ref)
    return ((ur - p.u(a)) ** (n + 1) - (ur - p.u(b)) ** (n + 1)) / ((n + 1) * p.beta)

