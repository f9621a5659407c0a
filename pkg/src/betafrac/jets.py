"""Truncated Taylor arithmetic ("jets").

A jet of order ``m`` at ``x0`` stores the scaled coefficients
``f^(j)(x0) / j!`` for ``j = 0..m``.  Coefficients live on the leading axis of
a numpy array; any trailing axes are a batch of independent expansion points,
so a whole quadrature panel is pushed through one jet computation.

Iterated beta-derivatives need ordinary derivatives of both the function and
the weight up to the iteration count; jets give them to rounding error without
nested finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "MAX_ORDER",
    "Jet",
    "FunctionModel",
    "jet_add",
    "jet_mul",
    "jet_pow_real",
    "jet_compose_elementary",
    "derivative_from_jet",
    "ELEMENTARY",
]

MAX_ORDER = 12


class JetError(ValueError):
    """Raised on mismatched jets or a domain violation at the expansion point."""


def _as_coeffs(coeffs) -> np.ndarray:
    arr = np.array(coeffs, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    return arr


@dataclass(frozen=True, eq=False)
class Jet:
    """Scaled Taylor coefficients of a scalar function at ``center``."""

    center: float | np.ndarray
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = _as_coeffs(self.coeffs)
        if not np.all(np.isfinite(coeffs)):
            raise JetError("jet coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        center = np.asarray(self.center, dtype=float)
        if center.shape != coeffs.shape[1:]:
            center = np.broadcast_to(center, coeffs.shape[1:]).copy()
        if center.ndim == 0:
            center = float(center)
        object.__setattr__(self, "center", center)

    # -- construction ------------------------------------------------------

    @classmethod
    def _raw(cls, center, coeffs: np.ndarray) -> Jet:
        # trusted internal path: center already matches coeffs.shape[1:]
        jet = object.__new__(cls)
        object.__setattr__(jet, "center", center)
        object.__setattr__(jet, "coeffs", coeffs)
        return jet

    @classmethod
    def variable(cls, x, order: int) -> Jet:
        """Jet of the identity map ``t -> t`` at ``x``."""
        x = np.array(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise JetError("expansion point must be finite")
        coeffs = np.zeros((order + 1,) + x.shape)
        coeffs[0] = x
        if order >= 1:
            coeffs[1] = 1.0
        return cls._raw(x if x.ndim else float(x), coeffs)

    @classmethod
    def constant(cls, value, x, order: int) -> Jet:
        x = np.asarray(x, dtype=float)
        coeffs = np.zeros((order + 1,) + x.shape)
        coeffs[0] = value
        return cls(x if x.ndim else float(x), coeffs)

    # -- views -------------------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self):
        v = self.coeffs[0]
        return float(v) if v.ndim == 0 else v

    def derivative(self) -> Jet:
        """Jet of f' (one order lower)."""
        if self.order == 0:
            raise JetError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float).reshape(self._kshape(self.order))
        return self._like(self.coeffs[1:] * k)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise JetError(f"cannot raise jet order {self.order} to {order}")
        return self._like(self.coeffs[: order + 1])

    def _kshape(self, n: int) -> tuple[int, ...]:
        return (n,) + (1,) * (self.coeffs.ndim - 1)

    def _like(self, coeffs: np.ndarray) -> Jet:
        return Jet._raw(self.center, coeffs)

    def _check_compatible(self, other: Jet) -> None:
        if self.order != other.order:
            raise JetError(f"jet orders differ: {self.order} vs {other.order}")
        if self.center is not other.center and not np.array_equal(self.center, other.center):
            raise JetError("jet centers differ")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> Jet:
        if isinstance(other, Jet):
            self._check_compatible(other)
            return self._like(self.coeffs + other.coeffs)
        out = self.coeffs.copy()
        out[0] = out[0] + other
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return self._like(-self.coeffs)

    def __sub__(self, other) -> Jet:
        return self + (-other)

    def __rsub__(self, other) -> Jet:
        return (-self) + other

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return self._like(self.coeffs * other)
        self._check_compatible(other)
        a, b = self.coeffs, other.coeffs
        m = self.order
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for j in range(m + 1):
            out[j:] += a[j] * b[: m + 1 - j]
        return self._like(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Jet:
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self._like(self.coeffs / other)

    def __rtruediv__(self, other) -> Jet:
        return self.reciprocal() * other

    def __pow__(self, p) -> Jet:
        return self.pow(float(p))

    # -- elementary functions ----------------------------------------------

    def _weighted_sum(self, k: int, a: np.ndarray, b: np.ndarray, w: np.ndarray) -> np.ndarray:
        # sum_{j=1..k} w_j a_j b_{k-j}
        return np.sum(w.reshape(self._kshape(k)) * a[1 : k + 1] * b[k - 1 :: -1][:k], axis=0)

    def pow(self, p: float) -> Jet:
        a = self.coeffs
        a0 = a[0]
        if (np.asarray(a0) <= 0.0).any():
            raise JetError("real power needs a strictly positive base at the expansion point")
        out = np.zeros_like(a)
        out[0] = a0**p
        for k in range(1, self.order + 1):
            j = np.arange(1, k + 1, dtype=float)
            out[k] = self._weighted_sum(k, a, out, (p + 1.0) * j - k) / (k * a0)
        return self._like(out)

    def exp(self) -> Jet:
        a = self.coeffs
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        if not np.isfinite(out[0]).all():
            raise JetError("exp overflows at the expansion point")
        for k in range(1, self.order + 1):
            j = np.arange(1, k + 1, dtype=float)
            out[k] = self._weighted_sum(k, a, out, j) / k
        return self._like(out)

    def log(self) -> Jet:
        a = self.coeffs
        a0 = a[0]
        if (np.asarray(a0) <= 0.0).any():
            raise JetError("log needs a strictly positive argument at the expansion point")
        out = np.zeros_like(a)
        out[0] = np.log(a0)
        for k in range(1, self.order + 1):
            acc = a[k].copy()
            if k > 1:
                j = np.arange(1, k, dtype=float).reshape(self._kshape(k - 1))
                acc = acc - np.sum(j * out[1:k] * a[k - 1 : 0 : -1], axis=0) / k
            out[k] = acc / a0
        return self._like(out)

    def _sincos(self) -> tuple[np.ndarray, np.ndarray]:
        a = self.coeffs
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0] = np.sin(a[0])
        c[0] = np.cos(a[0])
        for k in range(1, self.order + 1):
            j = np.arange(1, k + 1, dtype=float)
            s[k] = self._weighted_sum(k, a, c, j) / k
            c[k] = -self._weighted_sum(k, a, s, j) / k
        return s, c

    def sin(self) -> Jet:
        return self._like(self._sincos()[0])

    def cos(self) -> Jet:
        return self._like(self._sincos()[1])

    def reciprocal(self) -> Jet:
        a = self.coeffs
        a0 = a[0]
        if (np.asarray(a0) == 0.0).any():
            raise JetError("reciprocal of a jet with zero value")
        out = np.zeros_like(a)
        out[0] = 1.0 / a0
        ones = np.ones(self.order)
        for k in range(1, self.order + 1):
            out[k] = -self._weighted_sum(k, a, out, ones[:k]) / a0
        return self._like(out)


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    return a * b


def jet_pow_real(a: Jet, p: float) -> Jet:
    """Jet of ``a(x) ** p``; the base must be positive at the expansion point."""
    return a.pow(p)


ELEMENTARY: dict[str, Callable[[Jet], Jet]] = {
    "exp": Jet.exp,
    "log": Jet.log,
    "sin": Jet.sin,
    "cos": Jet.cos,
    "negate": Jet.__neg__,
    "reciprocal": Jet.reciprocal,
}


def jet_compose_elementary(kind: str, a: Jet) -> Jet:
    try:
        op = ELEMENTARY[kind]
    except KeyError:
        raise JetError(f"unknown elementary function {kind!r}; expected one of {sorted(ELEMENTARY)}") from None
    return op(a)


def derivative_from_jet(a: Jet, j: int) -> float | np.ndarray:
    """Return ``f^(j)(center) = j! * coeffs[j]``."""
    if not 0 <= j <= a.order:
        raise JetError(f"derivative order {j} outside 0..{a.order}")
    v = math.factorial(j) * a.coeffs[j]
    return float(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True, eq=False)
class FunctionModel:
    """A scalar function on [0, inf) that can produce jets of any order.

    ``evaluator(x, order)`` returns the jet at ``x`` (scalar or array).  The
    optional ``plain`` callable is a direct numpy evaluation kept separate from
    the jet path; oracles use it so they never share code with the pipeline.
    """

    name: str
    evaluator: Callable[[np.ndarray | float, int], Jet]
    plain: Callable[[np.ndarray], np.ndarray] | None = None
    domain: tuple[float, float] = (0.0, math.inf)
    note: str = ""

    @classmethod
    def from_rule(cls, name: str, rule: Callable[[Jet], Jet], plain=None, **kwargs) -> FunctionModel:
        """Build a model by applying ``rule`` to the identity jet."""

        def evaluator(x, order):
            if order > MAX_ORDER:
                raise JetError(f"jet order {order} exceeds MAX_ORDER={MAX_ORDER}")
            return rule(Jet.variable(x, order))

        return cls(name, evaluator, plain, **kwargs)

    def jet(self, x, order: int) -> Jet:
        return self.evaluator(x, order)

    def __call__(self, x):
        return self.jet(x, 0).value

    def evaluate_plain(self, x):
        if self.plain is None:
            return self(x)
        return self.plain(np.asarray(x, dtype=float))

    def contains(self, a: float, b: float) -> bool:
        lo, hi = self.domain
        return lo <= a and b <= hi

    def negated(self) -> FunctionModel:
        name = self.name[1:] if self.name.startswith("-") else "-" + self.name
        plain = None if self.plain is None else (lambda x, p=self.plain: -p(x))
        ev = self.evaluator
        return FunctionModel(name, lambda x, order: -ev(x, order), plain, self.domain, self.note)

    def scaled_sum(self, alpha: float, other: FunctionModel) -> FunctionModel:
        """Model of ``alpha * self + other``."""
        ev_a, ev_b = self.evaluator, other.evaluator
        return FunctionModel(
            f"{alpha!r}*{self.name}+{other.name}",
            lambda x, order: ev_a(x, order) * alpha + ev_b(x, order),
            domain=(max(self.domain[0], other.domain[0]), min(self.domain[1], other.domain[1])),
        )
