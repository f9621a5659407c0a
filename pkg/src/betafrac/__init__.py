"""Numerical beta-fractional calculus: derivatives, integrals, Taylor remainders and inequality checks."""

from __future__ import annotations

from .calculus import (
    BetaParam,
    Interval,
    beta_derivative,
    beta_derivative_model,
    beta_derivatives,
    beta_integral,
    weight,
    weighted_integral,
)
from .inequalities import (
    InequalityReport,
    MonotonicityReport,
    check_hermite_hadamard,
    check_hermite_hadamard_reversed,
    check_lemma_bounds,
    check_monotone_sign,
    check_steffensen,
    check_steffensen_reversed,
    check_taylor_steffensen,
    check_taylor_steffensen_reversed,
    steffensen_l,
)
from .jets import FunctionModel, Jet, JetError
from .quadrature import QuadratureError, QuadratureResult, integrate
from .special import gamma, ln_gamma
from .taylor import (
    corollary_identities,
    integral_remainder,
    lagrange_remainder,
    mean_value_point,
    remainder_integral_identity,
    taylor_expansion,
    taylor_polynomial,
)

__version__ = "0.1.0"

__all__ = [
    "BetaParam",
    "Interval",
    "FunctionModel",
    "Jet",
    "JetError",
    "QuadratureError",
    "QuadratureResult",
    "InequalityReport",
    "MonotonicityReport",
    "gamma",
    "ln_gamma",
    "integrate",
    "weight",
    "beta_derivative",
    "beta_derivatives",
    "beta_derivative_model",
    "beta_integral",
    "weighted_integral",
    "taylor_expansion",
    "taylor_polynomial",
    "integral_remainder",
    "lagrange_remainder",
    "mean_value_point",
    "remainder_integral_identity",
    "corollary_identities",
    "check_monotone_sign",
    "steffensen_l",
    "check_lemma_bounds",
    "check_steffensen",
    "check_steffensen_reversed",
    "check_taylor_steffensen",
    "check_taylor_steffensen_reversed",
    "check_hermite_hadamard",
    "check_hermite_hadamard_reversed",
]
