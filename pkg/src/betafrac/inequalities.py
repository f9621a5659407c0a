"""Steffensen-type and Hermite-Hadamard inequality chains under the beta-integral.

Every check returns an :class:`InequalityReport` holding a chain
``lhs <= mid <= rhs`` as computed numbers together with the sampled
hypothesis checks.  Reversed variants are reported in ascending order too,
so a report holds exactly when both margins clear ``-VERDICT_SLACK``.

Hypotheses are verified by dense sampling.  A constant function counts as
both nonincreasing and nondecreasing, and the zero function as both
nonnegative and nonpositive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calculus import DEFAULT_TOL, BetaParam, Interval, _param, beta_derivative_model, weighted_integral
from .jets import FunctionModel
from .taylor import _nested_remainder_integral

__all__ = [
    "VERDICT_SLACK",
    "MONOTONE_SLACK",
    "DEFAULT_GRID",
    "MonotonicityReport",
    "Hypothesis",
    "InequalityReport",
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

VERDICT_SLACK = 1e-9
MONOTONE_SLACK = 1e-12
DEFAULT_GRID = 257

HOLDS = "holds"
VIOLATED = "violated"
HYPOTHESIS_NOT_MET = "hypothesis_not_met"


@dataclass(frozen=True)
class MonotonicityReport:
    """Sampled direction and sign of a function.

    ``direction`` is one of nonincreasing, nondecreasing, neither and ``sign``
    one of nonnegative, nonpositive, mixed.  A constant reports
    ``nonincreasing`` with ``constant=True`` and satisfies both directions; the
    zero function likewise reports ``nonnegative`` with ``zero=True``.
    """

    direction: str
    sign: str
    samples: int
    minimum: float
    maximum: float
    constant: bool = False
    zero: bool = False
    direction_witness: tuple[float, float] | None = None
    sign_witness: tuple[float, float] | None = None

    @property
    def nonincreasing(self) -> bool:
        return self.constant or self.direction == "nonincreasing"

    @property
    def nondecreasing(self) -> bool:
        return self.constant or self.direction == "nondecreasing"

    @property
    def nonnegative(self) -> bool:
        return self.zero or self.sign == "nonnegative"

    @property
    def nonpositive(self) -> bool:
        return self.zero or self.sign == "nonpositive"

    @property
    def witness(self) -> tuple[float, float] | None:
        return self.sign_witness or self.direction_witness


def _sample_grid(a: float, b: float, grid: int) -> np.ndarray:
    return np.linspace(a, b, grid)


def classify_samples(xs: np.ndarray, vals: np.ndarray, slack: float = MONOTONE_SLACK) -> MonotonicityReport:
    """Direction and sign of sampled values; slack is scaled by ``max(1, max|v|)``."""
    tol = slack * max(1.0, float(np.max(np.abs(vals))))
    steps = np.diff(vals)
    up = bool(np.all(steps >= -tol))
    down = bool(np.all(steps <= tol))
    constant = up and down
    if up and not down:
        direction = "nondecreasing"
    elif down:
        direction = "nonincreasing"
    else:
        direction = "neither"
    direction_witness = None
    if direction == "neither":
        # first sampled pair that breaks the overall trend
        trend = vals[-1] - vals[0]
        bad = np.nonzero(steps < -tol)[0] if trend >= 0 else np.nonzero(steps > tol)[0]
        i = int(bad[0])
        direction_witness = (float(xs[i]), float(xs[i + 1]))
    nonneg = bool(np.all(vals >= -tol))
    nonpos = bool(np.all(vals <= tol))
    zero = nonneg and nonpos
    if nonneg:
        sign = "nonnegative"
    elif nonpos:
        sign = "nonpositive"
    else:
        sign = "mixed"
    sign_witness = None
    if sign == "mixed":
        sign_witness = (float(xs[int(np.argmin(vals))]), float(xs[int(np.argmax(vals))]))
    return MonotonicityReport(
        direction,
        sign,
        int(vals.size),
        float(np.min(vals)),
        float(np.max(vals)),
        constant,
        zero,
        direction_witness,
        sign_witness,
    )


def check_monotone_sign(
    f: FunctionModel | Callable[[np.ndarray], np.ndarray],
    iv: Interval | tuple[float, float],
    grid: int = DEFAULT_GRID,
    slack: float = MONOTONE_SLACK,
) -> MonotonicityReport:
    """Classify direction and sign of f from ``grid`` uniform samples (endpoints included)."""
    if grid < 16:
        raise ValueError("grid must be >= 16")
    a, b = _limits(iv)
    xs = _sample_grid(a, b, grid)
    vals = np.asarray(f(xs), dtype=float)
    return classify_samples(xs, vals, slack)


@dataclass(frozen=True)
class Hypothesis:
    label: str
    report: MonotonicityReport
    met: bool


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    mid: float
    rhs: float
    hypotheses: tuple[Hypothesis, ...]
    verdict: str
    l_value: float | None = None
    evaluations: int = 0

    @property
    def margin_left(self) -> float:
        return self.mid - self.lhs

    @property
    def margin_right(self) -> float:
        return self.rhs - self.mid

    @property
    def hypotheses_met(self) -> bool:
        return all(h.met for h in self.hypotheses)

    @property
    def chain(self) -> tuple[float, float, float]:
        return (self.lhs, self.mid, self.rhs)


def _limits(iv) -> tuple[float, float]:
    if isinstance(iv, Interval):
        return iv.a, iv.b
    a, b = float(iv[0]), float(iv[1])
    if not 0.0 <= a < b:
        raise ValueError(f"interval needs 0 <= a < b, got [{a}, {b}]")
    return a, b


def _report(name, lhs, mid, rhs, hyps, l_value=None, evaluations=0) -> InequalityReport:
    lhs, mid, rhs = float(lhs), float(mid), float(rhs)
    if not all(h.met for h in hyps):
        verdict = HYPOTHESIS_NOT_MET
    elif mid - lhs >= -VERDICT_SLACK and rhs - mid >= -VERDICT_SLACK:
        verdict = HOLDS
    else:
        verdict = VIOLATED
    return InequalityReport(name, lhs, mid, rhs, tuple(hyps), verdict, l_value, evaluations)


def _range_hypothesis(g, a, b, M, grid) -> Hypothesis:
    rep = check_monotone_sign(g, (a, b), grid)
    tol = MONOTONE_SLACK * max(1.0, abs(rep.minimum), abs(rep.maximum))
    return Hypothesis(f"g maps into [0, {M:g}]", rep, rep.minimum >= -tol and rep.maximum <= M + tol)


def _shift_length(p: BetaParam, g, a: float, b: float, M: float, tol: float) -> tuple[float, float, int]:
    """Raw Steffensen shift, the integral of g, and evaluations used."""
    gi = weighted_integral(p, g, a, b, tol)
    raw = p.beta * (b - a) / (M * (p.u(b) - p.u(a))) * gi.value
    return raw, gi.value, gi.evaluations


def steffensen_l(
    p: BetaParam | float,
    g: FunctionModel,
    iv: Interval | tuple[float, float],
    M: float,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> float:
    """Shift ``l = beta (b - a) / (M [u(b) - u(a)]) * int_a^b g d_beta t``.

    Raises ``ValueError`` when sampling shows g leaving [0, M].  The result is
    clamped into [0, b - a]; the raw value lies within rounding of it.
    """
    p = _param(p)
    a, b = _limits(iv)
    if not M > 0:
        raise ValueError("M must be positive")
    hyp = _range_hypothesis(g, a, b, M, grid)
    if not hyp.met:
        raise ValueError(f"g leaves [0, {M}] on [{a}, {b}]: sampled range [{hyp.report.minimum}, {hyp.report.maximum}]")
    raw, _, _ = _shift_length(p, g, a, b, M, tol)
    return min(max(raw, 0.0), b - a)


def check_lemma_bounds(
    p: BetaParam | float,
    g: FunctionModel,
    iv: Interval | tuple[float, float],
    M: float,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """``int_{b-l}^b M d_beta <= int_a^b g d_beta <= int_a^{a+l} M d_beta``."""
    p = _param(p)
    a, b = _limits(iv)
    if not M > 0:
        raise ValueError("M must be positive")
    hyp = _range_hypothesis(g, a, b, M, grid)
    raw, gi, evals = _shift_length(p, g, a, b, M, tol)
    l = min(max(raw, 0.0), b - a)
    lhs = M * p.measure(b - l, b)
    rhs = M * p.measure(a, a + l)
    return _report("lemma_bounds", lhs, gi, rhs, [hyp], l, evals)


def _steffensen_parts(p, f, g, a, b, M, tol, grid):
    hyp_g = _range_hypothesis(g, a, b, M, grid)
    raw, _, evals = _shift_length(p, g, a, b, M, tol)
    l = min(max(raw, 0.0), b - a)
    fg = weighted_integral(p, lambda x: f(x) * g(x), a, b, tol)
    right_end = weighted_integral(p, f, b - l, b, tol)
    left_end = weighted_integral(p, f, a, a + l, tol)
    evals += fg.evaluations + right_end.evaluations + left_end.evaluations
    return hyp_g, l, M * right_end.value, fg.value, M * left_end.value, evals


def check_steffensen(
    p: BetaParam | float,
    f: FunctionModel,
    g: FunctionModel,
    iv: Interval | tuple[float, float],
    M: float,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """``M int_{b-l}^b f <= int_a^b f g <= M int_a^{a+l} f`` for f >= 0 nonincreasing.

    The shift l is computed from g, the function bounded by M.
    """
    p = _param(p)
    a, b = _limits(iv)
    rep_f = check_monotone_sign(f, (a, b), grid)
    hyp_f = Hypothesis("f nonnegative and nonincreasing", rep_f, rep_f.nonnegative and rep_f.nonincreasing)
    hyp_g, l, low, mid, high, evals = _steffensen_parts(p, f, g, a, b, M, tol, grid)
    return _report("steffensen", low, mid, high, [hyp_f, hyp_g], l, evals)


def check_steffensen_reversed(
    p: BetaParam | float,
    f: FunctionModel,
    g: FunctionModel,
    iv: Interval | tuple[float, float],
    M: float,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """``M int_a^{a+l} f <= int_a^b f g <= M int_{b-l}^b f`` for f <= 0 nondecreasing."""
    p = _param(p)
    a, b = _limits(iv)
    rep_f = check_monotone_sign(f, (a, b), grid)
    hyp_f = Hypothesis("f nonpositive and nondecreasing", rep_f, rep_f.nonpositive and rep_f.nondecreasing)
    hyp_g, l, right_end, mid, left_end, evals = _steffensen_parts(p, f, g, a, b, M, tol, grid)
    return _report("steffensen_reversed", left_end, mid, right_end, [hyp_f, hyp_g], l, evals)


def _taylor_steffensen_parts(p, f, a, b, n, tol, grid):
    if n < 0:
        raise ValueError("degree n must be >= 0")
    l = (b - a) / (n + 2)
    dn = beta_derivative_model(p, f, n)
    dn1 = beta_derivative_model(p, f, n + 1)
    rep_n = check_monotone_sign(dn, (a, b), grid)
    rep_n1 = check_monotone_sign(dn1, (a, b), grid)
    vals = dn(np.array([a, a + l, b - l, b]))
    rem = _nested_remainder_integral(p, f, a, a, b, n, tol)
    du = p.u(b) - p.u(a)
    mid = math.factorial(n + 1) * p.beta ** (n + 1) * du ** (-(n + 1)) * rem.value
    return l, rep_n, rep_n1, vals[1] - vals[0], mid, vals[3] - vals[2], rem.evaluations


def check_taylor_steffensen(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    n: int,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """Taylor-Steffensen bounds with ``l = (b - a)/(n + 2)``.

    D^{n b}f(a+l) - D^{n b}f(a)
        <= (n+1)! beta**(n+1) [u(b) - u(a)]**-(n+1) int_a^b R_n(a, tau) d_beta tau
        <= D^{n b}f(b) - D^{n b}f(b-l)

    for ``D^{(n+1) beta} f`` nondecreasing and ``D^{n beta} f`` nonincreasing.
    """
    p = _param(p)
    a, b = _limits(iv)
    l, rep_n, rep_n1, low, mid, high, evals = _taylor_steffensen_parts(p, f, a, b, n, tol, grid)
    hyps = [
        Hypothesis(f"D^({n + 1})beta f nondecreasing", rep_n1, rep_n1.nondecreasing),
        Hypothesis(f"D^({n})beta f nonincreasing", rep_n, rep_n.nonincreasing),
    ]
    return _report("taylor_steffensen", low, mid, high, hyps, l, evals)


def check_taylor_steffensen_reversed(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    n: int,
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """Reversed Taylor-Steffensen chain, reported ascending:

    D^{n b}f(b) - D^{n b}f(b-l) <= middle <= D^{n b}f(a+l) - D^{n b}f(a)

    for ``D^{(n+1) beta} f`` nonincreasing and ``D^{n beta} f`` nondecreasing.
    """
    p = _param(p)
    a, b = _limits(iv)
    l, rep_n, rep_n1, left_diff, mid, right_diff, evals = _taylor_steffensen_parts(p, f, a, b, n, tol, grid)
    hyps = [
        Hypothesis(f"D^({n + 1})beta f nonincreasing", rep_n1, rep_n1.nonincreasing),
        Hypothesis(f"D^({n})beta f nondecreasing", rep_n, rep_n.nondecreasing),
    ]
    return _report("taylor_steffensen_reversed", right_diff, mid, left_diff, hyps, l, evals)


def _hermite_hadamard_parts(p, f, a, b, tol, grid):
    rep_f = check_monotone_sign(f, (a, b), grid)
    rep_d = check_monotone_sign(beta_derivative_model(p, f, 1), (a, b), grid)
    m = 0.5 * (a + b)
    fa, fm, fb = f(np.array([a, m, b]))
    integral = weighted_integral(p, f, a, b, tol)
    mean = p.beta / (p.u(b) - p.u(a)) * integral.value
    return rep_f, rep_d, fm, mean, fa + fb - fm, integral.evaluations


def check_hermite_hadamard(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """``f(m) <= beta/[u(b) - u(a)] int_a^b f d_beta <= f(a) + f(b) - f(m)``, m the midpoint.

    Hypotheses: ``D^beta f`` nondecreasing and f nonincreasing.
    """
    p = _param(p)
    a, b = _limits(iv)
    rep_f, rep_d, fm, mean, upper, evals = _hermite_hadamard_parts(p, f, a, b, tol, grid)
    hyps = [
        Hypothesis("D^beta f nondecreasing", rep_d, rep_d.nondecreasing),
        Hypothesis("f nonincreasing", rep_f, rep_f.nonincreasing),
    ]
    return _report("hermite_hadamard", fm, mean, upper, hyps, None, evals)


def check_hermite_hadamard_reversed(
    p: BetaParam | float,
    f: FunctionModel,
    iv: Interval | tuple[float, float],
    tol: float = DEFAULT_TOL,
    grid: int = DEFAULT_GRID,
) -> InequalityReport:
    """Reversed chain for ``D^beta f`` nonincreasing and f nondecreasing, reported ascending."""
    p = _param(p)
    a, b = _limits(iv)
    rep_f, rep_d, fm, mean, upper, evals = _hermite_hadamard_parts(p, f, a, b, tol, grid)
    hyps = [
        Hypothesis("D^beta f nonincreasing", rep_d, rep_d.nonincreasing),
        Hypothesis("f nondecreasing", rep_f, rep_f.nondecreasing),
    ]
    return _report("hermite_hadamard_reversed", upper, mean, fm, hyps, None, evals)
