from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betafrac.calculus import BetaParam, beta_integral
from betafrac.inequalities import (
    VERDICT_SLACK,
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
from betafrac.jets import FunctionModel

lin = FunctionModel.from_rule("t", lambda t: t)
one_minus = FunctionModel.from_rule("1-t", lambda t: 1.0 - t)


def const(v):
    return FunctionModel.from_rule(f"const{v}", lambda t: t * 0.0 + v)


# -- sampling ----------------------------------------------------------------


def test_monotone_examples(model):
    rep = check_monotone_sign(model("exp_neg"), (0.0, 1.0))
    assert (rep.direction, rep.sign) == ("nonincreasing", "nonnegative")
    assert rep.witness is None and rep.samples == 257
    rep = check_monotone_sign(lambda x: x - 0.5, (0.0, 1.0))
    assert rep.sign == "mixed" and rep.witness == (0.0, 1.0)
    rep = check_monotone_sign(const(0.0), (0.0, 1.0))
    assert rep.nonincreasing and rep.nondecreasing and rep.nonnegative and rep.nonpositive


def test_monotone_direction_witness():
    rep = check_monotone_sign(lambda x: (x - 0.3) ** 2, (0.0, 1.0), grid=101)
    assert rep.direction == "neither"
    a, b = rep.direction_witness
    assert b > a and b <= 0.3 + 1e-12


def test_monotone_grid_minimum():
    with pytest.raises(ValueError):
        check_monotone_sign(lin, (0.0, 1.0), grid=15)


# -- shift and lemma -----------------------------------------------------------


def test_steffensen_l_examples():
    assert steffensen_l(0.5, const(2.0), (0.5, 2.0), 2.0) == pytest.approx(1.5, abs=1e-12)
    assert steffensen_l(0.5, const(0.0), (0.5, 2.0), 2.0) == 0.0
    assert steffensen_l(1.0, lin, (0.0, 1.0), 1.0) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(ValueError):
        steffensen_l(1.0, lin, (0.0, 2.0), 1.0)
    with pytest.raises(ValueError):
        steffensen_l(1.0, lin, (0.0, 1.0), 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.05, max_value=1.0), st.floats(min_value=0.0, max_value=2.0), st.floats(min_value=0.1, max_value=3.0))
def test_steffensen_l_containment(beta, a, length):
    b = a + length
    g = FunctionModel.from_rule("g", lambda t: (-t).exp())
    M = math.exp(-a)
    assert -1e-10 <= steffensen_l(beta, g, (a, b), M) <= length + 1e-10


def test_lemma_examples():
    rep = check_lemma_bounds(0.3, const(2.0), (0.5, 2.0), 2.0)
    assert rep.lhs == pytest.approx(rep.mid, abs=1e-12) and rep.rhs == pytest.approx(rep.mid, abs=1e-12)
    rep = check_lemma_bounds(1.0, lin, (0.0, 1.0), 1.0)
    np.testing.assert_allclose(rep.chain, (0.5, 0.5, 0.5), atol=1e-14)
    assert rep.verdict == "holds"


def test_lemma_reference():
    # beta = 1/2, g = t, [0, 1], M = 1; mpmath quadrature reference
    rep = check_lemma_bounds(0.5, lin, (0.0, 1.0), 1.0, 1e-12)
    np.testing.assert_allclose(
        rep.chain, (0.39822857419000908045, 0.45799581192595166452, 0.52022053304320542193), rtol=1e-12
    )
    assert rep.l_value == pytest.approx(0.45840828187385947039, rel=1e-12)
    assert rep.verdict == "holds" and rep.margin_left > 0 and rep.margin_right > 0


def test_lemma_hypothesis_failure():
    rep = check_lemma_bounds(1.0, lambda x: x - 0.5, (0.0, 1.0), 1.0)
    assert rep.verdict == "hypothesis_not_met"


# -- Steffensen ----------------------------------------------------------------


def test_steffensen_classical_cell():
    rep = check_steffensen(1.0, one_minus, lin, (0.0, 1.0), 1.0)
    np.testing.assert_allclose(rep.chain, (0.125, 1 / 6, 0.375), atol=1e-12)
    assert rep.l_value == pytest.approx(0.5) and rep.verdict == "holds"


def test_steffensen_trivial_cells(model):
    f = model("exp_neg")
    rep = check_steffensen(0.4, f, const(1.5), (0.5, 2.0), 1.5)
    assert rep.l_value == pytest.approx(1.5, abs=1e-12)
    whole = 1.5 * beta_integral(0.4, f, (0.5, 2.0)).value
    np.testing.assert_allclose(rep.chain, (whole, whole, whole), atol=1e-12)
    rep = check_steffensen(0.4, f, const(0.0), (0.5, 2.0), 1.0)
    assert rep.chain == (0.0, 0.0, 0.0) and rep.l_value == 0.0


def test_steffensen_reference(model):
    rep = check_steffensen(0.5, model("exp_neg"), lin, (0.0, 1.0), 1.0, 1e-12)
    np.testing.assert_allclose(
        rep.chain, (0.18708440352791108996, 0.24878816012261674523, 0.42201415272943560035), rtol=1e-11
    )


def test_steffensen_reversed_examples(model):
    rep = check_steffensen_reversed(1.0, one_minus.negated(), lin, (0.0, 1.0), 1.0)
    np.testing.assert_allclose(rep.chain, (-0.375, -1 / 6, -0.125), atol=1e-12)
    assert rep.verdict == "holds"
    rep = check_steffensen_reversed(0.7, const(0.0), lin, (0.0, 1.0), 1.0)
    assert rep.chain == (0.0, 0.0, 0.0) and rep.verdict == "holds"


def test_steffensen_hypotheses(model):
    # f increasing: forward theorem does not apply
    assert check_steffensen(1.0, lin, lin, (0.0, 1.0), 1.0).verdict == "hypothesis_not_met"
    assert check_steffensen_reversed(1.0, model("exp_neg"), lin, (0.0, 1.0), 1.0).verdict == "hypothesis_not_met"


@pytest.mark.parametrize("beta", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("fname", ["exp_neg", "reciprocal_1p", "one"])
@pytest.mark.parametrize("gname", ["t", "exp_neg", "log1p"])
def test_negation_symmetry(model, beta, fname, gname):
    f, g = model(fname, beta), model(gname, beta)
    M = float(np.max(g(np.linspace(0.5, 2.0, 257))))
    fwd = check_steffensen(beta, f, g, (0.5, 2.0), M)
    rev = check_steffensen_reversed(beta, f.negated(), g, (0.5, 2.0), M)
    np.testing.assert_allclose(rev.chain, [-v for v in fwd.chain[::-1]], rtol=0, atol=1e-12)
    assert fwd.verdict == rev.verdict == "holds"
    # the lemma holds whenever the theorem does
    assert check_lemma_bounds(beta, g, (0.5, 2.0), M).verdict == "holds"


# -- Taylor-Steffensen ---------------------------------------------------------


def test_taylor_steffensen_exp_cell(model):
    rep = check_taylor_steffensen(1.0, model("exp_neg"), (0.0, 1.0), 0)
    e = math.exp
    np.testing.assert_allclose(rep.chain, (e(-0.5) - 1, -e(-1), e(-1) - e(-0.5)), atol=1e-12)
    assert rep.l_value == 0.5 and rep.verdict == "holds"


def test_taylor_steffensen_constant(model):
    for check in (check_taylor_steffensen, check_taylor_steffensen_reversed):
        rep = check(0.5, const(2.0), (0.0, 1.0), 1)
        np.testing.assert_allclose(rep.chain, (0, 0, 0), atol=1e-14)
        assert rep.verdict == "holds"


def test_taylor_steffensen_linear_derivative():
    # beta = 1, n = 1, f = -t**2: f' = -2t decreasing, f'' = -2 constant
    f = FunctionModel.from_rule("-t2", lambda t: -(t * t))
    rep = check_taylor_steffensen(1.0, f, (0.0, 1.0), 1)
    assert rep.verdict == "holds"
    # closed forms: l = 1/3, f'(1/3) - f'(0) = -2/3, f'(1) - f'(2/3) = -2/3, middle = 2 int_0^1 -tau^2 = -2/3
    np.testing.assert_allclose(rep.chain, (-2 / 3, -2 / 3, -2 / 3), atol=1e-10)


def test_taylor_steffensen_reversed_log(model):
    rep = check_taylor_steffensen_reversed(1.0, model("log1p"), (0.0, 1.0), 0)
    assert rep.verdict == "holds"
    assert rep.mid == pytest.approx(2 * math.log(2) - 1, abs=1e-12)
    fwd = check_taylor_steffensen(1.0, model("exp_neg"), (0.0, 1.0), 0)
    rev = check_taylor_steffensen_reversed(1.0, model("exp_neg").negated(), (0.0, 1.0), 0)
    np.testing.assert_allclose(rev.chain, [-v for v in fwd.chain[::-1]], atol=1e-12)


@pytest.mark.parametrize("beta", [0.25, 0.75])
def test_taylor_steffensen_n0_is_hermite_hadamard(model, beta):
    f = model("exp_neg")
    ts = check_taylor_steffensen(beta, f, (0.5, 2.0), 0)
    hh = check_hermite_hadamard(beta, f, (0.5, 2.0))
    fa = f(0.5)
    np.testing.assert_allclose([v + fa for v in ts.chain], hh.chain, atol=1e-9)


# -- Hermite-Hadamard ----------------------------------------------------------


def test_hermite_hadamard_exp_cell(model):
    rep = check_hermite_hadamard(1.0, model("exp_neg"), (0.0, 1.0))
    e = math.exp
    np.testing.assert_allclose(rep.chain, (e(-0.5), 1 - e(-1), 1 + e(-1) - e(-0.5)), atol=1e-12)
    assert rep.verdict == "holds"


def test_hermite_hadamard_reference(model):
    rep = check_hermite_hadamard(0.5, model("exp_neg"), (0.0, 1.0), 1e-12)
    assert rep.mid == pytest.approx(0.65863592365938277056, rel=1e-12)


def test_hermite_hadamard_constant():
    for check in (check_hermite_hadamard, check_hermite_hadamard_reversed):
        rep = check(0.3, const(1.7), (0.5, 2.0))
        np.testing.assert_allclose(rep.chain, (1.7, 1.7, 1.7), rtol=1e-14)
        assert rep.verdict == "holds"


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
def test_hermite_hadamard_negative_beta_linear(model, beta):
    f = model("beta_linear", beta).negated()
    rep = check_hermite_hadamard(beta, f, (0.0, 1.0))
    assert rep.verdict == "holds"
    assert rep.margin_left >= -VERDICT_SLACK and rep.margin_right >= -VERDICT_SLACK


def test_hermite_hadamard_reversed_log(model):
    rep = check_hermite_hadamard_reversed(1.0, model("log1p"), (0.0, 1.0))
    np.testing.assert_allclose(
        rep.chain, (math.log(2) - math.log(1.5), 2 * math.log(2) - 1, math.log(1.5)), atol=1e-12
    )
    assert rep.verdict == "holds"
    fwd = check_hermite_hadamard(1.0, model("exp_neg"), (0.0, 1.0))
    rev = check_hermite_hadamard_reversed(1.0, model("exp_neg").negated(), (0.0, 1.0))
    np.testing.assert_allclose(rev.chain, [-v for v in fwd.chain[::-1]], atol=0)


def test_hermite_hadamard_hypothesis(model):
    assert check_hermite_hadamard(1.0, model("log1p"), (0.0, 1.0)).verdict == "hypothesis_not_met"
