from __future__ import annotations

import math

import numpy as np
import pytest

from betafrac.harness.oracle import oracle_derivative, oracle_integral
from betafrac.jets import derivative_from_jet


def test_integral_examples():
    assert oracle_integral(lambda x: np.ones_like(x), 0.0, 0.0, (0.0, 1.0)) == pytest.approx(1.0, abs=1e-12)
    c = 1 / math.sqrt(math.pi)
    closed = ((1 + c) ** 0.5 - c**0.5) / 0.5
    assert oracle_integral(lambda x: np.ones_like(x), -0.5, c, (0.0, 1.0)) == pytest.approx(closed, abs=1e-12)
    assert oracle_integral(np.exp, 0.0, 0.0, (0.0, 1.0)) == pytest.approx(math.e - 1, abs=1e-10)
    with pytest.raises(ValueError):
        oracle_integral(np.exp, 0.0, 0.0, (0.0, 1.0), levels=3)


def test_integral_uses_plain_path(model):
    f = model("log1p")
    calls = []
    f_plain = f.plain

    def spy(x):
        calls.append(len(x))
        return f_plain(x)

    oracle_integral(spy, 0.0, 0.0, (0.0, 1.0))
    assert calls == [2**14 + 1]


def test_derivative_examples():
    assert oracle_derivative(lambda x: x**2, 3.0, 1) == pytest.approx(6.0, abs=1e-8)
    assert oracle_derivative(np.exp, 0.0, 2) == pytest.approx(1.0, abs=1e-6)
    c = 1 / math.sqrt(math.pi)
    assert oracle_derivative(lambda x: (x + c) ** 0.5, 0.0, 1) == pytest.approx(0.5 * math.pi**0.25, abs=1e-6)
    with pytest.raises(ValueError):
        oracle_derivative(np.exp, 1.0, 5)


@pytest.mark.parametrize("name", ["exp_neg", "log1p", "reciprocal_1p", "beta_linear", "t_squared"])
@pytest.mark.parametrize("beta", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("x", [0.25, 1.0, 2.5])
def test_derivative_matches_jets(model, name, beta, x):
    f = model(name, beta)
    jet = f.jet(x, 4)
    for k in range(1, 5):
        exact = derivative_from_jet(jet, k)
        assert oracle_derivative(f, x, k) == pytest.approx(exact, rel=1e-6, abs=1e-6)
