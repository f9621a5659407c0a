from __future__ import annotations

import math

import pytest

from betafrac.calculus import BetaParam, beta_integral
from betafrac.harness.corpus import (
    TAG_ORDERS,
    CorpusEntry,
    TagMismatchError,
    Tag,
    default_corpus,
    load_tags,
    tag_of,
    verify_tags,
)
from betafrac.jets import FunctionModel
from betafrac.harness.runner import DEFAULT_BETAS, DEFAULT_INTERVALS

NAMES = ["one", "t", "t_squared", "exp_neg", "log1p", "reciprocal_1p", "beta_linear", "one_minus_t"]


def test_corpus_contents():
    corpus = default_corpus()
    assert [e.name for e in corpus] == NAMES
    by = {e.name: e for e in corpus}
    assert by["one_minus_t"].domain == (0.0, 1.0)
    assert not by["one_minus_t"].contains(0.5, 2.0)


def test_plain_and_jet_paths_agree(model):
    import numpy as np

    xs = np.linspace(0.0, 1.0, 11)
    for name in NAMES:
        for beta in (0.1, 1.0):
            f = model(name, beta)
            np.testing.assert_allclose(f(xs), f.evaluate_plain(xs), rtol=1e-15, atol=1e-15)


def test_beta_linear_per_beta(model):
    for beta in DEFAULT_BETAS:
        f = model("beta_linear", beta)
        assert f(0.0) == pytest.approx(BetaParam(beta).shift ** beta, rel=1e-15)


@pytest.mark.parametrize("name", NAMES)
def test_closed_form_primitives(corpus, model, name):
    entry = corpus[name]
    prim = entry.closed_forms["primitive_beta1"]
    for a, b in DEFAULT_INTERVALS:
        if not entry.contains(a, b):
            continue
        res = beta_integral(1.0, model(name, 1.0), (a, b), 1e-12)
        assert res.value == pytest.approx(prim(b) - prim(a), abs=1e-12)


def test_tag_table_covers_default_grid():
    tags = load_tags()
    assert tags["grid"] == 257 and tags["orders"] == TAG_ORDERS
    for entry in default_corpus():
        cells = [(b, iv) for b in DEFAULT_BETAS for iv in DEFAULT_INTERVALS if entry.contains(*iv)]
        assert len(entry.known_properties) == len(cells)
        for beta, (a, b) in cells:
            assert tag_of(entry, beta, a, b, TAG_ORDERS - 1) is not None


def test_verify_tags_default_grid():
    assert verify_tags(default_corpus(), DEFAULT_BETAS, DEFAULT_INTERVALS) == 1056


def test_tag_examples():
    by = {e.name: e for e in default_corpus()}
    t = tag_of(by["exp_neg"], 1.0, 0.0, 1.0, 0)
    assert t.nonincreasing and t.nonnegative and not t.constant
    neg = tag_of(by["exp_neg"], 1.0, 0.0, 1.0, 0, negate=True)
    assert neg.nondecreasing and neg.nonpositive
    d2 = tag_of(by["beta_linear"], 0.5, 0.0, 1.0, 2)
    assert d2.constant and d2.zero
    assert tag_of(by["exp_neg"], 0.3, 0.0, 1.0, 0) is None


def test_tag_mismatch_aborts():
    good = {e.name: e for e in default_corpus()}["exp_neg"]
    lying = dict(good.known_properties)
    key = next(iter(lying))
    lying[key] = [Tag("nondecreasing", "nonnegative", False, False)] + lying[key][1:]
    bad = CorpusEntry("exp_neg", good.build, good.domain, "", lying)
    with pytest.raises(TagMismatchError):
        verify_tags([bad], DEFAULT_BETAS, DEFAULT_INTERVALS)
