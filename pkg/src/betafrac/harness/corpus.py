"""Test-function corpus and its frozen monotonicity/sign tags.

Each entry supplies a jet rule for the pipeline and an independent numpy
evaluation for the oracles.  Tags describe ``D^{k beta} f`` for k = 0..7 on
every default (beta, interval) cell; they were generated symbolically by
``tools/generate_corpus_tags.py`` and are re-checked against the jet pipeline
when the corpus is loaded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

import numpy as np

from ..calculus import BetaParam, beta_derivative_model
from ..inequalities import DEFAULT_GRID, MonotonicityReport, check_monotone_sign
from ..jets import FunctionModel

__all__ = [
    "CorpusEntry",
    "TagMismatchError",
    "TAG_ORDERS",
    "default_corpus",
    "corpus_by_name",
    "cell_key",
    "load_tags",
    "verify_tags",
    "tag_of",
]

TAG_ORDERS = 8


class TagMismatchError(RuntimeError):
    """A frozen corpus tag disagrees with the sampled behaviour of the model."""


@dataclass(frozen=True)
class Tag:
    direction: str
    sign: str
    constant: bool
    zero: bool

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

    def negated(self) -> Tag:
        flip_dir = {"nonincreasing": "nondecreasing", "nondecreasing": "nonincreasing"}
        flip_sign = {"nonnegative": "nonpositive", "nonpositive": "nonnegative"}
        direction = self.direction if self.constant else flip_dir.get(self.direction, self.direction)
        sign = self.sign if self.zero else flip_sign.get(self.sign, self.sign)
        return Tag(direction, sign, self.constant, self.zero)

    @classmethod
    def from_report(cls, rep: MonotonicityReport) -> Tag:
        return cls(rep.direction, rep.sign, rep.constant, rep.zero)


@dataclass(frozen=True)
class CorpusEntry:
    """A named test function; ``build(beta)`` returns its model for that order."""

    name: str
    build: Callable[[float], FunctionModel] = field(repr=False)
    domain: tuple[float, float] = (0.0, math.inf)
    description: str = ""
    known_properties: dict = field(default_factory=dict, repr=False, compare=False)
    closed_forms: dict = field(default_factory=dict, repr=False, compare=False)

    def model(self, beta: float) -> FunctionModel:
        return _cached_model(self, float(beta))

    def contains(self, a: float, b: float) -> bool:
        return self.domain[0] <= a and b <= self.domain[1]


@lru_cache(maxsize=None)
def _cached_model(entry: CorpusEntry, beta: float) -> FunctionModel:
    return entry.build(beta)


def _fixed(name, rule, plain, domain=(0.0, math.inf)):
    model = FunctionModel.from_rule(name, rule, plain, domain=domain)
    return lambda beta: model


def _beta_linear(beta: float) -> FunctionModel:
    c = BetaParam(beta).shift
    return FunctionModel.from_rule(
        "beta_linear",
        lambda t: (t + c).pow(beta),
        lambda x: (x + c) ** beta,
    )


def _entries() -> list[CorpusEntry]:
    unit = (0.0, 1.0)
    return [
        CorpusEntry(
            "one",
            _fixed("one", lambda t: t * 0.0 + 1.0, lambda x: np.ones_like(x)),
            description="constant 1",
            closed_forms={"primitive_beta1": lambda t: t},
        ),
        CorpusEntry(
            "t",
            _fixed("t", lambda t: t, lambda x: x),
            description="identity",
            closed_forms={"primitive_beta1": lambda t: t * t / 2},
        ),
        CorpusEntry(
            "t_squared",
            _fixed("t_squared", lambda t: t * t, lambda x: x * x),
            description="t**2",
            closed_forms={"primitive_beta1": lambda t: t**3 / 3},
        ),
        CorpusEntry(
            "exp_neg",
            _fixed("exp_neg", lambda t: (-t).exp(), lambda x: np.exp(-x)),
            description="exp(-t)",
            closed_forms={"primitive_beta1": lambda t: -math.exp(-t)},
        ),
        CorpusEntry(
            "log1p",
            _fixed("log1p", lambda t: (t + 1.0).log(), np.log1p),
            description="log(1 + t)",
            closed_forms={"primitive_beta1": lambda t: (1 + t) * math.log1p(t) - t},
        ),
        CorpusEntry(
            "reciprocal_1p",
            _fixed("reciprocal_1p", lambda t: (t + 1.0).reciprocal(), lambda x: 1.0 / (1.0 + x)),
            description="1/(1 + t)",
            closed_forms={"primitive_beta1": lambda t: math.log1p(t)},
        ),
        CorpusEntry(
            "beta_linear",
            _beta_linear,
            description="(t + 1/Gamma(beta))**beta",
            closed_forms={"primitive_beta1": lambda t: (t + 1) ** 2 / 2},
        ),
        CorpusEntry(
            "one_minus_t",
            _fixed("one_minus_t", lambda t: 1.0 - t, lambda x: 1.0 - x, unit),
            domain=unit,
            description="1 - t on [0, 1]",
            closed_forms={"primitive_beta1": lambda t: t - t * t / 2},
        ),
    ]


def cell_key(beta: float, a: float, b: float) -> str:
    return f"{float(beta)!r}|{float(a)!r},{float(b)!r}"


@lru_cache(maxsize=1)
def load_tags() -> dict:
    """The frozen tag table shipped with the package."""
    text = resources.files("betafrac.data").joinpath("corpus_tags.json").read_text()
    return json.loads(text)


def _tags_for(name: str) -> dict:
    raw = load_tags()["entries"].get(name, {})
    return {key: [Tag(**t) for t in tags] for key, tags in raw.items()}


@lru_cache(maxsize=1)
def default_corpus() -> tuple[CorpusEntry, ...]:
    out = []
    for entry in _entries():
        out.append(
            CorpusEntry(
                entry.name,
                entry.build,
                entry.domain,
                entry.description,
                _tags_for(entry.name),
                entry.closed_forms,
            )
        )
    return tuple(out)


def corpus_by_name(corpus=None) -> dict[str, CorpusEntry]:
    return {e.name: e for e in (corpus or default_corpus())}


def tag_of(entry: CorpusEntry, beta: float, a: float, b: float, k: int, negate: bool = False) -> Tag | None:
    """Frozen tag of ``D^{k beta} f`` on the cell, or None if the cell was not tagged."""
    tags = entry.known_properties.get(cell_key(beta, a, b))
    if tags is None or k >= len(tags):
        return None
    return tags[k].negated() if negate else tags[k]


def verify_tags(corpus, betas, intervals, grid: int = DEFAULT_GRID) -> int:
    """Re-derive every tag for the requested cells; returns the number checked.

    Raises ``TagMismatchError`` on the first disagreement.
    """
    checked = 0
    for entry in corpus:
        for beta in betas:
            model = entry.model(beta)
            for a, b in intervals:
                tags = entry.known_properties.get(cell_key(beta, a, b))
                if tags is None or not entry.contains(a, b):
                    continue
                for k, tag in enumerate(tags):
                    rep = check_monotone_sign(beta_derivative_model(beta, model, k), (a, b), grid)
                    if Tag.from_report(rep) != tag:
                        raise TagMismatchError(
                            f"{entry.name}: D^{k}beta on [{a}, {b}] at beta={beta} "
                            f"sampled as {Tag.from_report(rep)}, tagged {tag}"
                        )
                    checked += 1
    return checked

