"""Run every identity and inequality check over a (beta, function, interval, degree) grid.

A run expands the configuration into independent cells, evaluates them
serially or on a fork-based process pool, and sorts the records by
(check, function, beta, a, b, n), so the report does not depend on the
worker count.  A failing cell becomes an ``error`` record; it never aborts
the run.
"""

from __future__ import annotations

import json
import logging
import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from ..calculus import BetaParam, beta_derivative_model, beta_integral, weighted_integral
from ..inequalities import (
    DEFAULT_GRID,
    InequalityReport,
    check_hermite_hadamard,
    check_hermite_hadamard_reversed,
    check_lemma_bounds,
    check_monotone_sign,
    check_steffensen,
    check_steffensen_reversed,
    check_taylor_steffensen,
    check_taylor_steffensen_reversed,
)
from ..jets import MAX_ORDER, FunctionModel, derivative_from_jet
from ..taylor import (
    _mean_value,
    integral_remainders,
    lagrange_remainder,
    remainder_integral_identity,
    taylor_expansion,
)
from .corpus import CorpusEntry, default_corpus, tag_of, verify_tags
from .oracle import oracle_derivative, oracle_integral

__all__ = [
    "CHECKS",
    "DEGREE_CHECKS",
    "PAIR_CHECKS",
    "SIGNED_CHECKS",
    "RunConfig",
    "Record",
    "RunReport",
    "ConfigError",
    "run_suite",
    "expected_hypothesis_not_met",
    "VERDICTS",
]

log = logging.getLogger(__name__)

DEFAULT_BETAS = (0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
DEFAULT_INTERVALS = ((0.0, 1.0), (0.5, 2.0), (1.0, 3.0))
DEFAULT_DEGREES = (0, 1, 2, 4, 6)
DEFAULT_TOL = 1e-8

ORACLE_LEVELS = 14
DERIVATIVE_ORACLE_TOL = 1e-6
DERIVATIVE_ORACLE_ORDERS = (1, 2, 3, 4)
DERIVATIVE_ORACLE_POINTS = (0.25, 0.5, 0.75)
RECONSTRUCTION_POINTS = 5

VERDICTS = ("holds", "violated", "hypothesis_not_met", "error")

# checks indexed by degree n
DEGREE_CHECKS = frozenset(
    {
        "taylor_reconstruction",
        "lagrange_remainder",
        "remainder_identity",
        "corollary_a",
        "corollary_b",
        "taylor_steffensen",
        "taylor_steffensen_reversed",
    }
)
# checks over (f, g) pairs; g always comes from the unsigned corpus
PAIR_CHECKS = frozenset({"mean_value", "steffensen", "steffensen_reversed"})
# inequality checks also run on the negated corpus
SIGNED_CHECKS = frozenset(
    {
        "steffensen",
        "steffensen_reversed",
        "taylor_steffensen",
        "taylor_steffensen_reversed",
        "hermite_hadamard",
        "hermite_hadamard_reversed",
    }
)


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    betas: tuple[float, ...] = DEFAULT_BETAS
    intervals: tuple[tuple[float, float], ...] = DEFAULT_INTERVALS
    degrees: tuple[int, ...] = DEFAULT_DEGREES
    tol: float = DEFAULT_TOL
    checks: tuple[str, ...] = ()
    output_path: str | None = None
    parallel: int = 1

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        if not betas:
            raise ConfigError("betas must be non-empty")
        for b in betas:
            if not 0.0 < b <= 1.0:
                raise ConfigError(f"beta {b!r} outside (0, 1]")
        intervals = tuple((float(a), float(b)) for a, b in self.intervals)
        if not intervals:
            raise ConfigError("intervals must be non-empty")
        for a, b in intervals:
            if not 0.0 <= a < b or not math.isfinite(b):
                raise ConfigError(f"interval [{a}, {b}] needs 0 <= a < b < inf")
        degrees = tuple(int(n) for n in self.degrees)
        for n in degrees:
            if not 0 <= n <= MAX_ORDER - 2:
                raise ConfigError(f"degree {n} outside 0..{MAX_ORDER - 2}")
        tol = float(self.tol)
        if not (tol > 0 and math.isfinite(tol)):
            raise ConfigError("tol must be positive")
        checks = tuple(self.checks) if self.checks else CHECKS
        unknown = sorted(set(checks) - set(CHECKS))
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {', '.join(CHECKS)}")
        if int(self.parallel) < 1:
            raise ConfigError("parallel must be >= 1")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "tol", tol)
        object.__setattr__(self, "checks", tuple(c for c in CHECKS if c in checks))
        object.__setattr__(self, "parallel", int(self.parallel))

    @classmethod
    def from_mapping(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError(f"unknown config keys {extra}")
        if "checks" in data and not data["checks"]:
            raise ConfigError("checks must be non-empty")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path: str | Path) -> RunConfig:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_mapping(data)

    def echo(self) -> dict:
        """Fields that determine the records; execution settings are left out."""
        return {
            "betas": list(self.betas),
            "intervals": [list(iv) for iv in self.intervals],
            "degrees": list(self.degrees),
            "tol": self.tol,
            "checks": list(self.checks),
        }


RECORD_FIELDS = (
    "check",
    "function",
    "beta",
    "a",
    "b",
    "n",
    "lhs",
    "mid",
    "rhs",
    "margin_left",
    "margin_right",
    "verdict",
    "evals",
    "ms",
)


@dataclass(frozen=True)
class Record:
    check: str
    function: str
    beta: float
    a: float
    b: float
    n: int | None
    lhs: float | None
    mid: float | None
    rhs: float | None
    margin_left: float | None
    margin_right: float | None
    verdict: str
    evals: int
    ms: float

    @property
    def sort_key(self) -> tuple:
        return (self.check, self.function, self.beta, self.a, self.b, -1 if self.n is None else self.n)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunReport:
    config: dict
    records: list[Record] = field(default_factory=list)

    @property
    def summary(self) -> dict[str, int]:
        counts = {v: 0 for v in VERDICTS}
        for r in self.records:
            counts[r.verdict] += 1
        return counts

    @property
    def exit_code(self) -> int:
        s = self.summary
        return 0 if s["violated"] == 0 and s["error"] == 0 else 2

    def select(self, check: str | None = None, **match) -> list[Record]:
        out = []
        for r in self.records:
            if check is not None and r.check != check:
                continue
            if all(getattr(r, k) == v for k, v in match.items()):
                out.append(r)
        return out


# -- cells -------------------------------------------------------------------


@dataclass(frozen=True)
class _Cell:
    check: str
    f: str
    negate: bool
    g: str | None
    beta: float
    a: float
    b: float
    n: int | None

    @property
    def label(self) -> str:
        name = ("-" if self.negate else "") + self.f
        return name if self.g is None else f"{name}|{self.g}"


@dataclass(frozen=True)
class _Outcome:
    lhs: float | None
    mid: float | None
    rhs: float | None
    margin_left: float | None
    margin_right: float | None
    verdict: str
    evals: int


def _identity(lhs: float, rhs: float, threshold: float, evals: int, ok: bool = True) -> _Outcome:
    margin = threshold - abs(lhs - rhs)
    if not math.isfinite(margin):
        margin = -math.inf
    verdict = "holds" if margin >= 0.0 and ok else "violated"
    return _Outcome(lhs, None, rhs, margin, margin, verdict, evals)


def _from_report(rep: InequalityReport) -> _Outcome:
    return _Outcome(rep.lhs, rep.mid, rep.rhs, rep.margin_left, rep.margin_right, rep.verdict, rep.evaluations)


@dataclass(frozen=True)
class _Context:
    p: BetaParam
    f: FunctionModel
    g: FunctionModel | None
    a: float
    b: float
    n: int | None
    tol: float

    @property
    def qtol(self) -> float:
        # quadrature runs two orders tighter than the verdict thresholds
        return self.tol / 100.0


def _fundamental(ctx: _Context) -> _Outcome:
    d = beta_derivative_model(ctx.p, ctx.f, 1)
    res = weighted_integral(ctx.p, d, ctx.a, ctx.b, ctx.qtol)
    fa, fb = ctx.f(np.array([ctx.a, ctx.b]))
    return _identity(res.value, float(fb - fa), ctx.tol, res.evaluations)


def _oracle_agreement(ctx: _Context) -> _Outcome:
    res = beta_integral(ctx.p, ctx.f, (ctx.a, ctx.b), ctx.qtol)
    ref = oracle_integral(ctx.f, ctx.p.beta - 1.0, ctx.p.shift, (ctx.a, ctx.b), ORACLE_LEVELS)
    threshold = max(ctx.tol, 3.0 * res.error_estimate)
    return _identity(res.value, ref, threshold, res.evaluations + 2**ORACLE_LEVELS + 1)


def _oracle_derivative(ctx: _Context) -> _Outcome:
    worst = None
    evals = 0
    for q in DERIVATIVE_ORACLE_POINTS:
        x = ctx.a + q * (ctx.b - ctx.a)
        jet = ctx.f.jet(x, max(DERIVATIVE_ORACLE_ORDERS))
        for k in DERIVATIVE_ORACLE_ORDERS:
            exact = derivative_from_jet(jet, k)
            approx = oracle_derivative(ctx.f, x, k)
            evals += 1
            margin = DERIVATIVE_ORACLE_TOL * max(1.0, abs(exact)) - abs(exact - approx)
            if worst is None or margin < worst[0]:
                worst = (margin, exact, approx)
    margin, exact, approx = worst
    verdict = "holds" if margin >= 0.0 else "violated"
    return _Outcome(exact, None, approx, margin, margin, verdict, evals)


def _reconstruction(ctx: _Context) -> _Outcome:
    ts = ctx.a + (ctx.b - ctx.a) * np.arange(1, RECONSTRUCTION_POINTS + 1) / (RECONSTRUCTION_POINTS + 1)
    fts = ctx.f(ts)
    worst = None
    evals = 0
    for s in (ctx.a, ctx.b):
        poly = taylor_expansion(ctx.p, ctx.f, s, ctx.n)(ts)
        rems = integral_remainders(ctx.p, ctx.f, s, ctx.n, ts, ctx.qtol)
        evals += sum(r.evaluations for r in rems)
        rhs = poly + np.array([r.value for r in rems])
        i = int(np.argmax(np.abs(fts - rhs)))
        if worst is None or abs(fts[i] - rhs[i]) > abs(worst[0] - worst[1]):
            worst = (float(fts[i]), float(rhs[i]))
    return _identity(worst[0], worst[1], 10.0 * ctx.tol, evals)


def _lagrange(ctx: _Context) -> _Outcome:
    worst = None
    evals = 0
    inside = True
    for s, t in ((ctx.a, ctx.b), (ctx.b, ctx.a)):
        rv = lagrange_remainder(ctx.p, ctx.f, s, ctx.n, t, ctx.qtol)
        evals += rv.evaluations
        inside = inside and ctx.a <= rv.lagrange_point <= ctx.b
        if worst is None or abs(rv.lagrange_form - rv.integral_form) > abs(worst[0] - worst[1]):
            worst = (rv.lagrange_form, rv.integral_form)
    return _identity(worst[0], worst[1], 10.0 * ctx.tol, evals, inside)


def _identity_at(where: str) -> Callable[[_Context], _Outcome]:
    def run(ctx: _Context) -> _Outcome:
        t = {"a": ctx.a, "b": ctx.b, "mid": 0.5 * (ctx.a + ctx.b)}[where]
        res = remainder_integral_identity(ctx.p, ctx.f, (ctx.a, ctx.b), t, ctx.n, ctx.qtol)
        return _identity(res.lhs, res.rhs, 10.0 * ctx.tol, res.evaluations)

    return run


def _g_bound(g: FunctionModel, a: float, b: float) -> float:
    top = float(np.max(g(np.linspace(a, b, DEFAULT_GRID))))
    return top if top > 0.0 else 1.0


def _mean_value_check(ctx: _Context) -> _Outcome:
    rep = check_monotone_sign(ctx.g, (ctx.a, ctx.b))
    c, fg, gi, evals = _mean_value(ctx.p, ctx.f, ctx.g, ctx.a, ctx.b, ctx.qtol)
    rhs = float(ctx.f(np.array([c]))[0]) * gi
    out = _identity(fg, rhs, ctx.tol, evals, ctx.a <= c <= ctx.b)
    if not rep.nonnegative:
        return _Outcome(out.lhs, None, out.rhs, out.margin_left, out.margin_right, "hypothesis_not_met", evals)
    return out


def _lemma(ctx: _Context) -> _Outcome:
    M = _g_bound(ctx.f, ctx.a, ctx.b)
    return _from_report(check_lemma_bounds(ctx.p, ctx.f, (ctx.a, ctx.b), M, ctx.qtol))


def _steffensen(reversed_: bool) -> Callable[[_Context], _Outcome]:
    check = check_steffensen_reversed if reversed_ else check_steffensen

    def run(ctx: _Context) -> _Outcome:
        M = _g_bound(ctx.g, ctx.a, ctx.b)
        return _from_report(check(ctx.p, ctx.f, ctx.g, (ctx.a, ctx.b), M, ctx.qtol))

    return run


def _taylor_steffensen(reversed_: bool) -> Callable[[_Context], _Outcome]:
    check = check_taylor_steffensen_reversed if reversed_ else check_taylor_steffensen

    def run(ctx: _Context) -> _Outcome:
        return _from_report(check(ctx.p, ctx.f, (ctx.a, ctx.b), ctx.n, ctx.qtol))

    return run


def _hermite_hadamard(reversed_: bool) -> Callable[[_Context], _Outcome]:
    check = check_hermite_hadamard_reversed if reversed_ else check_hermite_hadamard

    def run(ctx: _Context) -> _Outcome:
        return _from_report(check(ctx.p, ctx.f, (ctx.a, ctx.b), ctx.qtol))

    return run


_REGISTRY: dict[str, Callable[[_Context], _Outcome]] = {
    "fundamental_theorem": _fundamental,
    "oracle_agreement": _oracle_agreement,
    "oracle_derivative": _oracle_derivative,
    "taylor_reconstruction": _reconstruction,
    "lagrange_remainder": _lagrange,
    "remainder_identity": _identity_at("mid"),
    "corollary_a": _identity_at("a"),
    "corollary_b": _identity_at("b"),
    "mean_value": _mean_value_check,
    "lemma_bounds": _lemma,
    "steffensen": _steffensen(False),
    "steffensen_reversed": _steffensen(True),
    "taylor_steffensen": _taylor_steffensen(False),
    "taylor_steffensen_reversed": _taylor_steffensen(True),
    "hermite_hadamard": _hermite_hadamard(False),
    "hermite_hadamard_reversed": _hermite_hadamard(True),
}

CHECKS: tuple[str, ...] = tuple(_REGISTRY)


def _cells(cfg: RunConfig, corpus: Sequence[CorpusEntry]) -> list[_Cell]:
    cells = []
    by_name = _by_name(corpus)
    for check in cfg.checks:
        signs = (False, True) if check in SIGNED_CHECKS else (False,)
        degrees = cfg.degrees if check in DEGREE_CHECKS else (None,)
        for entry in corpus:
            partners = [g.name for g in corpus] if check in PAIR_CHECKS else [None]
            for negate in signs:
                for gname in partners:
                    for beta in cfg.betas:
                        for a, b in cfg.intervals:
                            if not entry.contains(a, b):
                                continue
                            if gname is not None and not by_name[gname].contains(a, b):
                                continue
                            for n in degrees:
                                cells.append(_Cell(check, entry.name, negate, gname, beta, a, b, n))
    return cells


def _by_name(corpus: Sequence[CorpusEntry]) -> dict[str, CorpusEntry]:
    return {e.name: e for e in corpus}


def _evaluate(cell: _Cell, corpus: dict[str, CorpusEntry], tol: float) -> Record:
    start = time.perf_counter()
    try:
        f = corpus[cell.f].model(cell.beta)
        if cell.negate:
            f = f.negated()
        g = corpus[cell.g].model(cell.beta) if cell.g is not None else None
        ctx = _Context(BetaParam(cell.beta), f, g, cell.a, cell.b, cell.n, tol)
        out = _REGISTRY[cell.check](ctx)
    except Exception as exc:  # a failing cell is reported, never fatal
        log.warning("%s %s beta=%s [%s, %s] n=%s: %s", cell.check, cell.label, cell.beta, cell.a, cell.b, cell.n, exc)
        out = _Outcome(None, None, None, None, None, "error", 0)
    ms = (time.perf_counter() - start) * 1e3
    return Record(
        cell.check,
        cell.label,
        cell.beta,
        cell.a,
        cell.b,
        cell.n,
        _clean(out.lhs),
        _clean(out.mid),
        _clean(out.rhs),
        _clean(out.margin_left),
        _clean(out.margin_right),
        out.verdict,
        int(out.evals),
        round(ms, 3),
    )


def _clean(v) -> float | None:
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


# state inherited by forked workers; never mutated inside them
_WORKER_STATE: dict = {}


def _run_chunk(cells: list[_Cell]) -> list[Record]:
    corpus, tol = _WORKER_STATE["corpus"], _WORKER_STATE["tol"]
    return [_evaluate(c, corpus, tol) for c in cells]


def _chunks(items: list, size: int) -> Iterable[list]:
    for i in range(0, len(items), size):
        yield items[i : i + size]


def run_suite(
    cfg: RunConfig,
    corpus: Sequence[CorpusEntry] | None = None,
    verify: bool = True,
) -> RunReport:
    """Evaluate every enabled check on the grid and return the sorted records.

    Corpus tags for the requested cells are re-verified first; a mismatch
    raises ``TagMismatchError`` before any check runs.
    """
    corpus = tuple(corpus) if corpus is not None else default_corpus()
    if verify:
        verify_tags(corpus, cfg.betas, cfg.intervals)
    cells = _cells(cfg, corpus)
    by_name = _by_name(corpus)
    records: list[Record] = []
    workers = min(cfg.parallel, max(1, len(cells)))
    if workers > 1 and "fork" in multiprocessing.get_all_start_methods():
        _WORKER_STATE.update(corpus=by_name, tol=cfg.tol)
        try:
            ctx = multiprocessing.get_context("fork")
            size = max(1, min(64, len(cells) // (4 * workers) or 1))
            with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                for chunk in pool.map(_run_chunk, _chunks(cells, size)):
                    records.extend(chunk)
        finally:
            _WORKER_STATE.clear()
    else:
        records = [_evaluate(c, by_name, cfg.tol) for c in cells]
    records.sort(key=lambda r: r.sort_key)
    return RunReport(cfg.echo(), records)


def _hypotheses_met(cell: _Cell, entry: CorpusEntry, g_entry: CorpusEntry | None) -> bool | None:
    def tag(e, k, negate=False):
        return tag_of(e, cell.beta, cell.a, cell.b, k, negate)

    neg = cell.negate
    check = cell.check
    if check in ("mean_value", "steffensen", "steffensen_reversed"):
        tg = tag(g_entry, 0)
        if tg is None:
            return None
        if check == "mean_value":
            return tg.nonnegative
        tf = tag(entry, 0, neg)
        if check == "steffensen":
            return tg.nonnegative and tf.nonnegative and tf.nonincreasing
        return tg.nonnegative and tf.nonpositive and tf.nondecreasing
    if check == "lemma_bounds":
        t0 = tag(entry, 0)
        return None if t0 is None else t0.nonnegative
    if check in ("taylor_steffensen", "taylor_steffensen_reversed"):
        tn, tn1 = tag(entry, cell.n, neg), tag(entry, cell.n + 1, neg)
        if tn is None or tn1 is None:
            return None
        if check == "taylor_steffensen":
            return tn1.nondecreasing and tn.nonincreasing
        return tn1.nonincreasing and tn.nondecreasing
    if check in ("hermite_hadamard", "hermite_hadamard_reversed"):
        t0, t1 = tag(entry, 0, neg), tag(entry, 1, neg)
        if t0 is None or t1 is None:
            return None
        if check == "hermite_hadamard":
            return t1.nondecreasing and t0.nonincreasing
        return t1.nonincreasing and t0.nondecreasing
    return True


def expected_hypothesis_not_met(cfg: RunConfig, corpus: Sequence[CorpusEntry] | None = None) -> int | None:
    """Number of cells whose hypotheses fail according to the frozen tags alone.

    Returns None when some needed cell is not covered by the tag table.
    """
    corpus = tuple(corpus) if corpus is not None else default_corpus()
    by_name = _by_name(corpus)
    count = 0
    for cell in _cells(cfg, corpus):
        met = _hypotheses_met(cell, by_name[cell.f], by_name.get(cell.g) if cell.g else None)
        if met is None:
            return None
        count += not met
    return count
