"""Acceptance criteria 1-10, evaluated from two default CLI runs plus direct API calls.

Run under pytest for one PASS/FAIL line per criterion in the terminal
summary, or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

from betafrac.calculus import BetaParam
from betafrac.harness.corpus import corpus_by_name
from betafrac.harness.runner import DEFAULT_BETAS, DEFAULT_INTERVALS, RunConfig, expected_hypothesis_not_met
from betafrac.inequalities import check_hermite_hadamard, check_taylor_steffensen
from betafrac.taylor import integral_remainder, taylor_polynomial

E = math.e
CHAIN_TOL = 1e-9


def _run_cli(out: Path, parallel: int) -> tuple[int, dict]:
    proc = subprocess.run(
        [sys.executable, "-m", "betafrac", "verify", "--parallel", str(parallel), "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=600,
    )
    doc = json.loads(out.read_text()) if out.exists() else {}
    return proc.returncode, doc


def _without_timing(doc: dict) -> dict:
    return {**doc, "records": [{k: v for k, v in r.items() if k != "ms"} for r in doc.get("records", [])]}


def _select(records, check, **match):
    return [r for r in records if r["check"] == check and all(r[k] == v for k, v in match.items())]


def _gap(r) -> float:
    return abs(r["lhs"] - r["rhs"]) if r["lhs"] is not None and r["rhs"] is not None else math.inf


def _close(chain, expected, tol=CHAIN_TOL) -> bool:
    return all(v is not None and abs(v - e) <= tol for v, e in zip(chain, expected))


def _inequality_margins_ok(recs) -> tuple[bool, int]:
    """No violations, every holding cell has both margins >= -1e-9."""
    met = [r for r in recs if r["verdict"] in ("holds", "violated")]
    ok = all(r["verdict"] == "holds" and min(r["margin_left"], r["margin_right"]) >= -CHAIN_TOL for r in met)
    return ok, len(met)


def evaluate(workdir: Path) -> dict[int, tuple[bool, str]]:
    code1, doc1 = _run_cli(workdir / "p1.json", 1)
    code8, doc8 = _run_cli(workdir / "p8.json", 8)
    recs = doc1.get("records", [])
    corpus = corpus_by_name()
    out: dict[int, tuple[bool, str]] = {}

    ft = _select(recs, "fundamental_theorem")
    worst = max(map(_gap, ft), default=math.inf)
    out[1] = (len(ft) == 132 and worst <= 1e-8, f"{len(ft)} cells, max gap {worst:.2e}")

    rc = _select(recs, "taylor_reconstruction")
    worst = max(map(_gap, rc), default=math.inf)
    out[2] = (len(rc) == 660 and worst <= 1e-7, f"{len(rc)} cells, max gap {worst:.2e}")

    worst_p = worst_r = 0.0
    for beta in DEFAULT_BETAS:
        p = BetaParam(beta)
        f = corpus["beta_linear"].model(beta)
        for a, b in DEFAULT_INTERVALS:
            ts = np.linspace(a, b, 7)
            worst_p = max(worst_p, float(np.max(np.abs(f(ts) - taylor_polynomial(p, f, a, 1, ts)))))
            for t in ts[1:]:
                worst_r = max(worst_r, abs(integral_remainder(p, f, a, 1, float(t), 1e-12)))
    out[3] = (worst_p <= 1e-12 and worst_r <= 1e-10, f"max |f-P1| {worst_p:.2e}, max |R1| {worst_r:.2e}")

    lg = _select(recs, "lagrange_remainder")
    worst = max(map(_gap, lg), default=math.inf)
    errors = sum(r["verdict"] == "error" for r in lg)
    ok = bool(lg) and all(r["verdict"] == "holds" for r in lg) and worst <= 1e-7
    out[4] = (ok, f"{len(lg)} cells, max gap {worst:.2e}, bracket failures {errors}")

    ids = [r for c in ("remainder_identity", "corollary_a", "corollary_b") for r in _select(recs, c) if r["n"] <= 2]
    worst = max(map(_gap, ids), default=math.inf)
    out[5] = (len(ids) == 3 * 132 * 3 and worst <= 1e-7, f"{len(ids)} cells, max gap {worst:.2e}")

    st = _select(recs, "steffensen")
    rv = _select(recs, "steffensen_reversed")
    ok_st, n_st = _inequality_margins_ok(st)
    ok_rv, n_rv = _inequality_margins_ok(rv)
    classic = _select(st, "steffensen", function="one_minus_t|t", beta=1.0, a=0.0, b=1.0)
    classic_ok = len(classic) == 1 and _close([classic[0][k] for k in ("lhs", "mid", "rhs")], (0.125, 1 / 6, 0.375))
    rev_by_key = {(r["function"], r["beta"], r["a"], r["b"]): r for r in rv}
    asym = 0.0
    for r in st:
        if r["function"].startswith("-"):
            continue
        twin = rev_by_key.get(("-" + r["function"], r["beta"], r["a"], r["b"]))
        if twin is None:
            asym = math.inf
            break
        for mine, theirs in (("lhs", "rhs"), ("mid", "mid"), ("rhs", "lhs")):
            asym = max(asym, abs(r[mine] + twin[theirs]))
    ok = ok_st and ok_rv and classic_ok and asym <= 1e-12
    out[6] = (ok, f"{n_st}+{n_rv} hypothesis cells, classical cell {'ok' if classic_ok else 'off'}, reversal asymmetry {asym:.1e}")

    hh_expected = (E**-0.5, 1 - 1 / E, 1 + 1 / E - E**-0.5)
    hh_api = check_hermite_hadamard(1.0, corpus["exp_neg"].model(1.0), (0.0, 1.0), 1e-12)
    hh = [r for c in ("hermite_hadamard", "hermite_hadamard_reversed") for r in _select(recs, c)]
    ok_hh, n_hh = _inequality_margins_ok(hh)
    ts0 = _select(recs, "taylor_steffensen", function="exp_neg", beta=1.0, a=0.0, b=1.0, n=0)
    ts_shift = [ts0[0][k] + 1.0 for k in ("lhs", "mid", "rhs")] if ts0 else [None] * 3
    hh_rec = _select(recs, "hermite_hadamard", function="exp_neg", beta=1.0, a=0.0, b=1.0)
    ok = (
        _close(hh_api.chain, hh_expected)
        and len(hh_rec) == 1
        and _close([hh_rec[0][k] for k in ("lhs", "mid", "rhs")], hh_expected)
        and ok_hh
        and _close(ts_shift, hh_expected)
    )
    out[7] = (ok, f"cell chain {tuple(round(v, 12) for v in hh_api.chain)}, {n_hh} hypothesis cells")

    t5_expected = (E**-0.5 - 1, -1 / E, 1 / E - E**-0.5)
    t5 = check_taylor_steffensen(1.0, corpus["exp_neg"].model(1.0), (0.0, 1.0), 0, 1e-12)
    ok = t5.l_value == 0.5 and _close(t5.chain, t5_expected) and t5.verdict == "holds"
    ok = ok and bool(ts0) and _close([ts0[0][k] for k in ("lhs", "mid", "rhs")], t5_expected)
    out[8] = (ok, f"l={t5.l_value}, chain {tuple(round(v, 12) for v in t5.chain)}")

    oa = _select(recs, "oracle_agreement")
    od = _select(recs, "oracle_derivative")
    ok = bool(oa) and bool(od) and all(r["verdict"] == "holds" for r in oa + od)
    worst_d = min((r["margin_left"] for r in od), default=-math.inf)
    out[9] = (ok, f"{len(oa)} quadrature cells, {len(od)} derivative cells, least derivative margin {worst_d:.1e}")

    same = bool(doc1) and _without_timing(doc1) == _without_timing(doc8)
    summary = doc1.get("summary", {})
    expected = expected_hypothesis_not_met(RunConfig())
    ok = (
        code1 == 0
        and code8 == 0
        and same
        and summary.get("violated") == 0
        and summary.get("error") == 0
        and summary.get("hypothesis_not_met") == expected
    )
    out[10] = (ok, f"exit {code1}/{code8}, identical={same}, summary {summary}, expected hypothesis_not_met {expected}")
    return out


@pytest.fixture(scope="module")
def results(tmp_path_factory):
    return evaluate(tmp_path_factory.mktemp("acceptance"))


@pytest.mark.slow
@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(results, k):
    from conftest import CRITERIA

    ok, detail = results[k]
    CRITERIA[k] = (ok, detail)
    assert ok, detail


if __name__ == "__main__":
    with tempfile.TemporaryDirectory() as tmp:
        res = evaluate(Path(tmp))
    for k in sorted(res):
        ok, detail = res[k]
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(0 if all(ok for ok, _ in res.values()) else 1)
