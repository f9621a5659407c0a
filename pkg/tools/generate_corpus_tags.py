"""Regenerate src/betafrac/data/corpus_tags.json from exact symbolic derivatives.

D^{k beta} f is built with sympy from the definition (exact rational beta,
exact shift 1/Gamma(beta)) and sampled with mpmath at 40 digits on the same
uniform grid the package uses.  The classification rule mirrors the sampled
monotonicity check: slack 1e-12 scaled by max(1, max|v|), a constant counts
as both directions and the zero function as both signs.

Usage: python3 tools/generate_corpus_tags.py [--out PATH]
"""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np
import sympy as sp

BETAS = [0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
INTERVALS = [(0.0, 1.0), (0.5, 2.0), (1.0, 3.0)]
ORDERS = 8
GRID = 257
SLACK = 1e-12

t = sp.Symbol("t", nonnegative=True)


def corpus(beta, c):
    return {
        "one": (sp.Integer(1), (0, None)),
        "t": (t, (0, None)),
        "t_squared": (t**2, (0, None)),
        "exp_neg": (sp.exp(-t), (0, None)),
        "log1p": (sp.log(1 + t), (0, None)),
        "reciprocal_1p": (1 / (1 + t), (0, None)),
        "beta_linear": ((t + c) ** beta, (0, None)),
        "one_minus_t": (1 - t, (0, 1)),
    }


def classify(values):
    vals = [mpmath.mpf(v) for v in values]
    tol = SLACK * max(1, max(abs(v) for v in vals))
    steps = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    up = all(s >= -tol for s in steps)
    down = all(s <= tol for s in steps)
    if up and not down:
        direction = "nondecreasing"
    elif down:
        direction = "nonincreasing"
    else:
        direction = "neither"
    nonneg = all(v >= -tol for v in vals)
    nonpos = all(v <= tol for v in vals)
    sign = "nonnegative" if nonneg else "nonpositive" if nonpos else "mixed"
    return {"direction": direction, "sign": sign, "constant": up and down, "zero": nonneg and nonpos}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    root = Path(__file__).resolve().parents[1]
    parser.add_argument("--out", default=root / "src/betafrac/data/corpus_tags.json", type=Path)
    args = parser.parse_args()
    mpmath.mp.dps = 40

    entries: dict[str, dict] = {}
    for beta in BETAS:
        b_exact = sp.Rational(Fraction(beta).limit_denominator(1000))
        c = 1 / sp.gamma(b_exact)
        for name, (expr, (lo, hi)) in corpus(b_exact, c).items():
            chain = [expr]
            for _ in range(1, ORDERS):
                chain.append((t + c) ** (1 - b_exact) * sp.diff(chain[-1], t))
            chain_fn = sp.lambdify(t, chain, modules="mpmath", cse=True)
            for a, b in INTERVALS:
                if a < lo or (hi is not None and b > hi):
                    continue
                xs = np.linspace(a, b, GRID)
                samples = [chain_fn(mpmath.mpf(float(x))) for x in xs]
                tags = [classify([row[k] for row in samples]) for k in range(ORDERS)]
                key = f"{float(beta)!r}|{float(a)!r},{float(b)!r}"
                entries.setdefault(name, {})[key] = tags
        print(f"beta={beta}: done", flush=True)

    payload = {"grid": GRID, "orders": ORDERS, "slack": SLACK, "entries": entries}
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
