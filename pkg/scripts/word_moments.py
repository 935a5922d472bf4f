#!/usr/bin/env python3
"""Fit the central moments of gep on W(n,n,n) as polynomials in n and take their limits.

    python3 scripts/word_moments.py --n-max 27 --max-moment 12 --out results/words

Writes ``fits.json`` (polynomials, guard points, limits, verdicts) and
``trajectory.csv`` (exact standardized moments for every n) into --out.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from gepner.distributions import classify, logistic_moment, normal_moment
from gepner.moments import Divergent, family_coeffs, family_table, fit_moment_polynomial, limit_standardized

log = logging.getLogger("word_moments")


@dataclass
class Config:
    n_max: int = 27
    max_moment: int = 12
    guards: int = 2
    jobs: int = 1
    out: Path = Path("results/words")


def run(cfg: Config) -> dict:
    orders = list(range(2, cfg.max_moment + 1, 2))
    ns = range(1, cfg.n_max + 1)
    t0 = time.perf_counter()
    family_coeffs("words", [cfg.n_max], cfg.max_moment, jobs=cfg.jobs, unsafe=True)
    log.info("truncated sweep n<=%d r=%d: %.1fs", cfg.n_max, cfg.max_moment, time.perf_counter() - t0)

    fits = {r: fit_moment_polynomial("words", r, ns, guards=cfg.guards, jobs=cfg.jobs, unsafe=True) for r in orders}
    m2 = fits[2].poly
    kappas = {r: limit_standardized(fits[r].poly, m2, r) for r in orders if r >= 4}
    finite = {r: k for r, k in kappas.items() if not isinstance(k, Divergent)}
    verdicts = classify(finite) if finite else {}

    cfg.out.mkdir(parents=True, exist_ok=True)
    report = {
        "config": {k: str(v) for k, v in asdict(cfg).items()},
        "moments": {
            str(r): {
                "polynomial": f.poly.factored_text(),
                "fit_points": f"{f.fit_ns[0]}..{f.fit_ns[-1]}",
                "guard_points": f.guard_ns,
            }
            for r, f in fits.items()
        },
        "limits": {str(r): str(k) for r, k in kappas.items()},
        "verdicts": {c.value: v.overall for c, v in verdicts.items()},
    }
    (cfg.out / "fits.json").write_text(json.dumps(report, indent=2) + "\n")

    with open(cfg.out / "trajectory.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "r", "standardized", "float", "logistic", "normal"])
        for n in range(2, cfg.n_max + 1):
            t = family_table("words", n, cfg.max_moment, jobs=cfg.jobs, unsafe=True)
            for r in orders[1:]:
                s = t.standardized(r)
                w.writerow([n, r, s, f"{float(s):.10g}", logistic_moment(r), normal_moment(r)])
    return report


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    for f, default in asdict(Config()).items():
        p.add_argument("--" + f.replace("_", "-"), type=type(default), default=default)
    cfg = Config(**vars(p.parse_args(argv)))
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    report = run(cfg)
    for r, m in report["moments"].items():
        print(f"m{r}(n) = {m['polynomial']}")
    for r, k in report["limits"].items():
        print(f"kappa{r} = {k}")
    for c, v in report["verdicts"].items():
        print(f"{c}: {v}")


if __name__ == "__main__":
    main()
