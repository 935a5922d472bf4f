#!/usr/bin/env python3
"""Mean, variance and fourth central moment of gep on S_n, fitted from exhaustive G_n.

    python3 scripts/perm_kurtosis.py --n-max 10
    python3 scripts/perm_kurtosis.py --n-max 11 --guards 2   # needs 11! words, ~30s

The fourth moment has degree 8 in n, so n_max = 10 leaves one guard point.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import asdict, dataclass

from gepner.distributions import classify
from gepner.moments import family_table, fit_moment_polynomial, limit_standardized


@dataclass
class Config:
    n_max: int = 10
    guards: int = 1
    jobs: int = 1
    csv: str = ""


def run(cfg: Config):
    ns = range(1, cfg.n_max + 1)
    kw = dict(jobs=cfg.jobs, unsafe=True)
    mean = fit_moment_polynomial("perms", 1, ns, kind="raw", guards=cfg.guards, **kw)
    m2 = fit_moment_polynomial("perms", 2, ns, guards=cfg.guards, **kw)
    m4 = fit_moment_polynomial("perms", 4, ns, guards=cfg.guards, **kw)
    kappa = limit_standardized(m4.poly, m2.poly, 4)
    return mean, m2, m4, kappa


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    for f, default in asdict(Config()).items():
        p.add_argument("--" + f.replace("_", "-"), type=type(default), default=default)
    cfg = Config(**vars(p.parse_args(argv)))
    mean, m2, m4, kappa = run(cfg)
    print(f"mu1(n) = {mean.poly.factored_text()}")
    print(f"m2(n)  = {m2.poly.factored_text()}")
    print(f"m4(n)  = {m4.poly.factored_text()}   guards {m4.guard_ns}")
    print(f"kurtosis limit = {kappa}  ({float(kappa):.4f})")
    for c, v in classify({4: kappa}).items():
        print(f"{c.value}: {v.overall}")
    if cfg.csv:
        out = open(cfg.csv, "w", newline="") if cfg.csv != "-" else sys.stdout
        w = csv.writer(out)
        w.writerow(["n", "mean", "variance", "m4", "kurtosis"])
        for n in range(3, cfg.n_max + 1):
            t = family_table("perms", n, 4, jobs=cfg.jobs, unsafe=True)
            w.writerow([n, t.mean, t.variance, t.central[4], t.standardized(4)])
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    main()
