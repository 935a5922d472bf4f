"""Command-line interface.

Usage:
    gepner stat --word 321 --stat all
    gepner poly --family perms --n 4
    gepner poly --family words --counts 2,2,2 --engine recurrence
    gepner moments --family words --n 2 --max-moment 4 --format csv
    gepner fit --family words --moment 6 --n-range 1..15
    gepner limits --family words --max-moment 12 --compare logistic,normal
    gepner verify --suite macmahon --max 5

Every command accepts ``--format {text,json,csv}``.  Structured output is an
envelope ``{schema_version, command, inputs, result, timing_ms}`` in which all
integers and rationals are decimal strings.  Exit status is 0 on success, 1
when a computation is refused or a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from fractions import Fraction
from math import comb, factorial

from . import __version__
from .algebra import gaussian_multinomial, multinomial
from .distributions import Candidate, classify, reference_moment
from .enumerate import (
    SizeLimitError,
    joint_catalytic_poly,
    stat_poly_perm,
    stat_poly_words,
)
from .moments import (
    Divergent,
    Family,
    GuardFailure,
    InsufficientPoints,
    MomentError,
    family_coeffs,
    fit_moment_polynomial,
    limit_standardized,
    moment_degree,
    moments_from_coeffs,
)
from .recurrence import F_catalytic, gepner_poly_words_fast, inv_poly_recurrence
from .stats import DomainError, gep, inv, maj, pair_counts

SCHEMA_VERSION = "1"


class UsageError(Exception):
    pass


class Failure(Exception):
    """Computation refused or check failed; exit status 1."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def num(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    parts = text.split(",") if "," in text else list(text)
    try:
        w = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"malformed word {text!r}: use digits (132) or comma-separated integers") from None
    if any(x < 1 for x in w):
        raise UsageError(f"malformed word {text!r}: letters must be positive")
    return w


def parse_counts(text: str) -> tuple[int, int, int]:
    try:
        a = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"malformed counts {text!r}: expected a1,a2,a3") from None
    if len(a) != 3 or min(a) < 0:
        raise UsageError(f"counts must be three nonnegative integers, got {text!r}")
    return a


def parse_range(text: str) -> list[int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"malformed range {text!r}: expected LO..HI") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"range {text!r} must satisfy 1 <= LO <= HI")
    return list(range(lo, hi + 1))


# ----------------------------------------------------------------- commands


def cmd_stat(args):
    w = parse_word(args.word)
    inputs = {"word": ",".join(map(str, w)), "stat": args.stat}
    fns = {"gep": gep, "inv": inv, "maj": maj}
    wanted = ["gep", "inv", "maj"] if args.stat == "all" else [args.stat] if args.stat != "pairs" else []
    result = {k: str(fns[k](w)) for k in wanted}
    if args.stat in ("all", "pairs"):
        if all(x in (1, 2, 3) for x in w):
            pc = pair_counts(w)
            result.update(c32=str(pc.c32), c13=str(pc.c13), c21=str(pc.c21))
        elif args.stat == "pairs":
            raise UsageError("pair counts need a word over {1,2,3}")
    if len(wanted) == 1:
        text = result[wanted[0]]
    else:
        text = " ".join(f"{k}={v}" for k, v in result.items())
    rows = [["stat", "value"]] + [[k, v] for k, v in result.items()]
    return inputs, result, text, rows


def _poly_payload(g):
    return {
        "polynomial": g.to_text(),
        "coefficients": {str(e): str(c) for e, c in sorted(g.coeffs.items())},
    }


def cmd_poly(args):
    fam = args.family
    if fam == "perms":
        if args.n is None:
            raise UsageError("--family perms needs --n")
        if args.engine == "recurrence":
            raise UsageError("the recurrence engine covers words only (gep or inv), not permutations")
        inputs = {"family": fam, "n": str(args.n), "stat": args.stat, "engine": args.engine}
        g = stat_poly_perm(args.n, args.stat, unsafe=args.unsafe_limits)
    else:
        if args.counts is not None:
            a = parse_counts(args.counts)
        elif args.n is not None:
            a = (args.n,) * 3
        else:
            raise UsageError("--family words needs --counts or --n")
        inputs = {"family": fam, "counts": ",".join(map(str, a)), "stat": args.stat, "engine": args.engine}
        if args.engine == "recurrence":
            if args.stat == "gep":
                g = gepner_poly_words_fast(*a, unsafe=args.unsafe_limits)
            elif args.stat == "inv":
                g = inv_poly_recurrence(*a)
            else:
                raise UsageError("the recurrence engine supports --stat gep or inv")
        else:
            g = stat_poly_words(a, args.stat, jobs=args.jobs, unsafe=args.unsafe_limits)
    rows = [["exponent", "coefficient"]] + [[str(e), str(c)] for e, c in sorted(g.coeffs.items(), reverse=True)]
    return inputs, _poly_payload(g), g.to_text(), rows


def _tables(family: Family, ns, r: int, engine: str, args):
    out = {}
    if family is Family.WORDS and engine == "brute":
        for n in ns:
            g = stat_poly_words((n, n, n), "gep", jobs=args.jobs, unsafe=args.unsafe_limits)
            out[n] = moments_from_coeffs(g.taylor_at_one(r), g(1), family=family, n=n)
        return out
    coeffs = family_coeffs(family, ns, r, jobs=args.jobs, unsafe=args.unsafe_limits)
    for n in ns:
        N = factorial(n) if family is Family.PERMS else multinomial((n, n, n))
        out[n] = moments_from_coeffs(coeffs[n], N, family=family, n=n)
    return out


def cmd_moments(args):
    family = Family(args.family)
    r = args.max_moment
    if r < 2:
        raise UsageError("--max-moment must be at least 2")
    if (args.n is None) == (args.n_max is None):
        raise UsageError("give exactly one of --n or --n-max")
    ns = [args.n] if args.n is not None else list(range(1, args.n_max + 1))
    if min(ns) < 1:
        raise UsageError("sizes must be positive")
    engine = args.engine or ("brute" if family is Family.PERMS else "recurrence")
    if family is Family.PERMS and engine != "brute":
        raise UsageError("permutation moments come from brute force only")
    tables = _tables(family, ns, r, engine, args)
    inputs = {"family": family.value, "n": [str(n) for n in ns], "max_moment": str(r), "engine": engine}
    result = {}
    lines = []
    rows = [["family", "n", "r", "kind", "value"]]
    for n, t in tables.items():
        std = {}
        for s in range(2, r + 1, 2):
            try:
                std[s] = num(t.standardized(s))
            except MomentError:
                std[s] = "undefined"
        result[str(n)] = {
            "N": str(t.N),
            "mean": num(t.mean),
            "raw": {str(s): num(t.raw[s]) for s in range(1, r + 1)},
            "central": {str(s): num(t.central[s]) for s in range(2, r + 1)},
            "standardized": {str(s): v for s, v in std.items()},
        }
        lines.append(f"n={n} N={t.N} mean={num(t.mean)}")
        for s in range(2, r + 1):
            extra = f" standardized={std[s]}" if s in std else ""
            lines.append(f"  m{s}={num(t.central[s])}{extra}")
        for s in range(1, r + 1):
            rows.append([family.value, str(n), str(s), "raw", num(t.raw[s])])
        for s in range(2, r + 1):
            rows.append([family.value, str(n), str(s), "central", num(t.central[s])])
        for s, v in std.items():
            rows.append([family.value, str(n), str(s), "standardized", v])
    return inputs, result, "\n".join(lines), rows


def _guard_count(args, family, r, kind, ns):
    if args.guards != "auto":
        try:
            g = int(args.guards)
        except ValueError:
            raise UsageError("--guards must be a positive integer or 'auto'") from None
        if g < 1:
            raise UsageError("--guards must be at least 1")
        return g
    # auto: two guards when the range allows it, otherwise one; never zero
    spare = len(ns) - (moment_degree(family, r, kind) + 1)
    return 2 if spare >= 2 else 1


def _fit(args, family, r, ns, kind="central"):
    guards = _guard_count(args, family, r, kind, ns)
    try:
        return fit_moment_polynomial(
            family, r, ns, guards=guards, kind=kind, jobs=args.jobs, unsafe=args.unsafe_limits
        )
    except InsufficientPoints as e:
        raise UsageError(str(e)) from None
    except GuardFailure as e:
        raise Failure(str(e), {"first_mismatch": str(e.n)}) from None


def cmd_fit(args):
    family = Family(args.family)
    ns = parse_range(args.n_range)
    fit = _fit(args, family, args.moment, ns, args.kind)
    inputs = {
        "family": family.value,
        "moment": str(args.moment),
        "kind": args.kind,
        "n_range": args.n_range,
        "guards": str(args.guards),
    }
    result = {
        "polynomial": fit.poly.to_text(),
        "factored": fit.poly.factored_text(),
        "coefficients": {str(i): num(c) for i, c in enumerate(fit.poly.coeffs)},
        "degree_bound": str(fit.degree_bound),
        "fit_points": [str(n) for n in fit.fit_ns],
        "guard_points": [str(n) for n in fit.guard_ns],
        "guards_passed": True,
    }
    label = "mu" if args.kind == "raw" and args.moment == 1 else ("raw" if args.kind == "raw" else "m")
    text = (
        f"{label}{args.moment}(n) = {fit.poly.factored_text()}\n"
        f"fit points: {fit.fit_ns[0]}..{fit.fit_ns[-1]}; "
        f"guards: {', '.join(map(str, fit.guard_ns))} all on the polynomial"
    )
    rows = [["power", "coefficient"]] + [[str(i), num(c)] for i, c in enumerate(fit.poly.coeffs)]
    return inputs, result, text, rows


def cmd_limits(args):
    family = Family(args.family)
    R = args.max_moment
    if R < 4 or R % 2:
        raise UsageError("--max-moment must be an even integer >= 4")
    try:
        cands = [Candidate(c.strip().lower()) for c in args.compare.split(",") if c.strip()]
    except ValueError:
        raise UsageError(f"unknown distribution in --compare {args.compare!r}") from None
    if args.n_range:
        ns = parse_range(args.n_range)
    elif family is Family.PERMS:
        ns = list(range(1, 11))
    else:
        ns = list(range(1, 2 * R + 4))
    m2 = _fit(args, family, 2, ns).poly
    kappas = {}
    for r in range(4, R + 1, 2):
        mr = _fit(args, family, r, ns).poly
        kappas[r] = limit_standardized(mr, m2, r)
    finite = {r: k for r, k in kappas.items() if not isinstance(k, Divergent)}
    verdicts = classify(finite, cands) if finite else {}
    inputs = {"family": family.value, "max_moment": str(R), "compare": ",".join(c.value for c in cands)}
    result = {
        "kappa": {str(r): ("divergent" if isinstance(k, Divergent) else num(k)) for r, k in kappas.items()},
        "verdicts": {c.value.upper(): v.overall for c, v in verdicts.items()},
        "reference": {
            c.value.upper(): {str(r): num(reference_moment(c, r)) for r in kappas} for c in cands
        },
    }
    lines = [f"kappa{r} = {v}" for r, v in result["kappa"].items()]
    lines += [f"{c}: {v}" for c, v in result["verdicts"].items()]
    rows = [["kind", "key", "value"]]
    rows += [["kappa", r, v] for r, v in result["kappa"].items()]
    rows += [["verdict", c, v] for c, v in result["verdicts"].items()]
    return inputs, result, "\n".join(lines), rows


def _boxes(bound):
    return itertools.product(range(bound + 1), repeat=3)


def _verify_macmahon(bound, args):
    n = 0
    for a in _boxes(bound):
        n += 1
        if inv_poly_recurrence(*a) != gaussian_multinomial(a):
            return n, f"inv recurrence differs from the q-multinomial at a={a}"
    return n, None


def _verify_equidistribution(bound, args):
    n = 0
    for a in _boxes(bound):
        n += 1
        qm = gaussian_multinomial(a)
        for s in ("inv", "maj"):
            if stat_poly_words(a, s, unsafe=args.unsafe_limits) != qm:
                return n, f"{s} distribution differs from the q-multinomial at a={a}"
    return n, None


def _verify_recurrence(bound, args):
    n = 0
    for a in _boxes(bound):
        n += 1
        if F_catalytic(*a) != joint_catalytic_poly(a, unsafe=args.unsafe_limits):
            return n, f"catalytic recurrence differs from enumeration at a={a}"
    return n, None


def _verify_reversal(bound, args):
    n = 0
    for m in range(bound + 1):
        for w in itertools.product((1, 2, 3), repeat=m):
            n += 1
            a = [w.count(i) for i in (1, 2, 3)]
            if gep(w) + gep(w[::-1]) != a[0] * a[1] * a[2]:
                return n, f"reversal identity fails for word {w}"
        for p in itertools.permutations(range(1, m + 1)):
            n += 1
            if gep(p) + gep(p[::-1]) != comb(m, 3):
                return n, f"reversal identity fails for permutation {p}"
    return n, None


SUITES = {
    "macmahon": _verify_macmahon,
    "recurrence": _verify_recurrence,
    "equidistribution": _verify_equidistribution,
    "reversal": _verify_reversal,
}


def cmd_verify(args):
    if args.max < 0:
        raise UsageError("--max must be nonnegative")
    checks, problem = SUITES[args.suite](args.max, args)
    status = "PASS" if problem is None else "FAIL"
    inputs = {"suite": args.suite, "max": str(args.max)}
    result = {"status": status, "checks": str(checks), "counterexample": problem}
    text = f"{status} ({checks} checks)" + (f": {problem}" if problem else "")
    rows = [["suite", "checks", "status", "counterexample"], [args.suite, str(checks), status, problem or ""]]
    if problem:
        raise Failure(text, (inputs, result, text, rows))
    return inputs, result, text, rows


# ------------------------------------------------------------------- plumbing


def envelope(command, inputs, result, timing_ms) -> str:
    env = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
        "timing_ms": int(timing_ms),
    }
    return json.dumps(env, sort_keys=True, indent=2)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sharded work")
    common.add_argument("--unsafe-limits", action="store_true", help="lift the default size caps")

    p = argparse.ArgumentParser(prog="gepner", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stat", parents=[common], help="statistics of one word")
    s.add_argument("--word", required=True)
    s.add_argument("--stat", choices=("gep", "inv", "maj", "pairs", "all"), default="all")
    s.set_defaults(func=cmd_stat)

    s = sub.add_parser("poly", parents=[common], help="distribution polynomial")
    s.add_argument("--family", choices=("perms", "words"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--counts")
    s.add_argument("--stat", choices=("gep", "inv", "maj"), default="gep")
    s.add_argument("--engine", choices=("brute", "recurrence"), default="brute")
    s.set_defaults(func=cmd_poly)

    s = sub.add_parser("moments", parents=[common], help="exact moment tables")
    s.add_argument("--family", choices=("perms", "words"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--n-max", type=int)
    s.add_argument("--max-moment", type=int, default=4)
    s.add_argument("--engine", choices=("brute", "recurrence"))
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("fit", parents=[common], help="fit a moment polynomial in n")
    s.add_argument("--family", choices=("perms", "words"), required=True)
    s.add_argument("--moment", type=int, required=True)
    s.add_argument("--n-range", required=True, help="LO..HI")
    s.add_argument("--guards", default="auto", help="minimum guard points (default: 2 if available, else 1)")
    s.add_argument("--kind", choices=("central", "raw"), default="central")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("limits", parents=[common], help="limiting standardized moments")
    s.add_argument("--family", choices=("perms", "words"), required=True)
    s.add_argument("--max-moment", type=int, required=True)
    s.add_argument("--compare", default="logistic,normal")
    s.add_argument("--n-range", help="LO..HI (default: just enough for the top order plus guards)")
    s.add_argument("--guards", default="auto")
    s.set_defaults(func=cmd_limits)

    s = sub.add_parser("verify", parents=[common], help="oracle-equivalence suites")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--max", type=int, default=4)
    s.set_defaults(func=cmd_verify)
    return p


def _emit(args, command, payload, elapsed_ms, stream):
    inputs, result, text, rows = payload
    if args.format == "json":
        print(envelope(command, inputs, result, elapsed_ms), file=stream)
    elif args.format == "csv":
        print(_csv(rows), file=stream)
    else:
        print(text, file=stream)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    t0 = time.perf_counter()
    try:
        payload = args.func(args)
    except UsageError as e:
        print(f"gepner {args.command}: usage error: {e}", file=sys.stderr)
        return 2
    except Failure as e:
        if isinstance(e.result, tuple):
            _emit(args, args.command, e.result, (time.perf_counter() - t0) * 1000, sys.stdout)
        print(f"gepner {args.command}: {e}", file=sys.stderr)
        return 1
    except (SizeLimitError, MomentError, DomainError) as e:
        print(f"gepner {args.command}: {e}", file=sys.stderr)
        return 1
    _emit(args, args.command, payload, (time.perf_counter() - t0) * 1000, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
