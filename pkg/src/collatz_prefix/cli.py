"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 cap or bound exhausted, 3 invariant
violated.  Every flag can also be set through an environment variable named
``CPX_<FLAG>`` (for example ``CPX_CAP=500`` or ``CPX_FORMAT=json``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import suites
from .bounds_verifier import emit_figure_data
from .collatz_core import rho, rho_trajectory, trajectory, y_elements
from .exact_arith import DyadicFraction
from .seeds import (
    PrefixNotFound,
    density_search,
    is_prefix,
    is_prefix_by_digits,
    min_seed_index,
    power_prefix_witness,
    seed,
)
from .three_distance import reported_level_crosscheck, continued_fraction_log2_3, gap_structure, levels

OK, USAGE, EXHAUSTED, VIOLATION = 0, 1, 2, 3
DEFAULT_CAP = 10_000


class UsageError(Exception):
    pass


def _env(name: str, default, cast=str):
    raw = os.environ.get(f"CPX_{name}")
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cap", type=_positive, default=_env("CAP", None, int))
    p.add_argument("--precision-bits", type=int, default=_env("PRECISION_BITS", 64, int))
    p.add_argument("--out", default=_env("OUT", None))
    p.add_argument("--format", choices=("csv", "json"), default=_env("FORMAT", None))
    p.add_argument("--jobs", type=int, default=_env("JOBS", None, int))
    p.add_argument("--exhaustive", action="store_true", default=_env("EXHAUSTIVE", False, bool))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="collatz-prefix", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("traj", parents=[common], help="reduced Collatz trajectory")
    p.add_argument("x", type=int)
    p = sub.add_parser("rho-traj", parents=[common], help="trajectory of the dyadic map")
    p.add_argument("y", type=_fraction)
    p = sub.add_parser("gaps", parents=[common], help="arc lengths of X_k")
    p.add_argument("k", type=int)
    p = sub.add_parser("levels", parents=[common], help="level table (h, k, q, ell, s)")
    p.add_argument("h", type=int)
    p = sub.add_parser("cf", parents=[common], help="partial quotients of log2 3")
    p.add_argument("n", type=_positive)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", choices=("conjugacy", "trajectories", "three-gap", "levels",
                                     "lemmas", "seeds"))
    p.add_argument("--max", type=_positive, default=None, help="largest x (conjugacy, trajectories)")
    p.add_argument("--max-k", type=int, default=5000)
    p.add_argument("--h-max", type=int, default=12)
    p.add_argument("--bits", type=_positive, default=11)

    p = sub.add_parser("figure", parents=[common], help="CSV data for the figures")
    p.add_argument("name", choices=("rho", "dmax", "kdmax"))
    p.add_argument("--n", type=_positive, action="append", help="denominator exponent (rho)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--level", type=int)
    g.add_argument("--level-with-q", type=_positive)

    p = sub.add_parser("min-seed", parents=[common], help="smallest seed index with x as prefix")
    p.add_argument("x", type=int, nargs="?")
    p.add_argument("--sweep-bits", type=_positive)

    p = sub.add_parser("density", parents=[common], help="P element within eps below y")
    p.add_argument("y", type=_fraction)
    p.add_argument("eps", type=_fraction)
    p = sub.add_parser("seed", parents=[common], help="repetend of 1/3^i")
    p.add_argument("i", type=_positive)
    p = sub.add_parser("prefix", parents=[common], help="is bin(x) a prefix of P element i")
    p.add_argument("x", type=int)
    p.add_argument("i", type=int)
    return ap


@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _dump_json(obj, out) -> None:
    json.dump(obj, out, indent=2, default=str)
    out.write("\n")


def _write_table(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        _dump_json(rows, out)
        return
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def _odd(x: int) -> int:
    if x < 1 or x % 2 == 0:
        raise UsageError(f"expected an odd positive integer, got {x}")
    return x


def _dyadic(y: Fraction) -> DyadicFraction:
    try:
        d = DyadicFraction.from_fraction(y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not d.in_y:
        raise UsageError(f"{y} is not in Y (numerator divisible by 3)")
    return d


def _level_index(args) -> int:
    if args.level is not None:
        return args.level
    if args.level_with_q is not None:
        for rec in levels(20):
            if rec.q == args.level_with_q:
                return rec.h
        raise UsageError(f"no level with q = {args.level_with_q} among h <= 20")
    raise UsageError("figure needs --level or --level-with-q")


def cmd_traj(args, out) -> int:
    t = trajectory(_odd(args.x), args.cap or DEFAULT_CAP)
    if args.format == "json":
        _dump_json({"x": t.start, "steps": [[s.output, s.m] for s in t.steps],
                    "count": len(t.steps), "converged": t.converged}, out)
    else:
        out.write("x,m\n")
        for s in t.steps:
            out.write(f"{s.output},{s.m}\n")
        out.write(f"# steps={len(t.steps)} converged={str(t.converged).lower()}\n")
    return OK if t.converged else EXHAUSTED


def cmd_rho_traj(args, out) -> int:
    t = rho_trajectory(_dyadic(args.y), args.cap or DEFAULT_CAP)
    rows = [{"y": str(p), "h": h} for p, h in zip(t.points, t.hs)]
    if args.format == "json":
        _dump_json({"y": str(t.start), "points": rows, "converged": t.converged}, out)
    else:
        _write_table(rows, "csv", out)
        out.write(f"# steps={len(rows)} converged={str(t.converged).lower()}\n")
    return OK if t.converged else EXHAUSTED


def cmd_gaps(args, out) -> int:
    if args.k < 2:
        raise UsageError("k must be at least 2")
    gs = gap_structure(args.k)
    rows = [{"a": g.a, "b": g.b, "length": repr(float(g)), "multiplicity": c}
            for g, c in gs.gaps]
    _write_table(rows, args.format or "csv", out)
    return OK


def cmd_levels(args, out) -> int:
    if args.h < 0:
        raise UsageError("h must be nonnegative")
    rows = [dict(zip(("h", "k", "q", "ell", "s"), r.as_row())) for r in levels(args.h)]
    if args.format == "json":
        _dump_json({"levels": rows, "reported_level": reported_level_crosscheck(args.h)}, out)
    else:
        _write_table(rows, "csv", out)
    return OK


def cmd_cf(args, out) -> int:
    qs = continued_fraction_log2_3(args.n)
    if args.format == "json":
        _dump_json(qs, out)
    else:
        out.write(",".join(map(str, qs)) + "\n")
    return OK


def cmd_verify(args, out) -> int:
    jobs = args.jobs or suites.default_jobs()
    if args.suite == "conjugacy":
        res = suites.verify_conjugacy(args.max or (1 << 16), jobs)
    elif args.suite == "trajectories":
        res = suites.verify_trajectories(args.max or 10**6, args.cap or 300)
    elif args.suite == "three-gap":
        res = suites.verify_three_gap(args.max_k, max(args.precision_bits, 64))
    elif args.suite == "levels":
        res = suites.level_report(args.h_max)
    elif args.suite == "lemmas":
        res = suites.verify_lemmas(args.h_max, min(args.h_max, 8), min(args.h_max, 10),
                                   exhaustive=args.exhaustive)
    else:
        res = suites.verify_seeds(args.bits, density_n=min(args.bits, 8), jobs=jobs)
    _dump_json(res, out)
    return VIOLATION if res["violations"] else OK


def cmd_figure(args, out) -> int:
    if args.precision_bits < 16:
        raise UsageError("--precision-bits must be at least 16")
    if args.name == "rho":
        if not args.n:
            raise UsageError("figure rho needs --n")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "parity", "y", "rho", "h", "y_exact", "rho_exact"])
        for n in args.n:
            for y in y_elements(n):
                img, h = rho(y)
                w.writerow([n, "even" if n % 2 == 0 else "odd", repr(float(y.value)),
                            repr(float(img.value)), h, str(y), str(img)])
        return OK
    emit_figure_data(_level_index(args), args.name, out, args.precision_bits)
    return OK


def cmd_min_seed(args, out) -> int:
    if args.sweep_bits:
        rows = suites.min_seed_table(args.sweep_bits, args.jobs or suites.default_jobs())
        _write_table(rows, args.format or "csv", out)
        bad = [r for r in rows if r["i_min"] is None or r["i_min"] >= r["bound4"]]
        return EXHAUSTED if bad else OK
    if args.x is None:
        raise UsageError("give x or --sweep-bits")
    try:
        m = min_seed_index(_odd(args.x))
    except PrefixNotFound as exc:
        print(exc, file=sys.stderr)
        return EXHAUSTED
    row = {"x": m.x, "i_min": m.index, "matches": m.matches, "bound4": m.bound4,
           "bound7": m.bound7}
    if args.format == "csv":
        row["matches"] = " ".join(map(str, m.matches))
        _write_table([row], "csv", out)
    else:
        _dump_json(row, out)
    return OK


def cmd_density(args, out) -> int:
    if args.eps <= 0:
        raise UsageError("eps must be positive")
    i, p = density_search(_dyadic(args.y), args.eps)
    _dump_json({"y": str(args.y), "eps": str(args.eps), "i": i,
                "p": f"2^{p.exponent}/3^{i}", "p_float": repr(float(p.value))}, out)
    return OK


def cmd_seed(args, out) -> int:
    s = seed(args.i)
    if args.format == "json":
        _dump_json({"i": s.order, "length": len(s), "digits": s.digits}, out)
    else:
        out.write(s.digits + "\n")
    return OK


def cmd_prefix(args, out) -> int:
    x = _odd(args.x)
    if args.i < 0:
        raise UsageError("i must be nonnegative")
    res = {"x": x, "i": args.i, "prefix": is_prefix(x, args.i),
           "prefix_by_digits": is_prefix_by_digits(x, args.i)}
    if res["prefix"]:
        m = min_seed_index(x, witnesses=0)
        if m.index == args.i:
            w = power_prefix_witness(x)
            res["witness"] = {"offset": w.offset, "leading_zeros": w.leading_zeros}
    _dump_json(res, out)
    return VIOLATION if res["prefix"] != res["prefix_by_digits"] else OK


COMMANDS = {
    "traj": cmd_traj,
    "rho-traj": cmd_rho_traj,
    "gaps": cmd_gaps,
    "levels": cmd_levels,
    "cf": cmd_cf,
    "verify": cmd_verify,
    "figure": cmd_figure,
    "min-seed": cmd_min_seed,
    "density": cmd_density,
    "seed": cmd_seed,
    "prefix": cmd_prefix,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    # output is written only once the command finished
    with _sink(args.out) as out:
        out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
