"""Exact checks of the dmax and k*dmax bounds, plus CSV figure data.

Verdicts come from :func:`compare_form_rational`; the numeric columns are
midpoints of certified enclosures and serve display only.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable

from .exact_arith import LinearForm, RationalInterval, compare_form_rational, enclose
from .three_distance import LevelRecord, levels, locate

EXHAUSTIVE_LIMIT = 10**6

CSV_HEADER = ["k", "value", "lower", "upper", "enclosure_width"]


@dataclass(frozen=True)
class Decomposition:
    k: int
    h: int
    t: int
    j: int


def decompose(k: int) -> Decomposition:
    rec, t, j = locate(k)
    return Decomposition(k, rec.h, t, j)


@dataclass
class BoundReport:
    lemma: str
    index: dict
    verdict: bool
    checked: int = 1
    failures: list = field(default_factory=list)
    lhs: RationalInterval | None = None
    rhs: tuple = ()
    note: str = ""

    def as_dict(self) -> dict:
        out = {"lemma": self.lemma, **self.index, "verdict": "holds" if self.verdict else "fails",
               "checked": self.checked, "failures": self.failures[:10]}
        if self.lhs is not None:
            out["lhs_lo"] = float(self.lhs.lo)
            out["lhs_hi"] = float(self.lhs.hi)
        if self.rhs:
            out["rhs"] = [str(x) for x in self.rhs]
        if self.note:
            out["note"] = self.note
        return out


def _strictly_between(lo: Fraction, f: LinearForm, hi: Fraction) -> bool:
    return compare_form_rational(f, lo) > 0 and compare_form_rational(f, hi) < 0


def _level(h: int) -> LevelRecord:
    return levels(h)[h]


def dmax_at(k: int) -> LinearForm:
    rec, t, _ = locate(k)
    return rec.dmax - rec.dmin * t


# -- individual bound expressions -------------------------------------------

def lemma4_bounds(rec: LevelRecord) -> tuple[Fraction, Fraction]:
    return Fraction(1, rec.k), Fraction(2, rec.k)


def lemma5_bounds(rec: LevelRecord, t: int) -> tuple[Fraction, Fraction]:
    q = rec.q
    return Fraction(q - t, rec.k * q), Fraction(2 * (q + 1 - t), rec.k * (q + 1))


def lemma6_bound(rec: LevelRecord, t: int, j: int) -> Fraction:
    q = rec.q
    return 2 * Fraction(q - t, q) * (1 + t + Fraction(j, rec.k))


def lemma7_bound(rec: LevelRecord) -> Fraction:
    q = rec.q
    return (q + 5 + Fraction(5, q)) / 2


# -- verifiers ---------------------------------------------------------------

def verify_lemma4(h: int) -> BoundReport:
    """1/k_h < dmax(k_h) < 2/k_h."""
    rec = _level(h)
    lo, hi = lemma4_bounds(rec)
    ok = _strictly_between(lo, rec.dmax, hi)
    return BoundReport("4", {"h": h, "k": rec.k}, ok, lhs=enclose(rec.dmax, Fraction(1, 1 << 64)),
                       rhs=(lo, hi), failures=[] if ok else [h])


def verify_lemma5(k: int) -> BoundReport:
    rec, t, j = locate(k)
    d = rec.dmax - rec.dmin * t
    lo, hi = lemma5_bounds(rec, t)
    ok = _strictly_between(lo, d, hi)
    return BoundReport("5", {"k": k, "h": rec.h, "t": t, "j": j}, ok,
                       lhs=enclose(d, Fraction(1, 1 << 64)), rhs=(lo, hi),
                       failures=[] if ok else [k])


def verify_lemma6(k: int) -> BoundReport:
    rec, t, j = locate(k)
    kd = (rec.dmax - rec.dmin * t) * k
    bound = lemma6_bound(rec, t, j)
    ok = compare_form_rational(kd, bound) < 0
    return BoundReport("6", {"k": k, "h": rec.h, "t": t, "j": j}, ok,
                       lhs=enclose(kd, Fraction(1, 1 << 64)), rhs=(bound,),
                       failures=[] if ok else [k])


def _peak_candidates(rec: LevelRecord, rng: random.Random, samples: int) -> set[int]:
    """Segment ends, the analytic interior maximum and a few random k."""
    ks = {rec.k, rec.k_next - 1}
    for t in range(rec.q):
        ks.add(rec.k + t * rec.ell + rec.ell - 1)
        ks.add(rec.k + t * rec.ell)
    dmax = float(rec.dmax)
    dmin = float(rec.dmin)
    for j in (0, rec.ell - 1):
        t_max = dmax / (2 * dmin) - (rec.k + j) / (2 * rec.ell)
        for t in (math.floor(t_max), math.ceil(t_max)):
            if 0 <= t < rec.q:
                ks.add(rec.k + t * rec.ell + j)
    for _ in range(samples):
        ks.add(rng.randrange(rec.k, rec.k_next))
    return ks


def verify_lemma7(h: int, exhaustive: bool | None = None, samples: int = 1000,
                  seed: int = 0) -> BoundReport:
    """k*dmax(k) < (q_h + 5 + 5/q_h)/2 over the level ``k_h <= k < k_{h+1}``.

    Levels with more than ``EXHAUSTIVE_LIMIT`` values of k are checked at the
    segment ends (where k*dmax peaks within a segment), around the analytic
    maximum, and at random samples unless ``exhaustive`` is set.
    """
    rec = _level(h)
    bound = lemma7_bound(rec)
    size = rec.k_next - rec.k
    if exhaustive is None:
        exhaustive = size <= EXHAUSTIVE_LIMIT
    ks: Iterable[int]
    if exhaustive:
        ks = range(rec.k, rec.k_next)
        mode = "exhaustive"
    else:
        ks = sorted(_peak_candidates(rec, random.Random(seed), samples))
        mode = "endpoint+peak"
    failures = []
    n = 0
    best_k, best = None, None
    for k in ks:
        t = (k - rec.k) // rec.ell
        kd = (rec.dmax - rec.dmin * t) * k
        n += 1
        if compare_form_rational(kd, bound) >= 0:
            failures.append(k)
        if best is None or kd > best:
            best_k, best = k, kd
    return BoundReport("7", {"h": h, "q": rec.q, "argmax_k": best_k}, not failures, checked=n,
                       failures=failures, lhs=enclose(best, Fraction(1, 1 << 64)),
                       rhs=(bound,), note=mode)


def verify_lemma5_segments(h: int) -> BoundReport:
    """Lemma 5 once per t-segment of level ``h``.

    dmax and both bounds depend on (h, t) only, so this covers every k of the level.
    """
    rec = _level(h)
    failures = []
    for t in range(rec.q):
        lo, hi = lemma5_bounds(rec, t)
        if not _strictly_between(lo, rec.dmax - rec.dmin * t, hi):
            failures.append(rec.k + t * rec.ell)
    return BoundReport("5", {"h": h}, not failures, checked=rec.q, failures=failures,
                       note="per segment")


def verify_level_lemmas_5_6(h: int) -> tuple[BoundReport, BoundReport]:
    """Lemma 5 and 6 for every k of level ``h``, aggregated."""
    rec = _level(h)
    f5, f6 = [], []
    for k in range(rec.k, rec.k_next):
        if not verify_lemma5(k).verdict:
            f5.append(k)
        if not verify_lemma6(k).verdict:
            f6.append(k)
    n = rec.k_next - rec.k
    return (BoundReport("5", {"h": h}, not f5, checked=n, failures=f5),
            BoundReport("6", {"h": h}, not f6, checked=n, failures=f6))


# -- figure data -------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x))


def figure_rows(h: int, which: str, precision_bits: int = 64) -> list[dict]:
    """Rows for every k in level ``h``.

    ``dmax`` rows carry the Lemma 5 bounds; ``kdmax`` rows carry k times the
    Lemma 5 lower bound, the Lemma 6 upper bound and the Lemma 7 bound.  The
    ``verified`` column records the exact strict-inclusion verdict.
    """
    if which not in ("dmax", "kdmax"):
        raise ValueError(f"unknown figure {which!r}")
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    rec = _level(h)
    tol = Fraction(1, 1 << precision_bits)
    rows = []
    for t in range(rec.q):
        d = rec.dmax - rec.dmin * t
        lo5, hi5 = lemma5_bounds(rec, t)
        d_ok = _strictly_between(lo5, d, hi5)
        d_enc = enclose(d, tol)
        for j in range(rec.ell):
            k = rec.k + t * rec.ell + j
            row = {"k": k, "t": t, "j": j}
            if which == "dmax":
                row.update(value=d_enc.midpoint, lower=lo5, upper=hi5,
                           enclosure_width=d_enc.width, verified=d_ok)
            else:
                kd = d * k
                enc = enclose(kd, tol)
                lo, hi6, b7 = lo5 * k, lemma6_bound(rec, t, j), lemma7_bound(rec)
                ok = (compare_form_rational(kd, lo) > 0 and compare_form_rational(kd, hi6) < 0
                      and compare_form_rational(kd, b7) < 0)
                row.update(value=enc.midpoint, lower=lo, upper=hi6, enclosure_width=enc.width,
                           upper_lemma7=b7, verified=ok)
            rows.append(row)
    return rows


def emit_figure_data(h: int, which: str, sink: IO[str], precision_bits: int = 64) -> int:
    """Write CSV figure data for level ``h`` to ``sink``; returns the row count."""
    rows = figure_rows(h, which, precision_bits)
    header = CSV_HEADER + (["upper_lemma7"] if which == "kdmax" else []) + ["verified"]
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([row["k"]] + [_fmt(row[c]) for c in header[1:-1]] + [int(row["verified"])])
    return len(rows)
