"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary and with -s)
and then asserts both correctness and the runtime target.
"""

import csv
import io
import time
from fractions import Fraction

import mpmath

from collatz_prefix import suites
from collatz_prefix.cli import main
from collatz_prefix.collatz_core import rho, trajectory
from collatz_prefix.seeds import (
    is_prefix,
    is_prefix_by_digits,
    p_gaps_below,
    seed,
    seed_index_bound_lemma4,
)
from collatz_prefix.three_distance import levels


def oracle_reduced(x: int) -> int:
    x = 3 * x + 1
    while x % 2 == 0:
        x //= 2
    return x


def oracle_step_count(x: int) -> int:
    n = 0
    while x != 1:
        x = oracle_reduced(x)
        n += 1
    return n


def long_division(d: int, n: int) -> str:
    out, r = [], 1
    for _ in range(n):
        r *= 2
        out.append(str(r // d))
        r %= d
    return "".join(out)


def test_criterion_1_conjugacy(record_criterion):
    t0 = time.perf_counter()
    res = suites.verify_conjugacy(1 << 16, jobs=1)
    # independent route: plain Fraction arithmetic against the integer map
    mismatches = 0
    for x in range(1, (1 << 16) + 1, 2):
        if x % 3 == 0:
            continue
        r = oracle_reduced(x)
        if rho(Fraction(x, 1 << x.bit_length()))[0].value != Fraction(r, 1 << r.bit_length()):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = res["violations"] == 0 and mismatches == 0 and res["checked"] == sum(1 for x in range(1, (1 << 16) + 1, 2) if x % 3)
    record_criterion(1, "conjugacy on odd x <= 2^16", ok and elapsed < 10, elapsed,
                     f"{res['checked']} x checked")
    assert ok
    assert elapsed < 10


def test_criterion_2_trajectories(record_criterion):
    t0 = time.perf_counter()
    res = suites.verify_trajectories(10**6, cap=300)
    counts_ok = all(len(trajectory(x, 300).steps) == oracle_step_count(x) for x in (7, 27))
    elapsed = time.perf_counter() - t0
    ok = res["violations"] == 0 and counts_ok and res["max_steps"] <= 300
    record_criterion(2, "odd x < 10^6 reach 1 within 300 steps", ok and elapsed < 60, elapsed,
                     f"max {res['max_steps']} steps at x={res['argmax']}, {res['backend']}")
    assert ok
    assert elapsed < 60


def test_criterion_3_three_gap(record_criterion):
    t0 = time.perf_counter()
    # a deliberately low starting precision forces the oracle to escalate
    res = suites.verify_three_gap(5000, precision_bits=16)
    elapsed = time.perf_counter() - t0
    ok = res["violations"] == 0 and res["checked"] == 4999
    record_criterion(3, "three-gap structure for 2 <= k <= 5000", ok and elapsed < 120, elapsed,
                     f"oracle precision used {res['oracle_bits']}")
    assert ok
    assert max(res["oracle_bits"]) > 16
    assert elapsed < 120


def cf_oracle(n: int) -> list[int]:
    with mpmath.workprec(512):
        x = mpmath.log(3, 2)
        out = []
        for _ in range(n):
            a = int(mpmath.floor(x))
            out.append(a)
            x = 1 / (x - a)
        return out


def test_criterion_4_level_table(record_criterion):
    t0 = time.perf_counter()
    res = suites.level_report(12)
    oracle = cf_oracle(len(res["cf"]))
    cap = res["reported_level"]
    elapsed = time.perf_counter() - t0
    ok = (res["violations"] == 0 and res["cf"] == oracle and res["cf_offset"] is not None
          and 23 in res["q"] and cap["computed"]["ell"] in (655, 665)
          and cap["agrees"] == (cap["computed"]["h"] == 8 and cap["computed"]["ell"] == 655))
    flag = "agrees" if cap["agrees"] else "DISAGREES"
    record_criterion(4, "level recurrence and q run of the continued fraction", ok and elapsed < 10,
                     elapsed, f"q=23 at h={cap['computed']['h']} with ell={cap['computed']['ell']}; "
                     f"reported h=8, ell=655 {flag}; cf offset {res['cf_offset']}")
    assert ok
    assert elapsed < 10


def test_criterion_5_lemmas(record_criterion):
    t0 = time.perf_counter()
    res = suites.verify_lemmas(h_max=12, lemma56_h_max=8, lemma7_h_max=10)
    elapsed = time.perf_counter() - t0
    modes = {d["note"] for d in res["lemma7"]}
    ok = res["violations"] == 0 and len(res["lemma7"]) == 11
    record_criterion(5, "lemma bounds 4-7", ok and elapsed < 300, elapsed,
                     f"{res['checked']} checks, Lemma 7 modes {sorted(modes)}")
    assert ok
    assert elapsed < 300


def _figure(which: str) -> list[dict]:
    buf = io.StringIO()
    import contextlib

    with contextlib.redirect_stdout(buf):
        code = main(["figure", which, "--level-with-q", "23"])
    assert code == 0
    return list(csv.DictReader(io.StringIO(buf.getvalue())))


def test_criterion_6_figures(record_criterion):
    t0 = time.perf_counter()
    rec = next(r for r in levels(12) if r.q == 23)
    dmax, kdmax = _figure("dmax"), _figure("kdmax")
    problems = []
    for rows in (dmax, kdmax):
        if [int(r["k"]) for r in rows] != list(range(rec.k, rec.k_next)):
            problems.append("row set")
        if not all(r["verified"] == "1" for r in rows):
            problems.append("exact verdict")
    for t in range(rec.q):
        seg = dmax[t * rec.ell:(t + 1) * rec.ell]
        if len({r["value"] for r in seg}) != 1:
            problems.append(f"dmax not constant in segment {t}")
        vals = [float(r["value"]) for r in kdmax[t * rec.ell:(t + 1) * rec.ell]]
        if not all(a < b for a, b in zip(vals, vals[1:])):
            problems.append(f"k*dmax not increasing in segment {t}")
    for r in dmax:
        if not float(r["lower"]) < float(r["value"]) < float(r["upper"]):
            problems.append(f"dmax outside bounds at k={r['k']}")
    for r in kdmax:
        v = float(r["value"])
        if not (float(r["lower"]) < v < float(r["upper"]) and v < float(r["upper_lemma7"])):
            problems.append(f"k*dmax outside bounds at k={r['k']}")
    elapsed = time.perf_counter() - t0
    ok = not problems and len(kdmax) == rec.q * rec.ell
    record_criterion(6, "figure data for the q=23 level", ok and elapsed < 120, elapsed,
                     f"{len(kdmax)} rows = {rec.q} segments x {rec.ell}")
    assert ok, problems[:5]
    assert elapsed < 120


def test_criterion_7_seeds(record_criterion):
    t0 = time.perf_counter()
    problems = []
    for i in range(1, 11):
        s = seed(i)
        d = 3**i
        order = next(e for e in range(1, 2 * 3 ** (i - 1) + 1) if pow(2, e, d) == 1)
        if not len(s) == 2 * 3 ** (i - 1) == order:
            problems.append(i)
    examples = seed(1).digits == "01" == long_division(3, 2) and \
        seed(2).digits == "000111" == long_division(9, 6)
    elapsed = time.perf_counter() - t0
    ok = not problems and examples
    record_criterion(7, "seed lengths and multiplicative orders for i <= 10", ok and elapsed < 1,
                     elapsed)
    assert ok
    assert elapsed < 1


def test_criterion_8_min_seed_index_sweep(record_criterion):
    t0 = time.perf_counter()
    rows = suites.min_seed_table(11, jobs=1)
    problems = []
    for row in rows:
        x, i = row["x"], row["i_min"]
        if i is None:
            problems.append((x, "missing"))
        elif not (is_prefix(x, i) and is_prefix_by_digits(x, i)):
            problems.append((x, "prefix"))
        elif not (i <= row["bound4"] and i <= row["bound7"]):
            problems.append((x, "bound"))
    elapsed = time.perf_counter() - t0
    ok = not problems and len(rows) == 1024
    worst = max(r["i_min"] for r in rows if r["i_min"] is not None)
    record_criterion(8, "min seed index for odd x below 2^11", ok and elapsed < 180, elapsed,
                     f"largest minimal index {worst}")
    assert ok, problems[:5]
    assert elapsed < 180


def test_criterion_9_density(record_criterion):
    t0 = time.perf_counter()
    results = {}
    for n in range(1, 9):
        k = seed_index_bound_lemma4(n)
        eps = Fraction(1, 2 ** (n + 1))
        ok_n, worst = p_gaps_below(k, eps)
        results[n] = ok_n and worst < eps
    elapsed = time.perf_counter() - t0
    ok = all(results.values())
    record_criterion(9, "P gaps below 2^-(n+1) for n <= 8", ok and elapsed < 60, elapsed)
    assert ok, results
    assert elapsed < 60
