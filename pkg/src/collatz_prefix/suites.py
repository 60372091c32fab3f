"""Invariant sweeps behind ``verify``; each returns a JSON-ready summary."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import _kernels
from .bounds_verifier import (
    verify_lemma4,
    verify_lemma5_segments,
    verify_lemma7,
    verify_level_lemmas_5_6,
)
from .exact_arith import ONE
from .collatz_core import psi, reduced_collatz, rho, trajectory
from .seeds import (
    is_prefix,
    is_prefix_by_digits,
    min_seed_index,
    min_seed_sweep,
    p_gaps_below,
    seed,
    seed_index_bound_lemma4,
    seed_index_bound_lemma7,
)
from .three_distance import (
    reported_level_crosscheck,
    cf_offset,
    continued_fraction_log2_3,
    gap_structure,
    iter_gap_structures,
    levels,
    oracle_gap_structure,
    oracle_gap_sweep,
)

THREE_QUARTERS = Fraction(3, 4)


def default_jobs() -> int:
    return os.cpu_count() or 1


def _summary(suite: str, checked: int, violations: list, **extra) -> dict:
    return {"suite": suite, "checked": checked, "violations": len(violations),
            "examples": violations[:10], **extra}


def _conjugacy_chunk(bounds: tuple[int, int]) -> tuple[int, list]:
    lo, hi = bounds
    bad = []
    n = 0
    for x in range(lo | 1, hi + 1, 2):
        if x % 3 == 0:
            continue
        n += 1
        y = psi(x)
        img, h = rho(y)
        step = reduced_collatz(x)
        if psi(step.output) != img:
            bad.append({"x": x, "why": "conjugacy"})
        v = img.value
        if v == THREE_QUARTERS or (h == 1) != (v > THREE_QUARTERS):
            bad.append({"x": x, "why": "h classification"})
    return n, bad


def _chunks(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    size = max(1, (hi - lo + 1 + parts - 1) // parts)
    return [(a, min(a + size - 1, hi)) for a in range(lo, hi + 1, size)]


def verify_conjugacy(x_max: int = 1 << 16, jobs: int = 1) -> dict:
    """psi(R(x)) == rho(psi(x)) for odd x <= x_max with 3 not dividing x."""
    parts = _chunks(1, x_max, max(jobs, 1))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_conjugacy_chunk, parts))
    else:
        results = [_conjugacy_chunk(p) for p in parts]
    checked = sum(n for n, _ in results)
    bad = [b for _, bs in results for b in bs]
    return _summary("conjugacy", checked, bad, x_max=x_max)


def verify_trajectories(x_max: int = 10**6, cap: int = 300, backend: str | None = None) -> dict:
    """Every odd x < x_max reaches 1 within ``cap`` reduced steps."""
    xs = np.arange(1, x_max, 2, dtype=np.int64)
    steps = _kernels.stopping_steps(xs, cap, backend)
    bad = []
    for x in xs[steps == _kernels.OVERFLOW]:
        t = trajectory(int(x), cap)
        if not t.converged:
            bad.append({"x": int(x), "why": "capped"})
    for x in xs[steps == _kernels.CAPPED]:
        bad.append({"x": int(x), "why": "capped"})
    worst = int(np.argmax(steps))
    return _summary("trajectories", int(xs.size), bad, x_max=x_max, cap=cap,
                    max_steps=int(steps[worst]), argmax=int(xs[worst]),
                    backend=backend or ("numba" if _kernels.use_numba() else "numpy"))


def verify_three_gap(k_max: int = 5000, precision_bits: int = 96) -> dict:
    """Closed form, point-by-point engine and both numeric oracles agree for 2 <= k <= k_max.

    The per-k oracle starts at ``precision_bits`` and escalates on its own.
    """
    two_length = set()
    h = 0
    while True:
        rec = levels(h)[h]
        if rec.k > k_max:
            break
        two_length.update(rec.k + t * rec.ell for t in range(rec.q + 1))
        h += 1
    bad = []
    n = 0
    used_bits = set()
    for eng, (k, oracle, adj) in zip(iter_gap_structures(k_max),
                                     oracle_gap_sweep(k_max, precision_bits)):
        n += 1
        closed = gap_structure(k)
        distinct = len(closed.gaps)
        per_k = oracle_gap_structure(k, precision_bits)
        used_bits.add(per_k.precision_bits)
        if (eng.k != k or closed.counter() != oracle or eng.counter() != oracle
                or per_k.gaps != oracle):
            bad.append({"k": k, "why": "multiset mismatch"})
        if set(adj) != set(closed.adjacency) or eng.adjacency != closed.adjacency:
            bad.append({"k": k, "why": "adjacency mismatch"})
        if distinct > 3 or (distinct == 2) != (k in two_length):
            bad.append({"k": k, "why": f"{distinct} distinct lengths"})
        if closed.total() != ONE:
            bad.append({"k": k, "why": "lengths do not sum to 1"})
    return _summary("three-gap", n, bad, k_max=k_max, oracle_bits=sorted(used_bits))


def level_report(h_max: int = 12) -> dict:
    recs = levels(h_max + 1)
    bad = []
    for a, b in zip(recs, recs[1:]):
        if (b.k != a.k + a.q * a.ell or b.ell != a.ell * a.q + a.s or b.s != a.ell
                or b.dmax != a.dmin or b.dmin != a.r or a.r.sign() == 0):
            bad.append({"h": a.h, "why": "recurrence"})
    qs = [r.q for r in recs[: h_max + 1]]
    cf = continued_fraction_log2_3(h_max + 8)
    off = cf_offset(qs, cf)
    if off is None:
        bad.append({"why": "q sequence is not a run of the continued fraction"})
    cap = reported_level_crosscheck(h_max)
    if cap["computed"] is None:
        bad.append({"why": "no level with q = 23"})
    return _summary("levels", h_max + 1, bad, q=qs, cf=cf, cf_offset=off, reported_level=cap,
                    table=[r.as_row() for r in recs[: h_max + 1]])


def verify_lemmas(h_max: int = 12, lemma56_h_max: int = 8, lemma7_h_max: int | None = 10,
                  exhaustive: bool = False) -> dict:
    """Lemma 4 and per-segment Lemma 5 for h <= h_max; 5 and 6 for every k of
    levels <= lemma56_h_max; Lemma 7 for levels <= lemma7_h_max."""
    bad = []
    n = 0
    for h in range(h_max + 1):
        n += 1
        if not verify_lemma4(h).verdict:
            bad.append({"lemma": 4, "h": h})
        r5 = verify_lemma5_segments(h)
        n += r5.checked
        bad += [{"lemma": 5, "k": k} for k in r5.failures]
    for h in range(min(h_max, lemma56_h_max) + 1):
        r5, r6 = verify_level_lemmas_5_6(h)
        n += r5.checked + r6.checked
        bad += [{"lemma": 5, "k": k} for k in r5.failures]
        bad += [{"lemma": 6, "k": k} for k in r6.failures]
    l7 = []
    for h in range(((h_max if lemma7_h_max is None else lemma7_h_max)) + 1):
        r = verify_lemma7(h, exhaustive=True if exhaustive else None)
        n += r.checked
        l7.append(r.as_dict())
        bad += [{"lemma": 7, "k": k} for k in r.failures]
    return _summary("lemmas", n, bad, lemma7=l7)


def _sweep_part(args: tuple[int, int, int]) -> dict[int, int]:
    return min_seed_sweep(*args)


def min_seed_table(bits: int, jobs: int = 1) -> list[dict]:
    """Minimal seed index and both bounds for every odd x below 2**bits."""
    if jobs > 1:
        limit = seed_index_bound_lemma4(bits)
        parts = [(bits, a, b) for a, b in
                 ((lo, hi + 1) for lo, hi in _chunks(0, limit - 1, jobs))]
        first: dict[int, int] = {}
        with ProcessPoolExecutor(jobs) as ex:
            for part in ex.map(_sweep_part, parts):
                for x, i in part.items():
                    if x not in first or i < first[x]:
                        first[x] = i
    else:
        first = min_seed_sweep(bits)
    rows = []
    for x in range(1, 1 << bits, 2):
        n = x.bit_length()
        rows.append({"x": x, "i_min": first.get(x), "bound4": seed_index_bound_lemma4(n),
                     "bound7": seed_index_bound_lemma7(n)})
    return rows


def verify_seeds(bits: int = 11, seed_max: int = 10, density_n: int = 8, jobs: int = 1) -> dict:
    bad = []
    n = 0
    for i in range(1, seed_max + 1):
        n += 1
        d = 3**i
        order = next(e for e in sorted(_divisors(2 * 3 ** (i - 1))) if pow(2, e, d) == 1)
        if len(seed(i)) != 2 * 3 ** (i - 1) or order != len(seed(i)):
            bad.append({"seed": i})
    bound_cmp = []
    for row in min_seed_table(bits, jobs):
        n += 1
        x, i = row["x"], row["i_min"]
        if i is None:
            bad.append({"x": x, "why": "no prefix below bound"})
            continue
        if not (is_prefix(x, i) and is_prefix_by_digits(x, i)):
            bad.append({"x": x, "why": "prefix routes disagree"})
        if min_seed_index(x, witnesses=0).index != i:
            bad.append({"x": x, "why": "sweep and scan disagree"})
        if not (i < row["bound4"] and i < row["bound7"]):
            bad.append({"x": x, "why": "above bound"})
    for nb in range(1, bits + 1):
        b4, b7 = seed_index_bound_lemma4(nb), seed_index_bound_lemma7(nb)
        tighter = "equal" if b4 == b7 else ("lemma7" if b7 < b4 else "lemma4")
        bound_cmp.append({"n": nb, "bound4": b4, "bound7": b7, "tighter": tighter})
    for nb in range(1, density_n + 1):
        n += 1
        ok, _ = p_gaps_below(seed_index_bound_lemma4(nb), Fraction(1, 2 ** (nb + 1)))
        if not ok:
            bad.append({"n": nb, "why": "P gap too large"})
    return _summary("seeds", n, bad, bits=bits, bounds=bound_cmp)


def _divisors(m: int) -> list[int]:
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out += [d, m // d]
        d += 1
    return out
