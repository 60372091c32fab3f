"""Arc lengths cut on the unit circle by the points frac(i*log2 3), i < k.

Lengths are kept as exact :class:`LinearForm` values.  The level table is
built from the splitting recurrence; :func:`oracle_gap_structure` and
:func:`oracle_gap_sweep` recompute the arcs independently by sorting certified
numeric enclosures of the points, for cross-checking.
"""

from __future__ import annotations

import bisect
import math
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from mpmath import iv
from mpmath.libmp import to_rational

from .exact_arith import (
    LOG2_3,
    ONE,
    ZERO,
    LinearForm,
    floor_log2_pow3,
    floor_ratio,
    sign_linear_form,
)


def circle_point(i: int) -> LinearForm:
    """``frac(i*log2 3)`` as the form ``i*z - floor(i*z)``."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    return LinearForm(i, -floor_log2_pow3(i))


def arc(u: LinearForm, v: LinearForm) -> LinearForm:
    """Counterclockwise arc length from ``u`` to ``v`` on the unit circle."""
    d = v - u
    return d + 1 if sign_linear_form(d) < 0 else d


@dataclass(frozen=True)
class LevelRecord:
    """Two-length configuration at ``k = k_h``: ``ell`` arcs of ``dmax``, ``s`` of ``dmin``."""

    h: int
    k: int
    q: int
    ell: int
    s: int
    dmin: LinearForm
    dmax: LinearForm
    r: LinearForm

    @property
    def k_next(self) -> int:
        return self.k + self.q * self.ell

    def as_row(self) -> tuple[int, int, int, int, int]:
        return (self.h, self.k, self.q, self.ell, self.s)


class _LevelTable:
    def __init__(self) -> None:
        self._records: list[LevelRecord] = []
        self._ks: list[int] = []
        self._lock = threading.Lock()

    def _next(self) -> LevelRecord:
        if not self._records:
            d = circle_point(1)  # frac(z)
            dmin, dmax = sorted((d, 1 - d))
            h, k, ell, s = 0, 2, 1, 1
        else:
            p = self._records[-1]
            h, k = p.h + 1, p.k_next
            dmax, dmin = p.dmin, p.r
            ell, s = p.ell * p.q + p.s, p.ell
        q = floor_ratio(dmax, dmin)
        r = dmax - dmin * q
        rec = LevelRecord(h, k, q, ell, s, dmin, dmax, r)
        if dmax * ell + dmin * s != ONE or ell + s != k:
            raise AssertionError(f"level {h} does not tile the circle: {rec}")
        if not (ZERO < r < dmin):
            raise AssertionError(f"level {h} remainder out of range: {rec}")
        return rec

    def get(self, h_max: int) -> list[LevelRecord]:
        with self._lock:
            while len(self._records) <= h_max:
                rec = self._next()
                self._records.append(rec)
                self._ks.append(rec.k)
            return self._records[: h_max + 1]

    def level_of(self, k: int) -> LevelRecord:
        if k < 2:
            raise ValueError("k must be at least 2")
        h = 0
        while True:
            recs = self.get(h)
            if recs[-1].k_next > k:
                break
            h += 1
        return self._records[bisect.bisect_right(self._ks, k) - 1]


_TABLE = _LevelTable()


def levels(h_max: int) -> list[LevelRecord]:
    """Level records for ``h = 0..h_max``."""
    if h_max < 0:
        raise ValueError("h_max must be nonnegative")
    return _TABLE.get(h_max)


def locate(k: int) -> tuple[LevelRecord, int, int]:
    """Return ``(level, t, j)`` with ``k = k_h + t*ell_h + j``."""
    rec = _TABLE.level_of(k)
    t, j = divmod(k - rec.k, rec.ell)
    return rec, t, j


@dataclass(frozen=True)
class GapStructure:
    k: int
    gaps: tuple[tuple[LinearForm, int], ...]  # ascending lengths
    adjacency: tuple[LinearForm, LinearForm]  # (dmin side, split side)

    @property
    def lengths(self) -> list[LinearForm]:
        return [g for g, _ in self.gaps]

    @property
    def dmin(self) -> LinearForm:
        return self.gaps[0][0]

    @property
    def dmax(self) -> LinearForm:
        return self.gaps[-1][0]

    def counter(self) -> Counter:
        return Counter(dict(self.gaps))

    def total(self) -> LinearForm:
        tot = ZERO
        for g, c in self.gaps:
            tot = tot + g * c
        return tot


def _sorted_gaps(counts: dict[LinearForm, int]) -> tuple[tuple[LinearForm, int], ...]:
    return tuple(sorted(((g, c) for g, c in counts.items() if c), key=lambda gc: gc[0]))


def gap_structure(k: int) -> GapStructure:
    """Exact arc multiset of ``X_k``.

    After ``t`` full rounds and ``j`` extra points past ``k_h``, each long arc
    has lost ``t`` (or ``t + 1``) copies of ``dmin``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    rec, t, j = locate(k)
    long_t = rec.dmax - rec.dmin * t
    long_next = long_t - rec.dmin
    counts: dict[LinearForm, int] = Counter()
    counts[rec.dmin] += rec.s + t * rec.ell + j
    counts[long_t] += rec.ell - j
    counts[long_next] += j
    adj = (rec.dmin, long_next if j else long_t)
    return GapStructure(k, _sorted_gaps(counts), adj)


def iter_gap_structures(k_max: int) -> Iterator[GapStructure]:
    """Gap structures for k = 2..k_max, built point by point.

    Point ``x_k`` cuts one of the currently longest arcs into the level's
    ``dmin`` and the leftover; the first cut of each round lands next to x0.
    """
    rec = levels(0)[0]
    counts: Counter = Counter({rec.dmin: rec.s, rec.dmax: rec.ell})
    adj = (rec.dmin, rec.dmax)
    k = 2
    while k <= k_max:
        if k == rec.k_next:
            rec = levels(rec.h + 1)[-1]
            # old dmin becomes the long side, the remainder the short side
            adj = (adj[1], adj[0])
        yield GapStructure(k, _sorted_gaps(counts), adj)
        longest = max(g for g, c in counts.items() if c)
        counts[longest] -= 1
        counts[rec.dmin] += 1
        counts[longest - rec.dmin] += 1
        if (k - rec.k) % rec.ell == 0:
            adj = (adj[0], adj[1] - rec.dmin)
        k += 1


def continued_fraction_log2_3(count: int) -> list[int]:
    """First ``count`` partial quotients of log2(3), via exact Euclid steps."""
    if count < 1:
        raise ValueError("count must be positive")
    f, g = LOG2_3, ONE
    out = []
    for _ in range(count):
        a = floor_ratio(f, g)
        out.append(a)
        f, g = g, f - g * a
    return out


def cf_offset(qs: list[int], cf: list[int]) -> int | None:
    """Smallest offset ``o`` with ``cf[o:o+len(qs)] == qs``."""
    n = len(qs)
    for o in range(len(cf) - n + 1):
        if cf[o : o + n] == qs:
            return o
    return None


def translation_check(k: int, i: int, j: int, t: int) -> bool:
    """Arc from ``x_{i+t}`` to ``x_{j+t}`` equals arc from ``x_i`` to ``x_j``.

    All four indices must lie in ``[0, k)``.
    """
    lo, hi = -min(i, j), k - max(i, j)
    if not (0 <= i < k and 0 <= j < k) or not (lo <= t < hi):
        raise ValueError(f"t={t} outside [{lo}, {hi}) for k={k}, i={i}, j={j}")
    before = arc(circle_point(i), circle_point(j))
    after = arc(circle_point(i + t), circle_point(j + t))
    return before == after


# ---------------------------------------------------------------------------
# independent numeric oracle


class OraclePrecisionError(RuntimeError):
    pass


def _z_bounds(bits: int) -> tuple[int, int]:
    """Integers (lo, hi) with lo/2**bits <= log2(3) <= hi/2**bits, via mpmath intervals."""
    saved = iv.prec
    iv.prec = bits + 32
    try:
        lo_mpf, hi_mpf = (iv.log(3) / iv.log(2))._mpi_
    finally:
        iv.prec = saved
    lo, hi = Fraction(*to_rational(lo_mpf)), Fraction(*to_rational(hi_mpf))
    scale = 1 << bits
    return math.floor(lo * scale), math.ceil(hi * scale)


class _OraclePoints:
    """Certified fixed-point enclosures of frac(i*z), extended on demand.

    ``lo[i] <= frac(i*z) * 2**bits <= hi[i]`` and ``n[i] = floor(i*z)``.
    """

    def __init__(self, bits: int) -> None:
        self.bits = bits
        self.scale = 1 << bits
        self.zlo, self.zhi = _z_bounds(bits)
        self.lo = [0]
        self.hi = [0]
        self.n = [0]

    def extend(self, k: int) -> None:
        bits = self.bits
        for i in range(len(self.lo), k):
            a, b = i * self.zlo, i * self.zhi
            n = a >> bits
            if (b >> bits) != n:
                raise OraclePrecisionError(f"integer part of {i}*z undecided at {bits} bits")
            self.lo.append(a - (n << bits))
            self.hi.append(b - (n << bits))
            self.n.append(n)

    def point(self, i: int) -> tuple[int, int, LinearForm]:
        """Return (lo, hi, exact form) for frac(i*z); lo/hi scaled by 2**bits."""
        self.extend(i + 1)
        return self.lo[i], self.hi[i], LinearForm(i, -self.n[i])


_POINTS: dict[int, _OraclePoints] = {}


def _points(bits: int) -> _OraclePoints:
    if bits not in _POINTS:
        _POINTS[bits] = _OraclePoints(bits)
    return _POINTS[bits]


def oracle_gap_sweep(k_max: int, precision_bits: int = 96) -> Iterator[tuple[int, Counter, tuple]]:
    """Yield ``(k, arc Counter, (first arc, last arc))`` for k = 2..k_max.

    Points are inserted in index order into a list sorted by certified
    enclosures; arcs are then exact differences of neighbouring points.
    Precision doubles until every neighbour pair is separated.
    """
    bits = precision_bits
    while True:
        try:
            yield from _sweep(k_max, bits)
            return
        except OraclePrecisionError:
            bits *= 2


def _sweep(k_max: int, bits: int) -> Iterator[tuple[int, Counter, tuple]]:
    pts = _OraclePoints(bits)
    los: list[int] = [0]
    his: list[int] = [0]
    forms: list[LinearForm] = [ZERO]
    arcs: Counter = Counter({ONE: 1})
    buffered = []
    for i in range(1, k_max):
        lo, hi, f = pts.point(i)
        pos = bisect.bisect_left(los, lo)
        prev_hi = his[pos - 1]
        next_lo = los[pos] if pos < len(los) else pts.scale
        if not (prev_hi < lo and hi < next_lo):
            raise OraclePrecisionError(f"point {i} not separated at {bits} bits")
        left = forms[pos - 1]
        right = forms[pos] if pos < len(forms) else ONE
        old = right - left
        arcs[old] -= 1
        if not arcs[old]:
            del arcs[old]
        arcs[f - left] += 1
        arcs[right - f] += 1
        los.insert(pos, lo)
        his.insert(pos, hi)
        forms.insert(pos, f)
        adjacency = (forms[1], ONE - forms[-1])
        buffered.append((i + 1, Counter(arcs), adjacency))
        # hold results until the whole sweep is certified
    yield from buffered


@dataclass
class OracleGaps:
    k: int
    precision_bits: int
    order: list[int]
    gaps: Counter


def oracle_gap_structure(k: int, precision_bits: int = 64) -> OracleGaps:
    """Arc multiset of ``X_k`` from a certified numeric sort of the points.

    Precision doubles until all neighbouring enclosures are disjoint.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    bits = precision_bits
    while True:
        pts = _points(bits)
        try:
            pts.extend(k)
        except OraclePrecisionError:
            bits *= 2
            continue
        lo, hi = pts.lo, pts.hi
        order = sorted(range(k), key=lo.__getitem__)
        if all(hi[u] < lo[v] for u, v in zip(order, order[1:])):
            break
        bits *= 2
    n = pts.n
    # the arc from point u to point v is (v - u)*z + n[u] - n[v]
    counts: Counter = Counter((v - u, n[u] - n[v]) for u, v in zip(order, order[1:]))
    last = order[-1]
    counts[(-last, n[last] + 1)] += 1
    gaps = Counter({LinearForm(a, b): c for (a, b), c in counts.items()})
    return OracleGaps(k, bits, order, gaps)


# externally reported values to cross-check: q = 23 at level 8 with 655 arcs
REPORTED_LEVEL = {"h": 8, "q": 23, "ell": 655}


def reported_level_crosscheck(h_max: int = 12, q: int = REPORTED_LEVEL["q"]) -> dict:
    """Locate the level with the given ``q`` and compare it with the externally reported level."""
    for rec in levels(h_max):
        if rec.q == q:
            return {
                "reported": dict(REPORTED_LEVEL),
                "computed": {"h": rec.h, "q": rec.q, "ell": rec.ell, "k_h": rec.k,
                             "k_next": rec.k_next},
                "h_agrees": rec.h == REPORTED_LEVEL["h"],
                "ell_agrees": rec.ell == REPORTED_LEVEL["ell"],
                "agrees": rec.h == REPORTED_LEVEL["h"] and rec.ell == REPORTED_LEVEL["ell"],
            }
    return {"reported": dict(REPORTED_LEVEL), "computed": None, "agrees": False}
