"""Repetends of 1/3^i, the normalized values P and binary-prefix searches."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .exact_arith import DyadicFraction, floor_log2_pow3, log2_3_floor_bits, pow3
from .three_distance import levels


@dataclass(frozen=True)
class Seed:
    order: int
    digits: str

    def __len__(self) -> int:
        return len(self.digits)


def seed(i: int) -> Seed:
    """Repeating block of the binary expansion of ``1/3**i`` by long division."""
    if i < 1:
        raise ValueError("seed order must be positive")
    d = pow3(i)
    r = 1
    digits = []
    while True:
        r <<= 1
        if r >= d:
            digits.append("1")
            r -= d
        else:
            digits.append("0")
        if r == 1:
            break
    s = Seed(i, "".join(digits))
    if len(s) != 2 * 3 ** (i - 1):
        raise AssertionError(f"seed {i} has length {len(s)}")
    return s


def expansion_digits(i: int) -> Iterator[str]:
    """Binary digits of ``1/3**i`` after the point, forever (``1/1`` gives ``0.111...``)."""
    d = pow3(i)
    if d == 1:
        # 1 = 0.111..._2 is avoided; callers special-case i = 0
        raise ValueError("index 0 has no periodic expansion")
    r = 1
    while True:
        r <<= 1
        if r >= d:
            r -= d
            yield "1"
        else:
            yield "0"


@dataclass(frozen=True)
class PElement:
    """``2**exponent / 3**index`` in [1/2, 1); index None marks the sentinel 1."""

    index: int | None
    exponent: int

    @property
    def value(self) -> Fraction:
        if self.index is None:
            return Fraction(1)
        if self.exponent < 0:
            return Fraction(1, 1 << -self.exponent)
        return Fraction(1 << self.exponent, pow3(self.index))

    def ratio(self) -> tuple[int, int]:
        """``(e, d)`` with value ``2**e / d``; avoids building reduced fractions."""
        if self.index is None:
            return 0, 1
        if self.exponent < 0:
            return 0, 1 << -self.exponent
        return self.exponent, pow3(self.index)


SENTINEL = PElement(None, 0)


def p_element(i: int) -> PElement:
    """``2**(ceil(i*log2 3) - 1) / 3**i``; the exponent is -1 at i = 0."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i == 0:
        return PElement(0, -1)
    return PElement(i, floor_log2_pow3(i))


def _cmp_p(u: PElement, v: PElement) -> int:
    a, b = u.ratio()
    c, d = v.ratio()
    lhs, rhs = d << a, b << c
    return (lhs > rhs) - (lhs < rhs)


def _p_order(k: int) -> list[int]:
    """Indices 0..k-1 ordered by increasing p_i.

    p_i = 2**-frac(i*z), with frac(0) read as 1, so the order is by decreasing
    fractional part.  Keys are fixed-point approximations; ``p_sorted`` checks
    the resulting order exactly.
    """
    m = 2 * k.bit_length() + 64
    z = log2_3_floor_bits(m)
    mask = (1 << m) - 1
    return sorted(range(k), key=lambda i: -((i * z) & mask) if i else -(1 << m))


def p_sorted(k: int) -> list[PElement]:
    """Elements of P_k in increasing order, followed by the sentinel 1."""
    if k < 1:
        raise ValueError("k must be positive")
    out = [p_element(i) for i in _p_order(k)] + [SENTINEL]
    for u, v in zip(out, out[1:]):
        if _cmp_p(u, v) >= 0:
            raise AssertionError(f"P order broken between {u} and {v}")
    return out


def p_gaps_below(k: int, eps: Fraction) -> tuple[bool, Fraction]:
    """Whether all consecutive differences in ``p_sorted(k)`` are below ``eps``.

    Returns the verdict and the largest gap.
    """
    eps = Fraction(eps)
    ps = p_sorted(k)
    ok = True
    worst = (0, 1)
    for u, v in zip(ps, ps[1:]):
        a, b = u.ratio()
        c, d = v.ratio()
        num, den = (b << c) - (d << a), b * d
        if num * eps.denominator >= eps.numerator * den:
            ok = False
        if num * worst[1] > worst[0] * den:
            worst = (num, den)
    return ok, Fraction(*worst)


def prefix_bits(i: int, n: int) -> int:
    """First ``n`` binary digits of ``p_element(i)`` as an integer."""
    e = p_element(i).exponent
    if i == 0:
        return 1 << (n - 1)
    return (1 << (e + n)) // pow3(i)


def is_prefix(x: int, i: int) -> bool:
    """Binary digits of odd ``x`` open the expansion of ``p_element(i)``."""
    if x < 1 or x % 2 == 0:
        raise ValueError(f"expected an odd positive integer, got {x!r}")
    return prefix_bits(i, x.bit_length()) == x


def stripped_expansion(i: int, n: int) -> tuple[str, int]:
    """First ``n`` digits of ``1/3**i`` once its leading zeros are dropped.

    Also returns how many zeros were dropped.  This walks the long division
    digit by digit and does not use the exponent formula.
    """
    if i == 0:
        return ("1" + "0" * (n - 1))[:n], 0
    it = expansion_digits(i)
    zeros = 0
    for ch in it:
        if ch == "1":
            break
        zeros += 1
    digits = ["1"]
    while len(digits) < n:
        digits.append(next(it))
    return "".join(digits), zeros


def is_prefix_by_digits(x: int, i: int) -> bool:
    b = format(x, "b")
    return stripped_expansion(i, len(b))[0] == b


def seed_index_bound_lemma4(n: int) -> int:
    """Smallest ``k_h`` with ``2/k_h <= 2**-(n+1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    need = 1 << (n + 2)
    h = 0
    while True:
        rec = levels(h)[h]
        if rec.k >= need:
            return rec.k
        h += 1


def seed_index_bound_lemma7(n: int) -> int:
    """Smallest ``k`` in some level with ``(q_h + 5 + 5/q_h)/(2k) <= 2**-(n+1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    h = 0
    while True:
        rec = levels(h)[h]
        c = rec.q + 5 + Fraction(5, rec.q)
        # c / (2k) <= 2**-(n+1)  <=>  k >= c * 2**n
        k = max(rec.k, -((-c.numerator << n) // c.denominator))
        if k < rec.k_next:
            return k
        h += 1


@dataclass
class MinSeed:
    x: int
    index: int
    matches: list[int] = field(default_factory=list)
    bound4: int = 0
    bound7: int = 0


class PrefixNotFound(RuntimeError):
    pass


def min_seed_index(x: int, witnesses: int = 3, witness_scan: int | None = None) -> MinSeed:
    """Smallest ``i`` whose P element starts with the bits of ``x``.

    The scan stops at the bound ``k_h`` from :func:`seed_index_bound_lemma4`
    (indices in P_k are below k); running past it raises ``PrefixNotFound``.
    Up to ``witnesses`` further indices are collected within ``witness_scan``
    more steps (default: the bound again).
    """
    if x < 1 or x % 2 == 0:
        raise ValueError(f"expected an odd positive integer, got {x!r}")
    n = x.bit_length()
    b4, b7 = seed_index_bound_lemma4(n), seed_index_bound_lemma7(n)
    found = None
    for i in range(b4):
        if prefix_bits(i, n) == x:
            found = i
            break
    if found is None:
        raise PrefixNotFound(f"no index below {b4} has {x} as prefix")
    res = MinSeed(x, found, [], b4, b7)
    stop = found + 1 + (b4 if witness_scan is None else witness_scan)
    i = found + 1
    while len(res.matches) < witnesses and i < stop:
        if prefix_bits(i, n) == x:
            res.matches.append(i)
        i += 1
    return res


def min_seed_sweep(bits: int, start: int = 0, stop: int | None = None) -> dict[int, int]:
    """First index in ``[start, stop)`` for every odd ``x`` of bit length ``<= bits``.

    One pass over ``i`` reads off the top ``bits`` digits of each P element;
    shorter prefixes are shifts of it.  ``stop`` defaults to the Lemma 4 bound.
    """
    if bits < 1:
        raise ValueError("bits must be positive")
    if stop is None:
        stop = seed_index_bound_lemma4(bits)
    first: dict[int, int] = {}
    want = 1 << (bits - 1)  # odd x below 2**bits
    for i in range(start, stop):
        top = prefix_bits(i, bits)
        for n in range(1, bits + 1):
            x = top >> (bits - n)
            if x & 1 and x not in first:
                first[x] = i
        if len(first) == want:
            break
    return first


def density_search(y: DyadicFraction | Fraction, eps: Fraction, i_max: int | None = None
                   ) -> tuple[int, PElement]:
    """First ``i`` with ``p_i <= y < p_i + eps``.

    ``p_i <= y`` is tested as ``2**(n + e_i) <= x * 3**i`` for ``y = x/2**n``.
    """
    if not isinstance(y, DyadicFraction):
        y = DyadicFraction.from_fraction(Fraction(y))
    if not y.in_y:
        raise ValueError(f"{y} is outside Y")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    x, n = y.numerator, y.exponent
    if y.value < Fraction(1, 2) + eps:
        return 0, p_element(0)
    i = 1
    while i_max is None or i <= i_max:
        p = p_element(i)
        d = pow3(i)
        if (1 << (n + p.exponent)) <= x * d:
            # y < p + eps  <=>  x * 3**i * eps.den < (2**e * eps.den + eps.num * 3**i) * 2**n
            lhs = x * d * eps.denominator
            rhs = ((1 << p.exponent) * eps.denominator + eps.numerator * d) << n
            if lhs < rhs:
                return i, p
        i += 1
    raise PrefixNotFound(f"no index up to {i_max} approximates {y} within {eps}")


@dataclass(frozen=True)
class PrefixWitness:
    x: int
    index: int
    offset: int
    leading_zeros: int
    window: str


def power_prefix_witness(x: int) -> PrefixWitness:
    """Locate ``bin(x)`` in the repeated seed of its minimal index, zeros stripped."""
    i = min_seed_index(x, witnesses=0).index
    b = format(x, "b")
    window, zeros = stripped_expansion(i, 2 * len(b))
    offset = window.find(b)
    if offset != 0:
        raise AssertionError(f"{b} is not at the start of the stripped expansion of 1/3^{i}")
    return PrefixWitness(x, i, offset, zeros, window)
