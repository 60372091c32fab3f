"""Exact arithmetic for reals of the form ``a*log2(3) + b``.

Every ordering decision in the package goes through this module.  Signs are
decided from ``floor(n*log2(3))``, which is obtained either from the bit length
of ``3**n`` (small ``n``) or from a certified dyadic enclosure of ``log2(3)``
computed with integer-only fixed-point arithmetic (large ``n``).  No floating
point value ever influences a decision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "LinearForm",
    "RationalInterval",
    "DyadicFraction",
    "LOG2_3",
    "ONE",
    "ZERO",
    "sign_linear_form",
    "sign_by_powers",
    "compare_form_rational",
    "floor_ratio",
    "enclose",
    "floor_log2_pow3",
    "log2_3_floor_bits",
    "pow3",
]

# Above this exponent floor(n*log2 3) comes from the enclosure instead of 3**n.
POWER_ROUTE_LIMIT = 1 << 13

_GUARD_BITS = 64


_POW3 = [1]
_POW3_LOCK = threading.Lock()


def pow3(n: int) -> int:
    """``3**n``, memoized for ``n <= POWER_ROUTE_LIMIT``.

    Sweeps walk exponents upward one at a time, so the table grows by a single
    multiplication per new exponent.
    """
    if n < 0:
        raise ValueError("negative exponent")
    if n > POWER_ROUTE_LIMIT:
        return 3 ** n
    if n >= len(_POW3):
        with _POW3_LOCK:
            while len(_POW3) <= n:
                _POW3.append(3 * _POW3[-1])
    return _POW3[n]


class _Log2Of3Bits:
    """Grows a certified fixed-point expansion of log2(3) on demand.

    Bits of log2(y) for y in [1, 2) follow from repeated squaring: square y,
    and if the result reaches 2 the next bit is 1 and y is halved.  The
    squarings run on an interval [lo, hi] of N-bit fixed-point integers with
    outward rounding, so each emitted bit is certain.  An undecidable bit
    restarts the expansion with more guard bits.
    """

    def __init__(self) -> None:
        self._bits = 0
        self._value = 1  # floor(log2(3) * 2**self._bits)
        self._lock = threading.Lock()

    def floor_scaled(self, m: int) -> int:
        """Return L with L < log2(3)*2**m < L + 1."""
        if m < 0:
            raise ValueError("m must be nonnegative")
        with self._lock:
            if m > self._bits:
                target = max(m, 2 * self._bits, 256)
                self._value = self._expand(target)
                self._bits = target
            return self._value >> (self._bits - m)

    @staticmethod
    def _expand(m: int) -> int:
        guard = _GUARD_BITS
        while True:
            bits = _log2_three_halves_bits(m, m + guard)
            if bits is not None:
                # log2(3) = 1 + log2(3/2)
                return (1 << m) | bits
            guard *= 2


def _log2_three_halves_bits(m: int, prec: int) -> int | None:
    """First m fractional bits of log2(3/2) using prec-bit fixed point.

    Returns None when the interval straddles 2 at some step.
    """
    two = 2 << prec
    lo = hi = 3 << (prec - 1)
    out = 0
    for _ in range(m):
        lo = (lo * lo) >> prec
        hi = -((-(hi * hi)) >> prec)
        out <<= 1
        if lo >= two:
            out |= 1
            lo >>= 1
            hi = (hi + 1) >> 1
        elif hi >= two:
            return None
    return out


_LOG2_3 = _Log2Of3Bits()


def log2_3_floor_bits(m: int) -> int:
    """``floor(log2(3) * 2**m)``, certified."""
    return _LOG2_3.floor_scaled(m)


def _floor_mul_log2_3(n: int) -> int:
    """floor(n*log2(3)) for n > 0 from the certified enclosure."""
    m = n.bit_length() + _GUARD_BITS
    while True:
        base = log2_3_floor_bits(m)
        lo = (n * base) >> m
        hi = (n * (base + 1)) >> m
        # n*z lies strictly inside (n*base, n*(base+1)) / 2**m
        if lo == hi or (hi == lo + 1 and (n * (base + 1)) & ((1 << m) - 1) == 0):
            return lo
        m *= 2


def floor_log2_pow3(i: int) -> int:
    """``floor(i*log2(3))``, i.e. the bit length of ``3**i`` minus one."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i == 0:
        return 0
    if i <= POWER_ROUTE_LIMIT:
        return pow3(i).bit_length() - 1
    return _floor_mul_log2_3(i)


def sign_by_powers(a: int, b: int) -> int:
    """Sign of ``a*log2(3) + b`` by comparing ``3**|a|`` with a power of two.

    This is the textbook route and is kept for small exponents and as an
    independent check of :func:`sign_linear_form`.
    """
    # a*z + b > 0  <=>  3**a * 2**b > 1
    pos = 1
    neg = 1
    if a >= 0:
        pos *= 3 ** a
    else:
        neg *= 3 ** (-a)
    if b >= 0:
        pos <<= b
    else:
        neg <<= -b
    return (pos > neg) - (pos < neg)


def sign_linear_form(f: LinearForm | tuple[int, int]) -> int:
    """Exact sign of ``a*log2(3) + b``; zero only for the zero form."""
    a, b = (f.a, f.b) if isinstance(f, LinearForm) else f
    if a == 0:
        return (b > 0) - (b < 0)
    # a*z is never an integer for a != 0, so the comparison with -b is strict.
    if a > 0:
        return 1 if floor_log2_pow3(a) >= -b else -1
    return 1 if floor_log2_pow3(-a) < b else -1


@dataclass(frozen=True, slots=True)
class LinearForm:
    """The real number ``a*log2(3) + b`` with integer coefficients.

    Equality is coefficientwise, which coincides with equality of values
    because log2(3) is irrational.
    """

    a: int
    b: int

    def __add__(self, other: LinearForm | int) -> LinearForm:
        if isinstance(other, int):
            return LinearForm(self.a, self.b + other)
        return LinearForm(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: LinearForm | int) -> LinearForm:
        if isinstance(other, int):
            return LinearForm(self.a, self.b - other)
        return LinearForm(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: int) -> LinearForm:
        return LinearForm(-self.a, other - self.b)

    def __neg__(self) -> LinearForm:
        return LinearForm(-self.a, -self.b)

    def __mul__(self, t: int) -> LinearForm:
        if not isinstance(t, int):
            return NotImplemented
        return LinearForm(self.a * t, self.b * t)

    __rmul__ = __mul__

    def sign(self) -> int:
        return sign_linear_form(self)

    def _cmp(self, other: LinearForm | int | Fraction) -> int:
        if isinstance(other, LinearForm):
            return sign_linear_form(self - other)
        return compare_form_rational(self, Fraction(other))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(enclose(self, Fraction(1, 1 << 60)).midpoint)

    def __repr__(self) -> str:
        return f"LinearForm({self.a}, {self.b})"


ZERO = LinearForm(0, 0)
ONE = LinearForm(0, 1)
LOG2_3 = LinearForm(1, 0)


def compare_form_rational(f: LinearForm, r: Fraction | int) -> int:
    """-1, 0, +1 as ``f`` is below, equal to, or above the rational ``r``."""
    r = Fraction(r)
    p, q = r.numerator, r.denominator
    return sign_linear_form((f.a * q, f.b * q - p))


def floor_ratio(f: LinearForm, g: LinearForm) -> int:
    """The unique ``t >= 0`` with ``t*g <= f < (t+1)*g`` for positive forms."""
    if sign_linear_form(f) <= 0 or sign_linear_form(g) <= 0:
        raise ValueError(f"floor_ratio needs positive forms, got {f!r}, {g!r}")
    # A numeric guess only seeds the search; the exact loop below settles it.
    fi = enclose(f, Fraction(1, 1 << 64))
    gi = enclose(g, Fraction(1, 1 << 64))
    t = max(int(fi.midpoint / gi.midpoint), 0)
    while t > 0 and sign_linear_form(f - g * t) < 0:
        t -= 1
    while sign_linear_form(f - g * (t + 1)) >= 0:
        t += 1
    return t


@dataclass(frozen=True, slots=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def excludes(self, x) -> bool:
        return x < self.lo or x > self.hi


def enclose(f: LinearForm, tolerance: Fraction | int | float) -> RationalInterval:
    """Rational interval of width at most ``tolerance`` containing ``f``."""
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if f.a == 0:
        return RationalInterval(Fraction(f.b), Fraction(f.b))
    # width is |a| / 2**m, and 2**m > ceil(|a|/tol) suffices
    m = math.ceil(abs(f.a) / tol).bit_length()
    base = log2_3_floor_bits(m)
    scale = 1 << m
    lo = Fraction(f.a * base + f.b * scale, scale)
    hi = Fraction(f.a * (base + 1) + f.b * scale, scale)
    if lo > hi:
        lo, hi = hi, lo
    return RationalInterval(lo, hi)


@dataclass(frozen=True, slots=True)
class DyadicFraction:
    """``numerator / 2**exponent`` in [1/2, 1) with odd numerator."""

    numerator: int
    exponent: int

    def __post_init__(self) -> None:
        if self.numerator < 1 or self.numerator % 2 == 0:
            raise ValueError(f"numerator must be odd and positive, got {self.numerator}")
        if self.exponent != self.numerator.bit_length():
            raise ValueError(
                f"exponent {self.exponent} must equal bit length of {self.numerator}"
            )

    @classmethod
    def from_fraction(cls, value: Fraction) -> DyadicFraction:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    @property
    def in_y(self) -> bool:
        return self.numerator % 3 != 0

    def __str__(self) -> str:
        return f"{self.numerator}/{1 << self.exponent}"
