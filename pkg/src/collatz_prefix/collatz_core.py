"""Reduced Collatz map on odd integers and its conjugate on dyadic fractions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact_arith import DyadicFraction

HALF = DyadicFraction(1, 1)


@dataclass(frozen=True)
class CollatzStep:
    input: int
    output: int
    m: int

    def __post_init__(self) -> None:
        assert (self.output << self.m) == 3 * self.input + 1
        assert self.output & 1 and self.output % 3 != 0 and self.m >= 1


@dataclass
class Trajectory:
    start: int
    steps: list[CollatzStep] = field(default_factory=list)
    converged: bool = False

    @property
    def outputs(self) -> list[int]:
        return [s.output for s in self.steps]


@dataclass
class RhoTrajectory:
    start: DyadicFraction
    points: list[DyadicFraction] = field(default_factory=list)
    hs: list[int] = field(default_factory=list)
    converged: bool = False


def _check_odd(x: int) -> None:
    if not isinstance(x, int) or x < 1 or x % 2 == 0:
        raise ValueError(f"expected an odd positive integer, got {x!r}")


def reduced_collatz(x: int) -> CollatzStep:
    """One step of R: strip every factor of two from ``3x + 1``."""
    _check_odd(x)
    y = 3 * x + 1
    m = (y & -y).bit_length() - 1
    return CollatzStep(x, y >> m, m)


def trajectory(x: int, cap: int = 10_000) -> Trajectory:
    """Iterate R from ``x`` until it reaches 1 or ``cap`` steps have run.

    A start of 1 counts as converged after zero steps.
    """
    _check_odd(x)
    if cap < 1:
        raise ValueError("cap must be positive")
    traj = Trajectory(x)
    cur = x
    while cur != 1 and len(traj.steps) < cap:
        step = reduced_collatz(cur)
        traj.steps.append(step)
        cur = step.output
    traj.converged = cur == 1
    return traj


def psi(x: int) -> DyadicFraction:
    """Map odd ``x`` to ``x / 2**n`` with ``n`` the bit length of ``x``."""
    _check_odd(x)
    return DyadicFraction(x, x.bit_length())


def psi_inv(y: DyadicFraction) -> int:
    return y.numerator


def _as_dyadic(y) -> DyadicFraction:
    if isinstance(y, DyadicFraction):
        return y
    return DyadicFraction.from_fraction(Fraction(y))


def rho(y: DyadicFraction | Fraction) -> tuple[DyadicFraction, int]:
    """Conjugate step ``(3y + 2**-n) / 2**h``; returns the image and ``h``.

    ``h`` is 2 when ``3y + 2**-n >= 2`` and 1 otherwise, so the boundary value
    ``3y + 2**-n == 2`` maps to 1/2.
    """
    y = _as_dyadic(y)
    if not y.in_y:
        raise ValueError(f"{y} is outside Y (numerator divisible by 3)")
    x, n = y.numerator, y.exponent
    s = 3 * x + 1  # 3y + 2**-n == s / 2**n
    h = 2 if s >= (2 << n) else 1
    v = (s & -s).bit_length() - 1
    # s / 2**(n+h) reduced; the odd part of s has exactly n + h - v bits
    return DyadicFraction(s >> v, n + h - v), h


def rho_trajectory(y: DyadicFraction | Fraction, cap: int = 10_000) -> RhoTrajectory:
    y = _as_dyadic(y)
    if not y.in_y:
        raise ValueError(f"{y} is outside Y (numerator divisible by 3)")
    if cap < 1:
        raise ValueError("cap must be positive")
    out = RhoTrajectory(y)
    cur = y
    while cur != HALF and len(out.points) < cap:
        cur, h = rho(cur)
        out.points.append(cur)
        out.hs.append(h)
    out.converged = cur == HALF
    return out


def is_fixed_half_preimage(y: DyadicFraction | Fraction) -> bool:
    """True iff ``rho(y) == 1/2``, i.e. ``3x + 1 == 2**(n+1)``."""
    y = _as_dyadic(y)
    return 3 * y.numerator + 1 == 2 << y.exponent


def y_elements(n: int) -> list[DyadicFraction]:
    """All elements of Y with denominator ``2**n``, ascending."""
    if n < 1:
        raise ValueError("n must be positive")
    lo = 1 << (n - 1)
    return [DyadicFraction(x, n) for x in range(lo | 1, 1 << n, 2) if x % 3]
