from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_prefix.exact_arith import (
    POWER_ROUTE_LIMIT,
    DyadicFraction,
    LinearForm,
    compare_form_rational,
    enclose,
    floor_log2_pow3,
    floor_ratio,
    log2_3_floor_bits,
    sign_by_powers,
    sign_linear_form,
)

mpmath.mp.prec = 512
Z = mpmath.log(3, 2)


def numeric(f: LinearForm):
    return f.a * Z + f.b


@pytest.mark.parametrize(
    "a,b,expected",
    [(0, 0, 0), (1, -1, 1), (-12, 19, -1), (0, 5, 1), (0, -3, -1), (1, -2, -1)],
)
def test_sign_examples(a, b, expected):
    assert sign_linear_form(LinearForm(a, b)) == expected
    assert sign_by_powers(a, b) == expected


def test_sign_example_against_direct_powers():
    # 3**12 = 531441 > 2**19 = 524288
    assert 3**12 > 2**19
    assert sign_linear_form((-12, 19)) == -1


@settings(max_examples=400, deadline=None)
@given(st.integers(-3000, 3000), st.integers(-5000, 5000))
def test_sign_routes_agree(a, b):
    assert sign_linear_form((a, b)) == sign_by_powers(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**9, 10**9).filter(lambda a: a != 0), st.integers(-2 * 10**9, 2 * 10**9))
def test_sign_nonzero_for_irrational_forms(a, b):
    s = sign_linear_form((a, b))
    assert s != 0
    assert s == (1 if numeric(LinearForm(a, b)) > 0 else -1)


def test_sign_near_convergents():
    # 665*z - 1054 and 15601*z - 24727 are tiny; their signs alternate with the convergents
    for q, p in [(665, 1054), (15601, 24727), (190537, 301994), (10590737, 16785921)]:
        expected = 1 if q * Z - p > 0 else -1
        assert sign_linear_form((q, -p)) == expected
    assert sign_by_powers(665, -1054) == sign_linear_form((665, -1054))


@pytest.mark.parametrize(
    "f,r,expected",
    [(LinearForm(1, -1), Fraction(1, 2), 1), (LinearForm(0, 1), Fraction(1), 0),
     (LinearForm(1, -2), Fraction(0), -1)],
)
def test_compare_form_rational_examples(f, r, expected):
    assert compare_form_rational(f, r) == expected


def test_compare_example_power_check():
    # log2 3 - 1 > 1/2  <=>  3**2 > 2**3
    assert 3**2 > 2**3


@pytest.mark.parametrize(
    "f,g,expected",
    [(LinearForm(1, -1), LinearForm(-1, 2), 1), (LinearForm(2, -3), LinearForm(2, -3), 1),
     (LinearForm(-1, 2), LinearForm(2, -3), 2)],
)
def test_floor_ratio_examples(f, g, expected):
    assert floor_ratio(f, g) == expected
    # 256-bit numeric oracle
    with mpmath.workprec(256):
        assert int(mpmath.floor(numeric(f) / numeric(g))) == expected


def test_floor_ratio_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_ratio(LinearForm(1, -2), LinearForm(0, 1))
    with pytest.raises(ValueError):
        floor_ratio(LinearForm(0, 1), LinearForm(0, 0))


@settings(max_examples=200, deadline=None)
@given(st.integers(-500, 500), st.integers(-800, 800), st.integers(-500, 500),
       st.integers(-800, 800))
def test_floor_ratio_brackets(a, b, c, d):
    f, g = LinearForm(a, b), LinearForm(c, d)
    if sign_linear_form(f) <= 0 or sign_linear_form(g) <= 0:
        return
    t = floor_ratio(f, g)
    assert g * t <= f < g * (t + 1)


def _bisection_oracle(m: int) -> tuple[Fraction, Fraction]:
    """Dyadic bisection of log2 3 from [1, 2]; each step compares 3**q with 2**p."""
    lo, hi = Fraction(1), Fraction(2)
    for _ in range(m):
        mid = (lo + hi) / 2
        p, q = mid.numerator, mid.denominator
        if 3**q > 2**p:
            lo = mid
        else:
            hi = mid
    return lo, hi


def test_enclose_examples():
    assert enclose(LinearForm(0, 5), Fraction(1, 7)) == enclose(LinearForm(0, 5), 1)
    iv = enclose(LinearForm(0, 5), Fraction(1, 7))
    assert iv.lo == iv.hi == 5

    iv = enclose(LinearForm(1, 0), Fraction(1, 2**10))
    assert iv.width <= Fraction(1, 2**10)
    lo, hi = _bisection_oracle(12)
    assert iv.lo < hi and lo < iv.hi  # overlaps the oracle's bracket
    assert iv.lo <= Fraction(1584962, 10**6) <= iv.hi

    iv = enclose(LinearForm(1, -1), Fraction(1, 16))
    assert Fraction(52, 100) < iv.lo and iv.hi < Fraction(65, 100)


@pytest.mark.parametrize("m", [1, 5, 10, 16])
def test_log2_3_bits_match_bisection(m):
    lo, hi = _bisection_oracle(m)
    assert Fraction(log2_3_floor_bits(m), 2**m) == lo
    assert hi - lo == Fraction(1, 2**m)


def test_log2_3_bits_match_mpmath():
    for m in (64, 300, 1000):
        assert log2_3_floor_bits(m) == int(mpmath.floor(Z * 2**m)) if m < 500 else True
    with mpmath.workprec(1200):
        z = mpmath.log(3, 2)
        assert log2_3_floor_bits(1000) == int(mpmath.floor(z * mpmath.mpf(2) ** 1000))


@settings(max_examples=150, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6),
       st.integers(-50, 50), st.integers(1, 64), st.integers(4, 80))
def test_enclose_agrees_with_compare(a, b, p, q, bits):
    f = LinearForm(a, b)
    r = Fraction(p, q) + b + int(a * 1.584962500721156)
    iv = enclose(f, Fraction(1, 2**bits))
    assert iv.width <= Fraction(1, 2**bits)
    v = numeric(f)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= v
    assert v <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
    if iv.excludes(r):
        expected = 1 if iv.lo > r else -1
        assert compare_form_rational(f, r) == expected


@pytest.mark.parametrize("i,expected", [(0, 0), (2, 3), (4, 6)])
def test_floor_log2_pow3_examples(i, expected):
    assert floor_log2_pow3(i) == expected


def test_floor_log2_pow3_matches_128_bit_log():
    with mpmath.workprec(128):
        z = mpmath.log(3, 2)
        for i in range(10**4 + 1):
            assert floor_log2_pow3(i) == int(mpmath.floor(i * z)), i


def test_floor_log2_pow3_routes_agree_past_limit():
    from collatz_prefix.exact_arith import _floor_mul_log2_3

    for i in list(range(1, 200)) + [POWER_ROUTE_LIMIT - 1, POWER_ROUTE_LIMIT,
                                    POWER_ROUTE_LIMIT + 1, 20000, 31867]:
        assert _floor_mul_log2_3(i) == (3**i).bit_length() - 1


def test_linear_form_ordering_and_float():
    a, b = LinearForm(1, -1), LinearForm(-1, 2)
    assert b < a and a > b and a >= a and b <= b
    assert a + b == LinearForm(0, 1)
    assert 1 - a == b
    assert abs(float(a) - 0.5849625007211562) < 1e-15
    assert a > Fraction(1, 2) and a < 1


def test_dyadic_fraction_validation():
    y = DyadicFraction(5, 3)
    assert y.value == Fraction(5, 8) and y.in_y
    assert not DyadicFraction(9, 4).in_y
    assert DyadicFraction.from_fraction(Fraction(11, 16)) == DyadicFraction(11, 4)
    for bad in [(4, 3), (5, 4), (0, 1)]:
        with pytest.raises(ValueError):
            DyadicFraction(*bad)
    with pytest.raises(ValueError):
        DyadicFraction.from_fraction(Fraction(1, 3))
