import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from friendsim.errors import NonMonomialNorm, NotMonomial
from friendsim.protocol import parse_scalar
from friendsim.scalar import (
    ONE,
    ZERO,
    RadicalScalar,
    as_scalar,
    invert_monomial,
    sqrt_int,
    sqrt_rational,
    to_float,
)

KEYS = [1, 2, 3, 5, 6, 7, 10]


def f(x):
    return float(x)


def R(**terms):
    """R(k1=..., k3=...) -> sum of q*sqrt(k)."""
    return RadicalScalar({int(k[1:]): Fraction(v) for k, v in terms.items()})


fractions = st.builds(Fraction, st.integers(-100, 100), st.integers(1, 100))
scalars = st.dictionaries(st.sampled_from(KEYS), fractions, max_size=4).map(RadicalScalar)


# -- sqrt_int ---------------------------------------------------------------

@pytest.mark.parametrize("n, expected", [(12, 2 * sqrt_int(3)), (1, ONE), (2, sqrt_int(2))])
def test_sqrt_int_examples(n, expected):
    assert sqrt_int(n) == expected


def test_sqrt_int_canonical_form():
    assert sqrt_int(12).terms == {3: Fraction(2)}
    assert sqrt_int(72).terms == {2: Fraction(6)}
    assert sqrt_int(49).terms == {1: Fraction(7)}


@pytest.mark.parametrize("bad", [0, -4, 2.0])
def test_sqrt_int_rejects_non_positive(bad):
    with pytest.raises(ValueError):
        sqrt_int(bad)


def test_sqrt_int_squares_back_exhaustive():
    for n in range(1, 10_001):
        assert sqrt_int(n) * sqrt_int(n) == n


# -- add / mul --------------------------------------------------------------

def test_add_examples():
    h = invert_monomial(sqrt_int(2))
    assert h + h == sqrt_int(2)
    x = R(k1="1/3", k5="-2/7")
    assert x + (-x) == ZERO
    assert (x + (-x)).terms == {}
    lhs = (ONE + sqrt_int(3) / 6) + sqrt_int(3) / 3
    assert lhs == ONE + sqrt_int(3) / 2
    assert math.isclose(f(lhs), 1 + math.sqrt(3) / 6 + math.sqrt(3) / 3, rel_tol=0, abs_tol=1e-12)


def test_mul_examples():
    assert sqrt_int(2) * sqrt_int(3) == sqrt_int(6)
    prod = invert_monomial(sqrt_int(6)) * invert_monomial(sqrt_int(2))
    assert prod == sqrt_int(3) / 6
    assert prod == invert_monomial(sqrt_int(12))
    assert math.isclose(f(prod), (1 / math.sqrt(6)) * (1 / math.sqrt(2)), abs_tol=1e-12)
    assert (ONE + sqrt_int(2)) * (ONE - sqrt_int(2)) == -1


def test_mixed_int_and_fraction_operands():
    assert 2 * sqrt_int(2) == sqrt_int(8)
    assert sqrt_int(2) * Fraction(1, 2) == sqrt_int(2) / 2
    assert 1 - ONE == 0
    assert as_scalar("3/4") == Fraction(3, 4)
    assert hash(as_scalar(3)) == hash(3)


# -- invert / to_float ------------------------------------------------------

def test_invert_monomial_examples():
    assert invert_monomial(sqrt_int(2) / 2) == sqrt_int(2)
    assert invert_monomial(as_scalar("2/3")) == Fraction(3, 2)
    inv = invert_monomial(sqrt_int(3) / 6)
    assert inv == 2 * sqrt_int(3)
    assert math.isclose(f(inv), 6 / math.sqrt(3), abs_tol=1e-12)


@pytest.mark.parametrize("bad", [ZERO, ONE + sqrt_int(2)])
def test_invert_monomial_rejects(bad):
    with pytest.raises(NotMonomial):
        invert_monomial(bad)


def test_division_by_non_monomial_raises():
    with pytest.raises(NotMonomial):
        ONE / (ONE + sqrt_int(3))


def test_to_float_examples():
    assert to_float(ZERO) == 0.0
    assert math.isclose(to_float(sqrt_int(3) / 6), 0.28867513459481287, abs_tol=1e-15)
    assert math.isclose(to_float(as_scalar("1/12")), 1 / 12, abs_tol=1e-15)


def test_sqrt_rational():
    assert sqrt_rational(as_scalar("1/12")) == sqrt_int(3) / 6
    assert sqrt_rational(as_scalar("2/3")) == sqrt_int(6) / 3
    assert sqrt_rational(as_scalar("1/4")) == Fraction(1, 2)
    with pytest.raises(NonMonomialNorm):
        sqrt_rational(sqrt_int(2))


# -- rendering --------------------------------------------------------------

@pytest.mark.parametrize("value, text", [
    (as_scalar("1/12"), "1/12"),
    (-sqrt_int(3) / 6, "-1/6*sqrt(3)"),
    (Fraction(1, 2) + sqrt_int(2) / 2, "1/2 + 1/2*sqrt(2)"),
    (ZERO, "0"),
    (sqrt_int(2), "sqrt(2)"),
    (ONE - sqrt_int(5), "1 - sqrt(5)"),
])
def test_render(value, text):
    assert str(value) == text


@given(scalars)
def test_render_parses_back(x):
    assert parse_scalar(str(x)) == x


# -- ring axioms and float agreement ----------------------------------------

@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a


@given(scalars, scalars)
def test_float_homomorphism(a, b):
    assert math.isclose(to_float(a * b), to_float(a) * to_float(b), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(to_float(a + b), to_float(a) + to_float(b), rel_tol=1e-9, abs_tol=1e-9)


@given(scalars)
def test_canonical_form(x):
    for k, q in x.terms.items():
        assert q != 0
        assert all(k % (p * p) for p in range(2, math.isqrt(k) + 1))
    assert (x - x).terms == {}


@settings(max_examples=200)
@given(st.integers(1, 10**6))
def test_sqrt_int_squares_back(n):
    assert sqrt_int(n) ** 2 == n
