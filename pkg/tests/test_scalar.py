from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from voalab.scalar import SQRT2, Scalar, as_fraction, format_scalar, parse_scalar

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10 ** 6)
scalars = st.builds(Scalar, fractions, fractions)


def test_sqrt2_squares_to_two():
    assert SQRT2 * SQRT2 == 2
    assert (SQRT2 * SQRT2).is_rational()


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a * b == b * a


@given(scalars, scalars)
def test_division_inverts_multiplication(a, b):
    if not b:
        return
    assert (a * b) / b == a


@given(scalars)
def test_format_parse_roundtrip(a):
    back = parse_scalar(format_scalar(a))
    assert Scalar.lift(back) == a


@given(fractions)
def test_rational_scalars_mix_with_fractions(q):
    assert Scalar(q) == q
    assert Scalar(q) + 1 == q + 1
    assert parse_scalar(format_scalar(q)) == q


def test_format_examples():
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert format_scalar(Scalar(0, Fraction(1, 2))) == "0/1+1/2*sqrt2"
    assert format_scalar(Scalar(1, -2)) == "1/1-2/1*sqrt2"


def test_bad_inputs():
    with pytest.raises(ValueError):
        parse_scalar("sqrt3")
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)
