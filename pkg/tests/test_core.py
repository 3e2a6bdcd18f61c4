from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from voalab.core import (
    ALPHA, BETA, DELTA, PHI, RHO, State, E, charge, cocycle, creation, hmode, lv, norm,
    pairing, parity, vacuum, vadd, weight_of,
)

ints = st.integers(min_value=-3, max_value=3)
vectors = st.tuples(ints, ints, ints, ints).map(lambda t: lv(*t))


@given(vectors, vectors)
def test_cocycle_commutation_ratio(u, v):
    ratio = cocycle(u, v) * cocycle(v, u)
    expected = (-1) ** int(pairing(u, v) + norm(u) * norm(v))
    assert ratio == expected


@given(vectors, vectors, vectors)
def test_cocycle_bimultiplicative(u, v, w):
    assert cocycle(vadd(u, v), w) == cocycle(u, w) * cocycle(v, w)
    assert cocycle(u, vadd(v, w)) == cocycle(u, v) * cocycle(u, w)


def test_cocycle_examples():
    ab = vadd(ALPHA, BETA)
    assert cocycle(ALPHA, ALPHA) == 1
    assert cocycle(ALPHA, BETA) * cocycle(BETA, ALPHA) == -1
    assert cocycle(ab, ab) == 1


def test_cocycle_rejects_fractional():
    with pytest.raises(ValueError):
        cocycle(lv(Fraction(1, 2)), ALPHA)


def test_gram_and_rho():
    assert [norm(v) for v in (ALPHA, BETA, DELTA, PHI)] == [1, -1, 1, -1]
    assert RHO == lv(Fraction(-1, 2), Fraction(1, 2), -1, 0)


def test_weights_and_charges_of_generators():
    assert weight_of(E(DELTA)) == Fraction(3, 2)
    assert weight_of(E(vadd(ALPHA, BETA))) == 1
    assert charge(E(vadd(ALPHA, BETA))) == (2, 0, 0)
    assert charge(E(DELTA)) == (1, 1, 0)
    assert parity(E(DELTA)) == "odd"
    assert parity(E(vadd(ALPHA, BETA))) == "even"


def test_heisenberg_commutator():
    one = vacuum()
    for h in (ALPHA, BETA, DELTA, PHI):
        s = creation(h, 1, one)
        assert hmode(h, 1, s) == one * norm(h)
        assert hmode(h, 2, creation(h, 2, one)) == one * (2 * norm(h))


def test_state_json_roundtrip():
    s = creation(ALPHA, 2, E(vadd(DELTA, PHI))) * Fraction(-3, 7) + E(BETA)
    assert State.from_json(s.to_json()) == s
    assert s.to_json() == State.from_json(s.to_json()).to_json()


def test_zero_state_is_falsy():
    s = E(ALPHA) - E(ALPHA)
    assert not s
    assert s.is_zero()
