from fractions import Fraction

import pytest

from voalab.core import DELTA, E, vacuum
from voalab.n4 import build_generators
from voalab.zhu import (
    HypothesisError, ZhuContext, alpha_grade, circ, n4_context, o_span_membership, split_graded,
    star, zhu_relation_suite,
)


@pytest.fixture(scope="module")
def gens():
    return build_generators()


@pytest.fixture(scope="module")
def ctx2():
    return n4_context(0, Fraction(2))


def test_alpha_grade():
    assert alpha_grade(E(DELTA), Fraction(1, 3)) == Fraction(5, 6)
    assert alpha_grade(E(DELTA), 0) == Fraction(1, 2)
    assert alpha_grade(vacuum(), Fraction(1, 3)) == 0


def test_split_graded_recombines(gens):
    s = gens.e + gens.tau_p + gens.omega
    parts = split_graded(s, Fraction(1, 3))
    assert len(parts) == 3
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    assert total == s


def test_vacuum_is_unit_for_star(gens, ctx2):
    assert star(vacuum(), gens.e, ctx2) == gens.e
    assert star(gens.e, vacuum(), ctx2) == gens.e


def test_odd_generator_lies_in_o(gens, ctx2):
    found, witness = o_span_membership(gens.tau_p, ctx2)
    assert found
    recon = None
    for c, a, b in witness:
        term = circ(a, b, ctx2) * c
        recon = term if recon is None else recon + term
    assert recon == gens.tau_p


def test_membership_beyond_truncation_is_refused(gens, ctx2):
    with pytest.raises(HypothesisError):
        o_span_membership(gens.omega * 1, n4_context(0, Fraction(1)))


@pytest.mark.parametrize("mu", [Fraction(-1, 3), Fraction(1), Fraction(3, 2)])
def test_twist_parameter_range(mu):
    with pytest.raises(HypothesisError):
        ZhuContext(mu, Fraction(2))


def test_half_twist_is_excluded():
    with pytest.raises(HypothesisError):
        zhu_relation_suite(n4_context(Fraction(1, 2), Fraction(2)))
