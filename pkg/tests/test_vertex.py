from fractions import Fraction

import pytest

from voalab.core import ALPHA, BETA, DELTA, PHI, E, creation, lv, vacuum, vadd, weight_of
from voalab.vertex import (
    IndexCosetError, ShiftedSpace, block_basis, commutator_check, gbinom, generated_subspace,
    lambda_bracket, mode_action, omega, omega_full, product, translate, weight,
)

AB = vadd(ALPHA, BETA)


def test_gbinom():
    assert gbinom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gbinom(5, 2) == 10
    assert gbinom(-1, 3) == -1


def test_central_charges():
    om = omega()
    assert product(om, 3, om) == vacuum() * Fraction(-9, 2)
    full = omega_full()
    assert product(full, 3, full) == vacuum() * -4


def test_omega_zero_mode_is_translation():
    om = omega_full()
    for s in (E(DELTA), E(AB), creation(ALPHA, 2, E(vadd(DELTA, PHI)))):
        assert product(om, 0, s) == translate(s)


def test_weight_matches_bare_formula():
    for s in (E(DELTA), E(lv(0, 0, -1)), creation(BETA, 3, E(AB))):
        assert weight(s) == weight_of(s)


def test_heisenberg_lambda_bracket():
    a = creation(ALPHA, 1, vacuum())
    b = creation(BETA, 1, vacuum())
    assert lambda_bracket(a, a).nonzero() == {1: vacuum()}
    assert lambda_bracket(b, b).nonzero() == {1: -vacuum()}


def test_vacuum_axioms():
    s = creation(DELTA, 2, E(AB))
    assert product(vacuum(), -1, s) == s
    assert product(s, -1, vacuum()) == s
    assert not product(s, 0, vacuum())


def test_commutator_formula_small():
    e = E(AB)
    h = creation(lv(0, -2, 1), 1, vacuum())
    assert commutator_check(e, h, 1, -1, E(DELTA))
    assert commutator_check(E(DELTA), E(lv(0, 0, -1)), 0, 0, E(DELTA))


def test_fractional_index_needs_matching_coset():
    with pytest.raises(IndexCosetError):
        mode_action(E(DELTA), Fraction(1, 2), vacuum())


def test_generated_heisenberg_dims_are_partition_numbers():
    gen = generated_subspace([creation(ALPHA, 1, vacuum())], 6)
    assert [gen.dims_by_weight()[Fraction(n)] for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]


def test_shifted_space_membership_and_blocks():
    sp = ShiftedSpace((tuple(AB), tuple(DELTA)), tuple(lv(0, 1)), bosons=(0, 1, 2), box=6)
    assert sp.contains(lv(1, 2, -1))
    assert not sp.contains(lv(0, 0, 0))
    blk = block_basis(sp, Fraction(1), (Fraction(0), Fraction(0), Fraction(0)))
    assert all(weight_of(s) == 1 for s in blk.states())


def test_key_filter_prunes_only_the_requested_blocks():
    from voalab.n4 import build_generators
    g = build_generators()
    gens = [g.e, g.h, g.f]
    full = generated_subspace(gens, 3)
    pruned = generated_subspace(gens, 3, key_filter=lambda w, ch: abs(ch[0]) <= 2 * (3 - w))
    zero = (Fraction(0), Fraction(0), Fraction(0))
    for n in range(4):
        key = (Fraction(n), zero)
        assert len(full.blocks.get(key, [])) == len(pruned.blocks.get(key, []))
