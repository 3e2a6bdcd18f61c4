from fractions import Fraction

import pytest

from voalab.core import DELTA, E, weight_of
from voalab.n4 import (
    CENTRAL_CHARGE, build_generators, expected_table, find_sign_adjustment, full_expected,
    skew_expected, verify_kernel_characterization, verify_g_gbar_identity, verify_n2_vectors,
    verify_n4_table, verify_wakimoto,
)
from voalab.vertex import lambda_bracket, mode_action


@pytest.fixture(scope="module")
def gens():
    return build_generators()


def test_generator_weights(gens):
    w = {k: weight_of(v) for k, v in gens.as_dict().items()}
    assert w == {"J+": 1, "J0": 1, "J-": 1, "L": 2, "G+": Fraction(3, 2), "Gbar+": Fraction(3, 2),
                 "G-": Fraction(3, 2), "Gbar-": Fraction(3, 2)}
    assert gens.tau_p == E(DELTA)


def test_virasoro_central_charge(gens):
    assert lambda_bracket(gens.omega, gens.omega)[3] == E((0, 0, 0, 0)) * (CENTRAL_CHARGE / 2)


def test_no_sign_adjustment_needed(gens):
    _, signs = find_sign_adjustment(gens)
    assert signs == {}


def test_expected_table_covers_all_pairs(gens):
    full = full_expected(gens)
    assert len(full) == 64
    assert set(expected_table(gens)) <= set(full)


def test_skew_expected_on_currents(gens):
    e, f, h = gens.e, gens.f, gens.h
    entry = lambda_bracket(e, f).nonzero()
    assert skew_expected(entry, 0, 0) == lambda_bracket(f, e).nonzero()
    assert lambda_bracket(h, e).nonzero() == {0: e * 2}


def test_f_squared_kills_tau_plus(gens):
    assert not mode_action(gens.f, 0, mode_action(gens.f, 0, E(DELTA)))


@pytest.mark.parametrize("suite", [verify_n4_table, verify_g_gbar_identity, verify_wakimoto, verify_n2_vectors])
def test_suites_pass(suite):
    rep = suite()
    assert rep.passed, [i.id for i in rep.failures()]


def test_kernel_characterization_low_weight():
    rep = verify_kernel_characterization(Fraction(3, 2))
    assert rep.passed
