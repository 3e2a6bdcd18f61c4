from fractions import Fraction

import pytest

from voalab.affine2 import (
    CATEGORY_O, LEVEL_A2, Eij, a2_weights, build_a2, build_Ls, coset_dims, expected_bracket,
    in_vacuum_sector, lowest_a2_matrices, sl3_matrix, tensor_phi, verify_a2_relations,
    verify_categoryO_vectors, verify_Eij, verify_Ls, _root_distance,
)
from voalab.amodules import ModuleDescriptor
from voalab.core import DELTA, E, PHI, lv, vacuum, vadd
from voalab.vertex import lambda_bracket, product
from voalab.zhu import HypothesisError

HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


@pytest.fixture(scope="module")
def g():
    return build_a2()


def test_tensor_phi_shifts_exponent():
    assert tensor_phi(E(DELTA), -1) == E(vadd(DELTA, lv(0, 0, 0, -1)))
    assert tensor_phi(vacuum(), 1) == E(PHI)


def test_level_and_sugawara_central_charge(g):
    assert LEVEL_A2 == Fraction(-3, 2)
    assert product(g.omega_a2, 3, g.omega_a2) == vacuum() * -4


def test_root_weights(g):
    assert a2_weights(g.e_a1) == (2, -1)
    assert a2_weights(g.e_a2) == (-1, 2)
    assert a2_weights(g.e_theta) == (1, 1)


def test_expected_bracket_simple_root(g):
    assert expected_bracket(g, "e_a1", "f_a1") == {0: g.h_a1, 1: vacuum() * LEVEL_A2}
    assert lambda_bracket(g.e_a1, g.f_a1).nonzero() == expected_bracket(g, "e_a1", "f_a1")


def test_sl3_matrices_are_traceless():
    for name in ("e_theta", "h_a1", "h_a2", "f_a2"):
        m = sl3_matrix(name)
        assert sum(m[i][i] for i in range(3)) == 0


def test_generators_live_in_vacuum_sector(g):
    assert all(in_vacuum_sector(s) for s in g.states())


def test_root_distance():
    zero = Fraction(0)
    assert _root_distance((zero, zero, zero)) == 0
    assert _root_distance((Fraction(2), Fraction(1), zero)) == 1


def test_relations_suite():
    rep = verify_a2_relations()
    assert rep.passed, [i.id for i in rep.failures()]


def test_category_o_suite():
    assert len(CATEGORY_O) == 4
    assert verify_categoryO_vectors().passed


def test_eij_matrices_small_window():
    assert verify_Eij(HALF, THIRD, 1).passed
    lm = lowest_a2_matrices(HALF, THIRD, 1)
    assert lm.raw[("e_a1", 0, 0)] is not None


def test_eij_exponent():
    assert Eij(HALF, 0, 0, 0) == E(lv(Fraction(-3, 2), Fraction(-1, 2), -1, 0))


def test_ls_suite():
    assert verify_Ls().passed


def test_build_ls_rejects_bad_input():
    with pytest.raises(ValueError):
        build_Ls(None, HALF)
    with pytest.raises(ValueError):
        build_Ls(ModuleDescriptor("spi", lam=0), 1)


def test_coset_dims_to_weight_three():
    rep = coset_dims(3)
    assert rep.passed
    assert rep.data["kernel_dims"] == {"0": 1, "1": 0, "2": 1, "3": 2}


def test_coset_cutoff_guard():
    with pytest.raises(HypothesisError):
        coset_dims(7)
