from fractions import Fraction

import pytest

from voalab.amodules import (
    ModuleDescriptor, U_formulas, bigraded_dims, character_product, lowest_component,
    verify_relaxed,
)
from voalab.core import weight_of

HALF = Fraction(1, 2)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        ModuleDescriptor("bogus")
    with pytest.raises(ValueError):
        ModuleDescriptor("relaxed")
    with pytest.raises(ValueError):
        ModuleDescriptor("log")


def test_hypotheses_are_reported():
    assert ModuleDescriptor("relaxed", r=HALF).hypotheses() == []
    assert ModuleDescriptor("relaxed", r=1).hypotheses() == ["r is an integer"]
    assert ModuleDescriptor("spectral-flow", r=HALF, mu=HALF).hypotheses() == [
        "mu lies in (1/2)Z", "r - mu is an integer"]


def test_labels():
    assert ModuleDescriptor("relaxed", r=HALF).label() == "M(1/2)"
    assert ModuleDescriptor("spi", lam=0).label() == "SPi(0)"


def test_u_formulas_at_origin():
    assert U_formulas(0, HALF, 0) == (1, -1, Fraction(-3, 4))


def test_lowest_component_matches_formulas():
    lc = lowest_component(ModuleDescriptor("relaxed", r=HALF), (-2, 2))
    for i in range(-2, 3):
        e, h, f = U_formulas(lc.sl2_param, HALF, i)
        assert (lc.e[i], lc.h[i], lc.f[i]) == (e, h, f)
        assert lc.casimir(i) == Fraction(-1, 2)
        assert weight_of(lc.basis[i]) == Fraction(-1, 2)


def test_lowest_component_rejects_other_kinds():
    with pytest.raises(ValueError):
        lowest_component(ModuleDescriptor("twisted-fock", mu=Fraction(1, 3)))


def test_small_character_matches_product():
    d = ModuleDescriptor("relaxed", r=HALF)
    lhs = bigraded_dims(d, HALF, 2)
    assert lhs.coefficients == character_product(HALF, HALF, 2).coefficients
    assert lhs[(0, -3)] == 2
    assert lhs[(HALF, 0)] == 3


def test_relaxed_suite_small_window():
    assert verify_relaxed(HALF, 2).passed
