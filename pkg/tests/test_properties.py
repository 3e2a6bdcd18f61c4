import random

from hypothesis import given, settings, strategies as st

from voalab.properties import grading_check, random_state, skew_check, verify_properties
from voalab.vertex import commutator_check


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_states_are_nonzero(seed):
    assert random_state(random.Random(seed))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-1, 1), st.integers(-1, 1))
def test_commutator_formula_on_random_states(seed, m, n):
    rng = random.Random(seed)
    a, b, c = random_state(rng, 1), random_state(rng, 1), random_state(rng, 1)
    assert commutator_check(a, b, m, n, c)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-1, 2))
def test_skew_symmetry_on_random_states(seed, n):
    rng = random.Random(seed)
    assert skew_check(random_state(rng, 1), random_state(rng, 1), n)


def test_grading_and_small_seeded_run():
    rng = random.Random(5)
    from voalab.core import E, lv
    assert grading_check(E(lv(1)), E(lv(-1)), -2)
    rep = verify_properties(borcherds=3, skew=3, grading=3, seed=7)
    assert rep.passed
    assert len(rep.items) == 3
