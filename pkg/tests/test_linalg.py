from fractions import Fraction

from hypothesis import given, settings, strategies as st

from voalab.linalg import Eliminator, in_span, nullspace, rank
from voalab.scalar import SQRT2, Scalar

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
rows = st.lists(st.dictionaries(st.integers(0, 4), small, max_size=5), min_size=1, max_size=6)


def _combine(images, combo):
    out = {}
    for i, c in combo.items():
        for k, v in images[i].items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


@settings(max_examples=60)
@given(rows)
def test_nullspace_vectors_annihilate(images):
    images = [{k: v for k, v in r.items() if v} for r in images]
    ker = nullspace(images)
    for combo in ker:
        assert combo
        assert _combine(images, combo) == {}
    assert rank(images) + len(ker) == len(images)


@settings(max_examples=60)
@given(rows, st.lists(small, min_size=6, max_size=6))
def test_in_span_finds_combinations(vectors, coeffs):
    vectors = [{k: v for k, v in r.items() if v} for r in vectors]
    x = _combine(vectors, dict(enumerate(coeffs[:len(vectors)])))
    combo = in_span(x, vectors)
    assert combo is not None
    assert _combine(vectors, combo) == x


def test_sqrt2_entries():
    el = Eliminator()
    el.add({0: SQRT2, 1: Fraction(1)})
    rem, _ = el.reduce({0: Fraction(2), 1: SQRT2})
    assert not rem
    rem, _ = el.reduce({0: Fraction(1), 1: Fraction(1)})
    assert rem


def test_dependent_rows_give_kernel():
    ker = nullspace([{0: Fraction(1)}, {0: Fraction(2)}, {1: Scalar(0, 1)}])
    assert len(ker) == 1
