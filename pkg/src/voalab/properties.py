"""Seeded property checks of the vertex algebra axioms on random lattice states.

* Borcherds commutator formula  [a_m, b_n] c = sum_j C(m, j) (a_(j) b)_(m+n-j) c
* skew-symmetry  b_(n) a = sum_j (-1)^(n+j+1+p(a)p(b)) D^j/j! a_(n+j) b
* grading additivity  wt(a_(n) b) = wt a + wt b - n - 1
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial
from typing import List

from .core import Mono, State, parity_bit, weight_of
from .report import VerificationReport
from .vertex import commutator_check, mode_bound, product, translate, weight

__all__ = ["random_state", "skew_check", "grading_check", "verify_properties"]


EXPONENTS = [tuple(Fraction(x) for x in v) for v in (
    (0, 0, 0, 0), (1, 0, 0, 0), (-1, 0, 0, 0), (0, 1, 0, 0), (0, -1, 0, 0), (0, 0, 1, 0),
    (0, 0, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1), (1, 1, 0, 0), (-1, -1, 0, 0), (0, 0, 1, 1),
    (0, 0, -1, -1), (1, 0, 1, 0), (0, 1, -1, 0), (1, 1, -2, 0),
)]


def random_state(rng: random.Random, max_terms: int = 2) -> State:
    """A random state with one small integral exponent (so parity is homogeneous)."""
    exp = rng.choice(EXPONENTS)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        modes = [[], [], [], []]
        for _ in range(rng.randint(0, 2)):
            modes[rng.randrange(4)].append(rng.randint(1, 2))
        m = Mono(exp, tuple(tuple(sorted(t, reverse=True)) for t in modes))
        terms[m] = terms.get(m, 0) + Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
    s = State(terms)
    return s if s else random_state(rng, max_terms)


def _homogeneous(rng: random.Random) -> State:
    """A random L(0)-homogeneous state."""
    while True:
        s = random_state(rng)
        try:
            weight_of(s)
            return s
        except ValueError:
            continue


def skew_check(a: State, b: State, n: int) -> bool:
    sign = -1 if parity_bit(a) and parity_bit(b) else 1
    lhs = product(b, n, a)
    top = max(mode_bound(u, v) for u in a.terms for v in b.terms)
    rhs = State()
    j = 0
    while n + j <= top:
        t = product(a, n + j, b)
        for _ in range(j):
            t = translate(t)
        rhs = rhs + t * Fraction(sign * (-1 if (n + j + 1) % 2 else 1), factorial(j))
        j += 1
    return lhs == rhs


def grading_check(a: State, b: State, n: int) -> bool:
    r = product(a, n, b)
    if not r:
        return True
    return weight(r) == weight(a) + weight(b) - n - 1


def _index_range(a: State, b: State) -> List[int]:
    top = int(max(mode_bound(u, v) for u in a.terms for v in b.terms))
    return list(range(top - 3, top + 1))


def verify_properties(borcherds: int = 50, skew: int = 20, grading: int = 30,
                      seed: int = 2024) -> VerificationReport:
    rng = random.Random(seed)
    rep = VerificationReport("properties", config={"seed": seed, "borcherds": borcherds,
                                                   "skew": skew, "grading": grading})
    bad = []
    for k in range(borcherds):
        a, b, c = random_state(rng), random_state(rng), random_state(rng)
        m = rng.randint(-1, 1)
        n = rng.randint(-1, 1)
        if not commutator_check(a, b, m, n, c):
            bad.append(k)
    rep.add(f"Borcherds commutator formula on {borcherds} samples", "commutator formula", not bad,
            detail=f"failing samples {bad}")
    bad = []
    for k in range(skew):
        a, b = random_state(rng), random_state(rng)
        n = rng.choice(_index_range(a, b))
        if not skew_check(a, b, n):
            bad.append(k)
    rep.add(f"skew-symmetry on {skew} samples", "skew-symmetry", not bad, detail=f"failing samples {bad}")
    bad = []
    for k in range(grading):
        a, b = _homogeneous(rng), _homogeneous(rng)
        n = rng.choice(_index_range(a, b))
        if not grading_check(a, b, n):
            bad.append(k)
    rep.add(f"grading additivity on {grading} samples", "L(0) grading", not bad,
            detail=f"failing samples {bad}")
    return rep
