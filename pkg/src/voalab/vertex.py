"""Modes of lattice vertex operators on (shifted) Fock spaces.

The basic operation is ``u_(n) w`` for monomials ``u`` and ``w``.  The field of
``u = prod b_i(-m_i-1) e^gamma`` is the normal ordered product of the
derivatives ``d^m b_i(z)/m!`` with ``Y(e^gamma, z)``; splitting every boson
factor into its creation and annihilation halves gives a sum over subsets of
the factors, each term being a finite Laurent polynomial in z once applied to
a Fock monomial.  The index ``n`` may be rational when ``w`` lives in a
shifted lattice coset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import (
    GRAM, Mono, State, ZERO, DELTA, PHI, NotHomogeneous, as_fraction,
    conformal_weight, heisenberg_degree, pairing,
    parity_bit, vadd, vertex_sign, weight_of, vacuum, _charges_of,
)
from .linalg import Eliminator, nullspace

__all__ = [
    "IndexCosetError", "ShiftedSpace", "GradedBlock", "FieldMode", "LambdaBracket",
    "mode_action", "product", "lambda_bracket", "translate", "weight", "commutator_check",
    "screening_map", "kernel_block", "generated_subspace", "block_basis", "gbinom",
    "omega", "omega_full", "mode_bound", "GeneratedSubspace",
]


class IndexCosetError(ValueError):
    """The requested mode index is not in the coset allowed by the exponents."""


def gbinom(r, j: int) -> Fraction:
    """Generalized binomial coefficient C(r, j) for rational r and integer j >= 0."""
    if j < 0:
        return Fraction(0)
    r = as_fraction(r)
    num = Fraction(1)
    for i in range(j):
        num *= r - i
    return num / factorial(j)


# ---------------------------------------------------------------------------
# creation side: coefficient of z^T in E^-(-gamma, z) * prod b^-_(m)(z)
# ---------------------------------------------------------------------------

def _partitions(n: int, maxpart: Optional[int] = None):
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def _single_exp(g: Fraction, a: int) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    """Coefficient of z^a in exp(sum_k g b(-k) z^k / k) as (mode tuple, coeff) pairs."""
    out = []
    for lam in _partitions(a):
        c = Fraction(1)
        counts: Dict[int, int] = {}
        for k in lam:
            counts[k] = counts.get(k, 0) + 1
        for k, m in counts.items():
            c *= (g / k) ** m / factorial(m)
        out.append((lam, c))
    return tuple(out)


@lru_cache(maxsize=None)
def _eminus(gamma, a: int):
    """Coefficient of z^a in E^-(-gamma, z) as a dict over 4-tuples of mode tuples."""
    result = {((), (), (), ()): Fraction(1)} if a == 0 else {}
    if a == 0:
        return result
    active = [i for i in range(4) if gamma[i]]
    if not active:
        return {}
    # distribute degree a over the active bosons
    out: Dict[tuple, Fraction] = {}

    def rec(idx, remaining, modes, coeff):
        if idx == len(active) - 1:
            i = active[idx]
            for lam, c in _single_exp(gamma[i], remaining):
                mm = list(modes)
                mm[i] = lam
                key = tuple(mm)
                out[key] = out.get(key, 0) + coeff * c
            return
        i = active[idx]
        for part in range(remaining + 1):
            for lam, c in _single_exp(gamma[i], part):
                mm = list(modes)
                mm[i] = lam
                rec(idx + 1, remaining - part, tuple(mm), coeff * c)

    rec(0, a, ((), (), (), ()), Fraction(1))
    return {k: v for k, v in out.items() if v}


def _merge_modes(a, b):
    return tuple(tuple(sorted(x + y, reverse=True)) if y else x for x, y in zip(a, b))


@lru_cache(maxsize=200000)
def _creation_poly(gamma, factors: Tuple[Tuple[int, int], ...], T: int):
    """z^T coefficient of E^-(-gamma,z) * prod_{(i,m)} b_i^-_(m)(z).

    ``b^-_(m)(z) = sum_{k>=m+1} C(k-1, m) b(-k) z^(k-1-m)``.
    """
    out: Dict[tuple, Fraction] = {}

    def rec(idx, remaining, modes, coeff):
        if idx == len(factors):
            for em, c in _eminus(gamma, remaining).items():
                key = _merge_modes(em, modes)
                out[key] = out.get(key, 0) + coeff * c
            return
        i, m = factors[idx]
        for p in range(remaining + 1):  # z-power contributed: p = k-1-m
            k = p + 1 + m
            mm = list(modes)
            mm[i] = mm[i] + (k,)
            rec(idx + 1, remaining - p, tuple(mm), coeff * comb(k - 1, m))

    rec(0, T, ((), (), (), ()), Fraction(1))
    return tuple((k, v) for k, v in out.items() if v)


# ---------------------------------------------------------------------------
# annihilation side
# ---------------------------------------------------------------------------

def _remove_one(t: Tuple[int, ...], k: int) -> Tuple[int, ...]:
    lst = list(t)
    lst.remove(k)
    return tuple(lst)


def _apply_bplus(i: int, m: int, items: Dict[Tuple[tuple, Fraction], object], mu):
    """Apply b_i^+_(m)(z) = sum_{k>=0} (-1)^m C(k+m, m) b_i(k) z^(-k-1-m).

    ``items`` maps (modes, z-power) to coefficients; the exponent ``mu`` is fixed.
    """
    sign = -1 if m % 2 else 1
    out: Dict = {}
    g = GRAM[i]
    mom = g * mu[i]
    for (modes, p), c in items.items():
        if mom:
            key = (modes, p - 1 - m)
            out[key] = out.get(key, 0) + c * sign * mom
        t = modes[i]
        for k in set(t):
            cnt = t.count(k)
            nm = list(modes)
            nm[i] = _remove_one(t, k)
            key = (tuple(nm), p - k - 1 - m)
            out[key] = out.get(key, 0) + c * sign * comb(k + m, m) * cnt * k * g
    return {k: v for k, v in out.items() if v}


def _apply_eplus(gamma, items):
    """Apply E^+(-gamma, z) = exp(-sum_k gamma(k) z^-k / k) to (modes, power) items."""
    out: Dict = {}
    for (modes, p), c in items.items():
        # independent choices per (boson, mode value)
        choices = [((modes, p), c)]
        for i in range(4):
            gi = gamma[i]
            if not gi:
                continue
            t = modes[i]
            for k in sorted(set(t)):
                cnt = t.count(k)
                base = -GRAM[i] * gi
                new = []
                for (md, pw), cc in choices:
                    for j in range(cnt + 1):
                        coef = comb(cnt, j) * base ** j
                        if not coef:
                            continue
                        if j:
                            nm = list(md)
                            tt = list(nm[i])
                            for _ in range(j):
                                tt.remove(k)
                            nm[i] = tuple(tt)
                            md2 = tuple(nm)
                        else:
                            md2 = md
                        new.append(((md2, pw - k * j), cc * coef))
                choices = new
        for key, cc in choices:
            out[key] = out.get(key, 0) + cc
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# the mode of a monomial on a monomial
# ---------------------------------------------------------------------------

def _factors(u: Mono) -> List[Tuple[int, int]]:
    return [(i, k - 1) for i in range(4) for k in u.modes[i]]


def mode_bound(u: Mono, w: Mono) -> Fraction:
    """Largest index n with possibly nonzero u_(n) w."""
    return heisenberg_degree(u) + heisenberg_degree(w) - 1 - pairing(u.exp, w.exp)


def index_coset_ok(u: Mono, n, w: Mono) -> bool:
    return (as_fraction(n) + pairing(u.exp, w.exp)).denominator == 1


@lru_cache(maxsize=400000)
def _mode_mono(u: Mono, n: Fraction, w: Mono):
    gamma = u.exp
    mu = w.exp
    shift = pairing(gamma, mu)
    if (n + shift).denominator != 1:
        raise IndexCosetError(f"index {n} not in {-shift} + Z for this pair")
    if n > mode_bound(u, w):
        return ()
    facs = _factors(u)
    sgn = vertex_sign(gamma, mu)
    target_exp = vadd(gamma, mu)
    out: Dict[Mono, Fraction] = {}
    L = len(facs)
    for mask in range(1 << L):
        left = tuple(facs[j] for j in range(L) if mask >> j & 1)
        right = [facs[j] for j in range(L) if not mask >> j & 1]
        items = {(w.modes, Fraction(0)): Fraction(1)}
        for (i, m) in right:
            items = _apply_bplus(i, m, items, mu)
            if not items:
                break
        if not items:
            continue
        items = _apply_eplus(gamma, items)
        for (modes, p), c in items.items():
            T = -n - 1 - (p + shift)
            if T < 0 or T.denominator != 1:
                continue
            for cm, cc in _creation_poly(gamma, left, int(T)):
                nm = Mono(target_exp, _merge_modes(modes, cm))
                out[nm] = out.get(nm, 0) + sgn * c * cc
    return tuple((k, v) for k, v in out.items() if v)


def mode_action(a: State, n, w: State) -> State:
    """The mode a_(n) applied to w; ``n`` may be rational on shifted spaces."""
    n = as_fraction(n)
    out: Dict[Mono, object] = {}
    for u, cu in a.terms.items():
        for v, cv in w.terms.items():
            res = _mode_mono(u, n, v)
            if not res:
                continue
            c = cu * cv
            for m, x in res:
                out[m] = out.get(m, 0) + c * x
    return State(out)


def product(a: State, n: int, b: State) -> State:
    """The n-th product a_(n) b inside the vertex algebra."""
    return mode_action(a, n, b)


def bracket_bound(a: State, b: State) -> int:
    """An index beyond which all a_(j) b vanish (for lambda brackets)."""
    best = -1
    for u in a.terms:
        for v in b.terms:
            nb = mode_bound(u, v)
            best = max(best, int(nb) if nb.denominator == 1 else int(nb // 1))
    return best


@dataclass(frozen=True)
class LambdaBracket:
    """Coefficients of [a_lambda b] = sum_j lambda^j / j! a_(j) b, keyed by j."""

    coefficients: Dict[int, State]

    def __getitem__(self, j):
        return self.coefficients.get(j, State())

    def nonzero(self):
        return {j: s for j, s in self.coefficients.items() if s}


def lambda_bracket(a: State, b: State) -> LambdaBracket:
    coeffs = {}
    for j in range(0, bracket_bound(a, b) + 1):
        r = product(a, j, b)
        if r:
            coeffs[j] = r
    return LambdaBracket(coeffs)


def translate(a: State) -> State:
    """The translation operator D = a_(-2) 1 applied to a."""
    out: Dict[Mono, object] = {}
    for m, c in a.terms.items():
        gamma = m.exp
        # gamma(-1) e^gamma part
        for i in range(4):
            if gamma[i]:
                nm = Mono(m.exp, _merge_modes(m.modes, tuple((1,) if j == i else () for j in range(4))))
                out[nm] = out.get(nm, 0) + c * gamma[i]
        # derivation on the modes: b(-k) -> k b(-k-1)
        for i in range(4):
            t = m.modes[i]
            for k in set(t):
                cnt = t.count(k)
                tt = list(t)
                tt.remove(k)
                tt.append(k + 1)
                modes = list(m.modes)
                modes[i] = tuple(sorted(tt, reverse=True))
                nm = Mono(m.exp, tuple(modes))
                out[nm] = out.get(nm, 0) + c * cnt * k
    return State(out)


def omega() -> State:
    """Conformal vector of the (alpha, beta, delta) system."""
    from .core import creation, ALPHA, BETA
    one = vacuum()
    half = Fraction(1, 2)
    a1 = creation(ALPHA, 1, one)
    b1 = creation(BETA, 1, one)
    d1 = creation(DELTA, 1, one)
    return (creation(ALPHA, 1, a1) * half - creation(ALPHA, 2, one) * half
            - creation(BETA, 1, b1) * half + creation(BETA, 2, one) * half
            + creation(DELTA, 1, d1) * half - creation(DELTA, 2, one))


def omega_full() -> State:
    """omega - (1/2) phi(-1)^2 1, the conformal vector including the phi boson."""
    from .core import creation
    one = vacuum()
    p1 = creation(PHI, 1, one)
    return omega() - creation(PHI, 1, p1) * Fraction(1, 2)


_OMEGA_FULL = None


def weight(a: State) -> Fraction:
    """L(0)-eigenvalue computed through the engine; raises on non-eigenvectors."""
    global _OMEGA_FULL
    if _OMEGA_FULL is None:
        _OMEGA_FULL = omega_full()
    if not a:
        raise NotHomogeneous("zero state has no weight")
    r = mode_action(_OMEGA_FULL, 1, a)
    m, c = next(iter(a))
    lam = r.coefficient(m) / c
    if r != a * lam:
        raise NotHomogeneous("state is not an L(0) eigenvector")
    return lam


def commutator_check(a: State, b: State, m, n, c: State) -> bool:
    """Borcherds commutator formula [a_m, b_n] c = sum_j C(m, j) (a_(j) b)_(m+n-j) c."""
    m = as_fraction(m)
    n = as_fraction(n)
    sign = -1 if parity_bit(a) and parity_bit(b) else 1
    lhs = mode_action(a, m, mode_action(b, n, c)) - mode_action(b, n, mode_action(a, m, c)) * sign
    rhs = State()
    for j, s in lambda_bracket(a, b).coefficients.items():
        rhs = rhs + mode_action(s, m + n - j, c) * gbinom(m, j)
    return lhs == rhs


# ---------------------------------------------------------------------------
# spaces and graded blocks
# ---------------------------------------------------------------------------

def _solve_integral(gens, vec) -> Optional[Tuple[int, ...]]:
    """Integer coordinates of ``vec`` in the basis ``gens`` (linearly independent), or None."""
    r = len(gens)
    if r == 0:
        return () if all(x == 0 for x in vec) else None
    # augmented 4 x (r+1) system, exact Gauss-Jordan
    rows = [[Fraction(gens[j][i]) for j in range(r)] + [Fraction(vec[i])] for i in range(4)]
    piv_cols = []
    rix = 0
    for col in range(r):
        p = next((i for i in range(rix, 4) if rows[i][col] != 0), None)
        if p is None:
            return None
        rows[rix], rows[p] = rows[p], rows[rix]
        pv = rows[rix][col]
        rows[rix] = [x / pv for x in rows[rix]]
        for i in range(4):
            if i != rix and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rix])]
        piv_cols.append(col)
        rix += 1
    for i in range(rix, 4):
        if rows[i][r] != 0:
            return None
    sol = [rows[i][r] for i in range(r)]
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


@dataclass(frozen=True)
class ShiftedSpace:
    """Fock space over the exponents ``shift + sum Z generators``.

    ``bosons`` lists the free bosons whose creation modes are present.
    ``box`` bounds the integer coordinates used when enumerating exponents.
    """

    generators: Tuple[Tuple[Fraction, ...], ...]
    shift: Tuple[Fraction, ...] = ZERO
    bosons: Tuple[int, ...] = (0, 1, 2)
    label: str = ""
    box: int = 8

    def contains(self, mu) -> bool:
        return _solve_integral(self.generators, tuple(as_fraction(x) - s for x, s in zip(mu, self.shift))) is not None

    def exponents(self):
        return _space_exponents(self)[0]

    def block_exponents(self, weight, charge, weight_func=None):
        """Exponents of the given charge whose bare weight is <= weight (integer gap)."""
        weight = as_fraction(weight)
        out = []
        for mu, ch, bw in self.exponents():
            if ch != charge:
                continue
            gap = weight - bw
            if gap >= 0 and gap.denominator == 1:
                out.append(mu)
        return out

    def charges_up_to(self, max_weight, window: Callable[[tuple], bool] = lambda c: True):
        """All (weight, charge) keys with a nonzero block and weight <= max_weight."""
        max_weight = as_fraction(max_weight)
        keys = set()
        nb = len(self.bosons)
        for mu, ch, bw in self.exponents():
            if bw > max_weight or not window(ch):
                continue
            w = bw
            while w <= max_weight:
                if nb or w == bw:
                    keys.add((w, ch))
                w += 1
        return sorted(keys)


@lru_cache(maxsize=None)
def _space_exponents(space: ShiftedSpace):
    K = space.box
    r = len(space.generators)
    out = []
    for coords in itertools.product(range(-K, K + 1), repeat=r):
        mu = tuple(space.shift)
        for cf, g in zip(coords, space.generators):
            if cf:
                mu = vadd(mu, tuple(cf * Fraction(x) for x in g))
        mu = tuple(as_fraction(x) for x in mu)
        bw = conformal_weight(Mono(mu, ((), (), (), ())))
        out.append((mu, _charges_of(mu), bw, max(abs(c) for c in coords) if coords else 0))
    return tuple((mu, ch, bw) for mu, ch, bw, _ in out), tuple(out)


def _boundary_guard(space: ShiftedSpace, weight, charge):
    """Raise if an exponent at the edge of the enumeration box could still contribute."""
    _, full = _space_exponents(space)
    for mu, ch, bw, edge in full:
        if edge == space.box and ch == charge and bw <= weight:
            raise OverflowError(
                f"exponent box {space.box} too small for block weight={weight} charge={charge}")


@lru_cache(maxsize=None)
def _colored_partitions(n: int, bosons: Tuple[int, ...]):
    """All 4-tuples of descending mode tuples of total degree n on the given bosons."""
    if not bosons:
        return (((), (), (), ()),) if n == 0 else ()
    out = []
    first, rest = bosons[0], bosons[1:]
    for d in range(n + 1):
        if not rest and d != n:
            continue
        for lam in _partitions(d):
            for tail in _colored_partitions(n - d, rest):
                mm = list(tail)
                mm[first] = lam
                out.append(tuple(mm))
    return tuple(out)


@dataclass
class GradedBlock:
    """A (weight, charge) block of a shifted space with its monomial basis."""

    space: ShiftedSpace
    weight: Fraction
    charge: Tuple[Fraction, Fraction, Fraction]
    basis: List[Mono] = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)

    def states(self) -> List[State]:
        return [State.mono(m) for m in self.basis]


def block_basis(space: ShiftedSpace, weight, charge) -> GradedBlock:
    weight = as_fraction(weight)
    charge = tuple(as_fraction(x) for x in charge)
    _boundary_guard(space, weight, charge)
    basis = []
    for mu in space.block_exponents(weight, charge):
        gap = int(weight - conformal_weight(Mono(mu, ((), (), (), ()))))
        for modes in _colored_partitions(gap, tuple(space.bosons)):
            basis.append(Mono(mu, modes))
    basis.sort()
    return GradedBlock(space, weight, charge, basis)


@dataclass(frozen=True)
class FieldMode:
    """A fixed mode v_(n) viewed as an operator between spaces."""

    vector: State
    index: Fraction
    integral_only: bool = False

    def apply(self, s: State) -> State:
        if not self.integral_only:
            return mode_action(self.vector, self.index, s)
        out = State()
        for m, c in s.terms.items():
            ok = all((pairing(u.exp, m.exp)).denominator == 1 for u in self.vector.terms)
            if ok:
                out = out + mode_action(self.vector, self.index, State.mono(m, c))
        return out

    __call__ = apply


def screening_map(v: State, source: ShiftedSpace = None, target: ShiftedSpace = None) -> FieldMode:
    """Res_z Y(v, z) as an operator; zero on blocks where the exponent is non-integral."""
    return FieldMode(v, Fraction(0), integral_only=True)


def kernel_block(op: Callable[[State], State], block: GradedBlock) -> List[State]:
    """Exact basis of the kernel of ``op`` restricted to ``block``."""
    images = [op(State.mono(m)).terms for m in block.basis]
    ker = nullspace(images)
    out = []
    for combo in ker:
        out.append(State({block.basis[i]: c for i, c in combo.items()}))
    return out


# ---------------------------------------------------------------------------
# subspaces generated by fields
# ---------------------------------------------------------------------------

@dataclass
class GeneratedSubspace:
    """Graded span produced by closing a seed under modes of generators."""

    blocks: Dict[tuple, List[State]]

    def dims(self) -> Dict[tuple, int]:
        return {k: len(v) for k, v in self.blocks.items()}

    def dims_by_weight(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for (w, _), v in self.blocks.items():
            out[w] = out.get(w, 0) + len(v)
        return out

    def contains(self, s: State) -> bool:
        key = (weight_of(s), _charge(s))
        el = Eliminator()
        for b in self.blocks.get(key, []):
            el.add(b.terms)
        rem, _ = el.reduce(s.terms)
        return not rem


def _charge(s: State):
    from .core import charge
    return charge(s)


def generated_subspace(generators: Sequence[State], max_weight, seed: State = None,
                       creation_only: Optional[bool] = None,
                       charge_window: Callable[[tuple], bool] = lambda c: True,
                       key_filter: Optional[Callable[[Fraction, tuple], bool]] = None) -> GeneratedSubspace:
    """Span of all iterated modes of ``generators`` applied to ``seed``, up to ``max_weight``.

    For the vacuum seed only negative modes are needed (PBW spanning for
    vertex algebras strongly generated by the given fields); for other seeds
    all modes are used and the closure is iterated to a fixed point.
    ``key_filter(weight, charge)`` may prune blocks that cannot contribute to
    the blocks of interest.
    """
    max_weight = as_fraction(max_weight)
    if seed is None:
        seed = vacuum()
    if creation_only is None:
        creation_only = seed == vacuum()
    gens = [(g, weight_of(g)) for g in generators]
    elims: Dict[tuple, Eliminator] = {}
    blocks: Dict[tuple, List[State]] = {}

    def add(s: State) -> bool:
        key = (weight_of(s), _charge(s))
        if not charge_window(key[1]):
            return False
        if key_filter is not None and not key_filter(*key):
            return False
        el = elims.setdefault(key, Eliminator())
        if el.add(s.terms):
            blocks.setdefault(key, []).append(s)
            return True
        return False

    work = []
    if add(seed):
        work.append(seed)
    while work:
        w = work.pop()
        ww = weight_of(w)
        for g, wg in gens:
            # target weight = wg + ww - n - 1 <= max_weight
            nmin = wg + ww - 1 - max_weight
            nmax = max(mode_bound(u, v) for u in g.terms for v in w.terms)
            if creation_only:
                nmax = min(nmax, Fraction(-1))
            u0 = next(iter(g.terms))
            v0 = next(iter(w.terms))
            base = -pairing(u0.exp, v0.exp)
            # smallest n >= nmin in base + Z
            k = -((base - nmin) // 1)
            n = base + k
            while n <= nmax:
                r = mode_action(g, n, w)
                if r:
                    for part in _split_homogeneous(r):
                        if weight_of(part) <= max_weight and add(part):
                            work.append(part)
                n += 1
    return GeneratedSubspace(blocks)


def _split_homogeneous(s: State) -> List[State]:
    groups: Dict[tuple, Dict] = {}
    for m, c in s.terms.items():
        key = (conformal_weight(m), _charges_of(m.exp))
        groups.setdefault(key, {})[m] = c
    return [State(t) for t in groups.values()]


# ---------------------------------------------------------------------------
# optional block cache for generated subspaces
# ---------------------------------------------------------------------------

_BLOCK_CACHE = None


def set_block_cache(cache) -> None:
    """Install a :class:`voalab.cache.BlockCache` (or None) used by cached_generated_subspace."""
    global _BLOCK_CACHE
    _BLOCK_CACHE = cache


def _generator_hash(generators: Sequence[State]) -> str:
    import hashlib
    text = "|".join(g.to_json() for g in generators)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _fmt_charge(ch) -> List[str]:
    return [f"{as_fraction(x).numerator}/{as_fraction(x).denominator}" for x in ch]


def cached_generated_subspace(label: str, generators: Sequence[State], max_weight,
                              key_filter=None, filter_tag: str = "") -> GeneratedSubspace:
    """generated_subspace with blocks stored in the installed block cache.

    Blocks are keyed by (space label, weight, charge, generator-set hash, cutoff,
    filter tag); an index entry lists the blocks of one closure.  Any missing
    or corrupted block triggers a full recomputation.
    """
    max_weight = as_fraction(max_weight)
    cache = _BLOCK_CACHE
    if cache is None:
        return generated_subspace(generators, max_weight, key_filter=key_filter)
    gh = _generator_hash(generators)
    base = {"label": label, "generators": gh, "max_weight": str(max_weight), "filter": filter_tag}
    index = cache.get(dict(base, kind="index"))
    if index is not None:
        blocks: Dict[tuple, List[State]] = {}
        for w, ch in index:
            payload = cache.get(dict(base, kind="block", weight=w, charge=ch))
            if payload is None:
                blocks = None
                break
            key = (Fraction(w), tuple(Fraction(x) for x in ch))
            blocks[key] = [State.from_json_obj(o) for o in payload]
        if blocks is not None:
            return GeneratedSubspace(blocks)
    gen = generated_subspace(generators, max_weight, key_filter=key_filter)
    keys = []
    for (w, ch), vecs in sorted(gen.blocks.items()):
        wk, ck = str(w), _fmt_charge(ch)
        cache.put(dict(base, kind="block", weight=wk, charge=ck), [v.to_json_obj() for v in vecs])
        keys.append([wk, ck])
    cache.put(dict(base, kind="index"), keys)
    return gen
