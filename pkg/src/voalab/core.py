"""Lattice data, the 2-cocycle and the normal form of Fock states.

Everything lives on the rank-4 lattice with ordered basis (alpha, beta, delta,
phi) and diagonal Gram matrix diag(1, -1, 1, -1).  A Fock monomial is a
lattice exponential ``e^mu`` with a commutative monomial in the creation
modes ``b(-n)`` of the four free bosons in front of it.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import floor
from typing import Dict, Iterable, Iterator, NamedTuple, Tuple

from .scalar import Scalar, as_fraction, format_scalar, parse_scalar

__all__ = [
    "GRAM", "BOSONS", "ALPHA", "BETA", "DELTA", "PHI", "ZERO", "RHO", "H_VEC",
    "LatticeVector", "lv", "vadd", "vsub", "vscale", "pairing", "norm", "is_integral",
    "cocycle", "vertex_sign", "Mono", "State", "E", "vacuum", "hmode", "creation",
    "charge", "parity", "heisenberg_degree", "conformal_weight", "NotHomogeneous",
]

GRAM = (1, -1, 1, -1)
BOSONS = ("alpha", "beta", "delta", "phi")

LatticeVector = Tuple[Fraction, Fraction, Fraction, Fraction]

_F0 = Fraction(0)


def lv(a=0, b=0, c=0, d=0) -> LatticeVector:
    """Build a lattice vector from its (alpha, beta, delta, phi) coordinates."""
    return (as_fraction(a), as_fraction(b), as_fraction(c), as_fraction(d))


ALPHA = lv(1)
BETA = lv(0, 1)
DELTA = lv(0, 0, 1)
PHI = lv(0, 0, 0, 1)
ZERO = lv()
# L(0) = (1/2)<mu,mu> - <RHO,mu> + Heisenberg degree for the conformal vector omega
RHO = lv(Fraction(-1, 2), Fraction(1, 2), -1, 0)
# h = (-2 beta + delta)(-1)1
H_VEC = lv(0, -2, 1, 0)


class NotHomogeneous(ValueError):
    """Raised when a grading is requested for a state that mixes eigenvalues."""


def vadd(u, v) -> LatticeVector:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2], u[3] + v[3])


def vsub(u, v) -> LatticeVector:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2], u[3] - v[3])


def vscale(c, u) -> LatticeVector:
    c = as_fraction(c)
    return (c * u[0], c * u[1], c * u[2], c * u[3])


def pairing(u, v) -> Fraction:
    """The diagonal bilinear form <u, v>."""
    return u[0] * v[0] - u[1] * v[1] + u[2] * v[2] - u[3] * v[3]


def norm(u) -> Fraction:
    return pairing(u, u)


def is_integral(u) -> bool:
    return all(Fraction(x).denominator == 1 for x in u)


def _floor(u) -> Tuple[int, int, int, int]:
    return tuple(floor(x) for x in u)


def _eps_exponent(x, y) -> int:
    # basis-ordered table: eps(b_i, b_j) = -1 for i > j; eps(b, b) = -1 on the
    # negative-norm generators beta, phi so that eps(g, g) = (-1)^{N(N-1)/2}
    return (x[1] * y[0] + x[2] * (y[0] + y[1]) + x[3] * (y[0] + y[1] + y[2])
            + x[1] * y[1] + x[3] * y[3])


def cocycle(u, v) -> int:
    """Bimultiplicative 2-cocycle on the integral lattice, valued in {1, -1}.

    Satisfies eps(u, v) / eps(v, u) = (-1)^(<u,v> + <u,u><v,v>).
    """
    if not (is_integral(u) and is_integral(v)):
        raise ValueError("cocycle is only defined on integral lattice vectors")
    return -1 if int(_eps_exponent(u, v)) % 2 else 1


def vertex_sign(eta, mu) -> int:
    """Cocycle factor used by Y(e^eta, z) acting on e^mu.

    For integral ``eta`` this is ``cocycle(eta, floor(mu))``, a character of
    the lattice in the second slot, so every coset ``mu + L`` is a module.
    Exponents with half-integral (alpha, beta)-part and equal alpha/beta
    coordinates (the screening sector Z(alpha+beta)/2 + Z delta + Z phi) use
    the restriction of the same table to the delta/phi coordinates, which is
    where the two sectors overlap.
    """
    if is_integral(eta):
        return -1 if int(_eps_exponent(eta, _floor(mu))) % 2 else 1
    if eta[0] == eta[1] and eta[2].denominator == 1 and eta[3].denominator == 1:
        fm = _floor(mu)
        return -1 if int(eta[3] * (fm[2] + fm[3])) % 2 else 1
    raise ValueError(f"no cocycle for acting exponent {eta}")


class Mono(NamedTuple):
    """Fock monomial: creation modes per boson (descending tuples) times e^exp."""

    exp: LatticeVector
    modes: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


_NO_MODES = ((), (), (), ())


def heisenberg_degree(m: Mono) -> int:
    return sum(sum(t) for t in m.modes)


def conformal_weight(m: Mono) -> Fraction:
    """L(0)-eigenvalue of a monomial for omega - (1/2)phi(-1)^2 (equals omega off the phi sector)."""
    mu = m.exp
    return norm(mu) / 2 - pairing(RHO, mu) + heisenberg_degree(m)


def _insert(t: Tuple[int, ...], k: int) -> Tuple[int, ...]:
    return tuple(sorted(t + (k,), reverse=True))


def mono_with_mode(m: Mono, i: int, k: int) -> Mono:
    modes = list(m.modes)
    modes[i] = _insert(modes[i], k)
    return Mono(m.exp, tuple(modes))


def _clean(d):
    return {k: v for k, v in d.items() if v}


class State:
    """Finite linear combination of Fock monomials with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Mono, object] | None = None):
        self.terms = _clean(terms or {})

    # -- construction -----------------------------------------------------
    @classmethod
    def mono(cls, m: Mono, c=1) -> "State":
        return cls({m: as_fraction(c) if not isinstance(c, Scalar) else c})

    # -- vector space -----------------------------------------------------
    def __add__(self, other: "State") -> "State":
        if not isinstance(other, State):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return State(out)

    def __sub__(self, other: "State") -> "State":
        return self + (-other)

    def __neg__(self) -> "State":
        return State({k: -v for k, v in self.terms.items()})

    def __mul__(self, c) -> "State":
        if isinstance(c, str):
            c = parse_scalar(c)
        if isinstance(c, int):
            c = Fraction(c)
        if not isinstance(c, (Fraction, Scalar)):
            return NotImplemented
        return State({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "State":
        return State({k: v / c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, State):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Mono, object]]:
        return iter(sorted(self.terms.items()))

    def coefficient(self, m: Mono):
        return self.terms.get(m, Fraction(0))

    def normalize(self) -> "State":
        """Re-sort every monomial's modes and merge duplicates (idempotent)."""
        out: Dict[Mono, object] = {}
        for m, c in self.terms.items():
            nm = Mono(tuple(as_fraction(x) for x in m.exp),
                      tuple(tuple(sorted(t, reverse=True)) for t in m.modes))
            out[nm] = out.get(nm, 0) + c
        return State(out)

    # -- serialization ----------------------------------------------------
    def to_json_obj(self):
        rows = []
        for m, c in sorted(self.terms.items()):
            rows.append({
                "exp": [f"{x.numerator}/{x.denominator}" for x in m.exp],
                "modes": [list(t) for t in m.modes],
                "coeff": format_scalar(c),
            })
        return {"terms": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "State":
        terms = {}
        for row in obj["terms"]:
            m = Mono(tuple(Fraction(x) for x in row["exp"]),
                     tuple(tuple(int(k) for k in t) for t in row["modes"]))
            terms[m] = parse_scalar(row["coeff"])
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "State":
        return cls.from_json_obj(json.loads(text))

    def __repr__(self):
        if not self.terms:
            return "State(0)"
        return "State(" + " + ".join(f"{format_scalar(c)}*{_mono_str(m)}" for m, c in self) + ")"


def _mono_str(m: Mono) -> str:
    parts = []
    for name, t in zip(("a", "b", "d", "p"), m.modes):
        parts.extend(f"{name}(-{k})" for k in t)
    ex = ",".join(str(x) for x in m.exp)
    return "".join(parts) + f"e^[{ex}]"


def E(mu=ZERO, c=1) -> State:
    """The state c * e^mu."""
    return State.mono(Mono(tuple(as_fraction(x) for x in mu), _NO_MODES), c)


def vacuum() -> State:
    return E(ZERO)


def hmode(h, n: int, s: State) -> State:
    """Heisenberg mode h(n) of the lattice vector ``h`` applied to ``s``."""
    out: Dict[Mono, object] = {}
    if n < 0:
        k = -n
        for m, c in s.terms.items():
            for i in range(4):
                if h[i]:
                    nm = mono_with_mode(m, i, k)
                    out[nm] = out.get(nm, 0) + c * h[i]
    elif n == 0:
        for m, c in s.terms.items():
            p = pairing(h, m.exp)
            if p:
                out[m] = out.get(m, 0) + c * p
    else:
        for m, c in s.terms.items():
            for i in range(4):
                if not h[i]:
                    continue
                cnt = m.modes[i].count(n)
                if not cnt:
                    continue
                t = list(m.modes[i])
                t.remove(n)
                modes = list(m.modes)
                modes[i] = tuple(t)
                nm = Mono(m.exp, tuple(modes))
                out[nm] = out.get(nm, 0) + c * cnt * n * GRAM[i] * h[i]
    return State(out)


def creation(h, k: int, s: State) -> State:
    """Apply h(-k), k >= 1."""
    if k < 1:
        raise ValueError("creation mode index must be positive")
    return hmode(h, -k, s)


def _charges_of(mu) -> Tuple[Fraction, Fraction, Fraction]:
    return (pairing(H_VEC, mu), pairing(DELTA, mu), pairing(PHI, mu))


def charge(s: State) -> Tuple[Fraction, Fraction, Fraction]:
    """Eigenvalues of (h(0), delta(0), phi(0)) on a charge-homogeneous state."""
    if not s.terms:
        raise NotHomogeneous("zero state has no charge")
    cs = {_charges_of(m.exp) for m in s.terms}
    if len(cs) != 1:
        raise NotHomogeneous(f"state mixes charges {sorted(cs)}")
    return cs.pop()


def mono_parity(m: Mono) -> int:
    mu = m.exp if is_integral(m.exp) else _floor(m.exp)
    return int(norm(tuple(Fraction(x) for x in mu))) % 2


def parity(s: State) -> str:
    """'even' or 'odd' from <exp, exp> mod 2 (the floor representative off the lattice)."""
    if not s.terms:
        return "even"
    ps = {mono_parity(m) for m in s.terms}
    if len(ps) != 1:
        raise NotHomogeneous("state mixes parities")
    return "odd" if ps.pop() else "even"


def parity_bit(s: State) -> int:
    return 1 if parity(s) == "odd" else 0


def weight_of(s: State) -> Fraction:
    """Fast L(0) eigenvalue from the monomial formula; raises on mixed weights."""
    ws = {conformal_weight(m) for m in s.terms}
    if len(ws) > 1:
        raise NotHomogeneous(f"state mixes weights {sorted(ws)}")
    return ws.pop() if ws else Fraction(0)


def linear_combination(pairs: Iterable[Tuple[object, State]]) -> State:
    out: Dict[Mono, object] = {}
    for c, s in pairs:
        if not c:
            continue
        for m, v in s.terms.items():
            out[m] = out.get(m, 0) + c * v
    return State(out)
