"""Modules over the N=4 algebra V realized on shifted lattice spaces.

Covered here:

* the relaxed modules M(r) on exponents beta + (Z + lam)(alpha+beta) + Z delta,
  lam = -r-1, and their twisted versions M^mu(r) with an extra mu*delta shift;
* the twisted Fock module M x F^mu (kernel of e^alpha_0 on Pi(0) x F^mu);
* Pi(lam) x F and the logarithmic deformation by v = e^{-(alpha+beta)/2 + delta};
* the spectral flow operator Delta(h, z) and bigraded characters.

Twisted modules are realized with the plain lattice action on a shifted
exponent set; fractional mode indices appear wherever the pairing of the
field exponent with the shift is fractional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .core import (
    ALPHA, BETA, DELTA, ZERO, State, E, _charges_of, as_fraction,
    creation, lv, vadd, vscale, weight_of,
)
from .report import VerificationReport
from .vertex import (
    ShiftedSpace, block_basis, commutator_check, gbinom, kernel_block, mode_action,
    mode_bound, omega, screening_map, translate,
)

__all__ = [
    "ModuleDescriptor", "LowestComponent", "BigradedCharacter", "delta_expansion",
    "delta_apply", "deformed_mode", "build_module", "lowest_component", "bigraded_dims",
    "character_product", "log_deform", "extension_check", "twisted_commutator_samples",
    "verify_relaxed", "verify_character", "verify_twisted", "verify_logarithmic",
    "U_formulas", "LogState",
]

KINDS = ("relaxed", "twisted-fock", "spectral-flow", "spi", "log")
AB = vadd(ALPHA, BETA)
LOG_VECTOR = lv(Fraction(-1, 2), Fraction(-1, 2), 1)


# ---------------------------------------------------------------------------
# module descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModuleDescriptor:
    """Which module, with its parameters.

    ``kind`` is one of ``relaxed`` (M(r)), ``twisted-fock`` (M x F^mu),
    ``spectral-flow`` (M^mu(r)), ``spi`` (Pi(lam) x F) or ``log`` (SV(lam)).
    """

    kind: str
    r: Optional[Fraction] = None
    mu: Fraction = Fraction(0)
    lam: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown module kind {self.kind!r}")
        object.__setattr__(self, "mu", as_fraction(self.mu))
        if self.r is not None:
            object.__setattr__(self, "r", as_fraction(self.r))
        if self.lam is not None:
            object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.kind in ("relaxed", "spectral-flow") and self.r is None:
            raise ValueError("relaxed modules need r")
        if self.kind in ("spi", "log") and self.lam is None:
            raise ValueError("Pi-type modules need lambda")

    @property
    def twist(self) -> Fraction:
        return self.mu

    def shift(self):
        if self.kind in ("relaxed", "spectral-flow"):
            lam = -self.r - 1
            s = vadd(BETA, vscale(lam, AB))
            return vadd(s, vscale(self.mu, DELTA))
        if self.kind == "twisted-fock":
            return vscale(self.mu, DELTA)
        return vscale(self.lam, AB)

    def space(self) -> ShiftedSpace:
        gens = (AB, DELTA) if self.kind != "log" else (vscale(Fraction(1, 2), AB), DELTA)
        return ShiftedSpace(gens, tuple(as_fraction(x) for x in self.shift()),
                            bosons=(0, 1, 2), label=self.label(), box=12)

    def label(self) -> str:
        if self.kind == "relaxed":
            return f"M({self.r})"
        if self.kind == "spectral-flow":
            return f"M^{self.mu}({self.r})"
        if self.kind == "twisted-fock":
            return f"MxF^{self.mu}"
        if self.kind == "spi":
            return f"SPi({self.lam})"
        return f"SV({self.lam})"

    def hypotheses(self) -> List[str]:
        """Violated parameter conditions (empty when all hold)."""
        bad = []
        if self.r is not None and self.r.denominator == 1:
            bad.append("r is an integer")
        if self.mu and (2 * self.mu).denominator == 1:
            bad.append("mu lies in (1/2)Z")
        if self.kind == "spectral-flow" and self.r is not None and (self.r - self.mu).denominator == 1:
            bad.append("r - mu is an integer")
        return bad


@dataclass
class ModuleHandle:
    descriptor: ModuleDescriptor
    space: ShiftedSpace
    kernel_op: Optional[Callable[[State], State]] = None
    flagged: List[str] = field(default_factory=list)

    def block(self, weight, charge) -> List[State]:
        """A basis of the (weight, charge) block of the module."""
        blk = block_basis(self.space, weight, charge)
        if self.kernel_op is None:
            return blk.states()
        return kernel_block(self.kernel_op, blk)

    def keys(self, max_weight, window: Callable[[tuple], bool]):
        return self.space.charges_up_to(max_weight, window)


def build_module(d: ModuleDescriptor) -> ModuleHandle:
    """Module handle with enumerable blocks; hypothesis violations are flagged."""
    kop = screening_map(E(ALPHA)) if d.kind == "twisted-fock" else None
    return ModuleHandle(d, d.space(), kop, d.hypotheses())


# ---------------------------------------------------------------------------
# Delta(h, z)
# ---------------------------------------------------------------------------

def _is_heisenberg(h: State) -> bool:
    return all(m.exp == ZERO and sum(len(t) for t in m.modes) == 1 and
               sum(m.modes, ()) == (1,) for m in h.terms)


def delta_expansion(h: State, a: State, max_order: int = 64) -> Dict[Tuple[int, Fraction], State]:
    """Terms of Delta(h, z) a keyed by (order in h, power of z).

    Delta(h, z) = z^{h(0)} exp(sum_{n>=1} h(n)/(-n) (-z)^{-n}).  The factor
    z^{h(0)} is applied on h(0)-eigenvectors only; a state on which h(0) is
    neither diagonal nor zero raises ValueError (the expansion would need log z).
    """
    out: Dict[Tuple[int, Fraction], State] = {}
    layer: Dict[Fraction, State] = {Fraction(0): a}
    order = 0
    while layer:
        for p, s in layer.items():
            for piece in _charge_pieces(s):
                img = mode_action(h, 0, piece)
                if not img:
                    ev = Fraction(0)
                else:
                    m0, c0 = next(iter(piece))
                    ev = img.coefficient(m0) / c0
                    if img != piece * ev:
                        raise ValueError("h(0) is not semisimple on this state")
                    ev = as_fraction(ev)
                key = (order, p + ev)
                out[key] = out.get(key, State()) + piece
        order += 1
        if order > max_order:
            raise ValueError("Delta(h, z) expansion did not terminate")
        nxt: Dict[Fraction, State] = {}
        for p, s in layer.items():
            top = max(mode_bound(u, w) for u in h.terms for w in s.terms)
            n = 1
            while n <= top:
                t = mode_action(h, n, s)
                if t:
                    c = Fraction((-1) ** (n + 1), n) / order
                    nxt[p - n] = nxt.get(p - n, State()) + t * c
                n += 1
        layer = {p: s for p, s in nxt.items() if s}
    return {k: v for k, v in out.items() if v}


def _charge_pieces(s: State) -> List[State]:
    groups: Dict = {}
    for m, c in s.terms.items():
        groups.setdefault(_charges_of(m.exp), {})[m] = c
    return [State(t) for _, t in sorted(groups.items())]


def delta_apply(h: State, a: State) -> Dict[Fraction, State]:
    """Delta(h, z) a as a finite map z-power -> State."""
    out: Dict[Fraction, State] = {}
    for (_, p), s in delta_expansion(h, a).items():
        out[p] = out.get(p, State()) + s
    return {p: s for p, s in sorted(out.items()) if s}


def deformed_mode(h: State, a: State, n, w: State) -> State:
    """The mode a~_n w of Y(Delta(h, z) a, z) w."""
    n = as_fraction(n)
    out = State()
    for p, s in delta_apply(h, a).items():
        out = out + mode_action(s, n + p, w)
    return out


# ---------------------------------------------------------------------------
# lowest components
# ---------------------------------------------------------------------------

def U_formulas(mu, r, i):
    """Coefficients (e, h, f) of U_{mu,r} on E_i: e E_i = E_{i-1}, h, f E_i = c E_{i+1}."""
    return (Fraction(1), -2 * r - 2 * i + mu, -(r + i + 1) * (r + i - mu))


@dataclass
class LowestComponent:
    """Matrices of e(0), h(0), f(0) on the lines E_i (after the sign gauge)."""

    indices: List[int]
    basis: Dict[int, State]
    e: Dict[int, object]
    h: Dict[int, object]
    f: Dict[int, object]
    gauge: Dict[int, int]
    sl2_param: Fraction

    def casimir(self, i):
        """Omega = ef + fe + h^2/2 on E_i (needs i-1, i+1 in range)."""
        return (self.f[i] * self.e[i + 1] + self.e[i] * self.f[i - 1] + self.h[i] ** 2 / 2)


def _line_coefficient(img: State, target: State):
    """c with img = c * target, or None."""
    if not img:
        return Fraction(0)
    m, c = next(iter(target))
    x = img.coefficient(m) / c
    return x if img == target * x else None


def lowest_component(d: ModuleDescriptor, index_range=(-5, 5)) -> LowestComponent:
    """Zero modes of e, h, f on E_i = e^{beta + (mu-1) delta - (r+1+i)(alpha+beta)}.

    The lines E_i are rescaled by signs g_i so that e E_i = E_{i-1} holds
    exactly whenever the engine gives e E_i = +-E_{i-1}.
    """
    from .n4 import build_generators
    if d.kind not in ("relaxed", "spectral-flow"):
        raise ValueError("lowest_component applies to M(r) and M^mu(r)")
    g = build_generators()
    r, mu = d.r, d.mu
    lo, hi = index_range
    idx = list(range(lo - 1, hi + 2))

    def Ei(i):
        return E(vadd(vadd(BETA, vscale(mu - 1, DELTA)), vscale(-(r + 1 + i), AB)))

    basis = {i: Ei(i) for i in idx}
    raw_e, raw_h, raw_f = {}, {}, {}
    for i in idx:
        if i - 1 in basis:
            raw_e[i] = _line_coefficient(mode_action(g.e, 0, basis[i]), basis[i - 1])
        raw_h[i] = _line_coefficient(mode_action(g.h, 0, basis[i]), basis[i])
        if i + 1 in basis:
            raw_f[i] = _line_coefficient(mode_action(g.f, 0, basis[i]), basis[i + 1])
    gauge = {idx[0]: 1}
    for i in idx[1:]:
        c = raw_e.get(i)
        gauge[i] = gauge[i - 1] * (-1 if c is not None and c < 0 else 1)
    e = {i: (None if c is None else c * gauge[i] * gauge[i - 1]) for i, c in raw_e.items()}
    f = {i: (None if c is None else c * gauge[i] * gauge[i + 1]) for i, c in raw_f.items()}
    return LowestComponent(idx, {i: basis[i] * gauge[i] for i in idx}, e, dict(raw_h), f, gauge,
                           mu - 1)


def verify_lowest(lc: LowestComponent, r, index_range, rep: VerificationReport, tag: str):
    lo, hi = index_range
    mu = lc.sl2_param
    bad = []
    for i in range(lo, hi + 1):
        ee, hh, ff = U_formulas(mu, r, i)
        if lc.e.get(i) != ee or lc.h.get(i) != hh or lc.f.get(i) != ff:
            bad.append((i, str(lc.e.get(i)), str(lc.h.get(i)), str(lc.f.get(i))))
    rep.add(f"{tag}: U_{{{mu},{r}}} matrices for |i|<={hi}", "sl2 action on the lowest component",
            not bad, detail=str(bad[:3]), witness={"gauge": {str(k): v for k, v in lc.gauge.items()}})
    # sl2 relations on interior lines
    rel_bad = []
    for i in range(lo, hi + 1):
        # [e, f] E_i = h E_i ; [h, e] = 2e ; [h, f] = -2f
        ef = lc.f[i] * lc.e[i + 1] - lc.e[i] * lc.f[i - 1]
        if ef != lc.h[i]:
            rel_bad.append(("ef", i))
        if lc.h[i - 1] * lc.e[i] - lc.e[i] * lc.h[i] != 2 * lc.e[i]:
            rel_bad.append(("he", i))
        if lc.h[i + 1] * lc.f[i] - lc.f[i] * lc.h[i] != -2 * lc.f[i]:
            rel_bad.append(("hf", i))
    rep.add(f"{tag}: sl2 relations", "sl2 commutation relations", not rel_bad, detail=str(rel_bad[:3]))
    target = mu * (mu + 2) / 2
    cas = {i: lc.casimir(i) for i in range(lo, hi + 1)}
    rep.add(f"{tag}: Casimir = {target}", "Casimir eigenvalue mu(mu+2)/2",
            all(v == target for v in cas.values()), detail=str({k: str(v) for k, v in cas.items()}))
    w = {str(weight_of(lc.basis[i])) for i in range(lo, hi + 1)}
    rep.data[f"{tag}: lowest weight"] = sorted(w)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@dataclass
class BigradedCharacter:
    """Dimensions keyed by (L(0)-weight, h(0)-weight)."""

    coefficients: Dict[Tuple[Fraction, Fraction], int]
    weight_cutoff: Fraction
    window: int
    offset: Fraction = Fraction(0)

    def __getitem__(self, key):
        return self.coefficients.get((as_fraction(key[0]), as_fraction(key[1])), 0)

    def rows(self):
        return [(w, c, d) for (w, c), d in sorted(self.coefficients.items())]


def _window_ok(offset, window):
    def ok(ch):
        return abs(ch[0] - offset) <= window and ch[2] == 0
    return ok


def bigraded_dims(d: ModuleDescriptor, weight_cutoff, window: int) -> BigradedCharacter:
    """Dimensions of the (L(0), h(0)) eigenspaces by enumerating monomials.

    The h(0)-window is centred at -2r for M(r) (and at 0 otherwise).
    """
    weight_cutoff = as_fraction(weight_cutoff)
    mod = build_module(d)
    offset = -2 * d.r if d.r is not None else Fraction(0)
    out: Dict[Tuple[Fraction, Fraction], int] = {}
    for w, ch in mod.keys(weight_cutoff, _window_ok(offset, window)):
        n = len(mod.block(w, ch))
        if n:
            out[(w, ch[0])] = out.get((w, ch[0]), 0) + n
    return BigradedCharacter(out, weight_cutoff, window, offset)


def _series_mul(a, b, qmax):
    out: Dict = {}
    for (qa, za), ca in a.items():
        for (qb, zb), cb in b.items():
            q = qa + qb
            if q > qmax:
                continue
            out[(q, za + zb)] = out.get((q, za + zb), 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def character_product(r, weight_cutoff, window: int) -> BigradedCharacter:
    """Coefficients of z^{-2r} delta(z^2) prod (1-q^n)^{-2} prod (1+q^{n-3/2}z^{-1})(1+q^{n+1/2}z).

    delta(z^2) = sum_k z^{2k} is never formed; the coefficient of q^w z^{-2r+c}
    is the sum of the coefficients of q^w z^j of the finite product over j = c mod 2.
    """
    r = as_fraction(r)
    W = as_fraction(weight_cutoff)
    # only one factor has negative q-degree (-1/2), so truncate every partial product at W + 1/2
    qmax = W + Fraction(1, 2)
    ser = {(Fraction(0), 0): 1}
    n = 1
    while n <= qmax + 1:
        for _ in range(2):
            # 1/(1-q^n) = sum_k q^{nk}
            geo = {(Fraction(n * k), 0): 1 for k in range(int(qmax // n) + 1)}
            ser = _series_mul(ser, geo, qmax)
        ser = _series_mul(ser, {(Fraction(0), 0): 1, (Fraction(2 * n - 3, 2), -1): 1}, qmax)
        ser = _series_mul(ser, {(Fraction(0), 0): 1, (Fraction(2 * n + 1, 2), 1): 1}, qmax)
        n += 1
    ser = {k: v for k, v in ser.items() if k[0] <= W}
    out: Dict[Tuple[Fraction, Fraction], int] = {}
    for c in range(-window, window + 1):
        for (q, z), v in ser.items():
            if (z - c) % 2 == 0:
                key = (q, -2 * r + c)
                out[key] = out.get(key, 0) + v
    return BigradedCharacter({k: v for k, v in out.items() if v}, W, window, -2 * r)


# ---------------------------------------------------------------------------
# logarithmic deformation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogState:
    """An element top + t*bottom of SV(lam) = SPi(lam) + t SPi(lam - 1/2).

    t is an odd parameter with t^2 = 0, so t*v is even although v is odd.  The
    label t keeps the two summands apart: as subspaces of the lattice module
    SPi(lam - 1) coincides with SPi(lam).
    """

    top: State
    bottom: State

    def __add__(self, other):
        return LogState(self.top + other.top, self.bottom + other.bottom)

    def __sub__(self, other):
        return LogState(self.top - other.top, self.bottom - other.bottom)

    def __mul__(self, c):
        return LogState(self.top * c, self.bottom * c)

    def __bool__(self):
        return bool(self.top) or bool(self.bottom)


def _taubar_minus_tail() -> State:
    """z^{-1} coefficient of Delta(v, z) taubar-, frozen from the conjugation identity.

    Delta(v, z) taubar- = -Res_x Y(Delta(v, z + x) f, x) Delta(v, z) taubar+, using
    the images of f and taubar+; the result is
    (delta(-1) - beta(-1)/2 + 3 alpha(-1)/2) e^{-(alpha+beta)/2}.
    """
    e_half = E(vscale(Fraction(-1, 2), AB))
    return (creation(DELTA, 1, e_half) - creation(BETA, 1, e_half) * Fraction(1, 2)
            + creation(ALPHA, 1, e_half) * Fraction(3, 2))


def log_vector() -> State:
    return E(LOG_VECTOR)


def _first_order(a: State) -> Tuple[Dict[Fraction, State], Dict[Fraction, State]]:
    """Order-0 and order-1 parts of Delta(v, z) a."""
    v = log_vector()
    zero: Dict[Fraction, State] = {}
    one: Dict[Fraction, State] = {}
    for (order, p), s in delta_expansion(v, a).items():
        if order == 0:
            zero[p] = zero.get(p, State()) + s
        elif order == 1:
            one[p] = one.get(p, State()) + s
    return zero, one


def log_mode(a: State, n, x: LogState) -> LogState:
    """a~_n on SV(lam); moving a past the odd t costs the parity sign of a."""
    n = as_fraction(n)
    zero, one = _first_order(a)
    sign = -1 if _parity(a) else 1
    top = State()
    bot = State()
    for p, s in zero.items():
        top = top + mode_action(s, n + p, x.top)
        bot = bot + mode_action(s, n + p, x.bottom) * sign
    for p, s in one.items():
        bot = bot + mode_action(s, n + p, x.top)
    return LogState(top, bot)


def log_deform(lam=Fraction(0), max_weight=Fraction(2), window: int = 2) -> Tuple[ModuleHandle, VerificationReport]:
    """SV(lam) with Y(Delta(v, z) ., z), v = e^{-(alpha+beta)/2 + delta}, and its checks."""
    from .n4 import build_generators, screening_Qt
    lam = as_fraction(lam)
    max_weight = as_fraction(max_weight)
    rep = VerificationReport("logarithmic", config={"lambda": str(lam), "max_weight": str(max_weight),
                                                    "window": window})
    g = build_generators()
    v = log_vector()
    # the generator images of Delta(v, z)
    e_half = E(vscale(Fraction(-1, 2), AB))
    expect = {
        "e": (g.e, {0: g.e}),
        "h": (g.h, {0: g.h}),
        "f": (g.f, {0: g.f, -1: E(lv(Fraction(-3, 2), Fraction(-3, 2), 1)) * Fraction(1, 2)}),
        "tau+": (g.tau_p, {0: g.tau_p}),
        "tau-": (g.tau_m, {0: g.tau_m}),
        "taubar+": (g.taubar_p, {0: g.taubar_p, -1: E(vscale(Fraction(1, 2), AB)) * 2}),
        "taubar-": (g.taubar_m, {0: g.taubar_m, -1: _taubar_minus_tail(), -2: e_half}),
    }
    images = {}
    for name, (a, exp_map) in expect.items():
        got = delta_apply(v, a)
        images[name] = got
        keys = set(got) | {Fraction(k) for k in exp_map}
        diff = State()
        ok = True
        for k in keys:
            d = got.get(Fraction(k), State()) - exp_map.get(int(k) if Fraction(k).denominator == 1 else k, State())
            if d:
                ok = False
                diff = diff + d
        rep.add(f"Delta(v,z) {name}", "generator images under Delta(v, z)", ok,
                difference=diff, detail="" if ok else str({str(k): repr(s) for k, s in got.items()}))
    # the z^{-1} coefficient -2 D e^{-(alpha+beta)/2} of the printed formula
    printed = translate(e_half) * -2
    rep.data["taubar- z^-1 coefficient minus -2De^{-(alpha+beta)/2}"] = \
        (images["taubar-"].get(Fraction(-1), State()) - printed).to_json_obj()
    # Delta(v, z) omega = omega + z^{-1} v
    om = omega()
    got = delta_apply(v, om)
    ok = set(got) == {0, -1} and got[Fraction(0)] == om and got[Fraction(-1)] == v
    rep.add("Delta(v,z) omega = omega + v/z", "deformed Virasoro field", ok,
            detail="" if ok else str({str(k): repr(s) for k, s in got.items()}))
    # blocks of SV(lam): both cosets as one lattice space
    full = ModuleDescriptor("log", lam=lam)
    space = full.space()
    top_space = ModuleDescriptor("spi", lam=lam).space()
    Qt = screening_Qt()
    window_ok = _window_ok(Fraction(0), window)
    keys = space.charges_up_to(max_weight, window_ok)
    l0_ok = True
    nil_ok = True
    nonzero = False
    literal_leak = False
    count = 0
    for w, ch in keys:
        blk = block_basis(space, w, ch)
        for m in blk.basis:
            s = State.mono(m)
            in_top = top_space.contains(m.exp)
            x = LogState(s, State()) if in_top else LogState(State(), s)
            lt = log_mode(om, 1, x)
            plain = LogState(mode_action(om, 1, x.top), mode_action(om, 1, x.bottom))
            qx = LogState(State(), Qt(x.top))
            if lt != plain + qx:
                l0_ok = False
            nil = lt - plain
            nil2 = log_mode(om, 1, nil) - LogState(mode_action(om, 1, nil.top), mode_action(om, 1, nil.bottom))
            if nil2:
                nil_ok = False
            if nil:
                nonzero = True
            # literal lattice picture: Q~ squared, and Q~ on the lam - 1/2 coset
            q1 = Qt(s)
            if Qt(q1):
                nil_ok = False
            if not in_top and q1:
                literal_leak = True
            count += 1
    rep.add("L~(0) = L(0) + Q~", "deformed L(0)", l0_ok, detail=f"{count} basis vectors")
    rep.add("(L~(0) - L(0))^2 = 0", "nilpotent rank two", nil_ok)
    rep.add("L~(0) != L(0)", "nilpotent rank two", nonzero)
    rep.data["literal_Q~_maps_lower_coset_to_upper"] = literal_leak
    rep.data["blocks"] = len(keys)
    return build_module(full), rep


def _log_samples(lam, max_weight, window):
    full = ModuleDescriptor("log", lam=lam)
    space = full.space()
    top_space = ModuleDescriptor("spi", lam=lam).space()
    out = []
    for w, ch in space.charges_up_to(max_weight, _window_ok(Fraction(0), window)):
        for m in block_basis(space, w, ch).basis:
            s = State.mono(m)
            out.append((w, top_space.contains(m.exp), s))
    return out


def extension_check(lam=Fraction(0), max_weight=Fraction(2), window: int = 1,
                    samples: int = 12, seed: int = 7) -> VerificationReport:
    """0 -> SPi(lam - 1/2) -> SV(lam) -> SPi(lam) -> 0 on blocks of weight <= max_weight.

    Every generator mode with target weight inside the cutoff is applied to
    every basis vector: t SPi(lam - 1/2) must be invariant, acting as the
    parity-shifted SPi(lam - 1/2), and the induced action on the quotient must
    be the undeformed one.  A seeded sample of
    Borcherds commutator identities checks that the deformed action is a
    module action.
    """
    from .n4 import build_generators
    lam = as_fraction(lam)
    max_weight = as_fraction(max_weight)
    rep = VerificationReport("extension", config={"lambda": str(lam), "max_weight": str(max_weight),
                                                  "window": window, "seed": seed})
    g = build_generators()
    gens = g.as_dict()
    vecs = _log_samples(lam, max_weight, window)
    sub_ok = True
    quot_ok = True
    tails = 0
    for w, is_top, s in vecs:
        for name, a in gens.items():
            for n in _mode_range(a, s, w, max_weight):
                if is_top:
                    x = LogState(s, State())
                    y = log_mode(a, n, x)
                    if y.top != mode_action(a, n, s):
                        quot_ok = False
                    if y.bottom:
                        tails += 1
                else:
                    y = log_mode(a, n, LogState(State(), s))
                    if y.top:
                        sub_ok = False
                    if y.bottom != mode_action(a, n, s) * (-1 if _parity(a) else 1):
                        sub_ok = False
    rep.add("SPi(lam-1/2) is a submodule", "extension of SPi(lam) by SPi(lam-1/2)", sub_ok,
            detail=f"{len(vecs)} basis vectors")
    rep.add("quotient action is undeformed", "extension of SPi(lam) by SPi(lam-1/2)", quot_ok)
    rep.add("deformation is non-trivial", "extension of SPi(lam) by SPi(lam-1/2)", tails > 0,
            detail=f"{tails} nonzero tails")
    # module axiom on samples
    rng = random.Random(seed)
    names = sorted(gens)
    tops = [(w, s) for w, t, s in vecs if t]
    fails = []
    for k in range(samples):
        a = gens[names[rng.randrange(len(names))]]
        b = gens[names[rng.randrange(len(names))]]
        w, s = tops[rng.randrange(len(tops))]
        m = _rand_index(rng, a, s)
        n = _rand_index(rng, b, s)
        if not _log_commutator(a, b, m, n, LogState(s, State())):
            fails.append(k)
    rep.add(f"deformed commutator formula on {samples} samples", "logarithmic module axiom",
            not fails, detail=str(fails))
    return rep


def _mode_range(a: State, s: State, w, max_weight):
    """Mode indices n (in the right coset) with target weight in [w - 2, max_weight]."""
    wa = weight_of(a)
    u0 = next(iter(a.terms))
    m0 = next(iter(s.terms))
    from .core import pairing
    base = -pairing(u0.exp, m0.exp)
    lo = wa + w - 1 - max_weight
    k = -((base - lo) // 1)
    n = base + k
    out = []
    while wa + w - n - 1 >= w - 3:
        out.append(n)
        n += 1
    return out


def _rand_index(rng, a: State, s: State):
    from .core import pairing
    u0 = next(iter(a.terms))
    m0 = next(iter(s.terms))
    base = -pairing(u0.exp, m0.exp)
    base = base - (base.numerator // base.denominator)
    return base + rng.randint(-2, 2)


def _parity(a: State) -> int:
    from .core import parity_bit
    return parity_bit(a)


def _log_commutator(a: State, b: State, m, n, x: LogState) -> bool:
    sign = -1 if _parity(a) and _parity(b) else 1
    lhs = log_mode(a, m, log_mode(b, n, x)) - log_mode(b, n, log_mode(a, m, x)) * sign
    rhs = LogState(State(), State())
    j = 0
    from .vertex import lambda_bracket
    for j, c in lambda_bracket(a, b).coefficients.items():
        rhs = rhs + log_mode(c, m + n - j, x) * gbinom(m, j)
    return lhs == rhs


# ---------------------------------------------------------------------------
# twisted module checks
# ---------------------------------------------------------------------------

def twisted_commutator_samples(d: ModuleDescriptor, count: int = 20, seed: int = 11,
                               max_weight=None) -> Tuple[int, List[dict]]:
    """Borcherds commutator identity on seeded samples with fractional indices."""
    from .n4 import build_generators
    g = build_generators()
    gens = g.as_dict()
    names = sorted(gens)
    mod = build_module(d)
    if max_weight is None:
        max_weight = _lowest_weight(d) + 1
    offset = -2 * d.r if d.r is not None else Fraction(0)
    vecs = []
    for key in mod.keys(max_weight, _window_ok(offset, 2)):
        vecs.extend(block_basis(mod.space, *key).states())
    rng = random.Random(seed)
    passed = 0
    records = []
    while len(records) < count:
        a = names[rng.randrange(len(names))]
        b = names[rng.randrange(len(names))]
        c = vecs[rng.randrange(len(vecs))]
        m = _rand_index(rng, gens[a], c)
        n = _rand_index(rng, gens[b], c)
        ok = commutator_check(gens[a], gens[b], m, n, c)
        passed += ok
        records.append({"a": a, "b": b, "m": str(m), "n": str(n), "ok": ok,
                        "fractional": m.denominator != 1 or n.denominator != 1})
    return passed, records


def _lowest_weight(d: ModuleDescriptor) -> Fraction:
    x = d.mu - 1
    return x * x / 2 + x


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def verify_relaxed(r=Fraction(1, 2), index_window: int = 5) -> VerificationReport:
    r = as_fraction(r)
    d = ModuleDescriptor("relaxed", r=r)
    rep = VerificationReport("relaxed", config={"r": str(r), "window": index_window})
    if d.hypotheses():
        rep.data["hypotheses_violated"] = d.hypotheses()
    lc = lowest_component(d, (-index_window, index_window))
    verify_lowest(lc, r, (-index_window, index_window), rep, f"M({r})")
    rep.add(f"M({r}) lowest weight -1/2", "L(0) on the lowest component",
            all(weight_of(lc.basis[i]) == Fraction(-1, 2) for i in lc.indices))
    # nothing below -1/2 and the weight -1/2 lines are exactly the E_i
    ch = bigraded_dims(d, Fraction(-1, 2), index_window)
    ok = all(k[0] == Fraction(-1, 2) for k in ch.coefficients) and \
        all(v == 1 for v in ch.coefficients.values())
    rep.add("lowest component spanned by the lines E_i", "lowest component of M(r)", ok,
            detail=str(ch.rows()))
    return rep


def verify_character(r=Fraction(1, 2), max_weight=Fraction(7, 2), window: int = 6) -> VerificationReport:
    r = as_fraction(r)
    rep = VerificationReport("character", config={"r": str(r), "max_weight": str(max_weight),
                                                  "window": window})
    d = ModuleDescriptor("relaxed", r=r)
    lhs = bigraded_dims(d, max_weight, window)
    rhs = character_product(r, max_weight, window)
    keys = sorted(set(lhs.coefficients) | set(rhs.coefficients))
    bad = [(str(w), str(c), lhs.coefficients.get((w, c), 0), rhs.coefficients.get((w, c), 0))
           for w, c in keys if lhs.coefficients.get((w, c), 0) != rhs.coefficients.get((w, c), 0)]
    rep.add(f"bigraded dims of M({r}) = product formula", "character of M(r)", not bad,
            detail=f"{len(keys)} blocks; mismatches {bad[:5]}")
    rep.data["table"] = [[str(w), str(c), n] for w, c, n in lhs.rows()]
    return rep


def _mf_twisted_lowest(mu, rep: VerificationReport, depth: int = 5):
    """M x F^mu: lowest component generated by e^{(mu-1) delta}, highest weight mu - 1."""
    from .n4 import build_generators
    g = build_generators()
    d = ModuleDescriptor("twisted-fock", mu=mu)
    mod = build_module(d)
    v0 = E(vscale(mu - 1, DELTA))
    lw = weight_of(v0)
    hw = mu - 1
    ok = not mode_action(g.e, 0, v0) and mode_action(g.h, 0, v0) == v0 * hw \
        and not screening_map(E(ALPHA))(v0)
    rep.add(f"MxF^{mu}: e^((mu-1)delta) is a highest weight vector of weight {hw}",
            "lowest component of M x F^mu", ok)
    # f^k v0 spans the lowest blocks; U_{mu-1} Casimir
    cas_target = hw * (hw + 2) / 2
    vk = v0
    cas_ok = True
    dims_ok = True
    for k in range(depth + 1):
        ch = (hw - 2 * k, mu - 1, Fraction(0))
        blk = mod.block(lw, ch)
        if len(blk) != 1 or not vk:
            dims_ok = False
        fe = mode_action(g.f, 0, mode_action(g.e, 0, vk))
        ef = mode_action(g.e, 0, mode_action(g.f, 0, vk))
        hh = mode_action(g.h, 0, mode_action(g.h, 0, vk))
        if ef + fe + hh * Fraction(1, 2) != vk * cas_target:
            cas_ok = False
        vk = mode_action(g.f, 0, vk)
    rep.add(f"MxF^{mu}: lowest blocks are the lines f(0)^k v, k<={depth}",
            "lowest component of M x F^mu", dims_ok)
    rep.add(f"MxF^{mu}: Casimir {cas_target}", "Casimir eigenvalue", cas_ok)
    # no kernel vectors of lower weight in the charge window
    low_ok = True
    for key in mod.keys(lw, _window_ok(hw, 2 * depth)):
        if lw - 3 <= key[0] < lw and mod.block(*key):
            low_ok = False
    rep.add(f"MxF^{mu}: nothing in weights [{lw - 3}, {lw})", "lowest component of M x F^mu", low_ok)


def verify_twisted(r=Fraction(1, 2), mu=Fraction(1, 3), index_window: int = 5,
                   samples: int = 20, seed: int = 11) -> VerificationReport:
    r = as_fraction(r)
    mu = as_fraction(mu)
    rep = VerificationReport("twisted", config={"r": str(r), "mu": str(mu), "samples": samples,
                                                "seed": seed})
    d = ModuleDescriptor("spectral-flow", r=r, mu=mu)
    if d.hypotheses():
        rep.data["hypotheses_violated"] = d.hypotheses()
    lc = lowest_component(d, (-index_window, index_window))
    verify_lowest(lc, r, (-index_window, index_window), rep, f"M^{mu}({r})")
    lw = _lowest_weight(d)
    rep.add(f"M^{mu}({r}) lowest weight {lw}", "L(0) on the lowest component",
            all(weight_of(lc.basis[i]) == lw for i in lc.indices))
    _mf_twisted_lowest(mu, rep)
    passed, recs = twisted_commutator_samples(d, samples, seed)
    frac = sum(1 for x in recs if x["fractional"])
    rep.add(f"commutator formula on {samples} samples of M^{mu}({r})", "twisted module axiom",
            passed == samples, detail=f"{passed}/{samples} pass, {frac} with fractional indices",
            witness=recs)
    return rep


def verify_logarithmic(lam=Fraction(0), max_weight=Fraction(2)) -> VerificationReport:
    _, rep = log_deform(lam, max_weight)
    rep.merge(extension_check(lam, max_weight))
    return rep
