"""Sparse exact elimination over Q (fraction-free) and Q(sqrt 2).

Vectors are dicts ``key -> coefficient``; keys must be mutually comparable so
that pivots can be chosen as the first nonzero entry in canonical order.
Rational rows are kept as primitive integer rows (Bareiss-style cross
multiplication followed by content removal); rows containing genuine
Q(sqrt2) entries fall back to field elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, List, Optional, Sequence

from .scalar import Scalar

__all__ = ["Eliminator", "nullspace", "rank", "in_span", "is_rational_row"]


def is_rational_row(row: Dict) -> bool:
    return all(not isinstance(v, Scalar) or v.root2 == 0 for v in row.values())


def _to_fraction(v) -> Fraction:
    return v.rational if isinstance(v, Scalar) else Fraction(v)


def _primitive(row: Dict, combo: Dict):
    """Scale a rational row to a primitive integer row with positive leading entry."""
    den = 1
    for v in row.values():
        d = v.denominator
        den = den * d // gcd(den, d)
    ints = {k: int(v * den) for k, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = min(ints)
    if ints[lead] < 0:
        g = -g
    scale = Fraction(den, g)
    return ({k: v // g for k, v in ints.items()},
            {k: v * scale for k, v in combo.items()})


class Eliminator:
    """Incremental row echelon form with combination tracking.

    ``add(vec, label)`` returns True when the vector is independent of those
    added before.  ``reduce(vec)`` returns ``(remainder, combination)`` where
    ``vec = remainder + sum(combination[label] * original[label])``.
    """

    def __init__(self):
        self.pivots: Dict[Hashable, tuple] = {}  # pivot key -> (row, combo)
        self.exact_field = False
        self.labels: List[Hashable] = []

    def __len__(self):
        return len(self.pivots)

    def _prep(self, vec: Dict, combo: Dict):
        row = {k: v for k, v in vec.items() if v}
        if not row:
            return row, combo
        if not self.exact_field and not is_rational_row(row):
            self._switch_to_field()
        if self.exact_field:
            return row, combo
        row = {k: _to_fraction(v) for k, v in row.items()}
        return _primitive(row, combo)

    def _switch_to_field(self):
        self.exact_field = True
        self.pivots = {k: ({kk: Fraction(vv) for kk, vv in r.items()}, c)
                       for k, (r, c) in self.pivots.items()}

    def add(self, vec: Dict, label: Hashable = None) -> bool:
        if label is None:
            label = len(self.labels)
        self.labels.append(label)
        row, combo = self._prep(dict(vec), {label: Fraction(1)})
        row, combo = self._reduce_tracked(row, combo)
        if not row:
            return False
        if not self.exact_field:
            row, combo = _primitive(row, combo)
        lead = min(row)
        self.pivots[lead] = (row, combo)
        return True

    def _reduce_tracked(self, row, combo):
        """Reduction where ``combo`` always expresses ``row`` in original labels."""
        while row:
            lead = None
            for k in sorted(row):
                if k in self.pivots:
                    lead = k
                    break
            if lead is None:
                return row, combo
            prow, pcombo = self.pivots[lead]
            f = Fraction(row[lead]) / Fraction(prow[lead]) if not self.exact_field \
                else row[lead] / prow[lead]
            if self.exact_field:
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                for k, v in pcombo.items():
                    nv = combo.get(k, 0) - f * v
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
            else:
                p, c = prow[lead], row[lead]
                g = gcd(p, c)
                pp, cc = p // g, c // g
                new = {}
                for k in row.keys() | prow.keys():
                    nv = pp * row.get(k, 0) - cc * prow.get(k, 0)
                    if nv:
                        new[k] = nv
                newc = {}
                for k in combo.keys() | pcombo.keys():
                    nv = pp * combo.get(k, 0) - cc * pcombo.get(k, 0)
                    if nv:
                        newc[k] = nv
                row, combo = new, newc
                if row:
                    row, combo = _primitive(row, combo)
        return row, combo

    def reduce(self, vec: Dict):
        """Return ``(remainder, combination)`` with vec = remainder + sum(comb * originals)."""
        row = {k: v for k, v in vec.items() if v}
        if not row:
            return {}, {}
        if not self.exact_field and not is_rational_row(row):
            self._switch_to_field()
        if not self.exact_field:
            row = {k: _to_fraction(v) for k, v in row.items()}
        # field arithmetic here: remainder/combination must be exact, not scaled
        combo: Dict = {}
        while row:
            lead = None
            for k in sorted(row):
                if k in self.pivots:
                    lead = k
                    break
            if lead is None:
                break
            prow, pcombo = self.pivots[lead]
            f = row[lead] / prow[lead]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            for k, v in pcombo.items():
                nv = combo.get(k, 0) + f * v
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        return row, combo


def rank(vectors: Sequence[Dict]) -> int:
    el = Eliminator()
    for v in vectors:
        el.add(v)
    return len(el)


def in_span(x: Dict, vectors: Sequence[Dict]) -> Optional[Dict[int, object]]:
    """Coefficients c with x = sum c[i] vectors[i], or None."""
    el = Eliminator()
    for i, v in enumerate(vectors):
        el.add(v, i)
    rem, combo = el.reduce(x)
    if rem:
        return None
    return combo


def nullspace(images: Sequence[Dict]) -> List[Dict[int, object]]:
    """Basis of {c : sum_i c[i] images[i] = 0}, one dict per kernel vector.

    Rows are the images tagged with their index; a row that reduces to zero
    yields a kernel vector from its tracked combination.
    """
    el = Eliminator()
    kernel = []
    for i, img in enumerate(images):
        row, combo = el._prep(dict(img), {i: Fraction(1)})
        if not row:
            kernel.append(combo)
            el.labels.append(i)
            continue
        row, combo = el._reduce_tracked(row, combo)
        el.labels.append(i)
        if not row:
            kernel.append(combo)
            continue
        if not el.exact_field:
            row, combo = _primitive(row, combo)
        el.pivots[min(row)] = (row, combo)
    return kernel
