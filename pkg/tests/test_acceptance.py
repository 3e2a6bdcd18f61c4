"""Acceptance suite: twelve criteria, each an exact check with a time limit.

Every test prints one ``PASS criterion N`` or ``FAIL criterion N`` line; the
collected lines are repeated in the terminal summary.
"""

import time
from fractions import Fraction

import pytest

from voalab.affine2 import (
    coset_dims, verify_a2_relations, verify_categoryO_vectors, verify_Eij, verify_zhu_a2,
)
from voalab.amodules import verify_character, verify_logarithmic, verify_relaxed, verify_twisted
from voalab.n4 import verify_kernel_characterization, verify_g_gbar_identity, verify_n4_table, verify_wakimoto
from voalab.properties import verify_properties
from voalab.zhu import n4_context, zhu_relation_suite

HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


def _item(rep, ident):
    found = [i for i in rep.items if i.id == ident]
    assert len(found) == 1, f"missing check {ident!r} in {rep.suite}"
    return found[0]


def _passed(rep, ident):
    return _item(rep, ident).status == "pass"


def run_criterion(record, number, title, limit, check):
    """Run ``check`` (returning a list of (label, bool)), record the line, then assert."""
    t0 = time.perf_counter()
    results = check()
    seconds = time.perf_counter() - t0
    results.append((f"finished within {limit} s", seconds < limit))
    failed = [label for label, ok in results if not ok]
    record(number, title, not failed, seconds)
    assert not failed, failed


def test_criterion_01_n4_table(record_criterion):
    def check():
        rep = verify_n4_table()
        brackets = [i for i in rep.items if i.id.startswith("[")]
        return [("all table checks pass", rep.passed),
                ("all 64 ordered generator pairs checked", len(brackets) == 64)]
    run_criterion(record_criterion, 1, "N=4 lambda-bracket table at c=-9", 60, check)


def test_criterion_02_g_gbar_identity(record_criterion):
    def check():
        rep = verify_g_gbar_identity()
        return [("G+(-3/2)Gbar+(-3/2)1 identity", _passed(rep, "G+(-3/2)Gbar+(-3/2)1")),
                ("at most one recorded sign adjustment", len(rep.sign_adjustments) <= 1)]
    run_criterion(record_criterion, 2, "G+(-3/2)Gbar+(-3/2)1 = -2e(-1)omega + h(-1)e(-2)1 - h(-2)e(-1)1",
                  5, check)


def test_criterion_03_wakimoto(record_criterion):
    def check():
        rep = verify_wakimoto()
        return [("Wakimoto suite", rep.passed),
                ("f(0)^2 e^delta = 0", _passed(rep, "f(0)^2 e^delta=0")),
                ("free field formulas", all(_passed(rep, k) for k in (
                    "e=a", "h=-2a*a+delta", "f=-a*a*a+kDa*+a*delta", "tau+=Psi", "tau-=a*Psi")))]
    run_criterion(record_criterion, 3, "Wakimoto realization and f(0)^2 e^delta = 0", 10, check)


@pytest.mark.slow
def test_criterion_04_zhu(record_criterion):
    def check():
        out = []
        for mu, coeff in ((Fraction(0), HALF), (THIRD, Fraction(4, 9))):
            rep = zhu_relation_suite(n4_context(mu, Fraction(4)))
            item = _item(rep, f"[e]([omega]+{coeff}) = 0")
            out.append((f"mu={mu}: suite passes", rep.passed))
            out.append((f"mu={mu}: coefficient {coeff}", rep.data["coefficient"] == str(coeff)))
            out.append((f"mu={mu}: explicit witness", item.status == "pass" and bool(item.witness)))
        return out
    run_criterion(record_criterion, 4, "Zhu relations at mu=0 and mu=1/3, cutoff 4", 600, check)


@pytest.mark.slow
def test_criterion_05_kernel(record_criterion):
    def check():
        rep = verify_kernel_characterization(Fraction(5, 2))
        return [("generated dims equal screening-kernel dims up to weight 5/2", rep.passed)]
    run_criterion(record_criterion, 5, "kernel characterization up to weight 5/2", 300, check)


def test_criterion_06_relaxed(record_criterion):
    def check():
        rep = verify_relaxed(HALF, 5)
        return [("relaxed suite", rep.passed),
                ("U_{-1,1/2} matrices for |i|<=5", _passed(rep, "M(1/2): U_{-1,1/2} matrices for |i|<=5")),
                ("Casimir -1/2", _passed(rep, "M(1/2): Casimir = -1/2"))]
    run_criterion(record_criterion, 6, "relaxed module M(1/2) lowest component", 30, check)


@pytest.mark.slow
def test_criterion_07_character(record_criterion):
    def check():
        rep = verify_character(HALF, Fraction(7, 2), 6)
        return [("bigraded dims equal product formula", rep.passed),
                ("table is non-empty", len(rep.data["table"]) > 0)]
    run_criterion(record_criterion, 7, "character of M(1/2) to weight 7/2, window 6", 600, check)


def test_criterion_08_twisted(record_criterion):
    def check():
        rep = verify_twisted(HALF, THIRD, 5, samples=20)
        samples = _item(rep, "commutator formula on 20 samples of M^1/3(1/2)")
        fractional = [w for w in samples.witness if w["fractional"]]
        return [("twisted suite", rep.passed),
                ("U_{mu-1,r} matrices", _passed(rep, "M^1/3(1/2): U_{-2/3,1/2} matrices for |i|<=5")),
                ("20 commutator samples pass", samples.status == "pass" and len(samples.witness) == 20),
                ("samples include fractional indices", bool(fractional))]
    run_criterion(record_criterion, 8, "twisted modules at (r, mu) = (1/2, 1/3)", 300, check)


@pytest.mark.slow
def test_criterion_09_logarithmic(record_criterion):
    def check():
        rep = verify_logarithmic(Fraction(0), Fraction(2))
        return [("logarithmic suite", rep.passed),
                ("(L~(0)-L(0))^2 = 0", _passed(rep, "(L~(0) - L(0))^2 = 0")),
                ("L~(0) != L(0)", _passed(rep, "L~(0) != L(0)")),
                ("Delta(v,z) images", all(_passed(rep, f"Delta(v,z) {n}") for n in
                                          ("e", "h", "f", "tau+", "tau-", "taubar+", "taubar-"))),
                ("extension check", _passed(rep, "deformation is non-trivial"))]
    run_criterion(record_criterion, 9, "logarithmic module SV(0) to weight 2", 300, check)


@pytest.mark.slow
def test_criterion_10_affine_a2(record_criterion):
    def check():
        rel = verify_a2_relations()
        zhu = verify_zhu_a2(3)
        eij = verify_Eij(HALF, THIRD, 3)
        cat = verify_categoryO_vectors()
        return [("sl3 brackets at level -3/2", _passed(rel, "sl3 lambda brackets at level -3/2 (64 ordered pairs)")),
                ("relations suite", rel.passed),
                ("Sugawara central charge -8", _passed(rel, "(omega_A2)_(3) omega_A2 = -4")),
                ("Zhu relation", _passed(zhu, "[e_theta]([omega_A2]+1/2) = 0") and zhu.passed),
                ("E_ij matrices for |i|,|j|<=3", eij.passed),
                ("category O highest weight vectors", cat.passed)]
    run_criterion(record_criterion, 10, "affine A2 at level -3/2", 900, check)


@pytest.mark.slow
def test_criterion_11_coset(record_criterion):
    def check():
        rep = coset_dims(4)
        dims = {str(n): d for n, d in enumerate((1, 0, 1, 2, 5))}
        return [("coset suite", rep.passed),
                ("screening-kernel dims", rep.data["kernel_dims"] == dims),
                ("commutant dims", rep.data["commutant_dims"] == dims),
                ("central charge -10", _passed(rep, "(omega_coset)_(3) omega_coset = -5"))]
    run_criterion(record_criterion, 11, "parafermion coset to weight 4, c=-10", 1800, check)


@pytest.mark.slow
def test_criterion_12_properties(record_criterion):
    def check():
        rep = verify_properties(borcherds=50, skew=20, grading=30, seed=2024)
        return [("Borcherds, skew-symmetry and grading samples", rep.passed),
                ("three property checks", len(rep.items) == 3)]
    run_criterion(record_criterion, 12, "seeded axiom properties", 600, check)
