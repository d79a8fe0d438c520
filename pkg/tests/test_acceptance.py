"""Acceptance suite: every criterion at its stated tolerance (exact).

Each test drives the corresponding named check from dgkit.verify (the same
checks behind `dgkit verify --suite paper`) and prints one pass/fail line.
Expected values inside the checks are computed by independent oracles
(elementwise equalizer/coequalizer solvers, the reduced bar complex, LES rank
bookkeeping) and frozen where the criteria state them.
"""

import pytest

from dgkit import verify


def _drive(check_fn, name):
    result = check_fn()
    print(f"[{'pass' if result.passed else 'FAIL'}] {name}")
    assert result.passed, result.details
    return result


def test_criterion_1_coend_end_oracle_equivalence():
    # 50 random square bimodules, <= 3 objects, total hom dimension <= 12:
    # exact agreement with the brute-force equalizer/coequalizer solver,
    # membership re-checked elementwise; Fubini and end-hom compatibility.
    _drive(lambda: verify.check_coend_end_oracle(50), "coend/end oracle equivalence")


def test_criterion_2_co_yoneda():
    # 20 random modules G and objects X with the explicit evaluation
    # certificate verified to be a quasi-isomorphism.
    _drive(lambda: verify.check_co_yoneda(20), "co-Yoneda")


def test_criterion_3_truncation_suite():
    # 50 random complexes: smart truncation cohomology, distinguished
    # truncation triangle, and the H^0 adjunction on module instances.
    _drive(lambda: verify.check_truncation_suite(50), "truncation suite")


def test_criterion_4_tstructure_axioms():
    # 20 random modules over random nonpositive 3-object categories: aisle
    # shift-closure, orthogonality in certified nonpositive degrees, heart.
    _drive(lambda: verify.check_tstructure_axioms(20), "natural t-structure axioms")


def test_criterion_5_derived_tensor_laws():
    # (i) bar-oracle-frozen Tor over k[e]/(e^2): |e| = -1 gives k in even
    # degrees 0,-2,-4,-6 (the criterion's own oracle; see the decisions
    # ledger for the prose discrepancy) and |e| = 0 gives k in every degree;
    # (ii) nonpositivity on 30 random pairs; (iii) H^0-surjectivity
    # propagation on 30 maps; (iv) H^0 comparison bijectivity on 30 pairs.
    _drive(lambda: verify.check_derived_tensor_laws(30), "derived tensor laws")


def test_criterion_6_resolution_invariance():
    # 20 random pairs: resolving left vs right factor agrees in every
    # certified degree.
    _drive(lambda: verify.check_resolution_invariance(20), "resolution invariance")


def test_criterion_7_duality():
    # 20 representable-plus-acyclic instances: double dual quasi-isomorphic
    # with matching witness, graded dimensions variance-reversed.
    _drive(lambda: verify.check_duality(20), "duality")


def test_criterion_8_changeofrings_adjunctions():
    # 20 instances per adjunction: strict round trips and hom-space equality,
    # tensor/cotensor isomorphisms, transitivity on the k[e]/(e^3) chain.
    _drive(lambda: verify.check_changeofrings(20), "change-of-rings strict adjunctions")


def test_criterion_9_deformation_pipeline():
    # setup checker and factorization for n in {2,3}, |e| in {-1,-2}
    # (respecting the parity guard), plus all-pass deformation reports on the
    # three bundled instance categories; runtime bounded by the suite timeout.
    _drive(verify.check_deformation_pipeline, "deformation pipeline")


def test_criterion_10_negative_controls():
    # missing weak cokernel caught with witness; non-surjective theta fails
    # assumption (1); d^2 != 0 scenario rejected at load with the entity named.
    _drive(verify.check_negative_controls, "negative controls")
