"""Dg-rings: dual numbers family, ideals, powers, quotients, setup checker."""

import pytest

from dgkit.errors import ValidationError
from dgkit.fields import GF, QQ
from dgkit.dgring import (
    DgIdeal,
    DgRing,
    DgRingMorphism,
    check_setup_assumptions,
    ideal_power,
    make_dual_numbers,
    quotient,
)
from dgkit.complexes import ChainMap
from dgkit.matrix import Mat


def test_dual_numbers_n2_deg_minus1():
    ring, aug = make_dual_numbers(2, -1, QQ)
    h = ring.underlying.cohomology().as_dict()
    assert h == {0: 1, -1: 1}
    assert aug.is_strictly_surjective()


def test_dual_numbers_classical_degree0():
    ring, aug = make_dual_numbers(2, 0, QQ)
    assert ring.underlying.cohomology().as_dict() == {0: 2}


def test_dual_numbers_family_closed_form():
    for n, e in [(2, -1), (2, -2), (3, -2), (4, -2), (3, 0)]:
        ring, _ = make_dual_numbers(n, e, QQ)
        h = ring.underlying.cohomology().as_dict()
        expect = {}
        for j in range(n):
            expect[j * e] = expect.get(j * e, 0) + 1
        assert h == expect


def test_dual_numbers_parity_guard():
    with pytest.raises(ValidationError):
        make_dual_numbers(3, -1, QQ)
    # characteristic 2 lifts the restriction
    ring, _ = make_dual_numbers(3, -1, GF(2))
    assert ring.total_dim() == 3


def test_ideal_power_of_dual_numbers():
    ring, aug = make_dual_numbers(3, -2, QQ)
    ideal = aug.kernel_ideal()
    assert ideal_power(ideal, 1) is ideal
    sq = ideal_power(ideal, 2)
    assert sq.sub.cohomology().as_dict() == {-4: 1}
    cb = ideal_power(ideal, 3)
    assert cb.is_zero()


def test_dual_numbers_n2_square_zero():
    ring, aug = make_dual_numbers(2, -1, QQ)
    ideal = aug.kernel_ideal()
    assert ideal.squares_to_zero()
    assert ideal_power(ideal, 2).is_zero()


def test_quotient_zero_ideal_is_identity():
    ring, _ = make_dual_numbers(2, -1, QQ)
    q, proj = quotient(ring, DgIdeal.zero(ring))
    assert q is ring


def test_quotient_by_augmentation_ideal_is_ground_field():
    ring, aug = make_dual_numbers(2, -1, QQ)
    q, proj = quotient(ring, aug.kernel_ideal())
    assert q.total_dim() == 1
    assert proj.is_strictly_surjective()


def test_quotient_eps3_by_square_matches_eps2():
    ring3, aug3 = make_dual_numbers(3, -2, QQ)
    ideal = aug3.kernel_ideal()
    q, proj = quotient(ring3, ideal_power(ideal, 2))
    ring2, _ = make_dual_numbers(2, -2, QQ)
    # same graded dimensions and same structure constants on basis
    assert {d: q.dim(d) for d in q.degrees()} == {d: ring2.dim(d) for d in ring2.degrees()}
    for dx, i in q.basis():
        for dy, j in q.basis():
            assert q.mul_basis(dx, i, dy, j) == ring2.mul_basis(dx, i, dy, j)


def test_setup_checker_dual_numbers():
    for n, e in [(2, -1), (3, -2)]:
        ring, aug = make_dual_numbers(n, e, QQ)
        report = check_setup_assumptions(aug)
        assert report.all_pass
        assert report.nilpotency_order == n


def test_setup_checker_identity():
    ring, _ = make_dual_numbers(2, -1, QQ)
    report = check_setup_assumptions(DgRingMorphism.identity(ring))
    assert report.all_pass
    assert report.nilpotency_order == 1


def test_setup_checker_non_surjective_inclusion_fails():
    ring, aug = make_dual_numbers(2, -1, QQ)
    ground = aug.target
    comps = {0: Mat(QQ, ring.dim(0), 1, [[QQ.one()]])}
    incl = DgRingMorphism(ground, ring, ChainMap(ground.underlying, ring.underlying, 0, comps),
                          name="incl")
    report = check_setup_assumptions(incl)
    assert not report.surjective
    assert report.strict_surjectivity[-1] is False


def test_factorization_chain_composes_to_theta():
    ring, aug = make_dual_numbers(3, -2, QQ)
    ideal = aug.kernel_ideal()
    q2, p2 = quotient(ring, ideal_power(ideal, 2))   # R -> R/I^2
    # induced ideal of q2 and its quotient
    aug_q2 = check_setup_assumptions(p2)
    assert aug_q2.surjective


def test_ring_rejects_positive_degrees():
    with pytest.raises(ValidationError):
        DgRing.from_table(QQ, [0, 1], ["1", "x"], 0,
                          lambda i, j: {0: QQ.one()} if i == j == 0 else {})
