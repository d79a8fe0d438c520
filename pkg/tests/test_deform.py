"""Deformation pipeline: factorization, kernel modules, lifting verdicts, hlc."""

import pytest

from dgkit.fields import QQ
from dgkit.dgring import DgRingMorphism, make_dual_numbers
from dgkit.dgcat import one_object_category
from dgkit.deform import (
    check_hlc,
    deform_category,
    factorize,
    h0_structure_verdict,
    ideal_as_S_module,
    levelwise_free_generators,
)
from dgkit.derived import DegreeWindow
from dgkit.errors import ValidationError
from dgkit.instances import (
    exterior_extension_ring,
    free_arrow_category,
    weak_cokernel_gap_category,
)
from dgkit.dgring import DgRing


def test_factorize_identity_is_empty_chain():
    ring, _ = make_dual_numbers(2, -1, QQ)
    chain = factorize(DgRingMorphism.identity(ring))
    assert chain.steps == []
    assert chain.all_pass


def test_factorize_dual_numbers_single_step():
    ring, aug = make_dual_numbers(2, -1, QQ)
    chain = factorize(aug)
    assert len(chain.steps) == 1
    assert chain.all_pass
    assert chain.square_zero_kernels == [True]


def test_factorize_eps3_two_steps():
    ring, aug = make_dual_numbers(3, -2, QQ)
    chain = factorize(aug)
    assert len(chain.steps) == 2
    assert chain.all_pass
    assert all(chain.square_zero_kernels)
    # composition reproduces theta exactly (checked internally, assert flag)
    assert chain.composition_equals_theta


def test_ideal_as_s_module_dual_numbers():
    ring, aug = make_dual_numbers(2, -1, QQ)
    mod = ideal_as_S_module(aug)
    obj = mod.cat.objects[0]
    assert mod.at(obj).cohomology().as_dict() == {-1: 1}


def test_ideal_as_s_module_rejects_non_square_zero():
    ring, aug = make_dual_numbers(3, -2, QQ)
    with pytest.raises(ValidationError):
        ideal_as_S_module(aug)


def test_ideal_step_of_eps3_is_accepted():
    ring, aug = make_dual_numbers(3, -2, QQ)
    chain = factorize(aug)
    # each factor step has square-zero kernel and yields an S-module
    for step in chain.steps:
        mod = ideal_as_S_module(step)
        assert mod.total_dim() >= 1


def test_levelwise_free_detection():
    ring, aug = make_dual_numbers(2, -1, QQ)
    cat = one_object_category(ring)
    gens = levelwise_free_generators(cat)
    assert gens[("*", "*")][0].cols == 1
    # the ground field as an R-category is not levelwise free
    from dgkit.changeofrings import restrict_category
    ground_cat = one_object_category(aug.target)
    not_free = restrict_category(ground_cat, aug)
    with pytest.raises(ValidationError):
        levelwise_free_generators(not_free)


def test_check_hlc_ground_field():
    cat = one_object_category(DgRing.ground_field(QQ))
    verdict = check_hlc(cat)
    assert verdict.all_pass


def test_check_hlc_gap_category_fails_with_witness():
    cat = weak_cokernel_gap_category(QQ)
    verdict = check_hlc(cat)
    assert not verdict.weak_cokernels
    assert verdict.failing_morphism is not None
    a, b, idx = verdict.failing_morphism
    assert (a, b) == ("A", "A")


def test_h0_structure_dual_numbers_category():
    ring, _ = make_dual_numbers(2, -1, QQ)
    cat = one_object_category(ring)
    verdict = h0_structure_verdict(cat)
    assert verdict.all_pass


def test_h0_structure_split_algebra_detects_idempotent():
    # k x k in degree 0 has a nontrivial idempotent with no splitting object;
    # presented in the basis u = e1 + e2 (the unit), v = e1 - e2 with v.v = u
    field = QQ
    def mult2(i, j):
        if i == 0 and j == 0:
            return {0: field.one()}
        if i == 0 or j == 0:
            return {1: field.one()}
        return {0: field.one()}
    ring2 = DgRing.from_table(field, [0, 0], ["u", "v"], 0, mult2, name="kxk")
    cat = one_object_category(ring2)
    verdict = h0_structure_verdict(cat)
    assert not verdict.karoubian
    assert verdict.idempotent_witnesses


def test_deform_one_object_dual_numbers():
    ring, aug = make_dual_numbers(2, -1, QQ)
    cat = one_object_category(ring)
    ext, report = deform_category(cat, aug, DegreeWindow(-3, 0))
    assert report.all_pass
    j = ext.category
    assert {d: j.hom("*", "*").dim(d) for d in j.hom("*", "*").degrees()} == {0: 1}


def test_deform_free_arrow_category():
    ring, aug = make_dual_numbers(2, -1, QQ)
    cat = free_arrow_category(ring)
    ext, report = deform_category(cat, aug, DegreeWindow(-3, 0))
    assert report.all_pass


def test_deform_exterior_instance():
    ring, aug = make_dual_numbers(2, -1, QQ)
    ext_ring = exterior_extension_ring(ring, -1)
    # the augmentation of the extended ring onto k[f]/(f^2)... deform along
    # theta (x) 1: extend the one-object R[f] category along R -> k
    cat = one_object_category(ext_ring)
    # theta: R[f] is R-linear via multiplication; deform along aug needs the
    # category to be R-linear: reinterpret End = R (+) R.f as an R-category
    rcats = rebuild_as_r_category(ring, ext_ring)
    ext, report = deform_category(rcats, aug, DegreeWindow(-3, 0))
    assert report.all_pass


def rebuild_as_r_category(ring, ext_ring):
    """One object with End = R[f] viewed as an R-linear category."""
    from dgkit.dgcat import DgCategory
    from dgkit.complexes import TensorLayout
    from dgkit.matrix import Mat
    field = ring.field
    cx = ext_ring.underlying
    comp = {("*", "*", "*"): ext_ring.mult}
    lay = TensorLayout([ring.underlying, cx])

    def entry(combo, idx):
        dr, dx = combo
        r = Mat.basis_column(field, ring.dim(dr), idx[0])
        # embed r into R[f] (the non-f part) and multiply
        rr = embed(ring, ext_ring, dr, r)
        x = Mat.basis_column(field, cx.dim(dx), idx[1])
        return ext_ring.mul(dr, rr, dx, x)

    action = {("*", "*"): lay.map_from_entries(cx, 0, entry)}
    return DgCategory(ring, ["*"], {("*", "*"): cx}, comp,
                      {"*": ext_ring.unit}, action=action, name="R[f]overR")


def embed(ring, ext_ring, deg, vec):
    """R -> R[f] on basis vectors (the f-free part comes first per degree)."""
    from dgkit.matrix import Mat
    field = ring.field
    out = [field.zero()] * ext_ring.dim(deg)
    labels = ext_ring.underlying.spaces.labels.get(deg, ())
    base_labels = [f"r{deg}_{i}" for i in range(ring.dim(deg))]
    for i, v in enumerate(vec.column_values(0)):
        if field.is_zero(v):
            continue
        target = base_labels[i]
        pos = labels.index(target)
        out[pos] = v
    return Mat.column(field, out)


def test_pipeline_over_prime_field():
    # the whole stack runs over F_7: setup, factorization, deformation
    from dgkit.fields import GF
    field = GF(7)
    ring, aug = make_dual_numbers(3, -2, field)
    chain = factorize(aug)
    assert chain.all_pass
    cat = one_object_category(ring)
    ext, report = deform_category(cat, aug, DegreeWindow(-4, 0))
    # the Karoubian verdict over F_p is recorded, not factored; everything
    # else is exact
    assert all(s.all_pass for s in report.steps)
    assert report.factorization.all_pass
    assert report.pipeline_coherent
    assert report.deformed_hlc.weak_cokernels
