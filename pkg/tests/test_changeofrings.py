"""Base change: restriction, extension, coextension, transitivity, comparisons."""

import random

import pytest

from dgkit.fields import QQ
from dgkit.dgring import DgRing, DgRingMorphism, ideal_power, make_dual_numbers, quotient
from dgkit.dgcat import DgCategory, one_object_category
from dgkit.bimodules import Bimodule, Module
from dgkit.changeofrings import (
    coextension_adjunction_check,
    coextension_cotensor_check,
    coextension_object,
    coextension_tensor_check,
    extend_scalars_cat,
    extension_adjunction_check,
    heart_coextension_check,
    restrict_category,
    restrict_ring_module,
    s_vs_r_module_comparison,
    tensor_over_s,
    transitivity_check,
)
from dgkit.derived import restricted_ground_module, ring_as_module
from dgkit.instances import random_nonpositive_category
from dgkit.matrix import Mat
from dgkit.complexes import TensorLayout


def dual_numbers_setup(n=2, e=-1):
    ring, aug = make_dual_numbers(n, e, QQ)
    return ring, aug


def test_restrict_category_identity():
    ring, aug = dual_numbers_setup()
    cat = one_object_category(ring)
    r = restrict_category(cat, DgRingMorphism.identity(ring))
    assert r.hom("*", "*") == cat.hom("*", "*")


def test_restrict_scalars_of_s_module():
    ring, aug = dual_numbers_setup()
    k_mod = restricted_ground_module(aug)
    # restriction never changes the underlying complexes
    obj = k_mod.cat.objects[0]
    assert k_mod.at(obj).cohomology().as_dict() == {0: 1}
    # eps acts by zero on k
    eps = Mat.basis_column(QQ, 1, 0)
    acted = k_mod.apply_action(obj, obj, 0, Mat.basis_column(QQ, 1, 0), -1, eps)
    assert acted.is_zero()


def test_extend_scalars_identity():
    ring, aug = dual_numbers_setup()
    cat = one_object_category(ring)
    ext = extend_scalars_cat(cat, DgRingMorphism.identity(ring))
    for d in cat.hom("*", "*").degrees():
        assert ext.category.hom("*", "*").dim(d) == cat.hom("*", "*").dim(d)


def test_extend_one_object_ring_along_augmentation():
    ring, aug = dual_numbers_setup(2, -1)
    cat = one_object_category(ring)
    ext = extend_scalars_cat(cat, aug)
    # k (x)_R R = k
    assert {d: ext.category.hom("*", "*").dim(d)
            for d in ext.category.hom("*", "*").degrees()} == {0: 1}


def test_extend_free_quiver_category():
    ring, aug = dual_numbers_setup(2, -1)
    # two objects, one free arrow of degree 0: hom complexes are free R-modules
    cat = free_arrow_category(ring)
    ext = extend_scalars_cat(cat, aug)
    e = ext.category
    assert {d: e.hom("X", "Y").dim(d) for d in e.hom("X", "Y").degrees()} == {0: 1}
    assert {d: e.hom("X", "X").dim(d) for d in e.hom("X", "X").degrees()} == {0: 1}


def free_arrow_category(ring):
    """Two objects, End = R each, hom(X,Y) = R.f free of rank one, hom(Y,X)=0."""
    field = ring.field
    cx_end = ring.underlying
    cx_arrow = ring.underlying  # free rank-1: carrier is R itself
    homs = {("X", "X"): cx_end, ("Y", "Y"): cx_end,
            ("X", "Y"): cx_arrow, ("Y", "X"): None}
    comp = {}
    ids = {"X": ring.unit, "Y": ring.unit}
    action = {}
    objs = ["X", "Y"]
    from dgkit.complexes import Complex
    homs = {k: (v if v is not None else Complex.zero(field)) for k, v in homs.items()}
    for a in objs:
        for b in objs:
            action[(a, b)] = None
    cats = {}
    for a in objs:
        for b in objs:
            for c in objs:
                src = TensorLayout([homs[(b, c)], homs[(a, b)]])

                def entry(combo, idx, a=a, b=b, c=c):
                    # all nonzero composites are ring multiplications
                    if homs[(a, c)].total_dim() == 0:
                        return None
                    dg, df = combo
                    g = Mat.basis_column(field, homs[(b, c)].dim(dg), idx[0])
                    f = Mat.basis_column(field, homs[(a, b)].dim(df), idx[1])
                    return ring.mul(dg, g, df, f)

                comp[(a, b, c)] = src.map_from_entries(homs[(a, c)], 0, entry)
    for a in objs:
        for b in objs:
            lay = TensorLayout([ring.underlying, homs[(a, b)]])

            def entry(combo, idx, a=a, b=b):
                dr, dx = combo
                if homs[(a, b)].total_dim() == 0:
                    return None
                r = Mat.basis_column(field, ring.dim(dr), idx[0])
                x = Mat.basis_column(field, homs[(a, b)].dim(dx), idx[1])
                return ring.mul(dr, r, dx, x)

            action[(a, b)] = lay.map_from_entries(homs[(a, b)], 0, entry)
    return DgCategory(ring, objs, homs, comp, ids, action=action, name="freearrow")


def test_extension_adjunction_on_one_object():
    ring, aug = dual_numbers_setup(2, -1)
    a_cat = one_object_category(ring)
    b_s = one_object_category(aug.target)  # the ground field as S-linear cat
    b_r = restrict_category(b_s, aug)
    # F over (a, b_R): take F(*,*) = k with eps acting by zero on both sides
    from dgkit.complexes import Complex
    comps = {("*", "*"): Complex.one_dim(QQ, 0)}
    lact = {}
    ract = {}
    lay_l = TensorLayout([a_cat.hom("*", "*"), comps[("*", "*")]])

    def entry_l(combo, idx):
        dr, _ = combo
        if dr != 0:
            return None
        col = [QQ.zero()]
        if idx[0] == 0:
            col[0] = QQ.one()
        return Mat.column(QQ, col)

    lact[("*", "*", "*")] = lay_l.map_from_entries(comps[("*", "*")], 0, entry_l)
    lay_r = TensorLayout([comps[("*", "*")], b_r.hom("*", "*")])

    def entry_r(combo, idx):
        _, db = combo
        if db != 0:
            return None
        return Mat.column(QQ, [QQ.one()])

    ract[("*", "*", "*")] = lay_r.map_from_entries(comps[("*", "*")], 0, entry_r)
    f = Bimodule(a_cat, b_r, comps, lact, ract, name="kF")
    verdict = extension_adjunction_check(a_cat, b_s, f, aug)
    assert verdict.all_pass


def test_transitivity_on_eps3_chain():
    ring3, aug3 = make_dual_numbers(3, -2, QQ)
    ideal = aug3.kernel_ideal()
    r2, p2 = quotient(ring3, ideal_power(ideal, 2))        # R -> R/I^2
    # induced morphism R/I^2 -> k
    ker2 = p2.map.component(0)
    # build theta23: R/I^2 -> k via its own augmentation-like quotient
    aug_r2 = None
    from dgkit.dgring import check_setup_assumptions
    # quotient of r2 by its whole positive part: kernel of projection to degree 0 unit span
    from dgkit.dgring import DgIdeal
    # r2 -> k: compose with existing projection of dual numbers of order 2
    r2_ideal = None
    # simplest: r2 is isomorphic to k[e]/(e^2) with |e| = -2; build the morphism directly
    comps = {0: Mat(QQ, 1, r2.dim(0), [[QQ.one()] * r2.dim(0)])}
    # coefficient extraction: unit coordinate
    cols = []
    for j in range(r2.dim(0)):
        cols.append([QQ.one() if j == 0 else QQ.zero()])
    comps = {0: Mat(QQ, 1, r2.dim(0), [[c[0] for c in cols]])}
    ground = DgRing.ground_field(QQ)
    from dgkit.complexes import ChainMap
    theta23 = DgRingMorphism(r2, ground, ChainMap(r2.underlying, ground.underlying, 0, comps),
                             name="aug2")
    a_cat = free_arrow_category(ring3)
    verdict = transitivity_check(p2, theta23, a_cat)
    assert verdict.all_pass


def test_coextension_adjunction_one_object_S():
    ring, aug = dual_numbers_setup(2, -1)
    a_s = one_object_category(ring)       # A = one-object S-linear (here S = ring)
    b_r = one_object_category(DgRing.ground_field(QQ))
    # g over (a_s, b_r): g(*,*) = ring itself, left action by multiplication
    comps = {("*", "*"): ring.underlying}
    lact = {("*", "*", "*"): ring.mult}
    lay = TensorLayout([ring.underlying, b_r.hom("*", "*")])

    def entry(combo, idx):
        dx, db = combo
        if db != 0:
            return None
        col = [QQ.zero()] * ring.dim(dx)
        col[idx[0]] = QQ.one()
        return Mat.column(QQ, col)

    ract = {("*", "*", "*"): lay.map_from_entries(ring.underlying, 0, entry)}
    g = Bimodule(a_s, b_r, comps, lact, ract, name="gR")
    pair = coextension_adjunction_check(a_s, b_r, g)
    assert pair.all_pass


def test_coextension_tensor_and_cotensor():
    ring, aug = dual_numbers_setup(2, -1)
    b_r = one_object_category(DgRing.ground_field(QQ))
    scat = one_object_category(ring)
    # F = G = the (S, b)-bimodule S with multiplication S-structure
    comps = {("*", "*"): ring.underlying}
    lact = {("*", "*", "*"): ring.mult}
    lay = TensorLayout([ring.underlying, b_r.hom("*", "*")])

    def entry(combo, idx):
        dx, db = combo
        if db != 0:
            return None
        col = [QQ.zero()] * ring.dim(dx)
        col[idx[0]] = QQ.one()
        return Mat.column(QQ, col)

    ract = {("*", "*", "*"): lay.map_from_entries(ring.underlying, 0, entry)}
    f = Bimodule(scat, b_r, comps, lact, ract, name="Sbim")
    v = ring_as_module(ring, scat)
    assert coextension_tensor_check(v, f, f)
    assert coextension_cotensor_check(v, f, f)


def test_s_vs_r_comparison_on_free_instances():
    ring, aug = dual_numbers_setup(2, -1)
    a_cat = free_arrow_category(ring)
    ext = extend_scalars_cat(a_cat, aug)
    free = Module.representable(ext.category, "X")
    verdict = s_vs_r_module_comparison(ext, [free])
    assert verdict.all_pass


def test_heart_coextension_ground_field():
    # S = k: the heart datum is just a k-linear functor; instances in degree 0
    ring = DgRing.ground_field(QQ)
    theta = DgRingMorphism.identity(ring)
    b_r = one_object_category(ring)
    scat = one_object_category(ring)
    diag = Bimodule.diagonal(b_r)
    verdict = heart_coextension_check(b_r, theta, [diag])
    assert verdict.all_pass
    assert verdict.heart_members == [0]


def test_heart_coextension_dual_numbers_degree0():
    # S = k[u]/(u^2) in degree 0: heart objects = S-modules presented in the set
    ring, aug = make_dual_numbers(2, 0, QQ)
    b_r = one_object_category(DgRing.ground_field(QQ))
    scat = one_object_category(ring)
    # instance: S itself as an (S, b)-bimodule
    comps = {("*", "*"): ring.underlying}
    lact = {("*", "*", "*"): ring.mult}
    lay = TensorLayout([ring.underlying, b_r.hom("*", "*")])

    def entry(combo, idx):
        dx, db = combo
        if db != 0:
            return None
        col = [QQ.zero()] * ring.dim(dx)
        col[idx[0]] = QQ.one()
        return Mat.column(QQ, col)

    ract = {("*", "*", "*"): lay.map_from_entries(ring.underlying, 0, entry)}
    x = Bimodule(scat, b_r, comps, lact, ract, name="Sheart")
    theta = DgRingMorphism.identity(DgRing.ground_field(QQ))
    verdict = heart_coextension_check(b_r, aug_to_identity(aug), [x])
    assert 0 in verdict.heart_members
    assert verdict.realizations_quasi_iso
    assert verdict.h0_data_s_linear


def aug_to_identity(aug):
    # the heart check only needs theta for H^0(S); pass a morphism whose
    # target is the S at hand
    from dgkit.dgring import DgRingMorphism
    return DgRingMorphism.identity(aug.source)


def test_lax_monoidal_comparison_over_ground_field():
    from dgkit.changeofrings import lax_monoidal_comparison
    from dgkit.dgring import DgRing, DgRingMorphism
    from dgkit.complexes import ChainMap
    ground = DgRing.ground_field(QQ)
    ring, aug = make_dual_numbers(2, 0, QQ)  # S in degree 0
    # theta: k -> S (unit inclusion), making S-linear categories k-restrictable
    comps = {0: Mat(QQ, ring.dim(0), 1, [[QQ.one()], [QQ.zero()]])}
    theta = DgRingMorphism(ground, ring,
                           ChainMap(ground.underlying, ring.underlying, 0, comps),
                           name="unit")
    a = one_object_category(ring)
    b = one_object_category(ring)
    projs = lax_monoidal_comparison(a, b, theta)
    proj = projs[(("*", "*"), ("*", "*"))]
    # S (x)_k S has dimension 4 in degree 0; S (x)_S S has dimension 2
    assert proj.source.dim(0) == 4
    assert proj.target.dim(0) == 2
    assert proj.component(0).rank() == 2


def test_duality_commutes_with_coextension_dims():
    # dual of an (S, b)-bimodule computed with its S-structure in place has
    # the same graded dimensions as the plain module-level dual, and smart
    # truncation commutes at the dimension level
    from dgkit.bimodules import dual_of, module_hom_complex, Module
    from dgkit.changeofrings import truncate_bimodule_le0
    ring, aug = dual_numbers_setup(2, -1)
    scat = one_object_category(ring)
    b_r = one_object_category(DgRing.ground_field(QQ))
    from dgkit.instances import cross_representable_bimodule
    x = cross_representable_bimodule(scat, b_r, "*", "*")
    d = dual_of(x)
    plain = module_hom_complex(x.module_at("*"),
                               Module.representable(b_r, "*"))
    for deg in set(d.at("*", "*").degrees()) | set(plain.complex.degrees()):
        assert d.at("*", "*").dim(deg) == plain.complex.dim(deg)
    # t-exactness at truncation level: tle0 of the dual vs dual dims in <= 0
    td, _ = truncate_bimodule_le0(d)
    dh = d.at("*", "*").cohomology().as_dict()
    th = td.at("*", "*").cohomology().as_dict()
    for deg, v in dh.items():
        if deg <= 0:
            assert th.get(deg, 0) == v


def test_hfp_interchange_on_coextension_instance():
    from dgkit.derived import is_hfp, DegreeWindow
    ring, aug = dual_numbers_setup(2, -1)
    scat = one_object_category(ring)
    b_r = one_object_category(DgRing.ground_field(QQ))
    from dgkit.instances import cross_representable_bimodule
    x = cross_representable_bimodule(scat, b_r, "*", "*")
    w = DegreeWindow(-3, 0)
    coext_verdict = is_hfp(x.module_at("*"), w)
    objectwise = all(is_hfp(Module_from_component(x, b), w).hfp for b in b_r.objects)
    assert coext_verdict.hfp == objectwise


def Module_from_component(x, b):
    from dgkit.changeofrings import s_module_of_component
    scat = x.acat
    return s_module_of_component(x, b, scat)


def test_restrict_scalars_dispatcher():
    from dgkit.changeofrings import restrict_scalars
    ring, aug = dual_numbers_setup(2, -1)
    cat = one_object_category(ring)
    # categories restrict along the identity unchanged
    same = restrict_scalars(cat, DgRingMorphism.identity(ring))
    assert same.hom("*", "*") == cat.hom("*", "*")
    # one-object S-modules restrict to R-modules
    from dgkit.derived import ring_as_module
    ground_cat = one_object_category(aug.target)
    m = ring_as_module(aug.target, ground_cat)
    restricted = restrict_scalars(m, aug)
    obj = restricted.cat.objects[0]
    assert restricted.at(obj).cohomology().as_dict() == {0: 1}
