"""Dg-categories: truncation, H^0, opposites, tensor products."""

import random

import pytest

from dgkit.fields import GF, QQ
from dgkit.dgring import DgRing, make_dual_numbers
from dgkit.dgcat import (
    DgCategory,
    DgFunctor,
    h0_category,
    h0_ring,
    hstar_dims,
    one_object_category,
    opposite,
    tensor_cat,
    truncate_cat,
)
from dgkit.instances import random_nonpositive_category
from dgkit.matrix import Mat
from dgkit.complexes import Complex, TensorLayout


def test_one_object_category_from_ring():
    ring, _ = make_dual_numbers(2, -1, QQ)
    cat = one_object_category(ring)
    assert cat.objects == ("*",)
    assert cat.hom("*", "*") == ring.underlying


def test_random_categories_validate():
    rng = random.Random(101)
    for _ in range(6):
        cat = random_nonpositive_category(rng, QQ, n_objects=rng.randint(1, 3))
        assert cat.is_strictly_nonpositive()


def test_truncate_cat_of_nonpositive_is_identity_shape():
    rng = random.Random(103)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    tcat, incl, toh0 = truncate_cat(cat)
    for a in cat.objects:
        for b in cat.objects:
            assert {d: tcat.hom(a, b).dim(d) for d in tcat.hom(a, b).degrees()} == \
                {d: cat.hom(a, b).dim(d) for d in cat.hom(a, b).degrees()}


def test_truncate_cat_removes_positive_part():
    # one object, End = unit line + a two-term identity complex in degrees 0,1
    field = QQ
    base = DgRing.ground_field(field)
    dims = {0: 2, 1: 1}
    diffs = {0: Mat(field, 1, 2, [[field.zero(), field.one()]])}
    end = Complex(field, dims, diffs, name="End")
    lay = TensorLayout([end, end])

    def entry(combo, idx):
        dg, df = combo
        i, j = idx
        if dg == 0 and i == 0:
            col = [field.zero()] * end.dim(df)
            col[j] = field.one()
            return Mat.column(field, col)
        if df == 0 and j == 0:
            col = [field.zero()] * end.dim(dg)
            col[i] = field.one()
            return Mat.column(field, col)
        return None

    comp = {("*", "*", "*"): lay.map_from_entries(end, 0, entry)}
    cat = DgCategory(base, ["*"], {("*", "*"): end}, comp,
                     {"*": Mat.basis_column(field, 2, 0)}, name="onepos")
    tcat, incl, _ = truncate_cat(cat)
    t_end = tcat.hom("*", "*")
    assert t_end.max_degree() == 0
    assert t_end.dim(0) == 1  # Z^0 = unit line only
    full = cat.hom("*", "*").cohomology().as_dict()
    trunc = t_end.cohomology().as_dict()
    for d, v in full.items():
        if d <= 0:
            assert trunc.get(d, 0) == v


def test_truncation_inclusion_quasi_equivalence_on_nonpositive_cohomology():
    rng = random.Random(107)
    for _ in range(4):
        cat = random_nonpositive_category(rng, QQ, n_objects=2)
        tcat, incl, _ = truncate_cat(cat)
        for a in cat.objects:
            for b in cat.objects:
                assert incl.hom_map(a, b).is_quasi_iso()


def test_h0_category_of_degree0_category():
    rng = random.Random(109)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    h0 = h0_category(cat)
    # path categories have zero differentials so H^0 = degree-0 part
    for a in cat.objects:
        for b in cat.objects:
            assert h0.dim(a, b) == cat.hom(a, b).dim(0)


def test_h0_of_dual_numbers_category():
    ring, _ = make_dual_numbers(2, -1, QQ)
    cat = one_object_category(ring)
    h0 = h0_category(cat)
    assert h0.dim("*", "*") == 1


def test_h0_acyclic_hom_is_zero():
    rng = random.Random(113)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="discrete")
    h0 = h0_category(cat)
    for a in cat.objects:
        for b in cat.objects:
            assert h0.dim(a, b) == cat.hom(a, b).cohomology().dim(0)


def test_opposite_involution_strict():
    rng = random.Random(127)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    op2 = opposite(opposite(cat))
    for key, cm in cat.comp.items():
        assert op2.comp[key] == cm
    for a in cat.objects:
        for b in cat.objects:
            assert op2.hom(a, b) == cat.hom(a, b)


def test_tensor_with_unit_category():
    rng = random.Random(131)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    unit = one_object_category(DgRing.ground_field(QQ), obj="pt")
    prod = tensor_cat(cat, unit)
    assert len(prod.objects) == len(cat.objects)
    for a in cat.objects:
        for b in cat.objects:
            assert {d: prod.hom((a, "pt"), (b, "pt")).dim(d)
                    for d in prod.hom((a, "pt"), (b, "pt")).degrees()} == \
                {d: cat.hom(a, b).dim(d) for d in cat.hom(a, b).degrees()}


def test_tensor_nonpositive_h0_matches_tensor_of_h0():
    rng = random.Random(137)
    a = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    b = random_nonpositive_category(rng, QQ, n_objects=1, flavor="discrete")
    prod = tensor_cat(a, b)
    assert prod.is_strictly_nonpositive()
    h0a = h0_category(a)
    h0b = h0_category(b)
    h0p = h0_category(prod)
    for x in a.objects:
        for y in a.objects:
            for u in b.objects:
                for v in b.objects:
                    assert h0p.dim((x, u), (y, v)) == h0a.dim(x, y) * h0b.dim(u, v)


def test_opposite_of_tensor_is_tensor_of_opposites():
    rng = random.Random(139)
    a = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    b = random_nonpositive_category(rng, QQ, n_objects=1, flavor="discrete")
    lhs = opposite(tensor_cat(a, b))
    rhs = tensor_cat(opposite(a), opposite(b))
    for key in lhs.comp:
        assert lhs.comp[key] == rhs.comp[key]


def test_hstar_dims():
    ring, _ = make_dual_numbers(3, -2, QQ)
    cat = one_object_category(ring)
    dims = hstar_dims(cat)
    assert dims[("*", "*")] == {0: 1, -2: 1, -4: 1}


def test_h0_ring_of_truncated():
    ring, _ = make_dual_numbers(2, -1, QQ)
    h0, proj = h0_ring(ring)
    assert h0.total_dim() == 1
    assert proj.is_strictly_surjective()
