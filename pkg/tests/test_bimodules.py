"""Modules, bimodules, (co)ends, composition, duality, quasi-representatives."""

import random

import pytest

from dgkit.fields import QQ
from dgkit.dgring import DgRing, make_dual_numbers
from dgkit.dgcat import DgFunctor, one_object_category, truncate_cat
from dgkit.bimodules import (
    Bimodule,
    Module,
    ModuleMap,
    cone_module,
    coend_of,
    compose_bimodules,
    direct_sum_modules,
    dual_of,
    end_of,
    find_quasi_representative,
    module_hom_complex,
    restrict_bimodule,
    shift_module,
    yoneda_map_from_cocycle,
)
from dgkit.instances import (
    outer_representable_bimodule,
    random_module,
    random_nonpositive_category,
    random_square_bimodule,
    trivial_action_bimodule,
    trivial_action_module,
)
from dgkit.matrix import Mat


def brute_force_end_dims(t):
    """Independent equalizer solver: naturality equations assembled from raw
    elementwise action applications, eliminated via the transpose."""
    cat = t.acat
    field = t.field
    dims = {}
    degrees = sorted({d for a in cat.objects for d in t.at(a, a).degrees()})
    for n in degrees:
        total = sum(t.at(a, a).dim(n) for a in cat.objects)
        if total == 0:
            continue
        offs = {}
        acc = 0
        for a in cat.objects:
            offs[a] = acc
            acc += t.at(a, a).dim(n)
        rows = []
        for a in cat.objects:
            for a2 in cat.objects:
                for df, f in cat.hom_basis(a, a2):
                    out_dim = t.at(a2, a).dim(n + df)
                    if out_dim == 0:
                        continue
                    for r in range(out_dim):
                        row = [field.zero()] * total
                        for i in range(t.at(a, a).dim(n)):
                            x = Mat.basis_column(field, t.at(a, a).dim(n), i)
                            v = t.lact_apply(a, a2, a, df, f, n, x)
                            row[offs[a] + i] = field.add(row[offs[a] + i], v.entries[r][0])
                        for i in range(t.at(a2, a2).dim(n)):
                            x = Mat.basis_column(field, t.at(a2, a2).dim(n), i)
                            v = t.ract_apply(a2, a, a2, n, x, df, f)
                            c = v.entries[r][0]
                            if (df % 2) and (n % 2):
                                pass
                            else:
                                c = field.neg(c)
                            row[offs[a2] + i] = field.add(row[offs[a2] + i], c)
                        rows.append(row)
        if rows:
            m = Mat(field, len(rows), total, rows)
            dims[n] = total - m.transpose().transpose().rank()
        else:
            dims[n] = total
    return {d: v for d, v in dims.items() if v}


def brute_force_coend_dims(t):
    """Independent coequalizer solver."""
    cat = t.acat
    field = t.field
    dims = {}
    degrees = sorted({d for a in cat.objects for d in t.at(a, a).degrees()})
    for n in degrees:
        total = sum(t.at(a, a).dim(n) for a in cat.objects)
        if total == 0:
            continue
        offs = {}
        acc = 0
        for a in cat.objects:
            offs[a] = acc
            acc += t.at(a, a).dim(n)
        cols = []
        for a1 in cat.objects:
            for a2 in cat.objects:
                for df, f in cat.hom_basis(a2, a1):
                    src = t.at(a2, a1)
                    dx = n - df
                    for i in range(src.dim(dx)):
                        x = Mat.basis_column(field, src.dim(dx), i)
                        fx = t.lact_apply(a2, a1, a1, df, f, dx, x)
                        xf = t.ract_apply(a2, a2, a1, dx, x, df, f)
                        col = [field.zero()] * total
                        for r, v in enumerate(fx.column_values(0)):
                            col[offs[a1] + r] = field.add(col[offs[a1] + r], v)
                        sign = -1 if (df % 2 and dx % 2) else 1
                        for r, v in enumerate(xf.column_values(0)):
                            col[offs[a2] + r] = field.sub(col[offs[a2] + r],
                                                          v if sign > 0 else field.neg(v))
                        cols.append(col)
        rel_rank = Mat.from_columns(field, total, cols).rank() if cols else 0
        dims[n] = total - rel_rank
    return {d: v for d, v in dims.items() if v}


def test_end_one_object_ground_field():
    cat = one_object_category(DgRing.ground_field(QQ))
    t = Bimodule.diagonal(cat)
    res = end_of(t)
    assert {d: res.complex.dim(d) for d in res.complex.degrees()} == {0: 1}


def test_coend_one_object_ground_field():
    cat = one_object_category(DgRing.ground_field(QQ))
    t = Bimodule.diagonal(cat)
    res = coend_of(t)
    assert {d: res.complex.dim(d) for d in res.complex.degrees()} == {0: 1}


def test_end_coend_match_brute_force_on_random_bimodules():
    rng = random.Random(211)
    for _ in range(10):
        cat = random_nonpositive_category(rng, QQ, n_objects=rng.randint(1, 3))
        t = random_square_bimodule(rng, cat)
        res_end = end_of(t)
        res_coend = coend_of(t)
        got_end = {d: res_end.complex.dim(d) for d in res_end.complex.degrees()}
        got_coend = {d: res_coend.complex.dim(d) for d in res_coend.complex.degrees()}
        assert {d: v for d, v in got_end.items() if v} == brute_force_end_dims(t)
        assert {d: v for d, v in got_coend.items() if v} == brute_force_coend_dims(t)
        # membership: every end element satisfies the raw naturality equations
        for n in res_end.complex.degrees():
            for j in range(res_end.complex.dim(n)):
                amb = res_end.inclusion.component(n) @ Mat.basis_column(QQ, res_end.complex.dim(n), j)
                parts = {a: res_end.projections[a].component(n) @ amb for a in cat.objects}
                for a in cat.objects:
                    for a2 in cat.objects:
                        for df, f in cat.hom_basis(a, a2):
                            lhs = t.lact_apply(a, a2, a, df, f, n, parts[a])
                            rhs = t.ract_apply(a2, a, a2, n, parts[a2], df, f)
                            if (df % 2) and (n % 2):
                                rhs = -rhs
                            assert lhs == rhs


def test_module_hom_complex_identity_is_cocycle():
    rng = random.Random(223)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    m = random_module(rng, cat)
    mhc = module_hom_complex(m, m)
    ident = ModuleMap(m, m, 0, {a: __import__("dgkit.complexes", fromlist=["ChainMap"]).ChainMap.identity(m.at(a))
                                for a in cat.objects})
    vec = mhc.vector_from_module_map(ident)
    # identity is closed in the module hom complex
    assert (mhc.complex.diff(0) @ vec).is_zero()


def test_representable_module_hom_is_yoneda():
    rng = random.Random(227)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    for a in cat.objects:
        h = Module.representable(cat, a)
        for b in cat.objects:
            hb = Module.representable(cat, b)
            mhc = module_hom_complex(hb, h)
            # graded Yoneda: Hom(h_b, h_a) = hom(b, a) as complexes
            assert {d: mhc.complex.dim(d) for d in mhc.complex.degrees()} == \
                {d: cat.hom(b, a).dim(d) for d in cat.hom(b, a).degrees()}


def test_compose_with_diagonal_is_co_yoneda():
    rng = random.Random(229)
    for _ in range(4):
        cat = random_nonpositive_category(rng, QQ, n_objects=2)
        f = random_square_bimodule(rng, cat)
        diag = Bimodule.diagonal(cat)
        comp = compose_bimodules(f, diag)
        for a in cat.objects:
            for b in cat.objects:
                lhs = comp.at(a, b).cohomology().as_dict()
                rhs = f.at(a, b).cohomology().as_dict()
                assert lhs == rhs


def test_compose_diagonal_other_side():
    rng = random.Random(233)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    g = random_square_bimodule(rng, cat)
    diag = Bimodule.diagonal(cat)
    comp = compose_bimodules(diag, g)
    for a in cat.objects:
        for b in cat.objects:
            assert comp.at(a, b).cohomology().as_dict() == g.at(a, b).cohomology().as_dict()


def test_dual_of_diagonal_one_object():
    cat = one_object_category(DgRing.ground_field(QQ))
    diag = Bimodule.diagonal(cat)
    d = dual_of(diag)
    assert {deg: d.at("*", "*").dim(deg) for deg in d.at("*", "*").degrees()} == {0: 1}


def test_dual_reverses_graded_dims_on_representable():
    rng = random.Random(239)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    diag = Bimodule.diagonal(cat)
    d = dual_of(diag)
    for a in cat.objects:
        for b in cat.objects:
            # H^*(dual)(a,b) matches H^*(original) with variance reversed
            lhs = d.at(a, b).cohomology().as_dict()
            rhs = cat.hom(a, b).cohomology().as_dict()
            assert lhs == rhs


def test_find_quasi_representative_diagonal():
    rng = random.Random(241)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    diag = Bimodule.diagonal(cat)
    for a in cat.objects:
        wit = find_quasi_representative(diag, a)
        assert wit is not None
        assert wit.obj == a
        assert all(not v for v in wit.certificates.values())


def test_find_quasi_representative_none_for_acyclic():
    rng = random.Random(251)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    # zero bimodule: no representable is acyclic since h_B has cohomology
    t = trivial_action_bimodule(rng, cat, pieces=0, name="zeroT")
    assert all(t.at(a, b).total_dim() == 0 for a in cat.objects for b in cat.objects)
    assert find_quasi_representative(t, cat.objects[0]) is None


def test_restrict_bimodule_identity():
    rng = random.Random(257)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    t = random_square_bimodule(rng, cat)
    r = restrict_bimodule(t, DgFunctor.identity(cat), side="lower")
    for a in cat.objects:
        for b in cat.objects:
            assert r.at(a, b) == t.at(a, b)


def test_restrict_along_truncation_inclusion():
    rng = random.Random(263)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    tcat, incl, _ = truncate_cat(cat)
    t = Bimodule.diagonal(cat)
    r = restrict_bimodule(t, incl, side="lower")
    for a in cat.objects:
        for b in cat.objects:
            assert r.at(a, b) == t.at(a, b)
    wit = find_quasi_representative(r, cat.objects[0])
    assert wit is not None


def test_shift_module_and_cone_module():
    rng = random.Random(269)
    cat = random_nonpositive_category(rng, QQ, n_objects=2)
    m = Module.representable(cat, cat.objects[0])
    s = shift_module(m, -1)
    for a in cat.objects:
        assert s.at(a).dim(1) == m.at(a).dim(0)
    n = random_module(rng, cat)
    mhc = module_hom_complex(m, n)
    from dgkit.instances import random_cocycle
    v = random_cocycle(rng, mhc.complex, 0)
    if v is not None:
        phi = mhc.module_map_from_cocycle(0, v)
        c, incl, proj = cone_module(phi)
        assert c.total_dim() == m.total_dim() + n.total_dim()


def test_yoneda_map_from_cocycle_identity():
    rng = random.Random(271)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    diag = Bimodule.diagonal(cat)
    a = cat.objects[0]
    wit_map = yoneda_map_from_cocycle(diag, a, a, cat.id_vector(a))
    assert wit_map.is_quasi_iso()


def test_composition_of_representables_witness_transport():
    # composing the diagonal with itself stays representable at each object,
    # with the witness recovered by the deterministic search
    rng = random.Random(281)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    diag = Bimodule.diagonal(cat)
    comp = compose_bimodules(diag, diag)
    for a in cat.objects:
        wit = find_quasi_representative(comp, a)
        assert wit is not None
        assert wit.obj == a


def test_representable_plus_acyclic_witness_recovered():
    # f = h_B (+) acyclic cone summand: the witness B is recovered
    rng = random.Random(283)
    cat = random_nonpositive_category(rng, QQ, n_objects=2, flavor="path")
    from dgkit.bimodules import direct_sum_bimodules
    from dgkit.instances import acyclic_trivial_bimodule
    diag = Bimodule.diagonal(cat)
    acyc = acyclic_trivial_bimodule(rng, cat)
    f = direct_sum_bimodules([diag, acyc])
    for a in cat.objects:
        wit = find_quasi_representative(f, a)
        assert wit is not None and wit.obj == a
