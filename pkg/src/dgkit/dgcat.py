"""Small dg-categories over a dg-ring: hom complexes, composition tensors,
identities, base-ring action, truncation, homotopy categories, opposites and
tensor products.

Composition is stored as one chain map hom(B,C) @ hom(A,B) -> hom(A,C) per
object triple; its chain-map property is the Leibniz rule.  Identity,
associativity, and compatibility of the base action are checked on basis
elements at construction.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .complexes import (
    ChainMap,
    Complex,
    TensorLayout,
    element_action,
    regroup,
    subcomplex,
    truncate_le,
)
from .dgring import DgRing, DgRingMorphism
from .errors import ValidationError
from .matrix import Mat


class DgCategory:
    """Finite dg-category with explicit composition tensors and base action."""

    def __init__(self, base: DgRing, objects: Sequence, homs: Dict,
                 comp: Dict, ids: Dict, action: Optional[Dict] = None,
                 name: str = "C", check: bool = True):
        self.base = base
        self.field = base.field
        self.objects = tuple(objects)
        self.name = name
        self.homs = {}
        for a in self.objects:
            for b in self.objects:
                cx = homs.get((a, b))
                self.homs[(a, b)] = cx if cx is not None else Complex.zero(self.field)
        self.comp_layouts: Dict[Tuple, TensorLayout] = {}
        self.comp: Dict[Tuple, ChainMap] = {}
        for a in self.objects:
            for b in self.objects:
                for c in self.objects:
                    lay = TensorLayout([self.hom(b, c), self.hom(a, b)])
                    self.comp_layouts[(a, b, c)] = lay
                    cm = comp.get((a, b, c))
                    if cm is None:
                        cm = ChainMap.zero_map(lay.complex, self.hom(a, c))
                    self.comp[(a, b, c)] = cm
        self.ids = dict(ids)
        self.action_layouts: Dict[Tuple, TensorLayout] = {}
        self.action: Dict[Tuple, ChainMap] = {}
        for a in self.objects:
            for b in self.objects:
                lay = TensorLayout([base.underlying, self.hom(a, b)])
                self.action_layouts[(a, b)] = lay
                act = None if action is None else action.get((a, b))
                if act is None:
                    act = self._scalar_action(lay, self.hom(a, b))
                self.action[(a, b)] = act
        if check:
            self._check()

    def _scalar_action(self, lay: TensorLayout, target: Complex) -> ChainMap:
        """Default action when the base is the ground field: scalar rescaling."""
        if not self.base.is_ground_field():
            raise ValidationError(
                f"{self.name}: an explicit base action is required over {self.base.name}")
        field = self.field
        unit_row = self.base.unit.column_values(0)

        def entry(combo, idx):
            rdeg, hdeg = combo
            if rdeg != 0:
                return None
            coeff = unit_row[idx[0]]
            col = [field.zero()] * target.dim(hdeg)
            col[idx[1]] = coeff
            return Mat.column(field, col)

        return lay.map_from_entries(target, 0, entry)

    # -- access -----------------------------------------------------------

    def hom(self, a, b) -> Complex:
        return self.homs[(a, b)]

    def id_vector(self, a) -> Mat:
        return self.ids[a]

    def compose_elements(self, a, b, c, dg: int, g: Mat, df: int, f: Mat) -> Mat:
        """Composite g o f of homogeneous elements g in hom(b,c), f in hom(a,b)."""
        field = self.field
        lay = self.comp_layouts[(a, b, c)]
        cm = self.comp[(a, b, c)]
        out = Mat.zero(field, self.hom(a, c).dim(dg + df), 1)
        comp_mat = cm.component(dg + df)
        for i, gv in enumerate(g.column_values(0)):
            if field.is_zero(gv):
                continue
            for j, fv in enumerate(f.column_values(0)):
                if field.is_zero(fv):
                    continue
                pos = lay.position((dg, df), (i, j))
                out = out + comp_mat.col(pos).scale(field.mul(gv, fv))
        return out

    def act_element(self, a, b, rdeg: int, rvec: Mat) -> Dict[int, Mat]:
        """Per-degree matrices of r * (-) on hom(a,b)."""
        return element_action(self.action[(a, b)], self.action_layouts[(a, b)], 0, rdeg, rvec)

    def precompose_with(self, a, b, c, df: int, f: Mat) -> Dict[int, Mat]:
        """(-) o f as per-degree matrices hom(b,c) -> hom(a,c)."""
        return element_action(self.comp[(a, b, c)], self.comp_layouts[(a, b, c)], 1, df, f)

    def postcompose_with(self, a, b, c, dg: int, g: Mat) -> Dict[int, Mat]:
        """g o (-) as per-degree matrices hom(a,b) -> hom(a,c)."""
        return element_action(self.comp[(a, b, c)], self.comp_layouts[(a, b, c)], 0, dg, g)

    def hom_basis(self, a, b):
        cx = self.hom(a, b)
        for deg in cx.degrees():
            for i in range(cx.dim(deg)):
                yield deg, Mat.basis_column(self.field, cx.dim(deg), i)

    def total_hom_dim(self) -> int:
        return sum(cx.total_dim() for cx in self.homs.values())

    def is_strictly_nonpositive(self) -> bool:
        return all(cx.max_degree() is None or cx.max_degree() <= 0 for cx in self.homs.values())

    def has_nonpositive_cohomology(self) -> bool:
        return all(all(d <= 0 for d in cx.cohomology().support()) for cx in self.homs.values())

    # -- invariants ---------------------------------------------------------

    def _check(self):
        name = self.name
        for a in self.objects:
            ida = self.ids.get(a)
            if ida is None or (ida.rows, ida.cols) != (self.hom(a, a).dim(0), 1):
                raise ValidationError(f"{name}: missing or malformed identity at {a}")
            if not (self.hom(a, a).diff(0) @ ida).is_zero():
                raise ValidationError(f"{name}: identity at {a} is not closed")
        for a in self.objects:
            for b in self.objects:
                for deg, f in self.hom_basis(a, b):
                    if self.compose_elements(a, b, b, 0, self.ids[b], deg, f) != f:
                        raise ValidationError(f"{name}: left identity fails on hom({a},{b})")
                    if self.compose_elements(a, a, b, deg, f, 0, self.ids[a]) != f:
                        raise ValidationError(f"{name}: right identity fails on hom({a},{b})")
        for a in self.objects:
            for b in self.objects:
                for c in self.objects:
                    for d in self.objects:
                        for dh, h in self.hom_basis(c, d):
                            for dg, g in self.hom_basis(b, c):
                                hg = self.compose_elements(b, c, d, dh, h, dg, g)
                                for df, f in self.hom_basis(a, b):
                                    left = self.compose_elements(a, b, d, dh + dg, hg, df, f)
                                    gf = self.compose_elements(a, b, c, dg, g, df, f)
                                    right = self.compose_elements(a, c, d, dh, h, dg + df, gf)
                                    if left != right:
                                        raise ValidationError(
                                            f"{name}: associativity fails on triple "
                                            f"hom({c},{d}) x hom({b},{c}) x hom({a},{b})")
        self._check_action()

    def _check_action(self):
        name = self.name
        field = self.field
        unit = self.base.unit
        for a in self.objects:
            for b in self.objects:
                fam_unit = self.act_element(a, b, 0, unit)
                for deg in self.hom(a, b).degrees():
                    if fam_unit.get(deg) != Mat.identity(field, self.hom(a, b).dim(deg)):
                        raise ValidationError(f"{name}: base action not unital on hom({a},{b})")
        for dr, i in self.base.basis():
            r = self.base.basis_vector(dr, i)
            for ds, j in self.base.basis():
                s = self.base.basis_vector(ds, j)
                rs = self.base.mul(dr, r, ds, s)
                for a in self.objects:
                    for b in self.objects:
                        fam_r = self.act_element(a, b, dr, r)
                        fam_s = self.act_element(a, b, ds, s)
                        fam_rs = self.act_element(a, b, dr + ds, rs)
                        for deg in self.hom(a, b).degrees():
                            via = fam_r.get(deg + ds, Mat.zero(field, self.hom(a, b).dim(deg + ds + dr),
                                                               self.hom(a, b).dim(deg + ds))) @ \
                                fam_s.get(deg, Mat.zero(field, self.hom(a, b).dim(deg + ds),
                                                        self.hom(a, b).dim(deg)))
                            direct = fam_rs.get(deg, Mat.zero(field, self.hom(a, b).dim(deg + dr + ds),
                                                              self.hom(a, b).dim(deg)))
                            if via != direct:
                                raise ValidationError(
                                    f"{name}: base action not associative on hom({a},{b})")
        # centrality against composition on basis elements
        for dr, i in self.base.basis():
            r = self.base.basis_vector(dr, i)
            for a in self.objects:
                for b in self.objects:
                    for c in self.objects:
                        for dg, g in self.hom_basis(b, c):
                            rg_fam = self.act_element(b, c, dr, r)
                            rg = rg_fam[dg] @ g if dg in rg_fam else Mat.zero(field, self.hom(b, c).dim(dg + dr), 1)
                            for df, f in self.hom_basis(a, b):
                                rf_fam = self.act_element(a, b, dr, r)
                                rf = rf_fam[df] @ f if df in rf_fam else Mat.zero(field, self.hom(a, b).dim(df + dr), 1)
                                gf = self.compose_elements(a, b, c, dg, g, df, f)
                                r_gf_fam = self.act_element(a, c, dr, r)
                                r_gf = r_gf_fam[dg + df] @ gf if (dg + df) in r_gf_fam else \
                                    Mat.zero(field, self.hom(a, c).dim(dg + df + dr), 1)
                                left = self.compose_elements(a, b, c, dg + dr, rg, df, f)
                                if left != r_gf:
                                    raise ValidationError(
                                        f"{self.name}: action not central (left) on hom({a},{b},{c})")
                                right = self.compose_elements(a, b, c, dg, g, df + dr, rf)
                                if dr % 2 and dg % 2:
                                    right = -right
                                if right != r_gf:
                                    raise ValidationError(
                                        f"{self.name}: action not central (right) on hom({a},{b},{c})")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_ring(ring: DgRing, obj="*", name: Optional[str] = None) -> "DgCategory":
        """The one-object category whose endomorphisms are the ring."""
        cx = ring.underlying
        lay = TensorLayout([cx, cx])
        comp = {(obj, obj, obj): ring.mult}
        action = {(obj, obj): ring.mult}
        return DgCategory(ring, [obj], {(obj, obj): cx}, comp, {obj: ring.unit},
                          action=action, name=name or ring.name, check=False)


def one_object_category(ring: DgRing, obj="*") -> DgCategory:
    return DgCategory.from_ring(ring, obj=obj)


class DgFunctor:
    """Strict dg-functor; may be linear over a base-ring morphism."""

    def __init__(self, source: DgCategory, target: DgCategory, obj_map: Dict,
                 hom_maps: Dict, base_change: Optional[DgRingMorphism] = None,
                 name: str = "F", check: bool = True):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.hom_maps = dict(hom_maps)
        self.base_change = base_change
        self.name = name
        if check:
            self._check()

    def hom_map(self, a, b) -> ChainMap:
        return self.hom_maps[(a, b)]

    def apply_hom(self, a, b, deg: int, vec: Mat) -> Mat:
        return self.hom_map(a, b).component(deg) @ vec

    def _check(self):
        s, t = self.source, self.target
        for a in s.objects:
            fa = self.obj_map[a]
            img = self.apply_hom(a, a, 0, s.id_vector(a))
            if img != t.id_vector(fa):
                raise ValidationError(f"{self.name}: identities not preserved at {a}")
        for a in s.objects:
            for b in s.objects:
                for c in s.objects:
                    for dg, g in s.hom_basis(b, c):
                        for df, f in s.hom_basis(a, b):
                            gf = s.compose_elements(a, b, c, dg, g, df, f)
                            lhs = self.apply_hom(a, c, dg + df, gf)
                            rhs = t.compose_elements(
                                self.obj_map[a], self.obj_map[b], self.obj_map[c],
                                dg, self.apply_hom(b, c, dg, g),
                                df, self.apply_hom(a, b, df, f))
                            if lhs != rhs:
                                raise ValidationError(
                                    f"{self.name}: composition not preserved on hom({a},{b})xhom({b},{c})")
        # linearity over the base (or over a base-ring morphism)
        base = self.base_change
        for dr, i in s.base.basis():
            r = s.base.basis_vector(dr, i)
            r_t = base.apply(dr, r) if base is not None else r
            for a in s.objects:
                for b in s.objects:
                    fa, fb = self.obj_map[a], self.obj_map[b]
                    for df, f in s.hom_basis(a, b):
                        fam = s.act_element(a, b, dr, r)
                        rf = fam[df] @ f if df in fam else Mat.zero(s.field, s.hom(a, b).dim(df + dr), 1)
                        lhs = self.apply_hom(a, b, df + dr, rf)
                        fam_t = t.act_element(fa, fb, dr, r_t)
                        img = self.apply_hom(a, b, df, f)
                        rhs = fam_t[df] @ img if df in fam_t else Mat.zero(t.field, t.hom(fa, fb).dim(df + dr), 1)
                        if lhs != rhs:
                            raise ValidationError(f"{self.name}: not linear over the base on hom({a},{b})")

    @staticmethod
    def identity(cat: DgCategory) -> "DgFunctor":
        return DgFunctor(cat, cat, {a: a for a in cat.objects},
                         {(a, b): ChainMap.identity(cat.hom(a, b))
                          for a in cat.objects for b in cat.objects},
                         name=f"id_{cat.name}", check=False)


class H0Category:
    """Homotopy category in degree 0: hom sets are H^0 classes."""

    def __init__(self, cat: DgCategory):
        self.cat = cat
        self.objects = cat.objects
        self.field = cat.field
        self.reports = {(a, b): cat.hom(a, b).cohomology()
                        for a in cat.objects for b in cat.objects}
        self.ids = {a: self.class_of(a, a, cat.id_vector(a)) for a in cat.objects}
        # well-definedness: representative o coboundary stays a coboundary
        for a in cat.objects:
            for b in cat.objects:
                img = self.reports[(a, b)].image(0)
                for c in cat.objects:
                    reps = self.reports[(b, c)].rep(0)
                    for i in range(reps.cols):
                        for j in range(img.cols):
                            comp = cat.compose_elements(a, b, c, 0, reps.col(i), 0, img.col(j))
                            if not self.class_of(a, c, comp).is_zero():
                                raise ValidationError(
                                    f"H0({cat.name}): composition not well defined on classes")

    def dim(self, a, b) -> int:
        return self.reports[(a, b)].dim(0)

    def rep(self, a, b) -> Mat:
        return self.reports[(a, b)].rep(0)

    def class_of(self, a, b, cocycle: Mat) -> Mat:
        return self.reports[(a, b)].class_of(0, cocycle)

    def compose(self, a, b, c, gclass: Mat, fclass: Mat) -> Mat:
        g = self.rep(b, c) @ gclass
        f = self.rep(a, b) @ fclass
        return self.class_of(a, c, self.cat.compose_elements(a, b, c, 0, g, 0, f))

    def hom_dims(self) -> Dict:
        return {(a, b): self.dim(a, b) for a in self.objects for b in self.objects}


def h0_ring(ring: DgRing) -> Tuple[DgRing, DgRingMorphism]:
    """H^0 of a (strictly nonpositive) dg-ring, with the projection morphism."""
    cx = ring.underlying
    rep = cx.cohomology()
    n0 = rep.dim(0)
    reps = rep.rep(0)
    field = ring.field
    dims = {0: n0} if n0 else {}
    h0 = Complex(field, dims, {}, name=f"H0({ring.name})")
    img = rep.image(0)

    def project(vec: Mat) -> Mat:
        return rep.class_of(0, vec)

    unit = project(ring.unit)
    lay = TensorLayout([h0, h0])

    def entry(combo, idx):
        prod = ring.mul(0, reps.col(idx[0]), 0, reps.col(idx[1]))
        return project(prod)

    mult = lay.map_from_entries(h0, 0, entry)
    out = DgRing(h0, unit, mult, name=f"H0({ring.name})")
    comps = {}
    if n0:
        cols = []
        for j in range(cx.dim(0)):
            v = Mat.basis_column(field, cx.dim(0), j)
            if not (cx.diff(0) @ v).is_zero():
                # strictly nonpositive rings have Z^0 = R^0
                raise ValidationError(f"{ring.name}: degree-0 part is not closed")
            cols.append(project(v).column_values(0))
        comps[0] = Mat.from_columns(field, n0, cols)
    proj = DgRingMorphism(ring, out, ChainMap(cx, h0, 0, comps), name=f"h0proj_{ring.name}")
    return out, proj


def h0_category(cat: DgCategory) -> H0Category:
    return H0Category(cat)


def hstar_dims(cat: DgCategory) -> Dict:
    """Per-pair graded cohomology dimensions."""
    return {(a, b): cat.hom(a, b).cohomology().as_dict()
            for a in cat.objects for b in cat.objects}


def h0_as_degree0_category(cat: DgCategory) -> Tuple[DgCategory, "H0Category"]:
    """H^0 of a category, materialized as a dg-category in degree 0 over H^0(base)."""
    h0 = H0Category(cat)
    base0, _ = h0_ring(cat.base)
    field = cat.field
    homs = {}
    comp = {}
    ids = {}
    action = {}
    cxs = {}
    for a in cat.objects:
        for b in cat.objects:
            n = h0.dim(a, b)
            cxs[(a, b)] = Complex(field, {0: n} if n else {}, {}, name=f"H0hom({a},{b})")
            homs[(a, b)] = cxs[(a, b)]
    for a in cat.objects:
        ids[a] = h0.ids[a]
        for b in cat.objects:
            for c in cat.objects:
                lay = TensorLayout([cxs[(b, c)], cxs[(a, b)]])

                def entry(combo, idx, a=a, b=b, c=c):
                    g = Mat.basis_column(field, h0.dim(b, c), idx[0])
                    f = Mat.basis_column(field, h0.dim(a, b), idx[1])
                    return h0.compose(a, b, c, g, f)

                comp[(a, b, c)] = lay.map_from_entries(cxs[(a, c)], 0, entry)
    for a in cat.objects:
        for b in cat.objects:
            lay = TensorLayout([base0.underlying, cxs[(a, b)]])
            rep0 = cat.base.underlying.cohomology()

            def entry(combo, idx, a=a, b=b):
                rvec = rep0.rep(0).col(idx[0]) if rep0.dim(0) else None
                f = h0.rep(a, b).col(idx[1])
                fam = cat.act_element(a, b, 0, rvec)
                rf = fam[0] @ f if 0 in fam else Mat.zero(field, cat.hom(a, b).dim(0), 1)
                return h0.class_of(a, b, rf)

            action[(a, b)] = lay.map_from_entries(cxs[(a, b)], 0, entry)
    out = DgCategory(base0, cat.objects, homs, comp, ids, action=action,
                     name=f"H0({cat.name})")
    return out, h0


def truncate_cat(cat: DgCategory):
    """Degreewise smart truncation to degrees <= 0.

    Returns (truncated, inclusion functor, functor onto H^0 as a degree-0
    category).
    """
    field = cat.field
    trunc = {}
    incl_maps = {}
    for a in cat.objects:
        for b in cat.objects:
            t, incl = truncate_le(cat.hom(a, b), 0)
            trunc[(a, b)] = t
            incl_maps[(a, b)] = incl
    comp = {}
    ids = {}
    action = {}
    for a in cat.objects:
        ids[a] = _express_through(incl_maps[(a, a)], 0, cat.id_vector(a))
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                lay = TensorLayout([trunc[(b, c)], trunc[(a, b)]])

                def entry(combo, idx, a=a, b=b, c=c):
                    dg, df = combo
                    g = incl_maps[(b, c)].component(dg).col(idx[0])
                    f = incl_maps[(a, b)].component(df).col(idx[1])
                    val = cat.compose_elements(a, b, c, dg, g, df, f)
                    return _express_through(incl_maps[(a, c)], dg + df, val)

                comp[(a, b, c)] = lay.map_from_entries(trunc[(a, c)], 0, entry)
            lay = TensorLayout([cat.base.underlying, trunc[(a, b)]])

            def entry_act(combo, idx, a=a, b=b):
                dr, df = combo
                r = cat.base.basis_vector(dr, idx[0])
                f = incl_maps[(a, b)].component(df).col(idx[1])
                fam = cat.act_element(a, b, dr, r)
                rf = fam[df] @ f if df in fam else Mat.zero(field, cat.hom(a, b).dim(df + dr), 1)
                return _express_through(incl_maps[(a, b)], dr + df, rf)

            action[(a, b)] = lay.map_from_entries(trunc[(a, b)], 0, entry_act)
    tcat = DgCategory(cat.base, cat.objects, trunc, comp, ids, action=action,
                      name=f"tle0({cat.name})")
    incl = DgFunctor(tcat, cat, {a: a for a in cat.objects},
                     {(a, b): incl_maps[(a, b)] for a in cat.objects for b in cat.objects},
                     name=f"incl_tle0({cat.name})")
    # projection onto H^0 viewed in degree 0
    h0cat, h0 = h0_as_degree0_category(cat)
    base0, baseproj = h0_ring(cat.base)
    proj_maps = {}
    for a in cat.objects:
        for b in cat.objects:
            comps = {}
            n = h0.dim(a, b)
            if n:
                cols = []
                for j in range(trunc[(a, b)].dim(0)):
                    v = incl_maps[(a, b)].component(0) @ Mat.basis_column(field, trunc[(a, b)].dim(0), j)
                    cols.append(h0.class_of(a, b, v).column_values(0))
                if trunc[(a, b)].dim(0):
                    comps[0] = Mat(field, n, trunc[(a, b)].dim(0),
                                   [[cols[j][i] for j in range(trunc[(a, b)].dim(0))] for i in range(n)])
            proj_maps[(a, b)] = ChainMap(trunc[(a, b)], h0cat.hom(a, b), 0, comps)
    toh0 = DgFunctor(tcat, h0cat, {a: a for a in cat.objects}, proj_maps,
                     base_change=baseproj, name=f"toH0({cat.name})")
    return tcat, incl, toh0


def _express_through(incl: ChainMap, deg: int, vec: Mat) -> Optional[Mat]:
    """Coordinates of vec in the subcomplex spanned by incl's columns."""
    cols = incl.component(deg)
    if cols.cols == 0:
        if vec.is_zero():
            return None
        raise ValidationError("vector does not lie in the subcomplex")
    sol = cols.solve(vec)
    if sol is None:
        raise ValidationError("vector does not lie in the subcomplex")
    return sol


def opposite(cat: DgCategory) -> DgCategory:
    """Opposite category; composition picks up the Koszul swap sign."""
    homs = {(a, b): cat.hom(b, a) for a in cat.objects for b in cat.objects}
    comp = {}
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                # hom_op(b,c) @ hom_op(a,b) = hom(c,b) @ hom(b,a) -> hom(c,a)
                lay = TensorLayout([cat.hom(c, b), cat.hom(b, a)])
                swapped, sw = lay.permute([1, 0])
                comp[(a, b, c)] = cat.comp[(c, b, a)].compose(sw)
    action = {(a, b): cat.action[(b, a)] for a in cat.objects for b in cat.objects}
    return DgCategory(cat.base, cat.objects, homs, comp, cat.ids, action=action,
                      name=f"op({cat.name})")


def tensor_cat(x: DgCategory, y: DgCategory) -> DgCategory:
    """Tensor product over the common ground-field base."""
    if x.base != y.base and not (x.base.is_ground_field() and y.base.is_ground_field()
                                 and x.field == y.field):
        raise ValidationError("tensor product needs a common base ring")
    if not x.base.is_ground_field():
        raise ValidationError("tensor products of categories are supported over the ground field")
    field = x.field
    objects = [(a, u) for a in x.objects for u in y.objects]
    homs = {}
    lays = {}
    for (a, u) in objects:
        for (b, v) in objects:
            lay = TensorLayout([x.hom(a, b), y.hom(u, v)])
            lays[((a, u), (b, v))] = lay
            homs[((a, u), (b, v))] = lay.complex
    ids = {}
    for (a, u) in objects:
        lay = lays[((a, u), (a, u))]
        idx = x.id_vector(a)
        idy = y.id_vector(u)
        col = [field.zero()] * lay.complex.dim(0)
        for i, vx in enumerate(idx.column_values(0)):
            for j, vy in enumerate(idy.column_values(0)):
                coeff = field.mul(vx, vy)
                if not field.is_zero(coeff):
                    pos = lay.position((0, 0), (i, j))
                    col[pos] = field.add(col[pos], coeff)
        ids[(a, u)] = Mat.column(field, col)
    comp = {}
    for (a, u) in objects:
        for (b, v) in objects:
            for (c, w) in objects:
                # flat: [x(b,c), y(v,w), x(a,b), y(u,v)]
                flat = TensorLayout([x.hom(b, c), y.hom(v, w), x.hom(a, b), y.hom(u, v)])
                permuted, pmap = flat.permute([0, 2, 1, 3])
                grouped, gmap = regroup(permuted, [[0, 1], [2, 3]])
                paired = grouped.tensor_map(
                    TensorLayout([x.hom(a, c), y.hom(u, w)]),
                    [x.comp[(a, b, c)], y.comp[(u, v, w)]])
                # identify the declared source layout with flat
                src_lay = lays[((b, v), (c, w))]
                # source of composition: hom((b,v),(c,w)) @ hom((a,u),(b,v))
                outer = TensorLayout([homs[((b, v), (c, w))], homs[((a, u), (b, v))]])
                ungroup, umap = regroup(flat, [[0, 1], [2, 3]])
                # umap: flat -> [x(b,c)@y(v,w), x(a,b)@y(u,v)] = outer (same complexes)
                total = paired.compose(gmap).compose(pmap)
                # express total as a map out of outer via the inverse of umap
                comp_map = _transport_through_iso(total, umap, outer.complex)
                comp[((a, u), (b, v), (c, w))] = comp_map
    return DgCategory(x.base, objects, homs, comp, ids, name=f"({x.name}(x){y.name})")


def _transport_through_iso(f: ChainMap, iso: ChainMap, new_source: Complex) -> ChainMap:
    """f o iso^{-1} for a degreewise-invertible iso with matching source."""
    from .matrix import invert
    comps = {}
    for deg in new_source.degrees():
        inv = invert(iso.component(deg))
        mat = f.component(deg) @ inv
        if not mat.is_zero():
            comps[deg] = mat
    return ChainMap(new_source, f.target, f.degree, comps)
