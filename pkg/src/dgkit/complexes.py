"""Complexes of finite-dimensional vector spaces, chain maps, and the
graded tensor/hom calculus.

Sign conventions, fixed once and enforced by construction-time checks:

* differentials raise degree by one; d(x tensor y) = dx tensor y + (-1)^|x| x tensor dy
* hom-complex degree-n component is prod_i Hom(c^i, d^{i+n}) with
  (delta phi) = d_target o phi - (-1)^n phi o d_source
* (f tensor g)(x tensor y) = (-1)^{|g||x|} f(x) tensor g(y)
* swap(x tensor y) = (-1)^{|x||y|} y tensor x
* c[k]^i = c^{i+k} with differential (-1)^k d
* cone(f)^i = target^i + source^{i+1},  D(y, x) = (dy + fx, -dx)

Every Complex asserts d o d = 0 and every ChainMap asserts commutation with
the differentials (up to the Koszul sign of its degree) when constructed.
"""

from __future__ import annotations

import itertools
import os
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DegreeCapError, ShapeError, ValidationError
from .fields import Field, same_field
from .matrix import Mat, extend_columns_to_basis

DEFAULT_DEGREE_CAP = 16


def degree_cap() -> int:
    """Support bound for graded objects; override with DGKIT_DEGREE_CAP."""
    raw = os.environ.get("DGKIT_DEGREE_CAP")
    return int(raw) if raw else DEFAULT_DEGREE_CAP


class GradedSpace:
    """Finitely supported degree -> dimension table with optional basis labels."""

    __slots__ = ("dims", "labels")

    def __init__(self, dims: Dict[int, int], labels: Optional[Dict[int, Tuple[str, ...]]] = None):
        clean = {}
        cap = degree_cap()
        for deg, dim in dims.items():
            if dim < 0:
                raise ValidationError(f"negative dimension {dim} in degree {deg}")
            if dim == 0:
                continue
            if abs(deg) > cap:
                raise DegreeCapError(f"degree {deg} exceeds the configured cap {cap}")
            clean[int(deg)] = int(dim)
        self.dims = clean
        self.labels = {}
        if labels:
            for deg, names in labels.items():
                if deg in clean:
                    if len(names) != clean[deg]:
                        raise ValidationError(f"label count mismatch in degree {deg}")
                    self.labels[deg] = tuple(names)

    def dim(self, deg: int) -> int:
        return self.dims.get(deg, 0)

    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def label(self, deg: int, idx: int) -> str:
        if deg in self.labels:
            return self.labels[deg][idx]
        return f"e{deg}_{idx}"

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class Complex:
    """Bounded complex with exact differentials; d o d == 0 is asserted."""

    __slots__ = ("field", "spaces", "d", "name", "_cohomology")

    def __init__(self, field: Field, dims, differentials: Dict[int, Mat],
                 labels=None, name: str = "complex"):
        self.field = field
        self.spaces = dims if isinstance(dims, GradedSpace) else GradedSpace(dims, labels)
        self.name = name
        self._cohomology = None
        d = {}
        for deg, mat in differentials.items():
            deg = int(deg)
            rows = self.dim(deg + 1)
            cols = self.dim(deg)
            if rows == 0 or cols == 0:
                if mat is not None and not mat.is_zero():
                    raise ValidationError(f"{name}: differential at degree {deg} hits a zero space")
                continue
            if mat.field != field:
                raise ValidationError(f"{name}: differential field mismatch at degree {deg}")
            if (mat.rows, mat.cols) != (rows, cols):
                raise ValidationError(
                    f"{name}: differential at degree {deg} has shape {mat.rows}x{mat.cols}, expected {rows}x{cols}")
            if not mat.is_zero():
                d[deg] = mat
        self.d = d
        for deg, mat in d.items():
            nxt = d.get(deg + 1)
            if nxt is not None and not (nxt @ mat).is_zero():
                raise ValidationError(f"{name}: d o d != 0 between degrees {deg} and {deg + 2}")

    # -- shape ----------------------------------------------------------

    def dim(self, deg: int) -> int:
        return self.spaces.dim(deg)

    def degrees(self) -> List[int]:
        return self.spaces.degrees()

    def total_dim(self) -> int:
        return self.spaces.total_dim()

    def min_degree(self) -> Optional[int]:
        degs = self.degrees()
        return degs[0] if degs else None

    def max_degree(self) -> Optional[int]:
        degs = self.degrees()
        return degs[-1] if degs else None

    def diff(self, deg: int) -> Mat:
        mat = self.d.get(deg)
        if mat is None:
            return Mat.zero(self.field, self.dim(deg + 1), self.dim(deg))
        return mat

    def is_zero_complex(self) -> bool:
        return not self.spaces.dims

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        if self.field != other.field or self.spaces != other.spaces:
            return False
        return all(self.diff(i) == other.diff(i) for i in self.degrees())

    def __repr__(self):
        return f"Complex({self.name}: {self.spaces.dims})"

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(field: Field) -> "Complex":
        return Complex(field, {}, {}, name="0")

    @staticmethod
    def one_dim(field: Field, degree: int = 0, label: Optional[str] = None) -> "Complex":
        labels = {degree: (label,)} if label else None
        return Complex(field, {degree: 1}, {}, labels=labels, name=label or "k")

    @staticmethod
    def concentrated(field: Field, degree: int, dim: int) -> "Complex":
        return Complex(field, {degree: dim}, {})

    # -- cohomology --------------------------------------------------------

    def cohomology(self) -> "CohomologyReport":
        if self._cohomology is None:
            self._cohomology = CohomologyReport(self)
        return self._cohomology

    def is_acyclic(self, degrees: Optional[Iterable[int]] = None) -> bool:
        coh = self.cohomology()
        if degrees is None:
            return all(v == 0 for v in coh.dims.values())
        return all(coh.dim(i) == 0 for i in degrees)


class CohomologyReport:
    """Per-degree cohomology dimensions with chosen cocycle representatives.

    ``reps[i]`` has the representative cocycles as columns; classes are
    coordinates with respect to those columns modulo the image of d.
    """

    def __init__(self, cx: Complex):
        self.complex = cx
        self.dims: Dict[int, int] = {}
        self.reps: Dict[int, Mat] = {}
        self._images: Dict[int, Mat] = {}
        degs = set(cx.degrees())
        for deg in sorted(degs):
            z = cx.diff(deg).kernel_basis()
            b = cx.diff(deg - 1).image_basis()
            self._images[deg] = b
            aug = b.hstack(z)
            pivots = aug.pivot_columns()
            chosen = [c - b.cols for c in pivots if c >= b.cols]
            reps = z.take_columns(chosen)
            if reps.cols:
                self.reps[deg] = reps
            self.dims[deg] = reps.cols

    def dim(self, deg: int) -> int:
        return self.dims.get(deg, 0)

    def support(self) -> List[int]:
        return sorted(d for d, v in self.dims.items() if v)

    def rep(self, deg: int) -> Mat:
        mat = self.reps.get(deg)
        if mat is None:
            return Mat.zero(self.complex.field, self.complex.dim(deg), 0)
        return mat

    def image(self, deg: int) -> Mat:
        mat = self._images.get(deg)
        if mat is None:
            return Mat.zero(self.complex.field, self.complex.dim(deg), 0)
        return mat

    def class_of(self, deg: int, vector: Mat) -> Mat:
        """Coordinates of a cocycle's class in the chosen representative basis."""
        reps = self.rep(deg)
        img = self.image(deg)
        sol = reps.hstack(img).solve(vector)
        if sol is None:
            raise ValidationError("vector is not a cocycle of the stated degree")
        return sol.take_rows(list(range(reps.cols)))

    def as_dict(self) -> Dict[int, int]:
        return {d: v for d, v in sorted(self.dims.items()) if v}


class ChainMap:
    """Graded map of complexes commuting with d up to (-1)^degree."""

    __slots__ = ("source", "target", "degree", "components")

    def __init__(self, source: Complex, target: Complex, degree: int,
                 components: Dict[int, Mat], check: bool = True):
        same_field(source.field, target.field)
        self.source = source
        self.target = target
        self.degree = int(degree)
        comps = {}
        for deg, mat in components.items():
            deg = int(deg)
            rows = target.dim(deg + self.degree)
            cols = source.dim(deg)
            if rows == 0 or cols == 0:
                continue
            if (mat.rows, mat.cols) != (rows, cols):
                raise ShapeError(
                    f"chain map component at degree {deg}: shape {mat.rows}x{mat.cols}, expected {rows}x{cols}")
            if not mat.is_zero():
                comps[deg] = mat
        self.components = comps
        if check:
            self._check_commutes()

    def _check_commutes(self):
        sign = -1 if self.degree % 2 else 1
        for deg in self.source.degrees():
            left = self.target.diff(deg + self.degree) @ self.component(deg)
            right = self.component(deg + 1) @ self.source.diff(deg)
            if sign < 0:
                right = -right
            if left != right:
                raise ValidationError(
                    f"chain map does not commute with differentials at degree {deg}")

    def component(self, deg: int) -> Mat:
        mat = self.components.get(deg)
        if mat is None:
            return Mat.zero(self.source.field, self.target.dim(deg + self.degree), self.source.dim(deg))
        return mat

    # -- algebra -----------------------------------------------------------

    @staticmethod
    def identity(cx: Complex) -> "ChainMap":
        comps = {deg: Mat.identity(cx.field, cx.dim(deg)) for deg in cx.degrees()}
        return ChainMap(cx, cx, 0, comps, check=False)

    @staticmethod
    def zero_map(source: Complex, target: Complex, degree: int = 0) -> "ChainMap":
        return ChainMap(source, target, degree, {}, check=False)

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        if other.target is not self.source and other.target != self.source:
            raise ShapeError("composition target/source mismatch")
        comps = {}
        for deg in other.source.degrees():
            mat = self.component(deg + other.degree) @ other.component(deg)
            if not mat.is_zero():
                comps[deg] = mat
        return ChainMap(other.source, self.target, self.degree + other.degree, comps, check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.degree != other.degree:
            raise ShapeError("cannot add chain maps of different degrees")
        comps = {}
        for deg in set(self.components) | set(other.components):
            comps[deg] = self.component(deg) + other.component(deg)
        return ChainMap(self.source, self.target, self.degree, comps, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, self.degree,
                        {d: -m for d, m in self.components.items()}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, self.degree,
                        {d: m.scale(c) for d, m in self.components.items()}, check=False)

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.degree != other.degree:
            return False
        degs = set(self.components) | set(other.components)
        return all(self.component(d) == other.component(d) for d in degs)

    def apply(self, deg: int, vector: Mat) -> Mat:
        return self.component(deg) @ vector

    # -- cohomology-level behaviour -----------------------------------------

    def cohomology_map(self, deg: int) -> Mat:
        """Induced matrix H^deg(source) -> H^{deg+degree}(target) in the chosen bases."""
        hs = self.source.cohomology()
        ht = self.target.cohomology()
        src_reps = hs.rep(deg)
        out_deg = deg + self.degree
        cols = []
        for j in range(src_reps.cols):
            img = self.component(deg) @ src_reps.col(j)
            cols.append(ht.class_of(out_deg, img).column_values(0))
        return Mat.from_columns(self.source.field, ht.dim(out_deg), cols)

    def is_quasi_iso(self) -> bool:
        if self.degree == 0:
            return cone(self)[0].is_acyclic()
        degs = set(self.source.degrees()) | set(d - self.degree for d in self.target.degrees())
        for deg in degs:
            m = self.cohomology_map(deg)
            if m.rows != m.cols or m.rank() != m.rows:
                return False
        return True


# -- shifts, sums, cones ------------------------------------------------------


def shift_complex(cx: Complex, k: int) -> Complex:
    dims = {deg - k: cx.dim(deg) for deg in cx.degrees()}
    sign = -1 if k % 2 else 1
    diffs = {}
    for deg in cx.degrees():
        mat = cx.diff(deg)
        if mat.is_zero():
            continue
        diffs[deg - k] = mat if sign > 0 else -mat
    return Complex(cx.field, dims, diffs, name=f"{cx.name}[{k}]")


def shift_map(f: ChainMap, k: int) -> ChainMap:
    src = shift_complex(f.source, k)
    tgt = shift_complex(f.target, k)
    comps = {deg - k: mat for deg, mat in f.components.items()}
    return ChainMap(src, tgt, f.degree, comps)


def direct_sum(summands: Sequence[Complex]):
    """Returns (sum, injections, projections)."""
    if not summands:
        raise ShapeError("direct sum of nothing; use Complex.zero")
    field = same_field(*[c.field for c in summands])
    degs = sorted({d for c in summands for d in c.degrees()})
    dims = {d: sum(c.dim(d) for c in summands) for d in degs}
    per_degree_offsets = {}
    for d in degs:
        offs = []
        acc = 0
        for c in summands:
            offs.append(acc)
            acc += c.dim(d)
        per_degree_offsets[d] = offs

    diffs = {}
    for d in degs:
        rows = dims.get(d + 1, 0)
        cols = dims[d]
        if rows == 0 or cols == 0:
            continue
        block = [[field.zero()] * cols for _ in range(rows)]
        for idx, c in enumerate(summands):
            mat = c.diff(d)
            ro = per_degree_offsets.get(d + 1, [0] * len(summands))[idx] if d + 1 in per_degree_offsets else 0
            co = per_degree_offsets[d][idx]
            for i in range(mat.rows):
                for j in range(mat.cols):
                    block[ro + i][co + j] = mat.entries[i][j]
        diffs[d] = Mat(field, rows, cols, block)
    total = Complex(field, dims, diffs, name="+".join(c.name for c in summands))

    injections = []
    projections = []
    for idx, c in enumerate(summands):
        inj = {}
        proj = {}
        for d in c.degrees():
            off = per_degree_offsets[d][idx]
            n, m = total.dim(d), c.dim(d)
            inj[d] = Mat.from_function(field, n, m,
                                       lambda i, j, off=off: field.one() if i == j + off else field.zero())
        for d in degs:
            off = per_degree_offsets[d][idx]
            n, m = total.dim(d), c.dim(d)
            if m:
                proj[d] = Mat.from_function(field, m, n,
                                            lambda i, j, off=off: field.one() if j == i + off else field.zero())
        injections.append(ChainMap(c, total, 0, inj))
        projections.append(ChainMap(total, c, 0, proj))
    return total, injections, projections


def cone(f: ChainMap):
    """Mapping cone of a degree-0 map; returns (cone, include_target, project_to_shifted_source)."""
    if f.degree != 0:
        raise ValidationError("cone requires a degree-0 chain map")
    X, Y = f.source, f.target
    field = X.field
    degs = sorted(set(Y.degrees()) | {d - 1 for d in X.degrees()})
    dims = {d: Y.dim(d) + X.dim(d + 1) for d in degs}
    diffs = {}
    for d in degs:
        rows = dims.get(d + 1, 0)
        cols = dims.get(d, 0)
        if rows == 0 or cols == 0:
            continue
        ydim, xdim = Y.dim(d), X.dim(d + 1)
        ydim1, xdim1 = Y.dim(d + 1), X.dim(d + 2)
        block = [[field.zero()] * cols for _ in range(rows)]
        dy = Y.diff(d)
        fx = f.component(d + 1)
        dx = X.diff(d + 1)
        for i in range(ydim1):
            for j in range(ydim):
                block[i][j] = dy.entries[i][j]
            for j in range(xdim):
                block[i][ydim + j] = fx.entries[i][j]
        for i in range(xdim1):
            for j in range(xdim):
                block[ydim1 + i][ydim + j] = field.neg(dx.entries[i][j])
        diffs[d] = Mat(field, rows, cols, block)
    C = Complex(field, dims, diffs, name=f"cone({f.source.name}->{f.target.name})")
    incl = {}
    for d in Y.degrees():
        n, m = C.dim(d), Y.dim(d)
        incl[d] = Mat.from_function(field, n, m,
                                    lambda i, j: field.one() if i == j else field.zero())
    proj = {}
    shifted = shift_complex(X, 1)
    for d in degs:
        m = X.dim(d + 1)
        if m:
            n = C.dim(d)
            ydim = Y.dim(d)
            proj[d] = Mat.from_function(field, m, n,
                                        lambda i, j, ydim=ydim: field.one() if j == i + ydim else field.zero())
    return C, ChainMap(Y, C, 0, incl), ChainMap(C, shifted, 0, proj)


# -- smart truncations ---------------------------------------------------------


def subcomplex(cx: Complex, columns: Dict[int, Mat], name: str = "sub"):
    """Subcomplex spanned by the given independent columns; must be d-stable.

    Returns (sub, inclusion).
    """
    field = cx.field
    dims = {}
    for deg, mat in columns.items():
        if mat.cols:
            if mat.rank() != mat.cols:
                raise ValidationError(f"{name}: generating columns dependent in degree {deg}")
            dims[deg] = mat.cols
    diffs = {}
    for deg in sorted(dims):
        k = columns[deg]
        dk = cx.diff(deg) @ k
        nxt = columns.get(deg + 1)
        if nxt is None or nxt.cols == 0:
            if not dk.is_zero():
                raise ValidationError(f"{name}: not closed under d at degree {deg}")
            continue
        sol = nxt.solve(dk)
        if sol is None:
            raise ValidationError(f"{name}: not closed under d at degree {deg}")
        diffs[deg] = sol
    sub = Complex(field, dims, diffs, name=name)
    incl = ChainMap(sub, cx, 0, {deg: columns[deg] for deg in dims})
    return sub, incl


def quotient_complex(cx: Complex, killed: Dict[int, Mat], name: str = "quot"):
    """Quotient by the span of the given columns; must be d-stable.

    Returns (quotient, projection, section) where section is a degreewise
    linear (not chain) right inverse used to lift representatives.
    """
    field = cx.field
    proj_mats: Dict[int, Mat] = {}
    sect_mats: Dict[int, Mat] = {}
    dims = {}
    for deg in cx.degrees():
        b = killed.get(deg, Mat.zero(field, cx.dim(deg), 0))
        if b.rows != cx.dim(deg):
            raise ShapeError(f"{name}: killed columns wrong ambient dimension at degree {deg}")
        comp_idx = extend_columns_to_basis(b.image_basis())
        q = len(comp_idx)
        if q:
            dims[deg] = q
        bb = b.image_basis()
        section = Mat.from_columns(field, cx.dim(deg),
                                   [Mat.basis_column(field, cx.dim(deg), i).column_values(0) for i in comp_idx])
        change = bb.hstack(section)
        from .matrix import invert
        inv = invert(change)
        proj = inv.take_rows(list(range(bb.cols, bb.cols + q)))
        proj_mats[deg] = proj
        sect_mats[deg] = section
    diffs = {}
    for deg in sorted(dims):
        if dims.get(deg + 1, 0) == 0:
            # the quotient differential must vanish; verify d maps into killed span
            b1 = killed.get(deg + 1, Mat.zero(field, cx.dim(deg + 1), 0))
            img = cx.diff(deg) @ sect_mats[deg]
            if not img.is_zero() and b1.solve(img) is None:
                raise ValidationError(f"{name}: killed span not d-stable at degree {deg}")
            continue
        diffs[deg] = proj_mats[deg + 1] @ cx.diff(deg) @ sect_mats[deg]
    quot = Complex(field, dims, diffs, name=name)
    proj = ChainMap(cx, quot, 0, {deg: proj_mats[deg] for deg in dims})
    section = {deg: sect_mats[deg] for deg in dims}
    return quot, proj, section


def constrained_subcomplex(ambient: Complex, constraints: Dict[int, Mat], name: str = "sub"):
    """Subcomplex cut out by per-degree linear constraints (rows); returns
    (sub, inclusion).  The constraint kernel must be d-stable (verified)."""
    cols = {}
    for deg in ambient.degrees():
        rows = constraints.get(deg)
        if rows is None or rows.rows == 0:
            ker = Mat.identity(ambient.field, ambient.dim(deg))
        else:
            ker = rows.kernel_basis()
        if ker.cols:
            cols[deg] = ker
    return subcomplex(ambient, cols, name=name)


def transport_through_iso(f: ChainMap, iso: ChainMap, new_source: Complex) -> ChainMap:
    """f o iso^{-1} for a degreewise invertible iso sharing f's source."""
    from .matrix import invert
    comps = {}
    for deg in new_source.degrees():
        inv = invert(iso.component(deg))
        mat = f.component(deg) @ inv
        if not mat.is_zero():
            comps[deg] = mat
    return ChainMap(new_source, f.target, f.degree, comps)


def truncate_le(cx: Complex, n: int):
    """Smart truncation keeping cohomology in degrees <= n.

    Returns (truncated, comparison) with comparison the canonical inclusion
    into ``cx``.
    """
    field = cx.field
    cols = {}
    for deg in cx.degrees():
        if deg < n:
            cols[deg] = Mat.identity(field, cx.dim(deg))
        elif deg == n:
            ker = cx.diff(n).kernel_basis()
            if ker.cols:
                cols[deg] = ker
    sub, incl = subcomplex(cx, cols, name=f"tle{n}({cx.name})")
    return sub, incl


def truncate_ge(cx: Complex, n: int):
    """Smart truncation keeping cohomology in degrees >= n.

    Returns (truncated, comparison) with comparison the canonical projection
    from ``cx``.
    """
    field = cx.field
    killed = {}
    for deg in cx.degrees():
        if deg < n:
            killed[deg] = Mat.identity(field, cx.dim(deg))
        elif deg == n:
            img = cx.diff(n - 1).image_basis()
            if img.cols:
                killed[deg] = img
    quot, proj, _ = quotient_complex(cx, killed, name=f"tge{n}({cx.name})")
    return quot, proj


# -- tensor layout --------------------------------------------------------------


def _koszul_sign_for_maps(map_degrees: Sequence[int], element_degrees: Sequence[int]) -> int:
    """Sign of (f_1 tensor ... tensor f_k) applied to (x_1 tensor ... tensor x_k)."""
    sign = 0
    for j, fdeg in enumerate(map_degrees):
        if fdeg % 2:
            sign += sum(element_degrees[:j]) % 2
    return -1 if sign % 2 else 1


def permutation_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Koszul sign for reordering graded elements: perm[i] is the source slot
    placed at position i of the result."""
    sign = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                if degrees[perm[i]] % 2 and degrees[perm[j]] % 2:
                    sign += 1
    return -1 if sign % 2 else 1


class TensorLayout:
    """Basis bookkeeping for an n-fold graded tensor product.

    Degree-n blocks are indexed by degree tuples in lexicographic order;
    inside a block the multi-index is row-major over the factors.
    """

    def __init__(self, factors: Sequence[Complex]):
        if not factors:
            raise ShapeError("tensor of no factors; use Complex.one_dim")
        self.factors = list(factors)
        self.field = same_field(*[c.field for c in factors])
        self._blocks: Dict[int, List[Tuple[Tuple[int, ...], int, int]]] = {}
        degs = [c.degrees() for c in self.factors]
        if all(degs):
            for combo in itertools.product(*degs):
                n = sum(combo)
                size = 1
                for c, d in zip(self.factors, combo):
                    size *= c.dim(d)
                if size:
                    self._blocks.setdefault(n, []).append((combo, size))
        blocks = {}
        for n, lst in self._blocks.items():
            lst.sort(key=lambda t: t[0])
            acc = 0
            entries = []
            for combo, size in lst:
                entries.append((combo, acc, size))
                acc += size
            blocks[n] = entries
        self._blocks = blocks
        self._complex: Optional[Complex] = None

    def dims(self) -> Dict[int, int]:
        return {n: sum(size for _, _, size in blocks) for n, blocks in self._blocks.items()}

    def blocks(self, n: int) -> List[Tuple[Tuple[int, ...], int, int]]:
        return self._blocks.get(n, [])

    def block_offset(self, combo: Tuple[int, ...]) -> Tuple[int, int]:
        n = sum(combo)
        for c, off, size in self.blocks(n):
            if c == combo:
                return off, size
        raise ShapeError(f"no block {combo} in tensor layout")

    def position(self, combo: Tuple[int, ...], indices: Tuple[int, ...]) -> int:
        off, _ = self.block_offset(combo)
        pos = 0
        for c, d, i in zip(self.factors, combo, indices):
            pos = pos * c.dim(d) + i
        return off + pos

    def iter_block_indices(self, combo: Tuple[int, ...]):
        ranges = [range(c.dim(d)) for c, d in zip(self.factors, combo)]
        return itertools.product(*ranges)

    def decompose(self, n: int, position: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Inverse of ``position``: block degree tuple and factor indices."""
        for combo, off, size in self.blocks(n):
            if off <= position < off + size:
                rel = position - off
                idx = []
                for c, d in zip(reversed(self.factors), reversed(combo)):
                    rel, i = divmod(rel, c.dim(d))
                    idx.append(i)
                return combo, tuple(reversed(idx))
        raise ShapeError(f"position {position} out of range in degree {n}")

    @property
    def complex(self) -> Complex:
        if self._complex is None:
            field = self.field
            dims = self.dims()
            diffs = {}
            for n in sorted(dims):
                rows = dims.get(n + 1, 0)
                cols = dims[n]
                if rows == 0 or cols == 0:
                    continue
                grid = [[field.zero()] * cols for _ in range(rows)]
                for combo, off, _ in self.blocks(n):
                    for j, factor in enumerate(self.factors):
                        dmat = factor.diff(combo[j])
                        if dmat.is_zero():
                            continue
                        tcombo = tuple(d + (1 if t == j else 0) for t, d in enumerate(combo))
                        if any(self.factors[t].dim(tcombo[t]) == 0 for t in range(len(self.factors))):
                            continue
                        sign = sum(combo[:j]) % 2
                        for idx in self.iter_block_indices(combo):
                            src = self.position(combo, idx)
                            col = dmat.col(idx[j])
                            for i2 in range(dmat.rows):
                                v = col.entries[i2][0]
                                if field.is_zero(v):
                                    continue
                                tidx = tuple(i2 if t == j else idx[t] for t in range(len(idx)))
                                dst = self.position(tcombo, tidx)
                                val = field.neg(v) if sign else v
                                grid[dst][src] = field.add(grid[dst][src], val)
                diffs[n] = Mat(field, rows, cols, grid)
            self._complex = Complex(field, dims, diffs, name="(" + "@".join(c.name for c in self.factors) + ")")
        return self._complex

    # -- map builders ---------------------------------------------------------

    def map_from_entries(self, target: Complex, degree: int, entry_fn, check=True) -> ChainMap:
        """Build a chain map out of the tensor: entry_fn(combo, indices) returns
        the image vector (Mat column in target at degree sum(combo)+degree), or None."""
        field = self.field
        comps: Dict[int, Mat] = {}
        dims = self.dims()
        for n in sorted(dims):
            rows = target.dim(n + degree)
            cols = dims[n]
            if rows == 0 or cols == 0:
                continue
            grid = [[field.zero()] * cols for _ in range(rows)]
            for combo, off, _ in self.blocks(n):
                for idx in self.iter_block_indices(combo):
                    vec = entry_fn(combo, idx)
                    if vec is None:
                        continue
                    src = self.position(combo, idx)
                    for i in range(rows):
                        v = vec.entries[i][0]
                        if not field.is_zero(v):
                            grid[i][src] = field.add(grid[i][src], v)
            comps[n] = Mat(field, rows, cols, grid)
        return ChainMap(self.complex, target, degree, comps, check=check)

    def tensor_map(self, target_layout: "TensorLayout", maps: Sequence[ChainMap]) -> ChainMap:
        """f_1 tensor ... tensor f_k with the Koszul sign convention."""
        if len(maps) != len(self.factors):
            raise ShapeError("tensor_map factor count mismatch")
        field = self.field
        total_deg = sum(f.degree for f in maps)
        mdegs = [f.degree for f in maps]

        def entry(combo, idx):
            sign = _koszul_sign_for_maps(mdegs, combo)
            tcombo = tuple(d + f.degree for d, f in zip(combo, maps))
            if any(target_layout.factors[t].dim(tcombo[t]) == 0 for t in range(len(maps))):
                return None
            cols = [maps[t].component(combo[t]).col(idx[t]) for t in range(len(maps))]
            out = Mat.zero(field, target_layout.complex.dim(sum(tcombo)), 1)
            vals = [c.column_values(0) for c in cols]
            grid = out.entries
            result = [field.zero()] * out.rows
            for tidx in itertools.product(*[range(len(v)) for v in vals]):
                coeff = field.one()
                zero = False
                for t, i2 in enumerate(tidx):
                    v = vals[t][i2]
                    if field.is_zero(v):
                        zero = True
                        break
                    coeff = field.mul(coeff, v)
                if zero:
                    continue
                pos = target_layout.position(tcombo, tidx)
                result[pos] = field.add(result[pos], coeff if sign > 0 else field.neg(coeff))
            return Mat.column(field, result)

        return self.map_from_entries(target_layout.complex, total_deg, entry)

    def permute(self, perm: Sequence[int]) -> Tuple["TensorLayout", ChainMap]:
        """Reorder tensor factors with the Koszul sign; perm[i] = source slot at position i."""
        target = TensorLayout([self.factors[p] for p in perm])

        def entry(combo, idx):
            sign = permutation_sign(combo, perm)
            tcombo = tuple(combo[p] for p in perm)
            tidx = tuple(idx[p] for p in perm)
            pos = target.position(tcombo, tidx)
            col = [self.field.zero()] * target.complex.dim(sum(combo))
            col[pos] = self.field.one() if sign > 0 else self.field.neg(self.field.one())
            return Mat.column(self.field, col)

        return target, self.map_from_entries(target.complex, 0, entry)


def tensor2(a: Complex, b: Complex) -> TensorLayout:
    return TensorLayout([a, b])


def tensor_field(a: Complex, b: Complex) -> Complex:
    """Tensor product over the ground field."""
    return TensorLayout([a, b]).complex


def regroup(flat: TensorLayout, grouping: Sequence[Sequence[int]]):
    """Signless reindexing from a flat n-ary tensor onto nested groups.

    ``grouping`` partitions range(n) into consecutive runs, e.g. [[0,1],[2]].
    Returns (grouped_layout, iso ChainMap flat -> grouped).
    """
    expect = [i for grp in grouping for i in grp]
    if expect != list(range(len(flat.factors))):
        raise ShapeError("grouping must list factor slots in order")
    inner = [TensorLayout([flat.factors[i] for i in grp]) for grp in grouping]
    outer = TensorLayout([lay.complex for lay in inner])
    field = flat.field

    def entry(combo, idx):
        gcombos = []
        gpos = []
        k = 0
        for lay, grp in zip(inner, grouping):
            sub_combo = tuple(combo[k:k + len(grp)])
            sub_idx = tuple(idx[k:k + len(grp)])
            k += len(grp)
            gcombos.append(sum(sub_combo))
            gpos.append(lay.position(sub_combo, sub_idx))
        pos = outer.position(tuple(gcombos), tuple(gpos))
        col = [field.zero()] * outer.complex.dim(sum(combo))
        col[pos] = field.one()
        return Mat.column(field, col)

    return outer, flat.map_from_entries(outer.complex, 0, entry)


def insert_factor(cx: Complex, element_degree: int, element: Mat, holder: Complex,
                  side: str) -> ChainMap:
    """Chain map c -> holder tensor c (side="left") or c -> c tensor holder
    (side="right") inserting a fixed closed vector of even degree 0."""
    if element_degree != 0:
        raise ValidationError("insertions only supported for degree-0 closed elements")
    if not (holder.diff(0) @ element).is_zero():
        raise ValidationError("inserted element must be closed")
    field = cx.field
    lay = TensorLayout([holder, cx] if side == "left" else [cx, holder])
    comps = {}
    for deg in cx.degrees():
        rows = lay.complex.dim(deg)
        cols = cx.dim(deg)
        grid = [[field.zero()] * cols for _ in range(rows)]
        for j in range(cols):
            for i, v in enumerate(element.column_values(0)):
                if field.is_zero(v):
                    continue
                if side == "left":
                    pos = lay.position((0, deg), (i, j))
                else:
                    pos = lay.position((deg, 0), (j, i))
                grid[pos][j] = v
        comps[deg] = Mat(field, rows, cols, grid)
    return ChainMap(cx, lay.complex, 0, comps)


# -- hom layout -------------------------------------------------------------------


class HomLayout:
    """Basis bookkeeping for the hom-complex Hom(source, target).

    Degree-n blocks are indexed by the source degree i (ascending); inside a
    block, the matrix entry (row r of target^{i+n}, column t of source^i) sits
    at position r * dim(source^i) + t.
    """

    def __init__(self, source: Complex, target: Complex):
        self.source = source
        self.target = target
        self.field = same_field(source.field, target.field)
        self._blocks: Dict[int, List[Tuple[int, int, int]]] = {}
        for i in source.degrees():
            for j in target.degrees():
                n = j - i
                size = source.dim(i) * target.dim(j)
                if size:
                    self._blocks.setdefault(n, []).append((i, 0, size))
        blocks = {}
        for n, lst in self._blocks.items():
            lst.sort()
            acc = 0
            entries = []
            for i, _, size in lst:
                entries.append((i, acc, size))
                acc += size
            blocks[n] = entries
        self._blocks = blocks
        self._complex: Optional[Complex] = None

    def dims(self) -> Dict[int, int]:
        return {n: sum(size for _, _, size in blocks) for n, blocks in self._blocks.items()}

    def blocks(self, n: int):
        return self._blocks.get(n, [])

    def block_offset(self, n: int, i: int) -> Tuple[int, int]:
        for src_deg, off, size in self.blocks(n):
            if src_deg == i:
                return off, size
        raise ShapeError(f"no hom block at source degree {i}, map degree {n}")

    def position(self, n: int, i: int, row: int, col: int) -> int:
        off, _ = self.block_offset(n, i)
        return off + row * self.source.dim(i) + col

    @property
    def complex(self) -> Complex:
        if self._complex is None:
            field = self.field
            dims = self.dims()
            diffs = {}
            for n in sorted(dims):
                rows = dims.get(n + 1, 0)
                cols = dims[n]
                if rows == 0 or cols == 0:
                    continue
                grid = [[field.zero()] * cols for _ in range(rows)]
                sgn = -1 if n % 2 else 1
                for i, off, size in self.blocks(n):
                    sdim = self.source.dim(i)
                    tdim = self.target.dim(i + n)
                    # postcomposition with d_target: block i -> block i (degree n+1)
                    dmat = self.target.diff(i + n)
                    if not dmat.is_zero() and self.target.dim(i + n + 1):
                        for r in range(dmat.rows):
                            for q in range(dmat.cols):
                                v = dmat.entries[r][q]
                                if field.is_zero(v):
                                    continue
                                for t in range(sdim):
                                    dst = self.position(n + 1, i, r, t)
                                    src = off + q * sdim + t
                                    grid[dst][src] = field.add(grid[dst][src], v)
                    # precomposition with d_source: block i -> block i-1 (degree n+1)
                    dsrc = self.source.diff(i - 1)
                    if not dsrc.is_zero() and self.source.dim(i - 1) and tdim:
                        for r in range(tdim):
                            for s in range(dsrc.rows):
                                for t in range(dsrc.cols):
                                    v = dsrc.entries[s][t]
                                    if field.is_zero(v):
                                        continue
                                    dst = self.position(n + 1, i - 1, r, t)
                                    src = off + r * sdim + s
                                    val = field.neg(v) if sgn > 0 else v
                                    grid[dst][src] = field.add(grid[dst][src], val)
                diffs[n] = Mat(field, rows, cols, grid)
            self._complex = Complex(field, dims, diffs,
                                    name=f"Hom({self.source.name},{self.target.name})")
        return self._complex

    # -- converting between vectors and map families ---------------------------

    def family_from_vector(self, n: int, vec: Mat) -> Dict[int, Mat]:
        """Raw per-degree matrices of an element of hom^n (not necessarily closed)."""
        field = self.field
        fam = {}
        for i, off, size in self.blocks(n):
            sdim = self.source.dim(i)
            tdim = self.target.dim(i + n)
            grid = [[vec.entries[off + r * sdim + t][0] for t in range(sdim)] for r in range(tdim)]
            fam[i] = Mat(field, tdim, sdim, grid)
        return fam

    def vector_from_family(self, n: int, fam: Dict[int, Mat]) -> Mat:
        field = self.field
        total = self.complex.dim(n)
        col = [field.zero()] * total
        for i, off, size in self.blocks(n):
            mat = fam.get(i)
            if mat is None:
                continue
            sdim = self.source.dim(i)
            for r in range(mat.rows):
                for t in range(sdim):
                    col[off + r * sdim + t] = mat.entries[r][t]
        return Mat.column(field, col)

    def chainmap_from_cocycle(self, n: int, vec: Mat) -> ChainMap:
        fam = self.family_from_vector(n, vec)
        return ChainMap(self.source, self.target, n, fam)

    def vector_from_chainmap(self, f: ChainMap) -> Mat:
        return self.vector_from_family(f.degree, dict(f.components))


def hom_complex(c: Complex, d: Complex) -> HomLayout:
    return HomLayout(c, d)


def evaluation_map(h: HomLayout) -> ChainMap:
    """ev: Hom(c,d) tensor c -> d, phi tensor x |-> phi(x)."""
    lay = TensorLayout([h.complex, c := h.source])
    field = h.field
    d = h.target

    def entry_dispatch(combo, idx):
        n, i = combo
        for src_deg, off, size in h.blocks(n):
            if src_deg == i:
                rel = idx[0] - off
                if 0 <= rel < size:
                    sdim = c.dim(i)
                    r, t = divmod(rel, sdim)
                    if t == idx[1]:
                        out = [field.zero()] * d.dim(n + i)
                        out[r] = field.one()
                        return Mat.column(field, out)
        return None

    return lay.map_from_entries(d, 0, entry_dispatch)


def composition_map(x: Complex, y: Complex, z: Complex) -> ChainMap:
    """Hom(y,z) tensor Hom(x,y) -> Hom(x,z), psi tensor phi |-> psi o phi."""
    hyz = hom_complex(y, z)
    hxy = hom_complex(x, y)
    hxz = hom_complex(x, z)
    lay = TensorLayout([hyz.complex, hxy.complex])
    field = lay.field

    def entry(combo, idx):
        m, n = combo
        psi = hyz.family_from_vector(m, Mat.basis_column(field, hyz.complex.dim(m), idx[0]))
        phi = hxy.family_from_vector(n, Mat.basis_column(field, hxy.complex.dim(n), idx[1]))
        fam = {}
        for i, pm in phi.items():
            top = psi.get(i + n)
            if top is None:
                continue
            prod = top @ pm
            if not prod.is_zero():
                fam[i] = prod
        if not fam:
            return None
        return hxz.vector_from_family(m + n, fam)

    return lay.map_from_entries(hxz.complex, 0, entry)


def curry(f: ChainMap, lay: TensorLayout) -> ChainMap:
    """Adjoint of f: (X tensor Y) -> Z along Hom(X, Hom(Y,Z)); no signs with
    these conventions (asserted by the ChainMap constructor)."""
    if len(lay.factors) != 2:
        raise ShapeError("curry expects a binary tensor source")
    X, Y = lay.factors
    Z = f.target
    hyz = hom_complex(Y, Z)
    field = lay.field
    comps = {}
    for a in X.degrees():
        xdim = X.dim(a)
        tgt_dim = hyz.complex.dim(a + f.degree)
        if xdim == 0 or tgt_dim == 0:
            continue
        cols = []
        for xi in range(xdim):
            fam = {}
            for b in Y.degrees():
                ydim = Y.dim(b)
                zdim = Z.dim(a + b + f.degree)
                if ydim == 0 or zdim == 0:
                    continue
                mat = [[field.zero()] * ydim for _ in range(zdim)]
                for yi in range(ydim):
                    pos = lay.position((a, b), (xi, yi))
                    img = f.component(a + b).col(pos)
                    for r in range(zdim):
                        mat[r][yi] = img.entries[r][0]
                m = Mat(field, zdim, ydim, mat)
                if not m.is_zero():
                    fam[b] = m
            cols.append(hyz.vector_from_family(a + f.degree, fam).column_values(0))
        comps[a] = Mat.from_columns(field, tgt_dim, cols)
    return ChainMap(X, hyz.complex, f.degree, comps)


def element_action(pairing: ChainMap, lay: TensorLayout, slot: int,
                   deg: int, vector: Mat) -> Dict[int, Mat]:
    """Partial evaluation of a pairing at a fixed element in the given slot.

    Returns the raw per-degree matrix family of the induced map on the other
    factor (a chain map only when the element is a closed even-degree cycle;
    callers own that bookkeeping).  Binary layouts only.
    """
    if len(lay.factors) != 2:
        raise ShapeError("element_action expects a binary tensor source")
    field = lay.field
    other = lay.factors[1 - slot]
    target = pairing.target
    fam = {}
    for b in other.degrees():
        odim = other.dim(b)
        total = deg + b
        tdim = target.dim(total + pairing.degree)
        if odim == 0:
            continue
        cols = []
        for oi in range(odim):
            acc = [field.zero()] * tdim
            for vi, v in enumerate(vector.column_values(0)):
                if field.is_zero(v):
                    continue
                combo = (deg, b) if slot == 0 else (b, deg)
                idx = (vi, oi) if slot == 0 else (oi, vi)
                pos = lay.position(combo, idx)
                img = pairing.component(total).col(pos)
                for r in range(tdim):
                    acc[r] = field.add(acc[r], field.mul(v, img.entries[r][0]))
            cols.append(acc)
        fam[b] = Mat.from_columns(field, tdim, cols)
    return fam
