"""Group cohomology H^0..H^2 via inhomogeneous cochains, and
hypercohomology of two-term complexes via the total complex.

The cochain space C^i(G, M) is Maps(G^i, M), realized as a presented
abelian group of rank |G|^i * rank(M): coordinates are blocks of module
coordinates indexed by i-tuples of element indices in lexicographic
order.  The differential is the standard one,

  (d c)(g_1,...,g_{i+1}) = g_1 . c(g_2,...,g_{i+1})
                           + sum_k (-1)^k c(...,g_k g_{k+1},...)
                           + (-1)^{i+1} c(g_1,...,g_i),

with no normalization assumed.  H^i is ker d^i / im d^{i-1} computed on
presented groups, so modules with torsion are handled transparently.

For a two-term complex f : A -> B (A in degree 0, B in degree 1) the total
complex is T^n = C^n(A) + C^{n-1}(B) with the fixed sign convention

  D(a, b) = (d a, f(a) - d b);

any consistent convention yields isomorphic groups, but this one is pinned
so that representative-level tests are stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .abelian import AbHom, PresentedAbelianGroup
from .errors import ResourceError, StructuralError
from .gmodules import GModule, GModuleHom, restrict
from .groups import FiniteGroup, Subgroup
from .intlinalg import (
    IntMatrix,
    hermite_rows,
    lattice_solve,
    sparse_apply,
    sparse_from_matrix,
    sparse_kernel,
)

DEFAULT_COCHAIN_CAP = 20000


@dataclass(frozen=True)
class TwoTermComplex:
    """An equivariant map viewed as a complex: source in degree 0, target
    in degree 1."""

    f: GModuleHom

    @property
    def degree0(self) -> GModule:
        return self.f.source

    @property
    def degree1(self) -> GModule:
        return self.f.target

    @property
    def group(self) -> FiniteGroup:
        return self.f.source.group


# ---------------------------------------------------------------------------
# Cochain machinery
# ---------------------------------------------------------------------------


class _Cochains:
    """Index bookkeeping and sparse differentials for one module."""

    def __init__(self, group: FiniteGroup, module: GModule):
        self.group = group
        self.module = module
        self.gm = module.rank
        order = group.order
        # sparse columns of each element's action matrix
        self.elt_cols: list[list[dict[int, int]]] = [
            sparse_from_matrix(module.element_matrix(e)) for e in range(order)
        ]

    def dim(self, i: int) -> int:
        return self.group.order**i * self.gm

    def tuple_count(self, i: int) -> int:
        return self.group.order**i

    def diff_cols(self, i: int) -> list[dict[int, int]]:
        """Columns of d^i : C^i -> C^{i+1}."""
        order = self.group.order
        gm = self.gm
        table = self.group.table
        inverse = self.group.inverse
        n_src_tuples = order**i
        cols: list[dict[int, int]] = []
        # strides for target tuples of length i+1
        stride = [order ** (i - k) for k in range(i + 1)]  # stride[k] for slot k

        for ti in range(n_src_tuples):
            # decode source tuple
            t = []
            rem = ti
            for k in range(i):
                p = order ** (i - 1 - k)
                t.append(rem // p)
                rem %= p
            for j in range(gm):
                col: dict[int, int] = {}

                def add(coord: int, val: int) -> None:
                    w = col.get(coord, 0) + val
                    if w:
                        col[coord] = w
                    else:
                        col.pop(coord, None)

                # leading term: target (x, t_1..t_i), value A(x) e_j
                for x in range(order):
                    base = (x * stride[0] + ti) * gm
                    for r, v in self.elt_cols[x][j].items():
                        add(base + r, v)
                # middle contractions
                for k in range(1, i + 1):
                    sign = -1 if k % 2 else 1
                    # target tuples s with s_k s_{k+1} = t_k and the rest of t kept
                    head = 0
                    for idx in range(k - 1):
                        head += t[idx] * stride[idx]
                    tail = 0
                    for idx in range(k, i):
                        tail += t[idx] * stride[idx + 1]
                    tk = t[k - 1]
                    for a in range(order):
                        b = table[inverse[a]][tk]  # a*b = t_k
                        s_idx = head + a * stride[k - 1] + b * stride[k] + tail
                        add(s_idx * gm + j, sign)
                # final term: target (t_1..t_i, x)
                sign = -1 if (i + 1) % 2 else 1
                for x in range(order):
                    s_idx = ti * order + x
                    add(s_idx * gm + j, sign)
                cols.append(col)
        return cols

    def relation_cols(self, i: int) -> list[dict[int, int]]:
        """The module's relators embedded in every tuple block of C^i."""
        gm = self.gm
        out = []
        for block in range(self.tuple_count(i)):
            base = block * gm
            for rel in self.module.underlying.relation_rows:
                out.append({base + k: v for k, v in enumerate(rel) if v})
        return out

    def relation_rows_dense(self, i: int) -> list[tuple[int, ...]]:
        n = self.dim(i)
        rows = []
        for col in self.relation_cols(i):
            row = [0] * n
            for k, v in col.items():
                row[k] = v
            rows.append(tuple(row))
        return rows

    def space(self, i: int) -> PresentedAbelianGroup:
        return PresentedAbelianGroup(self.dim(i), self.relation_rows_dense(i))

    def block_contains(self, i: int, vec: Sequence[int]) -> bool:
        """Whether a C^i vector lies in the embedded relation lattice."""
        und = self.module.underlying
        gm = self.gm
        for block in range(self.tuple_count(i)):
            if not und.contains_relation(vec[block * gm : (block + 1) * gm]):
                return False
        return True


class CochainComplexSegment:
    """Degrees 0..3 of the cochain complex with explicit differentials.

    Constructing one verifies d(i+1) o d(i) = 0 as maps of presented
    groups (an exact integer check; for Z-free modules the composite is
    the zero matrix on the nose) and that C^0 is the module itself."""

    def __init__(self, group: FiniteGroup, module: GModule):
        self.group = group
        self.module = module
        self._c = _Cochains(group, module)
        self.spaces = [self._c.space(i) for i in range(4)]
        self._diff_cols = [self._c.diff_cols(i) for i in range(3)]
        for i in (0, 1):
            composite = _compose_cols(self._diff_cols[i + 1], self._diff_cols[i])
            for col in composite:
                vec = [0] * self._c.dim(i + 2)
                for k, v in col.items():
                    vec[k] = v
                if not self._c.block_contains(i + 2, vec):
                    raise StructuralError("differentials do not compose to zero")
        if self.spaces[0] != module.underlying:
            raise StructuralError("degree-zero cochains do not match the module")

    def cochain_space(self, i: int) -> PresentedAbelianGroup:
        return self.spaces[i]

    def differential(self, i: int) -> AbHom:
        cols = self._diff_cols[i]
        n_rows = self._c.dim(i + 1)
        dense = []
        for col in cols:
            v = [0] * n_rows
            for k, val in col.items():
                v[k] = val
            dense.append(v)
        return AbHom(
            self.spaces[i],
            self.spaces[i + 1],
            IntMatrix.from_cols(dense, rows=n_rows),
        )


def _compose_cols(
    outer: list[dict[int, int]], inner: list[dict[int, int]]
) -> list[dict[int, int]]:
    out = []
    for col in inner:
        acc: dict[int, int] = {}
        for j, x in col.items():
            for i, v in outer[j].items():
                w = acc.get(i, 0) + x * v
                if w:
                    acc[i] = w
                else:
                    del acc[i]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Cohomology groups
# ---------------------------------------------------------------------------


@dataclass
class CohomologyGroup:
    """A computed H^i or HH^i: its value as a presented abelian group, one
    explicit cocycle per generator, and a membership procedure taking a
    cocycle to its class coordinates."""

    degree: int
    group: FiniteGroup
    coefficients: object  # GModule | TwoTermComplex
    group_value: PresentedAbelianGroup
    representatives: tuple[tuple[int, ...], ...]
    _basis_rows: tuple[tuple[int, ...], ...]
    _cocycle_cols: list[dict[int, int]] = field(repr=False)
    _target_dim: int = field(repr=False)
    _target_contains: Callable[[Sequence[int]], bool] = field(repr=False)
    _dims: tuple[int, ...] = field(repr=False, default=())

    def is_cocycle(self, vec: Sequence[int]) -> bool:
        img = sparse_apply(self._cocycle_cols, vec)
        dense = [0] * self._target_dim
        for k, v in img.items():
            dense[k] = v
        return self._target_contains(dense)

    def class_coords(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a cocycle's class on the computed generators."""
        coeffs = lattice_solve(self._basis_rows, vec)
        if coeffs is None:
            raise StructuralError("vector is not a cocycle of this group")
        return self.group_value.reduce_element(coeffs)

    def __str__(self) -> str:
        return str(self.group_value)


def _budget_check(c2_dim: int, cap: int) -> None:
    if c2_dim > cap:
        raise ResourceError(
            f"degree-2 cochain space has rank {c2_dim}, over the cap {cap}",
            dimension=c2_dim,
        )


def _homology_from_cols(
    dim_i: int,
    kernel_cols: list[dict[int, int]],
    target_dim: int,
    target_rel_cols: list[dict[int, int]],
    image_cols: list[dict[int, int]],
    ambient_rel_cols: list[dict[int, int]],
) -> tuple[PresentedAbelianGroup, tuple[tuple[int, ...], ...]]:
    """Shared ker/im pipeline on sparse data.

    Returns the presented value group and the Hermite basis of the kernel
    lattice (whose rows are the representative cocycles)."""
    aug = list(kernel_cols) + list(target_rel_cols)
    ker = sparse_kernel(aug, target_dim)
    basis = hermite_rows([row[:dim_i] for row in ker], dim_i)
    relators = []
    for col in list(image_cols) + list(ambient_rel_cols):
        dense = [0] * dim_i
        for k, v in col.items():
            dense[k] = v
        coeffs = lattice_solve(basis, dense)
        if coeffs is None:
            raise StructuralError("image vector escapes the kernel lattice")
        relators.append(coeffs)
    value = PresentedAbelianGroup(len(basis), relators)
    return value, basis


def cohomology(
    group: FiniteGroup,
    module: GModule,
    degree: int,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> CohomologyGroup:
    """H^degree(group, module) for degree 0, 1 or 2."""
    if degree not in (0, 1, 2):
        raise StructuralError("only degrees 0..2 are supported")
    if module.group is not group:
        raise StructuralError("module is not a module over the given group")
    c = _Cochains(group, module)
    _budget_check(group.order**2 * c.gm, cochain_cap)
    d_i = c.diff_cols(degree)
    target_rels = c.relation_cols(degree + 1)
    image = c.diff_cols(degree - 1) if degree >= 1 else []
    value, basis = _homology_from_cols(
        c.dim(degree), d_i, c.dim(degree + 1), target_rels, image, c.relation_cols(degree)
    )
    return CohomologyGroup(
        degree=degree,
        group=group,
        coefficients=module,
        group_value=value,
        representatives=basis,
        _basis_rows=basis,
        _cocycle_cols=d_i,
        _target_dim=c.dim(degree + 1),
        _target_contains=lambda v: c.block_contains(degree + 1, v),
        _dims=(c.dim(degree),),
    )


@dataclass(frozen=True)
class Restriction:
    """The induced map on cohomology together with the restricted group."""

    map: AbHom
    target: CohomologyGroup
    cochain_selection: tuple[int, ...]  # target coord -> source coord


def _tuple_selection(
    order: int, embed: Sequence[int], sub_order: int, i: int, gm: int
) -> tuple[int, ...]:
    """For each C^i coordinate of the subgroup, the parent coordinate."""
    sel = []
    for ti in range(sub_order**i):
        rem = ti
        parent_idx = 0
        for k in range(i):
            p = sub_order ** (i - 1 - k)
            parent_idx = parent_idx * order + embed[rem // p]
            rem %= p
        for j in range(gm):
            sel.append(parent_idx * gm + j)
    return tuple(sel)


def restriction(
    cg: CohomologyGroup, h: Subgroup, *, cochain_cap: int = DEFAULT_COCHAIN_CAP
) -> Restriction:
    """Restriction H^i(g, M) -> H^i(h, M|_h) along the inclusion of a
    subgroup: cochains are restricted to tuples from the subgroup."""
    module = cg.coefficients
    if not isinstance(module, GModule):
        raise StructuralError("use hyper_restriction for two-term coefficients")
    if h.parent is not cg.group:
        raise StructuralError("subgroup does not belong to the acting group")
    h_group, embed = h.as_group()
    sub_module = restrict(module, h, _as_group=(h_group, embed))
    target = cohomology(h_group, sub_module, cg.degree, cochain_cap=cochain_cap)
    sel = _tuple_selection(cg.group.order, embed, h_group.order, cg.degree, module.rank)
    cols = []
    for rep in cg.representatives:
        picked = [rep[s] for s in sel]
        cols.append(list(target.class_coords(picked)))
    hom = AbHom(
        cg.group_value,
        target.group_value,
        IntMatrix.from_cols(cols, rows=target.group_value.generator_count),
    )
    return Restriction(map=hom, target=target, cochain_selection=sel)


# ---------------------------------------------------------------------------
# Hypercohomology of a two-term complex
# ---------------------------------------------------------------------------


class _TotalComplex:
    """T^n = C^n(A) + C^{n-1}(B), D(a,b) = (dA a, f(a) - dB b)."""

    def __init__(self, group: FiniteGroup, complex_: TwoTermComplex):
        self.group = group
        self.complex = complex_
        self.ca = _Cochains(group, complex_.degree0)
        self.cb = _Cochains(group, complex_.degree1)
        self.f_cols = sparse_from_matrix(complex_.f.matrix)

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        b_part = self.cb.dim(n - 1) if n >= 1 else 0
        return self.ca.dim(n) + b_part

    def diff_cols(self, n: int) -> list[dict[int, int]]:
        """Columns of D^n : T^n -> T^{n+1}."""
        order = self.group.order
        a_src = self.ca.dim(n)
        a_tgt = self.ca.dim(n + 1)
        cols: list[dict[int, int]] = []
        da = self.ca.diff_cols(n)
        gm_a, gm_b = self.ca.gm, self.cb.gm
        for src in range(a_src):
            col = dict(da[src])
            # f applied pointwise: block structure is shared
            block, j = divmod(src, gm_a)
            for r, v in self.f_cols[j].items():
                key = a_tgt + block * gm_b + r
                w = col.get(key, 0) + v
                if w:
                    col[key] = w
                else:
                    col.pop(key, None)
            cols.append(col)
        if n >= 1:
            db = self.cb.diff_cols(n - 1)
            for src in range(self.cb.dim(n - 1)):
                cols.append({a_tgt + k: -v for k, v in db[src].items()})
        return cols

    def relation_cols(self, n: int) -> list[dict[int, int]]:
        a_tgt = self.ca.dim(n)
        out = list(self.ca.relation_cols(n))
        if n >= 1:
            for col in self.cb.relation_cols(n - 1):
                out.append({a_tgt + k: v for k, v in col.items()})
        return out

    def block_contains(self, n: int, vec: Sequence[int]) -> bool:
        a_dim = self.ca.dim(n)
        if not self.ca.block_contains(n, vec[:a_dim]):
            return False
        if n >= 1 and not self.cb.block_contains(n - 1, vec[a_dim:]):
            return False
        return True


def hypercohomology(
    group: FiniteGroup,
    complex_: TwoTermComplex,
    degree: int,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> CohomologyGroup:
    """HH^degree(group, A -> B) via the total complex."""
    if degree not in (0, 1, 2):
        raise StructuralError("only degrees 0..2 are supported")
    if complex_.group is not group:
        raise StructuralError("complex is not over the given group")
    t = _TotalComplex(group, complex_)
    _budget_check(t.dim(2), cochain_cap)
    d_n = t.diff_cols(degree)
    image = t.diff_cols(degree - 1) if degree >= 1 else []
    value, basis = _homology_from_cols(
        t.dim(degree), d_n, t.dim(degree + 1), t.relation_cols(degree + 1),
        image, t.relation_cols(degree),
    )
    return CohomologyGroup(
        degree=degree,
        group=group,
        coefficients=complex_,
        group_value=value,
        representatives=basis,
        _basis_rows=basis,
        _cocycle_cols=d_n,
        _target_dim=t.dim(degree + 1),
        _target_contains=lambda v: t.block_contains(degree + 1, v),
        _dims=(t.ca.dim(degree), t.cb.dim(degree - 1) if degree >= 1 else 0),
    )


def hyper_restriction(
    cg: CohomologyGroup, h: Subgroup, *, cochain_cap: int = DEFAULT_COCHAIN_CAP
) -> Restriction:
    """Restriction of hypercohomology along a subgroup: both components of
    the total complex are restricted."""
    complex_ = cg.coefficients
    if not isinstance(complex_, TwoTermComplex):
        raise StructuralError("hyper_restriction needs two-term coefficients")
    if h.parent is not cg.group:
        raise StructuralError("subgroup does not belong to the acting group")
    h_group, embed = h.as_group()
    a_sub = restrict(complex_.degree0, h, _as_group=(h_group, embed))
    b_sub = restrict(complex_.degree1, h, _as_group=(h_group, embed))
    sub_complex = TwoTermComplex(GModuleHom(a_sub, b_sub, complex_.f.matrix))
    target = hypercohomology(h_group, sub_complex, cg.degree, cochain_cap=cochain_cap)
    i = cg.degree
    order, sub_order = cg.group.order, h_group.order
    a_dim = order**i * complex_.degree0.rank
    sel_a = _tuple_selection(order, embed, sub_order, i, complex_.degree0.rank)
    sel_b = _tuple_selection(order, embed, sub_order, i - 1, complex_.degree1.rank)
    sel = tuple(list(sel_a) + [a_dim + s for s in sel_b])
    cols = []
    for rep in cg.representatives:
        picked = [rep[s] for s in sel]
        cols.append(list(target.class_coords(picked)))
    hom = AbHom(
        cg.group_value,
        target.group_value,
        IntMatrix.from_cols(cols, rows=target.group_value.generator_count),
    )
    return Restriction(map=hom, target=target, cochain_selection=sel)


# ---------------------------------------------------------------------------
# Long exact sequence of a two-term complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LesSegment:
    """H^{i-1}(A) -> H^{i-1}(B) -> HH^i(A->B) -> H^i(A) -> H^i(B) with the
    connecting maps realized on representatives."""

    ha_prev: CohomologyGroup
    hb_prev: CohomologyGroup
    hyper: CohomologyGroup
    ha: CohomologyGroup
    hb: CohomologyGroup
    from_a_prev: AbHom
    from_b_prev: AbHom
    to_a: AbHom
    to_b: AbHom


def les_segment(
    group: FiniteGroup,
    complex_: TwoTermComplex,
    degree: int,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> LesSegment:
    if degree not in (1, 2):
        raise StructuralError("the exposed segment needs degree 1 or 2")
    a, b = complex_.degree0, complex_.degree1
    i = degree
    ha_prev = cohomology(group, a, i - 1, cochain_cap=cochain_cap)
    hb_prev = cohomology(group, b, i - 1, cochain_cap=cochain_cap)
    hyper = hypercohomology(group, complex_, i, cochain_cap=cochain_cap)
    ha = cohomology(group, a, i, cochain_cap=cochain_cap)
    hb = cohomology(group, b, i, cochain_cap=cochain_cap)
    f_cols = sparse_from_matrix(complex_.f.matrix)
    gm_a = a.rank

    def f_pointwise(vec: Sequence[int], blocks: int) -> list[int]:
        out = [0] * (blocks * b.rank)
        for block in range(blocks):
            for j in range(gm_a):
                v = vec[block * gm_a + j]
                if v:
                    for r, w in f_cols[j].items():
                        out[block * b.rank + r] += v * w
        return out

    order = group.order

    def induced_f(src: CohomologyGroup, tgt: CohomologyGroup, deg: int) -> AbHom:
        cols = [
            list(tgt.class_coords(f_pointwise(rep, order**deg)))
            for rep in src.representatives
        ]
        return AbHom(
            src.group_value,
            tgt.group_value,
            IntMatrix.from_cols(cols, rows=tgt.group_value.generator_count),
        )

    a_dim_hyper = order**i * gm_a
    cols_in = []
    for rep in hb_prev.representatives:
        total = [0] * a_dim_hyper + list(rep)
        cols_in.append(list(hyper.class_coords(total)))
    from_b_prev = AbHom(
        hb_prev.group_value,
        hyper.group_value,
        IntMatrix.from_cols(cols_in, rows=hyper.group_value.generator_count),
    )
    cols_out = [
        list(ha.class_coords(rep[:a_dim_hyper])) for rep in hyper.representatives
    ]
    to_a = AbHom(
        hyper.group_value,
        ha.group_value,
        IntMatrix.from_cols(cols_out, rows=ha.group_value.generator_count),
    )
    return LesSegment(
        ha_prev=ha_prev,
        hb_prev=hb_prev,
        hyper=hyper,
        ha=ha,
        hb=hb,
        from_a_prev=induced_f(ha_prev, hb_prev, i - 1),
        from_b_prev=from_b_prev,
        to_a=to_a,
        to_b=induced_f(ha, hb, i),
    )
