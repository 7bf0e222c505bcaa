"""Integral representations of a finite group.

A G-module is a presented abelian group together with one action matrix
per group generator.  Construction verifies that the matrices preserve the
relation lattice, that the induced per-element matrices (built along each
element's word) depend only on the element, and hence that every element
acts invertibly on the quotient.  Modules with torsion are first-class
everywhere except dualization.

The permutation-cover resolution 0 -> L -> P -> M -> 0, with P free on a
permuted basis of subgroup cosets and L its Z-free kernel, is the bridge
from arbitrary modules to the two-term complexes used by the obstruction
computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .abelian import AbHom, PresentedAbelianGroup
from .errors import StructuralError
from .groups import FiniteGroup, Subgroup
from .intlinalg import (
    IntMatrix,
    lattice_solve,
    preimage_kernel,
    smith_normal_form,
    sparse_from_matrix,
    unimodular_inverse,
)


class GModule:
    __slots__ = ("group", "underlying", "action", "_element_matrices")

    def __init__(
        self,
        group: FiniteGroup,
        underlying: PresentedAbelianGroup,
        action: Sequence[IntMatrix],
        *,
        _trusted: bool = False,
    ):
        if len(action) != len(group.generators):
            raise StructuralError(
                f"need one action matrix per group generator "
                f"({len(group.generators)}), got {len(action)}"
            )
        n = underlying.generator_count
        for a in action:
            if a.nrows != n or a.ncols != n:
                raise StructuralError("action matrices must be square of the module rank")
        self.group = group
        self.underlying = underlying
        self.action = tuple(action)
        self._element_matrices: list[IntMatrix | None] = [None] * group.order
        if not _trusted:
            self._validate()

    def _validate(self) -> None:
        und = self.underlying
        for a in self.action:
            for rel in und.relation_rows:
                if not und.contains_relation(a.matvec(rel)):
                    raise StructuralError(
                        "action matrix does not preserve the relation lattice"
                    )
        # The matrix product along a word must depend only on the element:
        # checking M(s)M(e) = M(s*e) for all generators s and elements e
        # extends to arbitrary products, and with e = s^-1 it gives
        # invertibility on the quotient.
        g = self.group
        for e in range(g.order):
            me = self.element_matrix(e)
            for k, s in enumerate(g.generators):
                left = self.action[k].mul(me)
                right = self.element_matrix(g.mul(s, e))
                for j in range(und.generator_count):
                    diff = [x - y for x, y in zip(left.col(j), right.col(j))]
                    if not und.contains_relation(diff):
                        raise StructuralError(
                            "action matrices are inconsistent with the group law"
                        )

    @property
    def rank(self) -> int:
        """Number of presentation generators (not the free rank)."""
        return self.underlying.generator_count

    def element_matrix(self, e: int) -> IntMatrix:
        """Action of an element, the product of generator matrices along
        its stored word."""
        cached = self._element_matrices[e]
        if cached is not None:
            return cached
        m = IntMatrix.identity(self.underlying.generator_count)
        for k in self.group.element_words[e]:
            m = m.mul(self.action[k])
        self._element_matrices[e] = m
        return m

    def acts_trivially(self, e: int) -> bool:
        und = self.underlying
        m = self.element_matrix(e)
        for j in range(und.generator_count):
            col = list(m.col(j))
            col[j] -= 1
            if not und.contains_relation(col):
                return False
        return True

    def action_kernel(self) -> list[int]:
        """Elements acting as the identity on the quotient."""
        return [e for e in range(self.group.order) if self.acts_trivially(e)]

    def is_z_free(self) -> bool:
        free, tors = self.underlying.invariant_factors()
        return not tors

    def __repr__(self) -> str:
        return f"GModule({self.underlying} over group of order {self.group.order})"


class PermutationModule(GModule):
    """Free module with a basis permuted by the group.

    ``basis_action[e]`` is the permutation of basis indices induced by the
    element ``e``."""

    __slots__ = ("basis_action",)

    def __init__(self, group: FiniteGroup, generator_perms: Sequence[Sequence[int]]):
        if len(generator_perms) != len(group.generators):
            raise StructuralError("need one basis permutation per group generator")
        perms = [tuple(p) for p in generator_perms]
        n = len(perms[0]) if perms else None
        if n is None:
            raise StructuralError(
                "a permutation module over the trivial group needs an explicit "
                "basis; use trivial_module instead"
            )
        for p in perms:
            if sorted(p) != list(range(n)):
                raise StructuralError("basis action is not a permutation")
        # per-element permutations along words (the word (k1,..,kt) is the
        # product s_k1 ... s_kt, whose translation applies later letters
        # first), then table consistency
        per_elt: list[tuple[int, ...]] = []
        for e in range(group.order):
            q = tuple(range(n))
            for k in group.element_words[e]:
                p = perms[k]
                q = tuple(q[p[b]] for b in range(n))
            per_elt.append(q)
        for e in range(group.order):
            for k, s in enumerate(group.generators):
                p, q = perms[k], per_elt[e]
                if tuple(p[q[b]] for b in range(n)) != per_elt[group.mul(s, e)]:
                    raise StructuralError(
                        "basis permutations are inconsistent with the group law"
                    )
        matrices = [
            IntMatrix([[1 if p[j] == i else 0 for j in range(n)] for i in range(n)], cols=n)
            for p in perms
        ]
        super().__init__(
            group, PresentedAbelianGroup(n), matrices, _trusted=True
        )
        self.basis_action = tuple(per_elt)


def permutation_module_on_trivial_group(group: FiniteGroup, rank: int) -> PermutationModule:
    """Rank-``rank`` permutation module over the trivial group."""
    pm = PermutationModule.__new__(PermutationModule)
    GModule.__init__(pm, group, PresentedAbelianGroup(rank), [], _trusted=True)
    pm.basis_action = (tuple(range(rank)),)
    return pm


class GModuleHom:
    """Equivariant homomorphism of modules over the same group."""

    __slots__ = ("source", "target", "matrix", "abhom")

    def __init__(self, source: GModule, target: GModule, matrix: IntMatrix):
        if source.group is not target.group:
            raise StructuralError("source and target live over different groups")
        self.abhom = AbHom(source.underlying, target.underlying, matrix)
        und = target.underlying
        for a_src, a_tgt in zip(source.action, target.action):
            left = a_tgt.mul(matrix)
            right = matrix.mul(a_src)
            for j in range(matrix.ncols):
                diff = [x - y for x, y in zip(left.col(j), right.col(j))]
                if not und.contains_relation(diff):
                    raise StructuralError("homomorphism is not equivariant")
        self.source = source
        self.target = target
        self.matrix = matrix

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.matvec(vec)

    def __repr__(self) -> str:
        return f"GModuleHom({self.source.underlying} -> {self.target.underlying})"


@dataclass(frozen=True)
class PermutationResolution:
    """0 -> L -> P -> M -> 0 with P a permutation module and L Z-free."""

    module: GModule
    P: PermutationModule
    L: GModule
    incl: GModuleHom
    proj: GModuleHom


# ---------------------------------------------------------------------------
# Named constructors
# ---------------------------------------------------------------------------


def trivial_module(g: FiniteGroup, rank: int) -> GModule:
    return GModule(
        g,
        PresentedAbelianGroup(rank),
        [IntMatrix.identity(rank) for _ in g.generators],
        _trusted=True,
    )


def zero_module(g: FiniteGroup) -> GModule:
    return trivial_module(g, 0)


def sign_module(g: FiniteGroup, negating: Iterable[int]) -> GModule:
    """Rank-one module where the listed generators act by -1.  The
    constructor rejects assignments that do not factor through the group."""
    neg = set(negating)
    return GModule(
        g,
        PresentedAbelianGroup(1),
        [IntMatrix([[-1 if k in neg else 1]]) for k in range(len(g.generators))],
    )


def permutation_module(g: FiniteGroup, h: Subgroup) -> PermutationModule:
    """Z[g/h]: basis the left cosets of h, action by left translation."""
    if h.parent is not g:
        raise StructuralError("subgroup does not belong to the given group")
    reps: list[int] = []
    rep_of = {}
    for e in range(g.order):
        if e in rep_of:
            continue
        coset = sorted(g.mul(e, s) for s in h.members)
        for c in coset:
            rep_of[c] = coset[0]
        reps.append(coset[0])
    reps.sort()
    index = {r: i for i, r in enumerate(reps)}
    if not g.generators:
        return permutation_module_on_trivial_group(g, len(reps))
    perms = []
    for s in g.generators:
        perms.append(tuple(index[rep_of[g.mul(s, r)]] for r in reps))
    return PermutationModule(g, perms)


def regular_module(g: FiniteGroup) -> PermutationModule:
    return permutation_module(g, g.trivial_subgroup())


def augmentation_ideal(g: FiniteGroup) -> GModule:
    """Kernel of the coefficient-sum map on Z[g], with basis
    e_i - e_identity for the nonidentity elements i."""
    n = g.order
    rank = n - 1

    def col_for(s: int, i: int) -> list[int]:
        # image of e_{i} - e_0 under left translation by s
        out = [0] * rank
        top = g.mul(s, i)
        bot = g.mul(s, 0)
        if top != 0:
            out[top - 1] += 1
        if bot != 0:
            out[bot - 1] -= 1
        return out

    action = [
        IntMatrix.from_cols([col_for(s, i) for i in range(1, n)], rows=rank)
        for s in g.generators
    ]
    return GModule(g, PresentedAbelianGroup(rank), action, _trusted=True)


def augmentation_quotient(g: FiniteGroup) -> GModule:
    """Z[g] modulo the norm element (the sum of the basis)."""
    n = g.order
    reg = regular_module(g)
    return GModule(
        g,
        PresentedAbelianGroup(n, [[1] * n]),
        reg.action,
        _trusted=True,
    )


def direct_sum(mods: Sequence[GModule]) -> GModule:
    if not mods:
        raise StructuralError("direct sum needs at least one summand")
    g = mods[0].group
    for m in mods:
        if m.group is not g:
            raise StructuralError("summands live over different groups")
    und, _ = PresentedAbelianGroup.direct_sum([m.underlying for m in mods])
    action = []
    for k in range(len(g.generators)):
        blocks = [m.action[k] for m in mods]
        from .intlinalg import block_diag

        action.append(block_diag(blocks))
    return GModule(g, und, action, _trusted=True)


def perm_direct_sum(mods: Sequence[PermutationModule]) -> PermutationModule:
    g = mods[0].group
    for m in mods:
        if m.group is not g:
            raise StructuralError("summands live over different groups")
    if not g.generators:
        return permutation_module_on_trivial_group(g, sum(m.rank for m in mods))
    perms = []
    for k in range(len(g.generators)):
        combined: list[int] = []
        off = 0
        for m in mods:
            p = [m.basis_action[g.generators[k]][b] + off for b in range(m.rank)]
            combined.extend(p)
            off += m.rank
        perms.append(tuple(combined))
    return PermutationModule(g, perms)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def free_basis_presentation(m: GModule) -> tuple[GModule, IntMatrix, IntMatrix]:
    """Re-present a torsion-free module on an honest basis.

    Returns (free module, proj, lift) with proj @ lift the identity; proj
    carries old presentation coordinates to basis coordinates."""
    free, tors = m.underlying.invariant_factors()
    if tors:
        raise StructuralError(f"module has torsion {list(tors)}; no free basis exists")
    n = m.underlying.generator_count
    if not m.underlying.relation_rows:
        ident = IntMatrix.identity(n)
        return m, ident, ident
    rel_t = m.underlying.relations.transpose()
    snf = smith_normal_form(rel_t)
    diag = snf.diagonal
    free_idx = [i for i in range(n) if i >= len(diag) or diag[i] == 0]
    u = snf.U
    u_inv = unimodular_inverse(u)
    proj = IntMatrix([u.row(i) for i in free_idx], cols=n)
    lift = IntMatrix.from_cols([u_inv.col(i) for i in free_idx], rows=n)
    action = [proj.mul(a).mul(lift) for a in m.action]
    free_mod = GModule(m.group, PresentedAbelianGroup(len(free_idx)), action, _trusted=True)
    return free_mod, proj, lift


def dual_module(m: GModule) -> GModule:
    """Hom(M, Z) with the contragredient action (inverse transpose);
    requires a torsion-free module.  The dual of a permutation module is
    the permutation module on the dual basis."""
    free, tors = m.underlying.invariant_factors()
    if tors:
        raise StructuralError(
            f"cannot dualize a module with torsion factors {list(tors)}"
        )
    if isinstance(m, PermutationModule):
        # permutation matrices are orthogonal: inverse transpose is itself
        if not m.group.generators:
            return permutation_module_on_trivial_group(m.group, m.rank)
        return PermutationModule(m.group, [m.basis_action[s] for s in m.group.generators])
    base, _, _ = free_basis_presentation(m)
    dual_action = [unimodular_inverse(a).transpose() for a in base.action]
    return GModule(
        base.group, PresentedAbelianGroup(base.rank), dual_action, _trusted=True
    )


def restrict(
    m: GModule,
    h: Subgroup,
    *,
    _as_group: tuple[FiniteGroup, tuple[int, ...]] | None = None,
) -> GModule:
    """Same underlying group, action restricted to a subgroup (which
    becomes the acting group, via its own canonical enumeration)."""
    if h.parent is not m.group:
        raise StructuralError("subgroup does not belong to the module's group")
    h_group, embed = _as_group if _as_group is not None else h.as_group()
    action = [m.element_matrix(embed[s]) for s in h_group.generators]
    if isinstance(m, PermutationModule):
        if not h_group.generators:
            return permutation_module_on_trivial_group(h_group, m.rank)
        perms = [m.basis_action[embed[s]] for s in h_group.generators]
        return PermutationModule(h_group, perms)
    return GModule(h_group, m.underlying, action, _trusted=True)


def faithful_quotient(m: GModule) -> tuple[FiniteGroup, GModule]:
    """Quotient of the acting group by the kernel of the action, together
    with the module as a faithful module over it.  Models passing to the
    smallest splitting extension."""
    g = m.group
    kernel = set(m.action_kernel())

    def coset_rep(e: int) -> int:
        return min(g.mul(e, k) for k in kernel)

    gen_tokens: list[int] = []
    for s in g.generators:
        r = coset_rep(s)
        if r != 0 and r not in gen_tokens:
            gen_tokens.append(r)

    from .groups import _group_from_tokens

    def mul(a: int, b: int) -> int:
        return coset_rep(g.mul(a, b))

    q_group, elements = _group_from_tokens(0, gen_tokens, mul, g.order + 1)
    action = [m.element_matrix(elements[s]) for s in q_group.generators]
    return q_group, GModule(q_group, m.underlying, action, _trusted=True)


def permutation_cover(
    m: GModule, generators: Sequence[Sequence[int]] | None = None
) -> PermutationResolution:
    """Resolution 0 -> L -> P -> M -> 0.

    P is the direct sum, over a generating set {v_i} of M, of the coset
    modules Z[g/Stab(v_i)], where the stabilizer is exact equality in the
    quotient; the projection sends the coset of s in the i-th summand to
    s.v_i, and L is its kernel, Z-free with the induced action.

    By default the generating set is the presentation basis of M with the
    vectors that vanish in M dropped; any generating set may be supplied.
    """
    g = m.group
    und = m.underlying
    n = und.generator_count
    if generators is None:
        gen_vectors = [
            tuple(1 if j == i else 0 for j in range(n))
            for i in range(n)
            if not und.contains_relation([1 if j == i else 0 for j in range(n)])
        ]
    else:
        gen_vectors = [tuple(v) for v in generators]
        for v in gen_vectors:
            if len(v) != n:
                raise StructuralError("generating vector has wrong length")

    summands: list[PermutationModule] = []
    proj_cols: list[list[int]] = []
    for v in gen_vectors:
        stab = [
            e
            for e in range(g.order)
            if und.contains_relation(
                [a - b for a, b in zip(m.element_matrix(e).matvec(v), v)]
            )
        ]
        h = Subgroup(g, stab)
        pm = permutation_module(g, h)
        summands.append(pm)
        # coset representatives, in the basis order used by permutation_module
        reps = _coset_reps(g, h)
        for r in reps:
            proj_cols.append(list(m.element_matrix(r).matvec(v)))
    if summands:
        P = perm_direct_sum(summands)
    else:
        P = permutation_module_on_trivial_group(g, 0) if not g.generators else PermutationModule(
            g, [() for _ in g.generators]
        )
    proj_matrix = IntMatrix.from_cols(proj_cols, rows=n)
    # surjectivity: the columns together with the relators must span Z^n
    cok = PresentedAbelianGroup(n, list(und.relation_rows) + [tuple(c) for c in proj_cols])
    if not cok.is_trivial():
        raise StructuralError("chosen vectors do not generate the module")
    proj = GModuleHom(P, m, proj_matrix)

    basis = preimage_kernel(
        sparse_from_matrix(proj_matrix), n, und.relation_rows
    )
    L_rank = len(basis)
    incl_matrix = IntMatrix.from_cols([list(b) for b in basis], rows=P.rank)
    L_action = []
    for k in range(len(g.generators)):
        ap = P.action[k]
        cols = []
        for b in basis:
            img = ap.matvec(b)
            coeffs = lattice_solve(basis, img)
            if coeffs is None:
                raise StructuralError("kernel lattice is not action-stable")
            cols.append(list(coeffs))
        L_action.append(IntMatrix.from_cols(cols, rows=L_rank))
    L = GModule(g, PresentedAbelianGroup(L_rank), L_action, _trusted=True)
    incl = GModuleHom(L, P, incl_matrix)
    return PermutationResolution(module=m, P=P, L=L, incl=incl, proj=proj)


def _coset_reps(g: FiniteGroup, h: Subgroup) -> list[int]:
    reps = []
    seen = set()
    for e in range(g.order):
        if e in seen:
            continue
        coset = {g.mul(e, s) for s in h.members}
        seen |= coset
        reps.append(min(coset))
    reps.sort()
    return reps
