"""Sha functors over an abstract local datum, and their machine checks.

The model
---------

A "number-field situation" for modules split by a fixed finite Galois
extension is modeled by a :class:`LocalDatum`: the finite group (the
Galois group of the splitting extension), a finite list of *special
places* carrying arbitrary decomposition subgroups, and an implicit,
always-on Chebotarev backdrop: every cyclic subgroup occurs as the
decomposition group of infinitely many places.

Consequences built into the computation:

* excluding a finite set of places never removes a cyclic condition,
  since each cyclic subgroup is the decomposition group of infinitely
  many places; so for a finite excluded set S,

      Sha^i_S  =  ker[ H^i -> prod over cyclic C of H^i(C) ]
                  intersect  ker[ restrictions to retained special places ],

* Sha^i_omega (classes dying at all but finitely many places) equals the
  kernel of restriction to the cyclic subgroups alone,
* non-cyclic decomposition groups can occur only at the finitely many
  special places, which are explicit input.

Whether a given abstract datum is realizable by an actual extension of
number fields is a number-theoretic question deliberately left outside
this tool; every statement verified here is a statement about the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .abelian import (
    AbHom,
    PresentedAbelianGroup,
    is_isomorphism,
    stack_homs,
    subquotient,
    trivial_group,
)
from .cohomology import (
    DEFAULT_COCHAIN_CAP,
    CohomologyGroup,
    Restriction,
    TwoTermComplex,
    cohomology,
    hyper_restriction,
    hypercohomology,
    restriction,
)
from .errors import StructuralError
from .gmodules import GModule, PermutationModule, faithful_quotient
from .groups import FiniteGroup, Subgroup, cyclic_subgroups, exponent, is_metacyclic
from .intlinalg import IntMatrix


@dataclass(frozen=True)
class LocalDatum:
    """Acting group plus named special places with their decomposition
    subgroups, over the implicit Chebotarev backdrop."""

    group: FiniteGroup
    special_places: tuple[tuple[str, Subgroup], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.special_places]
        if len(set(names)) != len(names):
            raise StructuralError("special place names must be unique")
        for name, sub in self.special_places:
            if sub.parent is not self.group:
                raise StructuralError(
                    f"decomposition group of {name!r} lives in a different group"
                )

    @property
    def place_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.special_places)


@dataclass(frozen=True)
class PlaceSelection:
    """The finite set S of excluded places (a subset of the special place
    names; excluding backdrop places is a no-op by construction)."""

    excluded: frozenset[str] = frozenset()

    @classmethod
    def of(cls, *names: str) -> "PlaceSelection":
        return cls(frozenset(names))


EMPTY_SELECTION = PlaceSelection()


@dataclass
class ShaGroup:
    """Kernel of the imposed restrictions inside a cohomology group."""

    ambient: CohomologyGroup
    value: PresentedAbelianGroup
    inclusion: AbHom
    representatives: tuple[tuple[int, ...], ...]
    imposed: tuple[str, ...]
    _basis_rows: tuple[tuple[int, ...], ...]
    _constraint: AbHom  # stacked class-level restrictions on the ambient value

    def class_of(self, ambient_coords: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in this subgroup of an ambient class known to lie in
        it (raises otherwise)."""
        from .intlinalg import lattice_solve

        coeffs = lattice_solve(self._basis_rows, ambient_coords)
        if coeffs is None:
            raise StructuralError("class does not lie in the Sha subgroup")
        return self.value.reduce_element(coeffs)

    def __str__(self) -> str:
        return str(self.value)


def _imposed_subgroups(
    datum: LocalDatum, selection: PlaceSelection
) -> list[tuple[str, Subgroup]]:
    unknown = selection.excluded - set(datum.place_names)
    if unknown:
        raise StructuralError(f"excluded places {sorted(unknown)} are not declared")
    out: list[tuple[str, Subgroup]] = []
    seen: set[tuple[int, ...]] = set()
    for sub in cyclic_subgroups(datum.group, up_to_conjugacy=True):
        if sub.order == 1:
            continue  # restrictions to the trivial subgroup are vacuous in degree >= 1
        out.append((f"cyclic{sub.members}", sub))
        seen.add(sub.members)
    for name, sub in sorted(datum.special_places, key=lambda p: p[0]):
        if name in selection.excluded:
            continue
        if sub.members in seen:
            continue  # identical condition already imposed
        out.append((name, sub))
        seen.add(sub.members)
    return out


def _sha_core(
    ambient: CohomologyGroup,
    imposed: list[tuple[str, Subgroup]],
    restrict_fn: Callable[[CohomologyGroup, Subgroup], Restriction],
) -> ShaGroup:
    value_group = ambient.group_value
    homs: list[AbHom] = []
    restrictions: list[Restriction] = []
    for _, sub in imposed:
        res = restrict_fn(ambient, sub)
        restrictions.append(res)
        homs.append(res.map)
    if homs:
        constraint = stack_homs(homs)
    else:
        constraint = AbHom.zero(value_group, trivial_group())
    sq = subquotient(constraint, AbHom.zero(trivial_group(), value_group))
    reps = []
    cochain_len = len(ambient.representatives[0]) if ambient.representatives else 0
    for j in range(sq.group.generator_count):
        coords = sq.lift.col(j)
        acc = [0] * cochain_len
        for t, c in enumerate(coords):
            if c:
                rep = ambient.representatives[t]
                for k, v in enumerate(rep):
                    acc[k] += c * v
        reps.append(tuple(acc))
    group = ShaGroup(
        ambient=ambient,
        value=sq.group,
        inclusion=sq.inclusion(),
        representatives=tuple(reps),
        imposed=tuple(name for name, _ in imposed),
        _basis_rows=sq.basis_rows,
        _constraint=constraint,
    )
    # every representative must restrict to zero on every imposed subgroup,
    # re-checked at the cochain level
    for rep, _ in zip(group.representatives, range(len(reps))):
        for res in restrictions:
            picked = [rep[s] for s in res.cochain_selection]
            if any(res.target.class_coords(picked)):
                raise StructuralError(
                    "internal check failed: a Sha representative survives a restriction"
                )
    return group


def sha(
    datum: LocalDatum,
    module: GModule,
    degree: int,
    selection: PlaceSelection = EMPTY_SELECTION,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> ShaGroup:
    """Sha^degree_S: classes of H^degree killed by restriction to every
    cyclic subgroup (the Chebotarev backdrop) and to the decomposition
    group of every retained special place."""
    if degree not in (1, 2):
        raise StructuralError("Sha is computed in degrees 1 and 2 only")
    if module.group is not datum.group:
        raise StructuralError("module is not over the datum's group")
    ambient = cohomology(datum.group, module, degree, cochain_cap=cochain_cap)
    imposed = _imposed_subgroups(datum, selection)
    return _sha_core(
        ambient, imposed, lambda cg, sub: restriction(cg, sub, cochain_cap=cochain_cap)
    )


def sha_omega(
    datum: LocalDatum,
    module: GModule,
    degree: int,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> ShaGroup:
    """Sha^degree_omega = union over finite S; in the model, the kernel of
    the cyclic restrictions alone."""
    return sha(
        datum,
        module,
        degree,
        PlaceSelection(frozenset(datum.place_names)),
        cochain_cap=cochain_cap,
    )


def sha_quotient(
    datum: LocalDatum,
    module: GModule,
    degree: int,
    selection: PlaceSelection = EMPTY_SELECTION,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> PresentedAbelianGroup:
    """Sha^degree_S / Sha^degree_(empty set), through their inclusions
    into H^degree."""
    big = sha(datum, module, degree, selection, cochain_cap=cochain_cap)
    small = sha(datum, module, degree, EMPTY_SELECTION, cochain_cap=cochain_cap)
    return subquotient(big._constraint, small.inclusion).group


def sha_two_term(
    datum: LocalDatum,
    complex_: TwoTermComplex,
    degree: int,
    selection: PlaceSelection = EMPTY_SELECTION,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> ShaGroup:
    """Sha^degree_S of a two-term complex: the same kernel, inside
    hypercohomology, with restrictions on the total complex."""
    if degree != 2:
        raise StructuralError("two-term Sha is exposed in degree 2")
    if complex_.group is not datum.group:
        raise StructuralError("complex is not over the datum's group")
    ambient = hypercohomology(datum.group, complex_, degree, cochain_cap=cochain_cap)
    imposed = _imposed_subgroups(datum, selection)
    return _sha_core(
        ambient,
        imposed,
        lambda cg, sub: hyper_restriction(cg, sub, cochain_cap=cochain_cap),
    )


def sha_two_term_omega(
    datum: LocalDatum,
    complex_: TwoTermComplex,
    degree: int = 2,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> ShaGroup:
    return sha_two_term(
        datum,
        complex_,
        degree,
        PlaceSelection(frozenset(datum.place_names)),
        cochain_cap=cochain_cap,
    )


def sha_two_term_quotient(
    datum: LocalDatum,
    complex_: TwoTermComplex,
    degree: int = 2,
    selection: PlaceSelection = EMPTY_SELECTION,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> PresentedAbelianGroup:
    big = sha_two_term(datum, complex_, degree, selection, cochain_cap=cochain_cap)
    small = sha_two_term(datum, complex_, degree, EMPTY_SELECTION, cochain_cap=cochain_cap)
    return subquotient(big._constraint, small.inclusion).group


# ---------------------------------------------------------------------------
# Machine verification
# ---------------------------------------------------------------------------


def verify_annihilation(
    datum: LocalDatum,
    module: GModule,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> dict:
    """Check that multiplication by n/e kills Sha^1_omega, where n and e
    are the order and exponent of the faithful image of the acting group,
    and that Sha^1_omega vanishes outright when that image is metacyclic
    (exponent equal to order).  Returns an instance report; a failure
    certificate means an implementation bug, never an expected outcome."""
    quotient_group, _ = faithful_quotient(module)
    n = quotient_group.order
    e = exponent(quotient_group)
    metacyclic = is_metacyclic(quotient_group)
    sh = sha_omega(datum, module, 1, cochain_cap=cochain_cap)
    report = {
        "order": n,
        "exponent": e,
        "metacyclic": metacyclic,
        "sha_omega": str(sh.value),
        "ok": True,
    }
    multiplier = n // e
    for j in range(sh.value.generator_count):
        coords = [0] * sh.value.generator_count
        coords[j] = multiplier
        if not sh.value.contains_relation(coords):
            report["ok"] = False
            report["certificate"] = {
                "kind": "annihilation",
                "generator": j,
                "multiplier": multiplier,
                "cocycle": [str(v) for v in sh.representatives[j]],
            }
            return report
    if metacyclic and not sh.value.is_trivial():
        report["ok"] = False
        report["certificate"] = {
            "kind": "metacyclic-vanishing",
            "sha_omega": str(sh.value),
            "cocycles": [[str(v) for v in r] for r in sh.representatives],
        }
    return report


def verify_shift_isomorphism(
    datum: LocalDatum,
    complex_: TwoTermComplex,
    selection: PlaceSelection = EMPTY_SELECTION,
    *,
    cochain_cap: int = DEFAULT_COCHAIN_CAP,
) -> dict:
    """For a complex P -> L with P a permutation module, check that the
    natural map Sha^1_S(L) -> Sha^2_S(P -> L), sending a 1-cocycle c to
    the total 2-cochain (0, c), is a bijection, and that Sha^2_S(P)
    vanishes (the ingredient that makes the shift work)."""
    P = complex_.degree0
    if not isinstance(P, PermutationModule):
        raise StructuralError("the degree-0 term must be a permutation module")
    L = complex_.degree1
    sh1 = sha(datum, L, 1, selection, cochain_cap=cochain_cap)
    sh2 = sha_two_term(datum, complex_, 2, selection, cochain_cap=cochain_cap)
    report = {
        "sha1_L": str(sh1.value),
        "sha2_complex": str(sh2.value),
        "ok": True,
    }
    a_dim = datum.group.order**2 * P.rank
    cols = []
    for j, rep in enumerate(sh1.representatives):
        total = [0] * a_dim + list(rep)
        try:
            ambient_coords = sh2.ambient.class_coords(total)
            cols.append(list(sh2.class_of(ambient_coords)))
        except StructuralError:
            report["ok"] = False
            report["certificate"] = {
                "kind": "image-escapes",
                "generator": j,
                "cocycle": [str(v) for v in rep],
            }
            return report
    try:
        hom = AbHom(
            sh1.value,
            sh2.value,
            IntMatrix.from_cols(cols, rows=sh2.value.generator_count),
        )
    except StructuralError:
        report["ok"] = False
        report["certificate"] = {"kind": "not-well-defined"}
        return report
    if not is_isomorphism(hom):
        report["ok"] = False
        report["certificate"] = {
            "kind": "not-bijective",
            "matrix": [[str(v) for v in r] for r in hom.matrix.rows],
        }
        return report
    sh2_P = sha(datum, P, 2, selection, cochain_cap=cochain_cap)
    report["sha2_P"] = str(sh2_P.value)
    if not sh2_P.value.is_trivial():
        report["ok"] = False
        report["certificate"] = {
            "kind": "permutation-sha2-nonzero",
            "value": str(sh2_P.value),
        }
    return report
