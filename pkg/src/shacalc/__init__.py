"""Exact finite-group cohomology of integral Galois modules.

The package computes, with arbitrary-precision integer arithmetic:

* Smith/Hermite normal forms and presented finitely generated abelian
  groups (the universal value type),
* finite groups from permutation generators, their cyclic and Sylow
  subgroups, exponents and the metacyclic test,
* integral G-modules, permutation modules, duals, restriction, and the
  permutation-cover resolution 0 -> L -> P -> M -> 0,
* group cohomology H^0..H^2 by inhomogeneous cochains and
  hypercohomology of two-term complexes by the total complex,
* Sha groups Sha^i_S / Sha^i_omega over an abstract local datum, with
  machine verification of the vanishing and annihilation statements,
* the homogeneous-space layer: algebraic Brauer obstruction groups,
  dual complexes, fundamental groups from lattice data, quasi-trivial
  covers, and Ext^0 of isogeny complexes.
"""

from .abelian import (
    AbHom,
    PresentedAbelianGroup,
    Subquotient,
    ext1_and_hom_Z,
    invariant_factors,
    is_isomorphism,
    subquotient,
)
from .arith import (
    BrauerGroups,
    CocharacterDatum,
    CoverResult,
    HomSpaceDatum,
    IsogenyDatum,
    Pi1Groups,
    brauer_obstruction_groups,
    dual_complex,
    ext0_isogeny,
    fundamental_group,
    pi1_obstruction_groups,
    quasi_trivial_cover,
)
from .cohomology import (
    CochainComplexSegment,
    CohomologyGroup,
    TwoTermComplex,
    cohomology,
    hyper_restriction,
    hypercohomology,
    les_segment,
    restriction,
)
from .errors import InputError, ResourceError, ShacalcError, StructuralError
from .gmodules import (
    GModule,
    GModuleHom,
    PermutationModule,
    PermutationResolution,
    augmentation_ideal,
    augmentation_quotient,
    dual_module,
    faithful_quotient,
    permutation_cover,
    permutation_module,
    regular_module,
    restrict,
    sign_module,
    trivial_module,
    zero_module,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    cyclic_subgroups,
    exponent,
    from_permutations,
    is_metacyclic,
    sylow_subgroups,
)
from .intlinalg import IntMatrix, SmithDecomposition, hermite_normal_form, smith_normal_form
from .sha import (
    LocalDatum,
    PlaceSelection,
    ShaGroup,
    sha,
    sha_omega,
    sha_quotient,
    sha_two_term,
    sha_two_term_omega,
    sha_two_term_quotient,
    verify_annihilation,
    verify_shift_isomorphism,
)
