"""Projective representations, group cohomology classes, twisted chain
algebras, and phase classification of symmetric matrix product states."""

from . import bounds, cli, cohomology, errors, groups, io_json, mps, numkernel, projrep, twisted
from .cohomology import (
    Cocycle,
    CohomologyClassHandle,
    check_cocycle,
    classes_equal,
    coboundary,
    combine,
    commutator_invariant,
    conjugate,
    enumerate_classes,
    is_trivial,
    make_cocycle,
    pauli_cocycle,
    trivial_cocycle,
)
from .groups import (
    FiniteGroup,
    OnsiteRep,
    conjugacy_classes,
    klein_four,
    klein_spin1_rep,
    standard_group,
    validate_group,
    validate_onsite_rep,
    z2_sign_rep,
)
from .mps import (
    MpsState,
    SymmetryCertificate,
    builtin_states,
    canonicalize,
    compare_phases,
    extract_cocycle,
    extract_symmetry,
    gauge_transform,
    left_right_check,
)
from .projrep import (
    IrrepTable,
    ProjectiveRep,
    character,
    decompose,
    irreps,
    multiplicity,
    pauli_rep,
    regular_rep,
    tensor_with_onsite,
    twist,
    validate_projrep,
)

__version__ = "0.1.0"
