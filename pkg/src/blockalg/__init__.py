"""Exact computer algebra for generalized Block Lie algebras.

The algebras are built from a finitely generated subgroup of Q^2 (the
degree lattice Gamma) and a pair J = (J_1, J_2) with each factor {0} or N.
This package provides the bracket with its quotient reduction, the named
outer derivations, the closed-form isomorphism decision with its
structure-space key, and seeded verification suites for every identity
used along the way.
"""

from .lattice import (
    CanonicalDescriptor,
    GroupHom,
    Lattice,
    LatticeError,
    NotInLattice,
    OmegaClass,
    ShearScale,
    Vec2,
    apply_group_element,
    canonical_form,
    hom_eval,
    lattice_equals,
    lattice_from_strs,
    lattice_new,
    map_lattice,
    omega_class,
    rat,
    vec,
)
from .core import (
    J_NAT_NAT,
    J_NAT_ZERO,
    J_ZERO_NAT,
    J_ZERO_ZERO,
    SIGMA1,
    SIGMA2,
    AlgebraError,
    AlgebraSpec,
    Condition11Violated,
    Element,
    IndexOutsideGamma,
    IndexOutsideJ,
    JSpec,
    SpecMismatch,
    Span,
    assoc_mul,
    bracket,
    bracket_raw,
    enumerate_window,
    grade_component,
    index_cmp,
    index_key,
    leading_term,
    monomial,
    odot,
    one,
    partial,
    reduce,
    spec_validate,
    window_indices,
    zero,
)
from .derivations import (
    ClosureDim,
    Derivation,
    GrowthWitness,
    LawReport,
    UndefinedInThisAlgebra,
    ad,
    apply,
    check_derivation_law,
    der_component_generators,
    hom_star_basis,
    is_homogeneous,
    local_finiteness_probe,
    make_d1,
    make_d1bar,
    make_d2,
    make_dmu,
    make_dt1,
    make_dt2,
    nilpotence_degree,
    zero_derivation,
)
from .isomorphism import (
    Found,
    IsoParams,
    NotIsomorphic,
    PhiCheckFailed,
    WittDegenerate,
    compose,
    decide_iso,
    moduli_key,
    phi_apply,
    phi_check,
    phi_inverse_apply,
    psi_apply,
    psi_check,
    verdict_as_dict,
)
from .literals import ParseError, fmt_element, fmt_rat, parse_derivation, parse_element, parse_rat
from .harness import (
    FailureRecord,
    Inconclusive,
    ReachedFullWindow,
    SuiteReport,
    ZeroSeed,
    default_configs,
    rerun_failure,
    run_suite,
    sample_element,
    simplicity_probe,
    suite_bracket_consistency,
    suite_derivations,
    suite_iso,
    suite_jacobi,
    suite_locality,
    suite_simplicity,
)

__version__ = "0.1.0"
