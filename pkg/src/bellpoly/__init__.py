"""Exact local-realistic polytopes for two parties, two settings, d outcomes.

Construction of the local polytope from deterministic strategies, the CGLMP
inequality with its exhaustive bound and tightness certificates, projection
to generalized correlation functions, exact facet enumeration by the double
description method, symmetry classification, and local-model membership
tests with separating Bell-inequality certificates.  All arithmetic is over
exact rationals; results are bit-reproducible.
"""

from fractions import Fraction

from .scenario import (
    Behavior,
    DeterministicStrategy,
    Inequality,
    Scenario,
    all_generators,
    constraint_matrix,
    generator,
    is_normalized,
    is_nosignaling,
    is_probability,
    polytope_affine_dim,
    uniform_behavior,
)
from .cglmp import (
    cglmp_inequality,
    classify_case,
    constructive_witness,
    eval_on_generator,
    evaluate,
    f_value,
    rstu,
    saturating_generators,
    tightness_rank,
    verify_condition1,
)
from .correlators import (
    CorrVector,
    cglmp_corr_inequality,
    chsh_correlators,
    chsh_inequality,
    corr_affine_dim,
    lift,
    project,
    projected_generators,
)
from .facets import HRep, VRep, canonicalize, classify_trivial, enumerate_facets, saturation_count
from .symmetry import (
    SymmetryOp,
    apply_behavior,
    apply_corr,
    apply_inequality,
    behavior_group,
    behavior_symmetry,
    canonical_class,
    correlator_group,
    correlator_symmetry,
    equivalent,
)
from .membership import corr_local_decompose, local_decompose, local_max, nosignaling_max
from .lp import LPResult, lp_max

Rational = Fraction

__all__ = [name for name in dir() if not name.startswith("_")]
