"""Surplus-invariant acceptance sets and risk functionals on scenario spaces."""

from .acceptance import (
    AcceptanceSet,
    PositionSampler,
    box_set,
    check_band_stability,
    check_convexity_via_D,
    check_equivalences,
    check_surplus_invariant,
    contains,
    es_set,
    halfspace_set,
    in_D,
    intersection,
    positive_cone,
    shortfall_set,
    span_set,
    union,
    var_set,
    whole_space,
)
from .decomposition import (
    Decomposition,
    check_radially_bounded_D,
    check_support_condition,
    decompose,
    recession_lineality,
    verify_reconstruction,
)
from .duality import (
    Inconclusive,
    NotRadiallyBounded,
    SolidSet,
    biconjugate,
    bipolar_check,
    conjugate_rho,
    polar_membership,
    polar_positive_witness,
    robust_bipolar_check,
    support_functional,
)
from .extension import SeqFunctional, SeqPosition, Tail, extend, extend_s_additive, truncate, uniqueness_check
from .functionals import (
    RiskFunctional,
    check_claims_compatible,
    check_s_additive,
    check_si_subject_pos,
    es_functional,
    expectation_functional,
    from_acceptance,
    max_loss,
    max_shortfall,
    shortfall_functional,
    var_functional,
)
from .measures import es, expectation, shortfall, span_accept, var
from .orlicz import OrliczFunction, conjugate, delta2_probe, in_heart, luxemburg_norm
from .reports import LawReport
from .robust import DualMeasure, capacity, is_c_null, pair, robust_norm
from .scenario import ScenarioSpace, band_project, neg_part, order_leq, pos_part

__version__ = "0.1.0"

__all__ = [
    "AcceptanceSet",
    "band_project",
    "biconjugate",
    "bipolar_check",
    "box_set",
    "capacity",
    "check_band_stability",
    "check_claims_compatible",
    "check_convexity_via_D",
    "check_equivalences",
    "check_radially_bounded_D",
    "check_s_additive",
    "check_si_subject_pos",
    "check_support_condition",
    "check_surplus_invariant",
    "conjugate",
    "conjugate_rho",
    "contains",
    "decompose",
    "Decomposition",
    "delta2_probe",
    "DualMeasure",
    "es",
    "es_functional",
    "es_set",
    "expectation",
    "expectation_functional",
    "extend",
    "extend_s_additive",
    "from_acceptance",
    "halfspace_set",
    "in_D",
    "in_heart",
    "Inconclusive",
    "intersection",
    "is_c_null",
    "LawReport",
    "luxemburg_norm",
    "max_loss",
    "max_shortfall",
    "neg_part",
    "NotRadiallyBounded",
    "order_leq",
    "OrliczFunction",
    "pair",
    "polar_membership",
    "polar_positive_witness",
    "pos_part",
    "PositionSampler",
    "positive_cone",
    "recession_lineality",
    "RiskFunctional",
    "robust_bipolar_check",
    "robust_norm",
    "ScenarioSpace",
    "SeqFunctional",
    "SeqPosition",
    "shortfall",
    "shortfall_functional",
    "shortfall_set",
    "SolidSet",
    "span_accept",
    "span_set",
    "support_functional",
    "Tail",
    "truncate",
    "union",
    "uniqueness_check",
    "var",
    "var_functional",
    "var_set",
    "verify_reconstruction",
    "whole_space",
]
