"""Computable seminormed algebra over Banach-style base rings.

Graded sets and seminorms, polynomial algebras with monomial gradings,
pointwise evaluation over a stratified multiplicative spectrum, rational
domains and their coverings, constructive Laurent refinement, and Cech
exactness checking over trivially valued rationals.
"""

from .affinoid import (
    AffinoidPresentation,
    ChartIsometryReport,
    DaggerFamily,
    DomainCondition,
    RationalDomainSpec,
    Substitution,
    UnitIdealStatus,
    VarSpec,
    base_change,
    chart_isometry_check,
    clear_substitutions,
    dagger_profile,
    derive_substitutions,
    domain_membership,
    presentation_membership,
    rational_domain_algebra,
    sample_spectrum,
    validate_unit_ideal,
)
from .coverings import (
    Covering,
    CoveringReport,
    LaurentRefinement,
    RefinementCheck,
    check_is_covering,
    check_refinement,
    laurent_covering,
    ratio_laurent_covering,
    refine_rational_to_laurent,
    refine_units_to_laurent,
    standard_covering,
    surviving_generator_check,
)
from .graded import (
    CoeffVector,
    GradedMap,
    GradedSet,
    MapClassification,
    classify_map,
    l1_norm,
    linf_norm,
    monomial_grading,
    operator_norm,
    pushforward,
    rho_filter_membership,
    tensor_graded,
)
from .groebner import DegreeCapExceeded, IdealBasis, normal_form
from .polynomials import LaurentPoly, ParseError, Poly, parse_poly
from .rings import BaseRing, Domain
from .seminorms import (
    AxiomReport,
    CertifiedBound,
    QuotientClass,
    QuotientPresentation,
    UniformizationReport,
    poly_l1,
    poly_linf,
    poly_trivial_gauss,
    projective_tensor_bound,
    residue_seminorm_bound,
    seminorm_axiom_report,
    uniformization_estimate,
)
from .spectrum import (
    ArchCoord,
    BranchProfile,
    DensitySpec,
    FiberPoint,
    GaussCoord,
    InfMaxEstimate,
    SpectralNormResult,
    SpectrumPoint,
    branch_profile,
    eval_point,
    inf_max,
    point_allowed,
    sample_points,
    spectral_norm,
    spectral_norm_report,
)
from .tate import (
    CechComplex,
    ExactnessReport,
    cech_complex,
    check_exactness,
    drop_member,
    localization_isomorphism_check,
    numeric_injectivity_check,
    strict_localization_check,
)
from .values import ExactValue, PointValue, value_eq, value_le, value_lt, value_max

__version__ = "0.1.0"
