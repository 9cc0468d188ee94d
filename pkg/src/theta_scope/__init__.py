"""Certified numerics for the partial theta function theta(q, x) = sum q^{j(j+1)/2} x^j."""

from .core_eval import (
    CertifiedValue,
    DomainError,
    MinusOneValue,
    PoleError,
    PrecisionMode,
    closed_form,
    eval_theta,
    eval_theta_dq,
    eval_theta_dx,
    eval_theta_dxx,
    eval_truncation,
    evaluate_many,
    functional_equation_residual,
    theta_at_minus_one,
)
from .geometry import (
    CurveClassification,
    CurveSample,
    classify_image,
    curvature_profile,
    detect_self_intersections,
    hyperbola_residual,
    nesting_check,
    sample_circle_image,
    threshold_search,
)
from .jacobi import TripleProductResult, eval_theta_star, identity_residual, triple_product
from .roots_of_unity import (
    ContradictionError,
    antiperiodic_block,
    build_numerator,
    check_self_reciprocal,
    interior_root,
    rouche_neighborhood_zero,
)
from .zerofinder import (
    DiskCertificate,
    ZeroPath,
    ZeroRecord,
    certify_unit_disk,
    count_zeros_in_disk,
    enestrom_kakeya_bound,
    refine_zero,
    sqrt_disk_bound,
    tail_budget,
    track_zero,
    truncation_roots,
)

__all__ = [
    "CertifiedValue",
    "ContradictionError",
    "CurveClassification",
    "CurveSample",
    "DiskCertificate",
    "DomainError",
    "MinusOneValue",
    "PoleError",
    "PrecisionMode",
    "TripleProductResult",
    "ZeroPath",
    "ZeroRecord",
    "antiperiodic_block",
    "build_numerator",
    "certify_unit_disk",
    "check_self_reciprocal",
    "classify_image",
    "closed_form",
    "count_zeros_in_disk",
    "curvature_profile",
    "detect_self_intersections",
    "enestrom_kakeya_bound",
    "eval_theta",
    "eval_theta_dq",
    "eval_theta_dx",
    "eval_theta_dxx",
    "eval_theta_star",
    "eval_truncation",
    "evaluate_many",
    "functional_equation_residual",
    "hyperbola_residual",
    "identity_residual",
    "interior_root",
    "nesting_check",
    "refine_zero",
    "rouche_neighborhood_zero",
    "sample_circle_image",
    "sqrt_disk_bound",
    "tail_budget",
    "theta_at_minus_one",
    "threshold_search",
    "track_zero",
    "triple_product",
    "truncation_roots",
]

__version__ = "0.1.0"
