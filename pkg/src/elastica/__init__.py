"""Bending-energy minimization for closed curves confined to planar domains.

The package provides a discrete closed-curve representation, the
Bernoulli-Euler bending energy with an exact first variation, a family of
signed-distance domains, a penalty-based projected-descent solver, and
structural analysis of minimizers (wall contacts, self-contact couples and
their nesting, winding numbers, convexity).
"""

from .analyze import (
    BoundaryArc,
    ContactReport,
    SelfCouple,
    StructureReport,
    analyze_curve,
    bh_ratio,
    boundary_contacts,
    branch_energy_ratio,
    index_profile,
    is_convex,
    reorient_canonical,
    report_to_jsonable,
    self_contacts,
    splice_at_couple,
    verify_decomposition,
)
from .curve import (
    MIN_VERTICES,
    ClosedCurve,
    VertexField,
    circle,
    curvature_field,
    curve_from_json,
    curve_to_json,
    edge_lengths,
    edge_spread,
    from_points,
    length,
    resample_uniform,
    scale_about,
    signed_area,
    tangent_field,
    turning_angles,
    winding_number,
)
from .domain import (
    ArcTube,
    Capsule,
    Complement,
    ConvexPolygon,
    Disk,
    DomainSpec,
    HalfPlane,
    Intersection,
    TwoDropsLayout,
    Union,
    characteristic_scale,
    disk,
    domain_from_json,
    domain_to_json,
    ellipse_domain,
    project_points,
    stadium,
    two_drops,
    two_drops_layout,
)
from .energy import (
    EnergyReport,
    bending_energy,
    directional_derivative,
    el_residual,
    energy_report,
    first_variation,
    open_arc_turning_energy,
    turning_angle_energy,
)
from .errors import (
    DegenerateEdge,
    ElasticaError,
    Infeasible,
    InvalidParameters,
    LengthMismatch,
    MalformedDomain,
    MultiplicityViolation,
    NonPositiveFactor,
    NonPositiveRadius,
    NonUniform,
    NotSimple,
    PointOnCurve,
    ProjectionFailed,
    TooFewPoints,
)
from .solver import (
    SolveReport,
    SolverConfig,
    Termination,
    inflate_to_saturation,
    minimize,
    penalized_energy,
    seed_from_boundary_offset,
)
from .svg import render_svg, save_svg

__version__ = "0.1.0"

__all__ = [
    "ArcTube",
    "BoundaryArc",
    "Capsule",
    "ClosedCurve",
    "Complement",
    "ContactReport",
    "ConvexPolygon",
    "DegenerateEdge",
    "Disk",
    "DomainSpec",
    "ElasticaError",
    "EnergyReport",
    "HalfPlane",
    "Infeasible",
    "Intersection",
    "InvalidParameters",
    "LengthMismatch",
    "MIN_VERTICES",
    "MalformedDomain",
    "MultiplicityViolation",
    "NonPositiveFactor",
    "NonPositiveRadius",
    "NonUniform",
    "NotSimple",
    "PointOnCurve",
    "ProjectionFailed",
    "SelfCouple",
    "SolveReport",
    "SolverConfig",
    "StructureReport",
    "Termination",
    "TooFewPoints",
    "TwoDropsLayout",
    "Union",
    "VertexField",
    "analyze_curve",
    "bending_energy",
    "bh_ratio",
    "boundary_contacts",
    "branch_energy_ratio",
    "characteristic_scale",
    "circle",
    "curvature_field",
    "curve_from_json",
    "curve_to_json",
    "directional_derivative",
    "disk",
    "domain_from_json",
    "domain_to_json",
    "edge_lengths",
    "edge_spread",
    "el_residual",
    "ellipse_domain",
    "energy_report",
    "first_variation",
    "from_points",
    "index_profile",
    "inflate_to_saturation",
    "is_convex",
    "length",
    "minimize",
    "open_arc_turning_energy",
    "penalized_energy",
    "project_points",
    "render_svg",
    "reorient_canonical",
    "report_to_jsonable",
    "resample_uniform",
    "save_svg",
    "scale_about",
    "seed_from_boundary_offset",
    "self_contacts",
    "signed_area",
    "splice_at_couple",
    "stadium",
    "tangent_field",
    "turning_angle_energy",
    "turning_angles",
    "two_drops",
    "two_drops_layout",
    "verify_decomposition",
    "winding_number",
]
