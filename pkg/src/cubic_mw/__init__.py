"""Rational points on diagonal cubic surfaces.

Exact enumeration by height, canonical ordering, secant composition,
generating-set descent and counting statistics for surfaces
a*x^3 + b*y^3 + c*z^3 + d*u^3 = 0 over the rationals.
"""

from .composition import (
    CompositionFailure,
    CompositionOutcome,
    TangentPlane,
    alpha_beta,
    compose,
    tangent_plane,
    tangent_section_points,
)
from .enumeration import (
    NO_EXCLUSIONS,
    ExclusionPolicy,
    PointIndex,
    build_index,
    count_points,
    enumerate_points,
    index_from_points,
    index_to_height_bound,
    read_point_list,
    standard_policy,
    write_point_list,
)
from .surfaces import (
    DiagonalSurface,
    ProjPoint,
    SurfaceRegistry,
    canonicalize,
    default_registry,
    evaluate,
    h_max,
    h_sum,
    is_canonical,
    is_on_surface,
    is_trivial_line_point,
    load_registry,
    order_key,
    point_order,
)

__all__ = [
    "CompositionFailure",
    "CompositionOutcome",
    "DiagonalSurface",
    "ExclusionPolicy",
    "NO_EXCLUSIONS",
    "PointIndex",
    "ProjPoint",
    "SurfaceRegistry",
    "TangentPlane",
    "alpha_beta",
    "build_index",
    "canonicalize",
    "compose",
    "count_points",
    "default_registry",
    "enumerate_points",
    "evaluate",
    "h_max",
    "h_sum",
    "index_from_points",
    "index_to_height_bound",
    "is_canonical",
    "is_on_surface",
    "is_trivial_line_point",
    "load_registry",
    "order_key",
    "point_order",
    "read_point_list",
    "standard_policy",
    "tangent_plane",
    "tangent_section_points",
    "write_point_list",
]
