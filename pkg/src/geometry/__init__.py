"""
Geometry Package

Model surfaces M2(kappa) and the concrete geodesic spaces of the CAT(kappa) lab.
"""

from src.geometry.model_space import (
    ComparisonTriangle,
    CurvatureClass,
    Diameter,
    EffectiveConstants,
    comparison_angle,
    comparison_triangle,
    cos_kappa,
    diameter_of_model,
    effective_constants,
)
from src.geometry.spaces import (
    EuclideanSpace,
    GeodesicSegment,
    GeodesicSpace,
    HyperbolicSpace,
    ProductSpace,
    SpacePoint,
    SpaceRegistry,
    SphereSpace,
    angle_at,
    distance,
    geodesic_point,
    sample_ball,
    space_from_dict,
    space_from_spec,
)

__all__ = [
    'ComparisonTriangle',
    'CurvatureClass',
    'Diameter',
    'EffectiveConstants',
    'comparison_angle',
    'comparison_triangle',
    'cos_kappa',
    'diameter_of_model',
    'effective_constants',
    'EuclideanSpace',
    'GeodesicSegment',
    'GeodesicSpace',
    'HyperbolicSpace',
    'ProductSpace',
    'SpacePoint',
    'SpaceRegistry',
    'SphereSpace',
    'angle_at',
    'distance',
    'geodesic_point',
    'sample_ball',
    'space_from_dict',
    'space_from_spec',
]
