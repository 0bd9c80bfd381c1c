"""
Barycenter Package

Frechet barycenters, orthogonal projections onto convex sets and conditional
barycenters along finite filtrations.
"""

from src.barycenter.solver import (
    BarycenterResult,
    BarycenterSolver,
    barycenter,
    frechet_gradient,
    frechet_objective,
)
from src.barycenter.projection import (
    ClosedBall,
    ConvexSet,
    GeodesicSegmentSet,
    ProductSet,
    distance_to_set,
    orthogonal_project,
)
from src.barycenter.martingale import Filtration, conditional_barycenter, random_filtration

__all__ = [
    'BarycenterResult',
    'BarycenterSolver',
    'barycenter',
    'frechet_gradient',
    'frechet_objective',
    'ClosedBall',
    'ConvexSet',
    'GeodesicSegmentSet',
    'ProductSet',
    'distance_to_set',
    'orthogonal_project',
    'Filtration',
    'conditional_barycenter',
    'random_filtration',
]
