"""
Convexity Checks Module

Uniform convexity of the squared distance along geodesics with modulus k, and
the CAT(kappa) comparison inequality for points on two sides of a triangle.
"""

from src.checks.base import BaseCheck, CheckReport, require_diameter
from src.errors import IncompatibleSpaceError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import comparison_distance, distance, geodesic_point


def check_uniform_convexity(space, cc, x, y, z, t, k=None, tol=1e-9, fingerprint=''):
    """
    Uniform convexity of z -> d(z, .)^2 along the geodesic from x to y.

    Args:
        space (GeodesicSpace): Ambient space
        cc (CurvatureClass): Curvature class providing k
        x, y, z (SpacePoint): Points of a region of diameter at most D_{kappa,epsilon} / 2
        t (float): Geodesic parameter in [0, 1]
        k (float): Modulus override, defaults to the effective k of cc
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = d(z, gamma(t))^2, rhs = the uniformly convex bound
    """
    if any(p.space != space for p in (x, y, z)):
        raise IncompatibleSpaceError(f"points do not belong to {space.label()}")
    require_diameter((x, y, z), cc, 'uniform convexity')
    if k is None:
        k = effective_constants(cc).k
    gamma_t = geodesic_point(x, y, t)
    lhs = distance(z, gamma_t) ** 2
    rhs = (
        (1.0 - t) * distance(z, x) ** 2
        + t * distance(z, y) ** 2
        - (k / 2.0) * t * (1.0 - t) * distance(x, y) ** 2
    )
    return CheckReport.from_sides('convexity', lhs, rhs, tol, fingerprint)


def check_comparison(x, y, z, s, t, kappa, tol=1e-9, fingerprint=''):
    """
    CAT(kappa) comparison for the points gamma_xy(s) and gamma_xz(t).

    Returns:
        CheckReport: lhs = their distance, rhs = the distance of the comparison points
    """
    lhs = distance(geodesic_point(x, y, s), geodesic_point(x, z, t))
    rhs = comparison_distance(x, y, z, s, t, kappa)
    return CheckReport.from_sides('comparison', lhs, rhs, tol, fingerprint)


class UniformConvexityCheck(BaseCheck):
    """Random triples in the sampling ball with uniform t."""

    name = 'convexity'
    default_tol = 1e-9

    def evaluate_trial(self, rng, index, fingerprint):
        x, y, z = self.sample(rng, 3)
        t = float(rng.random())
        return check_uniform_convexity(
            self.space, self.cc, x, y, z, t, self.constants.k, self.tol, fingerprint
        )


class ComparisonCheck(BaseCheck):
    """Random triangles in the sampling ball with uniform side parameters."""

    name = 'comparison'
    default_tol = 1e-9

    def evaluate_trial(self, rng, index, fingerprint):
        x, y, z = self.sample(rng, 3)
        s, t = (float(v) for v in rng.random(2))
        return check_comparison(x, y, z, s, t, self.cc.kappa, self.tol, fingerprint)
