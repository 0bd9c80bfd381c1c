"""
Variance and Jensen Checks Module

Variance inequality
    sum w d(z, x)^2 >= d(z, B)^2 + (k/2) sum w d(B, x)^2
for the barycenter B of a measure, including the variant on a ball of radius
D_{kappa,epsilon} / 2 with z at the ball center, and Jensen's inequality
phi(B) <= sum w phi(x) for registered convex test functions.
"""

from src.barycenter.projection import ClosedBall
from src.barycenter.solver import barycenter, frechet_objective
from src.checks.base import BaseCheck, CheckReport, require_diameter
from src.checks.functions import (
    AffineFunction,
    ConvexFunctionRegistry,
    DistanceToSetFunction,
    SquaredDistanceFunction,
)
from src.errors import RegimeError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import EuclideanSpace, ProductSpace, distance


def check_variance(space, cc, mu, z, tol=1e-8, fingerprint='', z_at_center=False, center=None):
    """
    Variance inequality at a point z.

    Args:
        space (GeodesicSpace): Ambient space
        cc (CurvatureClass): Curvature class providing k
        mu (DiscreteMeasure): Measure
        z (SpacePoint): Comparison point
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint
        z_at_center (bool): Use the ball variant; z must equal ``center``
        center (SpacePoint): Center of the ball of radius D_{kappa,epsilon} / 2

    Returns:
        CheckReport: lhs = d(z, B)^2 + (k/2) F(B), rhs = F(z)
    """
    if mu.space != space or z.space != space:
        raise RegimeError(f"measure and point must live in {space.label()}")
    if z_at_center:
        if center is None or not z.is_close(center, 0.0):
            raise RegimeError("the ball variant evaluates the inequality at the ball center")
        safe = cc.safe_diameter
        for atom in mu.atoms:
            if not safe.admits(2.0 * distance(center, atom), tol=1e-12):
                raise RegimeError(
                    f"atom at distance {distance(center, atom):.17g} leaves the ball of radius D_kappa,epsilon / 2"
                )
        centers = (center,)
    else:
        require_diameter(tuple(mu.atoms) + (z,), cc, 'variance')
        centers = (z,)

    k = effective_constants(cc).k
    bary = barycenter(mu, cc.epsilon if cc.kappa > 0 else None, centers).point
    lhs = distance(z, bary) ** 2 + (k / 2.0) * frechet_objective(bary, mu)
    rhs = frechet_objective(z, mu)
    return CheckReport.from_sides('variance', lhs, rhs, tol, fingerprint)


def check_jensen(space, cc, mu, phi, tol=1e-8, fingerprint=''):
    """
    Jensen's inequality for a registered convex test function.

    Args:
        space (GeodesicSpace): Ambient space
        cc (CurvatureClass): Curvature class of the regime
        mu (DiscreteMeasure): Measure
        phi (ConvexTestFunction): Registered convex function
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = phi(B), rhs = sum w phi(x)

    Raises:
        UnregisteredFunctionError: If phi is not a registered convex function
    """
    ConvexFunctionRegistry.require(phi)
    if mu.space != space:
        raise RegimeError(f"measure must live in {space.label()}")
    require_diameter(tuple(mu.atoms) + tuple(phi.region_points()), cc, 'jensen')
    bary = barycenter(mu, cc.epsilon if cc.kappa > 0 else None).point
    lhs = phi(bary)
    rhs = float(sum(w * phi(x) for x, w in zip(mu.atoms, mu.weights)))
    return CheckReport.from_sides('jensen', lhs, rhs, tol, fingerprint)


class VarianceCheck(BaseCheck):
    """
    Random measures and points in the sampling ball.

    With the ``z_at_center`` parameter the support is drawn from the ball of
    twice the sampling radius and z is the ball center.
    """

    name = 'variance'
    default_tol = 1e-8

    def evaluate_trial(self, rng, index, fingerprint):
        if self.flag('z_at_center'):
            mu = self.random_measure(rng, radius=2.0 * self.radius)
            return check_variance(
                self.space, self.cc, mu, self.center, self.tol, fingerprint,
                z_at_center=True, center=self.center,
            )
        mu = self.random_measure(rng)
        (z,) = self.sample(rng, 1)
        return check_variance(self.space, self.cc, mu, z, self.tol, fingerprint)


def _euclidean_factor(space):
    if isinstance(space, EuclideanSpace):
        return space, None
    if isinstance(space, ProductSpace):
        for index, factor in enumerate(space.factors):
            if isinstance(factor, EuclideanSpace):
                return factor, index
    return None, None


class JensenCheck(BaseCheck):
    """
    Random measures with test functions rotating through the registered family.

    Trial i uses a squared distance to a random anchor (i = 0 mod 3), the
    distance to a small random ball (i = 1 mod 3) or an affine function on a
    Euclidean factor (i = 2 mod 3, squared distance when there is none).
    """

    name = 'jensen'
    default_tol = 1e-8

    def _test_function(self, rng, index):
        family = index % 3
        if family == 1:
            (ball_center,) = self.sample(rng, 1)
            return DistanceToSetFunction(ClosedBall(ball_center, float(rng.random()) * self.radius / 2.0))
        if family == 2:
            factor, position = _euclidean_factor(self.space)
            if factor is not None:
                return AffineFunction(self.space, rng.standard_normal(factor.dim), float(rng.standard_normal()),
                                      position)
        (anchor,) = self.sample(rng, 1)
        return SquaredDistanceFunction(anchor)

    def evaluate_trial(self, rng, index, fingerprint):
        mu = self.random_measure(rng)
        phi = self._test_function(rng, index)
        return check_jensen(self.space, self.cc, mu, phi, self.tol, fingerprint)


__all__ = ['check_variance', 'check_jensen', 'VarianceCheck', 'JensenCheck']
