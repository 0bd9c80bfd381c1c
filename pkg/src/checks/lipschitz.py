"""
Barycenter Lipschitz Check Module

d(B(mu1), B(mu2)) <= Gamma_epsilon W2(mu1, mu2) on balls of radius at most
D_{kappa,epsilon} / 4 when kappa > 0, and d(B(mu1), B(mu2)) <= W1(mu1, mu2)
on CAT(0) spaces. Every report carries the observed ratio to W2.
"""

import structlog

from src.barycenter.solver import barycenter
from src.checks.base import BaseCheck, CheckReport
from src.errors import IncompatibleSpaceError, RegimeError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import distance
from src.transport.measures import DiscreteMeasure
from src.transport.wasserstein import wasserstein

logger = structlog.get_logger(__name__)

BALL_TOL = 1e-12


def _require_ball(cc, ball, measures):
    if ball is None:
        raise RegimeError("positive curvature needs the ball (center, radius) containing both supports")
    center, radius = ball
    if not cc.safe_diameter.admits(4.0 * radius, tol=BALL_TOL):
        raise RegimeError(f"ball radius {radius} exceeds D_kappa,epsilon / 4 = {cc.safe_diameter.value / 4.0}")
    for mu in measures:
        for atom in mu.atoms:
            if distance(center, atom) > radius + BALL_TOL:
                raise RegimeError(f"atom at distance {distance(center, atom):.17g} leaves the ball of radius {radius}")


def check_barycenter_lipschitz(space, cc, mu1, mu2, tol=1e-8, ball=None, fingerprint=''):
    """
    Lipschitz bound of the barycenter map against Wasserstein distances.

    Args:
        space (GeodesicSpace): Ambient space
        cc (CurvatureClass): Curvature class providing Gamma
        mu1, mu2 (DiscreteMeasure): Measures
        tol (float): Accepted violation
        ball (tuple): (center, radius) containing both supports, required when kappa > 0
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = d(B(mu1), B(mu2)), rhs = Gamma W2 or W1, extra ratio_w2
    """
    if mu1.space != space or mu2.space != space:
        raise IncompatibleSpaceError(f"measures must live in {space.label()}")
    if space.curvature_upper_bound > cc.kappa:
        raise RegimeError(f"{space.label()} is not CAT({cc.kappa})")

    w2, _ = wasserstein(2.0, mu1, mu2)
    if cc.kappa > 0:
        _require_ball(cc, ball, (mu1, mu2))
        centers = (ball[0],)
        b1 = barycenter(mu1, cc.epsilon, centers).point
        b2 = barycenter(mu2, cc.epsilon, centers).point
        rhs = effective_constants(cc).gamma * w2
    else:
        b1 = barycenter(mu1).point
        b2 = barycenter(mu2).point
        rhs, _ = wasserstein(1.0, mu1, mu2)

    lhs = distance(b1, b2)
    ratio = lhs / w2 if w2 > 0 else 0.0
    return CheckReport.from_sides('lipschitz', lhs, rhs, tol, fingerprint, {'ratio_w2': ratio})


class LipschitzCheck(BaseCheck):
    """
    Random measure pairs in the sampling ball.

    Every tenth trial uses a pair of Dirac masses, where the ratio to W2 is 1.
    """

    name = 'lipschitz'
    default_tol = 1e-8

    def evaluate_trial(self, rng, index, fingerprint):
        if index % 10 == 0:
            x, y = self.sample(rng, 2)
            mu1, mu2 = DiscreteMeasure.dirac(x), DiscreteMeasure.dirac(y)
        else:
            mu1 = self.random_measure(rng)
            mu2 = self.random_measure(rng)
        report = check_barycenter_lipschitz(
            self.space, self.cc, mu1, mu2, self.tol, (self.center, self.radius), fingerprint
        )
        logger.debug("lipschitz_trial", trial=index, ratio=report.extras['ratio_w2'])
        return report
