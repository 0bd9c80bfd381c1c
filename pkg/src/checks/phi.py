"""
Phi Convexity Checks Module

The function Phi(x, y) = (1 - cos_k d(x, y)) / sqrt(cos_k d(x, o) cos_k d(y, o) - 1/2)
on a ball of radius r < D_kappa / 4, its convexity along pairs of geodesics,
and the second-derivative computation on the spherical cap S2_h behind it,
checked by central finite differences.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.checks.base import BaseCheck, CheckReport
from src.errors import RegimeError
from src.geometry.model_space import cos_kappa
from src.geometry.spaces import SphereSpace, distance, geodesic_point, sample_in_ball

SPCALC_STEP = 1e-4
SPCALC_TOL = 1e-4


def kendall_phi(x, y, o, kappa):
    """
    Evaluate Phi(x, y) relative to the base point o.

    Args:
        x, y, o (SpacePoint): Points with d(x, o), d(y, o) < D_kappa / 4
        kappa (float): Positive curvature

    Returns:
        float: Phi(x, y) >= 0

    Raises:
        RegimeError: If the radicand is not positive
    """
    radicand = cos_kappa(kappa, distance(x, o)) * cos_kappa(kappa, distance(y, o)) - 0.5
    if radicand <= 0:
        raise RegimeError(f"Phi undefined: radicand {radicand:.3e} is not positive")
    # 1 - cos(a) written as 2 sin^2(a / 2)
    numerator = 2.0 * math.sin(math.sqrt(kappa) * distance(x, y) / 2.0) ** 2
    return numerator / math.sqrt(radicand)


def _require_phi_ball(kappa, radius, o, points):
    quarter = math.pi / math.sqrt(kappa) / 4.0
    if not radius < quarter:
        raise RegimeError(f"Phi convexity needs r < D_kappa / 4 = {quarter}, got {radius}")
    for point in points:
        if distance(point, o) > radius + 1e-12:
            raise RegimeError(f"geodesic endpoint at distance {distance(point, o)} from o leaves the ball")


def check_phi_convexity(kappa, radius, o, lam, mu, s, t, a, tol=1e-9, fingerprint=''):
    """
    Convexity of Phi along the product geodesic u -> (lam(u), mu(u)).

    Args:
        kappa (float): Positive curvature
        radius (float): Ball radius r < D_kappa / 4
        o (SpacePoint): Ball center
        lam (tuple): Endpoints of the first geodesic
        mu (tuple): Endpoints of the second geodesic
        s, t (float): Parameters in [0, 1]
        a (float): Interpolation weight in [0, 1]
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = Phi at u = (1 - a) s + a t, rhs = the convex combination
    """
    _require_phi_ball(kappa, radius, o, tuple(lam) + tuple(mu))

    def phi_at(u):
        return kendall_phi(geodesic_point(lam[0], lam[1], u), geodesic_point(mu[0], mu[1], u), o, kappa)

    u = (1.0 - a) * s + a * t
    lhs = phi_at(u)
    rhs = (1.0 - a) * phi_at(s) + a * phi_at(t)
    return CheckReport.from_sides('phi', lhs, rhs, tol, fingerprint)


def _unit_geodesic(base, velocity, t):
    speed = float(np.linalg.norm(velocity))
    if speed == 0:
        return np.array(base, dtype=float)
    return math.cos(speed * t) * base + math.sin(speed * t) * velocity / speed


@dataclass(frozen=True, eq=False)
class GeodesicQuadruple:
    """
    Four unit-sphere geodesics through two base points.

    The upper and lower geodesics through x share their speed, and so do the
    two through y; t -> cos(|u| t) x + sin(|u| t) u / |u|.
    """

    x: np.ndarray
    y: np.ndarray
    u_upper: np.ndarray
    u_lower: np.ndarray
    v_upper: np.ndarray
    v_lower: np.ndarray

    def __post_init__(self):
        for base, first, second in ((self.x, self.u_upper, self.u_lower), (self.y, self.v_upper, self.v_lower)):
            if abs(float(np.linalg.norm(base)) - 1.0) > 1e-12:
                raise ValueError("base points must lie on the unit sphere")
            if abs(float(np.dot(base, first))) > 1e-12 or abs(float(np.dot(base, second))) > 1e-12:
                raise ValueError("velocities must be tangent at their base point")
            if abs(float(np.linalg.norm(first)) - float(np.linalg.norm(second))) > 1e-12:
                raise ValueError("paired geodesics must share their speed")

    def positions(self, t):
        """(lam_upper(t), lam_lower(t), mu_upper(t), mu_lower(t))."""
        return (
            _unit_geodesic(self.x, self.u_upper, t),
            _unit_geodesic(self.x, self.u_lower, t),
            _unit_geodesic(self.y, self.v_upper, t),
            _unit_geodesic(self.y, self.v_lower, t),
        )


def spcalc_psi(quadruple, t, h, h_tilde, c=1.0):
    """
    Psi(t) = |lam_upper(t) - mu_upper(t)|^2 / (2 (c (lam_lower_1(t) mu_lower_1(t) - h_tilde^2))^(1/p))
    with p = 1 / (1 - h_tilde^2).

    Raises:
        RegimeError: If a geodesic leaves S2_h = {x : x_1 > h}
    """
    lam_up, lam_low, mu_up, mu_low = quadruple.positions(t)
    for point in (lam_up, lam_low, mu_up, mu_low):
        if not point[0] > h:
            raise RegimeError(f"geodesic leaves the cap x_1 > {h} at t = {t}")
    p = 1.0 / (1.0 - h_tilde ** 2)
    base = c * (lam_low[0] * mu_low[0] - h_tilde ** 2)
    return float(np.dot(lam_up - mu_up, lam_up - mu_up)) / (2.0 * base ** (1.0 / p))


def check_spcalc_psi(h, h_tilde, quadruple, step=SPCALC_STEP, tol=SPCALC_TOL, fingerprint=''):
    """
    Second central difference of Psi at t = 0.

    Args:
        h (float): Cap height, h > 0
        h_tilde (float): Parameter in (0, h)
        quadruple (GeodesicQuadruple): The four geodesics
        step (float): Finite-difference step
        tol (float): Accepted negativity
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = 0, rhs = the second difference
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if not 0 < h_tilde < h:
        raise ValueError(f"h_tilde must lie in (0, h), got {h_tilde}")
    second = (
        spcalc_psi(quadruple, step, h, h_tilde)
        - 2.0 * spcalc_psi(quadruple, 0.0, h, h_tilde)
        + spcalc_psi(quadruple, -step, h, h_tilde)
    ) / step ** 2
    return CheckReport.from_sides('spcalc', 0.0, second, tol, fingerprint)


class PhiConvexityCheck(BaseCheck):
    """
    Random geodesic pairs in B(o, r) with uniform s, t.

    Even trials test midpoint convexity (a = 1/2), odd trials a uniform a.
    """

    name = 'phi'
    default_tol = 1e-9

    def default_radius(self):
        return 0.9 * math.pi / math.sqrt(self.cc.kappa) / 4.0

    def validate(self):
        if not self.cc.kappa > 0:
            raise RegimeError("the Phi check needs kappa > 0")
        if not self.space.curvature_upper_bound > 0:
            raise RegimeError(f"the Phi check needs a positively curved space, got {self.space.label()}")
        _require_phi_ball(self.cc.kappa, self.radius, self.center, ())

    def evaluate_trial(self, rng, index, fingerprint):
        lam = tuple(self.sample(rng, 2))
        mu = tuple(self.sample(rng, 2))
        s, t = (float(v) for v in rng.random(2))
        a = 0.5 if index % 2 == 0 else float(rng.random())
        return check_phi_convexity(
            self.cc.kappa, self.radius, self.center, lam, mu, s, t, a, self.tol, fingerprint
        )


class SpCalcCheck(BaseCheck):
    """
    Random quadruples on S2_h with speeds up to 1.

    Parameters ``h`` (default 1/sqrt(2) + 0.1) and ``h_tilde`` (default
    1/sqrt(2)); every third trial couples the lower geodesics to the upper ones.
    """

    name = 'spcalc'
    default_tol = SPCALC_TOL

    def default_radius(self):
        return 1.0

    def validate(self):
        h = self.param('h', 1.0 / math.sqrt(2.0) + 0.1)
        h_tilde = self.param('h_tilde', 1.0 / math.sqrt(2.0))
        if not 0 < h_tilde < h < 1:
            raise ValueError(f"need 0 < h_tilde < h < 1, got h={h}, h_tilde={h_tilde}")
        self.h = h
        self.h_tilde = h_tilde
        self.sphere = SphereSpace(2, 1.0)

    def _random_tangent(self, rng, base, speed):
        direction = self.sphere.project_tangent(base, rng.standard_normal(3))
        return speed * direction / np.linalg.norm(direction)

    def evaluate_trial(self, rng, index, fingerprint):
        cap = 0.95 * math.acos(self.h)
        pole = self.sphere.origin()
        x, y = (point.coords for point in sample_in_ball(self.sphere, pole, cap, rng, 2))
        speed_x, speed_y = (float(v) for v in rng.random(2))
        u_upper = self._random_tangent(rng, x, speed_x)
        v_upper = self._random_tangent(rng, y, speed_y)
        if index % 3 == 0:
            u_lower, v_lower = u_upper, v_upper
        else:
            u_lower = self._random_tangent(rng, x, speed_x)
            v_lower = self._random_tangent(rng, y, speed_y)
        quadruple = GeodesicQuadruple(x, y, u_upper, u_lower, v_upper, v_lower)
        return check_spcalc_psi(self.h, self.h_tilde, quadruple, tol=self.tol, fingerprint=fingerprint)
