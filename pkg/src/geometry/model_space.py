"""
Model Space Module

Closed-form quantities of the two-dimensional model surfaces M2(kappa): the
diameter D_kappa, the curvature-dependent constants used by the convexity,
barycenter and extension estimates, and comparison triangles and angles.

Charts follow one convention throughout the lab: the plane R^2 for kappa = 0,
the sphere of radius 1/sqrt(kappa) in R^3 for kappa > 0 and the upper sheet of
the hyperboloid <x, x>_L = -1/|kappa| in R^3 for kappa < 0. The chart origin is
(0, 0) in the plane and R * e0 on the curved surfaces.
"""

import math
import sys
from dataclasses import dataclass

import numpy as np

from src.errors import CurvatureError, InfeasibleError, UndefinedAngleError
from src.geometry._numeric import haversine_angle, hyperboloid_arc, sphere_arc

# Largest finite double, stands in for +infinity together with the unbounded flag
UNBOUNDED_SENTINEL = sys.float_info.max

RECONSTRUCTION_TOL = 1e-10


@dataclass(frozen=True)
class Diameter:
    """
    Extended real used for diameters.

    ``value`` holds the floating maximum when ``unbounded`` is set and must not
    enter arithmetic in that case; use ``scaled`` and ``admits`` instead.
    """

    value: float
    unbounded: bool = False

    @classmethod
    def infinite(cls):
        return cls(UNBOUNDED_SENTINEL, True)

    def scaled(self, factor):
        """
        Multiply a bounded diameter by a factor.

        Args:
            factor (float): Nonnegative factor

        Returns:
            Diameter: Scaled diameter (unbounded stays unbounded)
        """
        if self.unbounded:
            return self
        return Diameter(self.value * factor)

    def admits(self, length, strict=False, tol=0.0):
        """
        Check whether a length fits below this diameter.

        Args:
            length (float): Length to compare
            strict (bool): Require ``length < value`` instead of ``<=``
            tol (float): Absolute slack added to the bound

        Returns:
            bool: True if the length is admissible
        """
        if self.unbounded:
            return True
        if strict:
            return length < self.value + tol
        return length <= self.value + tol

    def to_json(self):
        return None if self.unbounded else self.value


def diameter_of_model(kappa):
    """
    Diameter of the model surface M2(kappa).

    Args:
        kappa (float): Curvature

    Returns:
        Diameter: pi / sqrt(kappa) for kappa > 0, unbounded otherwise
    """
    if kappa <= 0:
        return Diameter.infinite()
    return Diameter(math.pi / math.sqrt(kappa))


def cos_kappa(kappa, t):
    """
    Curvature-scaled cosine cos(sqrt(kappa) t).

    Args:
        kappa (float): Positive curvature
        t (float): Argument

    Returns:
        float: cos(sqrt(kappa) * t)

    Raises:
        CurvatureError: If kappa <= 0
    """
    if kappa <= 0:
        raise CurvatureError(f"cos_kappa needs kappa > 0, got {kappa}")
    return math.cos(math.sqrt(kappa) * t)


@dataclass(frozen=True)
class CurvatureClass:
    """Curvature bound kappa together with the diameter margin epsilon."""

    kappa: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie strictly inside (0, 1), got {self.epsilon}")
        if not math.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa}")

    @property
    def model_diameter(self):
        """D_kappa."""
        return diameter_of_model(self.kappa)

    @property
    def safe_diameter(self):
        """D_{kappa,epsilon} = (1 - epsilon) D_kappa."""
        return self.model_diameter.scaled(1.0 - self.epsilon)

    def to_dict(self):
        return {'kappa': self.kappa, 'epsilon': self.epsilon}


@dataclass(frozen=True)
class EffectiveConstants:
    """
    Constants of a curvature class.

    ``k`` is the uniform convexity modulus, ``gamma`` the Lipschitz constant of
    the barycenter map against W2 and ``c_ext`` the Lipschitz extension
    constant gamma * (16 gamma^2 (2/k) + 1).
    """

    k: float
    gamma: float
    c_ext: float

    @property
    def cotype_constant(self):
        """Metric Markov cotype 2 bound N = 16 gamma^2 (2/k) + 1."""
        return 16.0 * self.gamma ** 2 * (2.0 / self.k) + 1.0

    def to_dict(self):
        return {
            'k': self.k,
            'gamma': self.gamma,
            'cotype_constant': self.cotype_constant,
            'c_ext': self.c_ext,
        }


def effective_constants(cc):
    """
    Compute the effective constants of a curvature class.

    Args:
        cc (CurvatureClass): Curvature class

    Returns:
        EffectiveConstants: k, gamma and c_ext
    """
    if cc.kappa <= 0:
        k = 2.0
        gamma = 1.0
    else:
        eps = cc.epsilon
        k = (math.pi - eps * math.pi) * math.tan(eps * math.pi / 2.0)
        gamma = math.pi / (2.0 * math.sqrt(2.0) * math.cos((1.0 - eps) * math.pi / 2.0) ** 0.25)
    c_ext = gamma * (16.0 * gamma ** 2 * (2.0 / k) + 1.0)
    return EffectiveConstants(k=k, gamma=gamma, c_ext=c_ext)


def model_point(kappa, rho, theta):
    """
    Point of M2(kappa) at distance rho from the chart origin in direction theta.

    Args:
        kappa (float): Curvature
        rho (float): Distance from the origin
        theta (float): Direction angle measured from the first axis

    Returns:
        numpy.ndarray: Chart coordinates
    """
    if kappa == 0:
        return np.array([rho * math.cos(theta), rho * math.sin(theta)])
    radius = 1.0 / math.sqrt(abs(kappa))
    s = rho / radius
    if kappa > 0:
        return radius * np.array([math.cos(s), math.sin(s) * math.cos(theta), math.sin(s) * math.sin(theta)])
    return radius * np.array([math.cosh(s), math.sinh(s) * math.cos(theta), math.sinh(s) * math.sin(theta)])


def model_distance(kappa, p, q):
    """Distance between two chart points of M2(kappa)."""
    if kappa == 0:
        return float(np.linalg.norm(np.asarray(p) - np.asarray(q)))
    radius = 1.0 / math.sqrt(abs(kappa))
    if kappa > 0:
        return sphere_arc(np.asarray(p), np.asarray(q), radius)
    return hyperboloid_arc(np.asarray(p), np.asarray(q), radius)


def _check_triangle(a, b, c, kappa, tol=1e-12):
    sides = (a, b, c)
    if min(sides) < 0:
        raise InfeasibleError(f"side lengths must be nonnegative, got {sides}")
    scale = max(1.0, a + b + c)
    if a > b + c + tol * scale or b > a + c + tol * scale or c > a + b + tol * scale:
        raise InfeasibleError(f"side lengths {sides} violate the triangle inequality")
    diameter = diameter_of_model(kappa)
    if not diameter.unbounded and a + b + c >= 2.0 * diameter.value:
        raise InfeasibleError(
            f"perimeter {a + b + c} is not below 2 D_kappa = {2.0 * diameter.value}"
        )


def comparison_angle(a, b, opposite, kappa):
    """
    Angle of the comparison triangle between the sides a and b.

    The law of cosines of M2(kappa) is evaluated in haversine form, which stays
    accurate for thin and for nearly degenerate triangles.

    Args:
        a (float): First adjacent side
        b (float): Second adjacent side
        opposite (float): Side opposite to the angle
        kappa (float): Curvature

    Returns:
        float: Angle in [0, pi]

    Raises:
        UndefinedAngleError: If a or b is zero
        InfeasibleError: If no comparison triangle exists
    """
    if a == 0 or b == 0:
        raise UndefinedAngleError(f"comparison angle undefined for a degenerate side (a={a}, b={b})")
    _check_triangle(a, b, opposite, kappa)
    if kappa == 0:
        hav = (opposite ** 2 - (a - b) ** 2) / (4.0 * a * b)
    elif kappa > 0:
        root = math.sqrt(kappa)
        hav = (
            (math.sin(root * opposite / 2.0) ** 2 - math.sin(root * (a - b) / 2.0) ** 2)
            / (math.sin(root * a) * math.sin(root * b))
        )
    else:
        root = math.sqrt(-kappa)
        hav = (
            (math.sinh(root * opposite / 2.0) ** 2 - math.sinh(root * (a - b) / 2.0) ** 2)
            / (math.sinh(root * a) * math.sinh(root * b))
        )
    return haversine_angle(hav)


@dataclass(frozen=True, eq=False)
class ComparisonTriangle:
    """Triangle in M2(kappa) with prescribed side lengths d(x,y), d(y,z), d(z,x)."""

    side_lengths: tuple
    vertices: tuple
    kappa: float

    def pairwise_distances(self):
        """
        Distances between the vertices in the order of ``side_lengths``.

        Returns:
            tuple: (d(x,y), d(y,z), d(z,x))
        """
        x, y, z = self.vertices
        return (
            model_distance(self.kappa, x, y),
            model_distance(self.kappa, y, z),
            model_distance(self.kappa, z, x),
        )

    def to_dict(self):
        return {
            'kappa': self.kappa,
            'side_lengths': list(self.side_lengths),
            'vertices': [vertex.tolist() for vertex in self.vertices],
        }


def comparison_triangle(a, b, c, kappa):
    """
    Build the canonical comparison triangle for side lengths (a, b, c).

    The first vertex sits at the chart origin, the second on the first axis at
    distance a, the third at distance c from the first vertex on the side of
    positive second coordinate.

    Args:
        a (float): d(x, y)
        b (float): d(y, z)
        c (float): d(z, x)
        kappa (float): Curvature

    Returns:
        ComparisonTriangle: Triangle realizing the side lengths

    Raises:
        InfeasibleError: On a triangle inequality violation or perimeter >= 2 D_kappa
    """
    _check_triangle(a, b, c, kappa)
    theta = 0.0 if a == 0 or c == 0 else comparison_angle(a, c, b, kappa)
    vertices = (
        model_point(kappa, 0.0, 0.0),
        model_point(kappa, a, 0.0),
        model_point(kappa, c, theta),
    )
    return ComparisonTriangle(side_lengths=(a, b, c), vertices=vertices, kappa=kappa)
