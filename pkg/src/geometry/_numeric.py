"""
Numeric helpers shared by the geometry modules.

Every silent clamp of the code base lives here: arguments of arccos, arcsin and
square roots are pulled back into their domain to absorb roundoff.
"""

import math

import numpy as np


def safe_arccos(value):
    """Arc cosine with the argument clipped to [-1, 1]."""
    return math.acos(min(1.0, max(-1.0, float(value))))


def nonneg_sqrt(value):
    """Square root of a quantity that is nonnegative up to roundoff."""
    return math.sqrt(max(0.0, float(value)))


def haversine_angle(hav):
    """
    Angle whose haversine is ``hav``.

    Args:
        hav (float): Haversine value, clipped to [0, 1]

    Returns:
        float: Angle in [0, pi]
    """
    return 2.0 * math.asin(math.sqrt(min(1.0, max(0.0, float(hav)))))


def minkowski(u, v):
    """Lorentzian bilinear form -u0 v0 + sum_i ui vi."""
    return float(-u[0] * v[0] + np.dot(u[1:], v[1:]))


def sphere_arc(u, v, radius):
    """Great circle distance between two chart points of a sphere."""
    return 2.0 * radius * math.atan2(float(np.linalg.norm(u - v)), float(np.linalg.norm(u + v)))


def hyperboloid_arc(u, v, radius):
    """Geodesic distance between two points of the hyperboloid of radius ``radius``."""
    diff = u - v
    return 2.0 * radius * math.asinh(nonneg_sqrt(minkowski(diff, diff)) / (2.0 * radius))
