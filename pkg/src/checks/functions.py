"""
Convex Test Functions Module

Registered family of functions known to be convex along geodesics in the
small-diameter regime. Jensen checks accept only members of this family.
"""

from abc import ABC, abstractmethod

import numpy as np

from src.barycenter.projection import ClosedBall, GeodesicSegmentSet, ProductSet, distance_to_set
from src.errors import UnregisteredFunctionError
from src.geometry.spaces import EuclideanSpace, ProductSpace, distance


class ConvexFunctionRegistry:
    """Registry of certified-convex test function classes."""

    _functions = {}

    @classmethod
    def register(cls, kind, function_class):
        """
        Register a test function class.

        Args:
            kind (str): Short name of the family
            function_class (class): ConvexTestFunction subclass
        """
        cls._functions[kind] = function_class

    @classmethod
    def is_registered(cls, function):
        return type(function) in cls._functions.values()

    @classmethod
    def require(cls, function):
        """
        Reject functions outside the registered family.

        Raises:
            UnregisteredFunctionError: If convexity cannot be assumed
        """
        if not cls.is_registered(function):
            raise UnregisteredFunctionError(
                f"{type(function).__name__} is not a registered convex test function"
            )


class ConvexTestFunction(ABC):
    """Real function on a geodesic space that is convex in the regime."""

    kind = None

    @abstractmethod
    def __call__(self, z):
        """Evaluate the function."""

    def region_points(self):
        """Points that must share the small-diameter region with the measure."""
        return ()


class SquaredDistanceFunction(ConvexTestFunction):
    """z -> d(anchor, z)^2."""

    kind = 'squared_distance'

    def __init__(self, anchor):
        self.anchor = anchor

    def __call__(self, z):
        return distance(self.anchor, z) ** 2

    def region_points(self):
        return (self.anchor,)


def _segment_in_curved_factor(convex_set):
    if isinstance(convex_set, GeodesicSegmentSet):
        return convex_set.space.curvature_upper_bound > 0
    if isinstance(convex_set, ProductSet):
        return any(_segment_in_curved_factor(part) for part in convex_set.parts)
    return False


def _set_anchor_points(convex_set):
    if isinstance(convex_set, ClosedBall):
        return (convex_set.center,)
    if isinstance(convex_set, GeodesicSegmentSet):
        return (convex_set.start, convex_set.end)
    return ()


class DistanceToSetFunction(ConvexTestFunction):
    """
    z -> d(z, C) for a convex set C.

    Distance to a geodesic segment is not convex in positive curvature, so
    segments are only accepted in factors with curvature bound <= 0.
    """

    kind = 'distance_to_set'

    def __init__(self, convex_set):
        if _segment_in_curved_factor(convex_set):
            raise ValueError("distance to a geodesic segment is not convex on a positively curved factor")
        self.convex_set = convex_set

    def __call__(self, z):
        return distance_to_set(self.convex_set, z)

    def region_points(self):
        return _set_anchor_points(self.convex_set)


class AffineFunction(ConvexTestFunction):
    """z -> <a, z_f> + b on a Euclidean factor f."""

    kind = 'affine'

    def __init__(self, space, coefficients, offset=0.0, factor=None):
        """
        Initialize the affine function.

        Args:
            space (GeodesicSpace): Euclidean space or product with a Euclidean factor
            coefficients (array-like): Linear part a
            offset (float): Constant b
            factor (int): Factor index for product spaces
        """
        if isinstance(space, ProductSpace):
            if factor is None or not isinstance(space.factors[factor], EuclideanSpace):
                raise ValueError("affine test functions need a Euclidean factor")
            target = space.factors[factor]
        elif isinstance(space, EuclideanSpace):
            target = space
        else:
            raise ValueError(f"affine test functions need a Euclidean factor, got {space.label()}")
        coefficients = np.asarray(coefficients, dtype=float)
        if coefficients.shape != (target.dim,):
            raise ValueError(f"expected {target.dim} coefficients, got {coefficients.shape}")
        self.space = space
        self.coefficients = coefficients
        self.offset = float(offset)
        self.factor = factor

    def __call__(self, z):
        coords = z.coords if self.factor is None else self.space.split(z.coords)[self.factor]
        return float(np.dot(self.coefficients, coords)) + self.offset


ConvexFunctionRegistry.register(SquaredDistanceFunction.kind, SquaredDistanceFunction)
ConvexFunctionRegistry.register(DistanceToSetFunction.kind, DistanceToSetFunction)
ConvexFunctionRegistry.register(AffineFunction.kind, AffineFunction)
