"""
Orthogonal Projection Module

Convex sets whose convexity holds by construction in the small-diameter
regime (geodesic segments, closed balls and products of these) and the
nearest-point projection onto them.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from src.errors import IncompatibleSpaceError, UnsupportedSetError
from src.geometry.spaces import (
    EuclideanSpace,
    ProductSpace,
    SpacePoint,
    distance,
    geodesic_point,
    geodesic_velocity,
    space_from_dict,
)

ROOT_XTOL = 1e-14


class ConvexSet(ABC):
    """Base class for convex sets with a projection routine."""

    kind = None

    @property
    @abstractmethod
    def space(self):
        """Ambient space."""

    @abstractmethod
    def to_dict(self):
        """JSON representation."""

    def contains(self, x, tol=1e-10):
        return distance(orthogonal_project(self, x), x) <= tol


@dataclass(frozen=True, eq=False)
class GeodesicSegmentSet(ConvexSet):
    """Image of the geodesic between two points."""

    start: SpacePoint
    end: SpacePoint
    kind = 'segment'

    def __post_init__(self):
        if self.start.space != self.end.space:
            raise IncompatibleSpaceError("segment endpoints belong to different spaces")

    @property
    def space(self):
        return self.start.space

    def to_dict(self):
        return {'kind': self.kind, 'space': self.space.to_dict(),
                'endpoints': [self.start.to_list(), self.end.to_list()]}


@dataclass(frozen=True, eq=False)
class ClosedBall(ConvexSet):
    """Closed metric ball."""

    center: SpacePoint
    radius: float
    kind = 'ball'

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"ball radius must be nonnegative, got {self.radius}")

    @property
    def space(self):
        return self.center.space

    def contains(self, x, tol=1e-10):
        return distance(self.center, x) <= self.radius + tol

    def to_dict(self):
        return {'kind': self.kind, 'space': self.space.to_dict(),
                'center': self.center.to_list(), 'radius': self.radius}


@dataclass(frozen=True, eq=False)
class ProductSet(ConvexSet):
    """Product of convex sets, one per factor of a product space."""

    product: ProductSpace
    parts: tuple
    kind = 'product'

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) != len(self.product.factors):
            raise ValueError(f"expected {len(self.product.factors)} factor sets, got {len(parts)}")
        for factor, part in zip(self.product.factors, parts):
            if part.space != factor:
                raise IncompatibleSpaceError(f"factor set lives in {part.space.label()}, not {factor.label()}")
        object.__setattr__(self, 'parts', parts)

    @property
    def space(self):
        return self.product

    def to_dict(self):
        return {'kind': self.kind, 'space': self.product.to_dict(),
                'factors': [part.to_dict() for part in self.parts]}


def _project_segment(segment, x):
    start, end = segment.start, segment.end
    space = segment.space
    length = distance(start, end)
    if length == 0:
        return start
    if isinstance(space, EuclideanSpace):
        direction = end.coords - start.coords
        t = float(np.dot(x.coords - start.coords, direction) / np.dot(direction, direction))
        t = min(1.0, max(0.0, t))
        return geodesic_point(start, end, t)

    # derivative of t -> d(x, gamma(t))^2 / 2 is -<log_{gamma(t)} x, gamma'(t)>
    def slope(t):
        current = geodesic_point(start, end, t)
        return -space.inner(current.coords, space.log(current, x), geodesic_velocity(start, end, t))

    left = slope(0.0)
    if left >= 0:
        return start
    right = slope(1.0)
    if right <= 0:
        return end
    t = brentq(slope, 0.0, 1.0, xtol=ROOT_XTOL)
    return geodesic_point(start, end, t)


def _project_ball(ball, x):
    d = distance(ball.center, x)
    if d <= ball.radius:
        return x
    return geodesic_point(ball.center, x, ball.radius / d)


def orthogonal_project(c, x):
    """
    Nearest point of a convex set.

    Args:
        c (ConvexSet): Segment, ball or product set
        x (SpacePoint): Point to project

    Returns:
        SpacePoint: The unique nearest point of c

    Raises:
        UnsupportedSetError: For any other set kind
        IncompatibleSpaceError: If x is not in the ambient space of c
    """
    if x.space != c.space:
        raise IncompatibleSpaceError(f"point in {x.space.label()} but set in {c.space.label()}")
    if isinstance(c, GeodesicSegmentSet):
        return _project_segment(c, x)
    if isinstance(c, ClosedBall):
        return _project_ball(c, x)
    if isinstance(c, ProductSet):
        parts = [
            orthogonal_project(part, c.product.factor_point(x, index))
            for index, part in enumerate(c.parts)
        ]
        return c.product.combine(parts)
    raise UnsupportedSetError(f"no projection for convex sets of kind {getattr(c, 'kind', type(c).__name__)!r}")


def distance_to_set(c, x):
    """Distance from x to its projection onto c."""
    return distance(x, orthogonal_project(c, x))


def convex_set_from_dict(data, space=None):
    """
    Load a convex set from JSON.

    Args:
        data (dict): {"kind": "segment"|"ball"|"product", ...}
        space (GeodesicSpace): Ambient space when nested in a product

    Returns:
        ConvexSet: The set
    """
    space = space or space_from_dict(data['space'])
    kind = data.get('kind')
    if kind == 'segment':
        start, end = data['endpoints']
        return GeodesicSegmentSet(space.point(start), space.point(end))
    if kind == 'ball':
        return ClosedBall(space.point(data['center']), float(data['radius']))
    if kind == 'product':
        if not isinstance(space, ProductSpace):
            raise ValueError("product sets need a product space")
        parts = tuple(convex_set_from_dict(part, factor) for part, factor in zip(data['factors'], space.factors))
        return ProductSet(space, parts)
    raise UnsupportedSetError(f"unknown convex set kind {kind!r}")
