"""
Geodesic Spaces Module

Concrete CAT(kappa) spaces on which every computation of the lab runs:
Euclidean spaces, round spheres of curvature kappa > 0, hyperbolic spaces of
curvature kappa < 0 (hyperboloid model) and finite l2-products of these.

Each space works in a fixed chart. Spheres of dimension n live in R^(n+1)
with chart norm R = 1/sqrt(kappa); hyperbolic spaces live on the upper sheet
of <x, x>_L = -R^2 in R^(n+1) with the Lorentzian form placing the time
coordinate first; product points concatenate the coordinates of their factors.
Tangent vectors are chart vectors orthogonal to the base point.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.linalg import block_diag, null_space

from src.errors import (
    IncompatibleSpaceError,
    InfeasibleError,
    NonUniqueGeodesicError,
    UndefinedAngleError,
)
from src.geometry._numeric import hyperboloid_arc, minkowski, nonneg_sqrt, safe_arccos, sphere_arc
from src.geometry.model_space import comparison_triangle, diameter_of_model

CHART_TOL = 1e-12

# Grid size of the tabulated radial distribution used by sample_ball
RADIAL_GRID = 4097


class SpaceRegistry:
    """Registry mapping JSON kinds to space classes."""

    _spaces = {}

    @classmethod
    def register(cls, kind, space_class):
        """
        Register a space class.

        Args:
            kind (str): Value of the "kind" field in the JSON schema
            space_class (class): GeodesicSpace subclass
        """
        cls._spaces[kind] = space_class

    @classmethod
    def get_space(cls, kind):
        """
        Get a space class by kind.

        Args:
            kind (str): JSON kind

        Returns:
            class: Space class or None if not found
        """
        return cls._spaces.get(kind)


class GeodesicSpace(ABC):
    """Base class for the concrete geodesic spaces."""

    kind = None

    @property
    @abstractmethod
    def chart_dim(self):
        """Length of a coordinate vector."""

    @property
    @abstractmethod
    def intrinsic_dim(self):
        """Manifold dimension."""

    @property
    @abstractmethod
    def curvature_upper_bound(self):
        """Smallest kappa for which the space is CAT(kappa)."""

    @abstractmethod
    def origin_coords(self):
        """Coordinates of the distinguished base point."""

    @abstractmethod
    def retract(self, coords):
        """Map nearby chart coordinates back onto the space."""

    @abstractmethod
    def constraint_error(self, coords):
        """Violation of the chart constraint by ``coords``."""

    @abstractmethod
    def distance_coords(self, u, v):
        """Geodesic distance between two coordinate vectors."""

    @abstractmethod
    def exp_coords(self, base, tangent):
        """Exponential map at ``base``."""

    @abstractmethod
    def log_coords(self, base, target):
        """Inverse of the exponential map at ``base``."""

    @abstractmethod
    def inner(self, base, u, w):
        """Riemannian inner product of two tangent vectors at ``base``."""

    @abstractmethod
    def project_tangent(self, base, v):
        """Orthogonal projection of a chart vector onto the tangent space at ``base``."""

    @abstractmethod
    def tangent_basis(self, base):
        """Orthonormal basis of the tangent space at ``base`` as matrix columns."""

    @abstractmethod
    def radial_density(self, rho):
        """Area of the model sphere of radius ``rho``, up to a constant factor."""

    @abstractmethod
    def to_dict(self):
        """JSON representation of the space."""

    @abstractmethod
    def label(self):
        """Short textual name used in fingerprints."""

    @property
    def model_diameter(self):
        """D_kappa of the curvature upper bound."""
        return diameter_of_model(self.curvature_upper_bound)

    def point(self, coords, tol=CHART_TOL):
        """
        Create a validated point of this space.

        Args:
            coords (array-like): Chart coordinates
            tol (float): Allowed violation of the chart constraint

        Returns:
            SpacePoint: The point
        """
        return SpacePoint(self, coords, tol)

    def project_point(self, coords):
        """Retract arbitrary chart coordinates onto the space and wrap them."""
        return SpacePoint(self, self.retract(np.asarray(coords, dtype=float)))

    def origin(self):
        return SpacePoint(self, self.origin_coords())

    def distance(self, x, y):
        _require_same_space(x, y)
        return self.distance_coords(x.coords, y.coords)

    def exp(self, x, tangent):
        """
        Exponential map at a point.

        Args:
            x (SpacePoint): Base point
            tangent (numpy.ndarray): Tangent vector at x in chart coordinates

        Returns:
            SpacePoint: exp_x(tangent)
        """
        return SpacePoint(self, self.exp_coords(x.coords, np.asarray(tangent, dtype=float)))

    def log(self, x, y):
        _require_same_space(x, y)
        return self.log_coords(x.coords, y.coords)

    def norm(self, base, v):
        return nonneg_sqrt(self.inner(base, v, v))

    def radial_quantiles(self, radius, uniforms):
        """
        Invert the radial distribution of a uniform sample of the model ball.

        Args:
            radius (float): Ball radius
            uniforms (numpy.ndarray): Uniform variates in [0, 1]

        Returns:
            numpy.ndarray: Radii distributed with density proportional to radial_density
        """
        if radius == 0:
            return np.zeros_like(uniforms)
        grid = np.linspace(0.0, radius, RADIAL_GRID)
        cdf = cumulative_trapezoid(self.radial_density(grid), grid, initial=0.0)
        cdf /= cdf[-1]
        return np.interp(uniforms, cdf, grid)


@dataclass(frozen=True, eq=False)
class SpacePoint:
    """A point of a geodesic space given by its chart coordinates."""

    space: GeodesicSpace
    coords: np.ndarray
    tol: float = field(default=CHART_TOL, repr=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).reshape(-1)
        if coords.shape != (self.space.chart_dim,):
            raise ValueError(
                f"{self.space.label()} expects {self.space.chart_dim} coordinates, got {coords.shape[0]}"
            )
        if not np.all(np.isfinite(coords)):
            raise ValueError(f"coordinates must be finite, got {coords.tolist()}")
        error = self.space.constraint_error(coords)
        if error > self.tol:
            raise ValueError(
                f"coordinates {coords.tolist()} violate the chart constraint of "
                f"{self.space.label()} by {error:.3e}"
            )
        coords.setflags(write=False)
        object.__setattr__(self, 'coords', coords)

    def is_close(self, other, tol=1e-12):
        """Check coordinate-wise closeness to another point of the same space."""
        return self.space == other.space and bool(np.max(np.abs(self.coords - other.coords)) <= tol)

    def to_list(self):
        return self.coords.tolist()


def _require_same_space(*points):
    first = points[0].space
    for other in points[1:]:
        if other.space != first:
            raise IncompatibleSpaceError(
                f"points belong to different spaces: {first.label()} and {other.space.label()}"
            )


@dataclass(frozen=True)
class EuclideanSpace(GeodesicSpace):
    """Euclidean space R^n."""

    dim: int
    kind = 'euclidean'

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")

    @property
    def chart_dim(self):
        return self.dim

    @property
    def intrinsic_dim(self):
        return self.dim

    @property
    def curvature_upper_bound(self):
        return 0.0

    def origin_coords(self):
        return np.zeros(self.dim)

    def retract(self, coords):
        return np.array(coords, dtype=float)

    def constraint_error(self, coords):
        return 0.0

    def distance_coords(self, u, v):
        return float(np.linalg.norm(u - v))

    def exp_coords(self, base, tangent):
        return base + tangent

    def log_coords(self, base, target):
        return target - base

    def inner(self, base, u, w):
        return float(np.dot(u, w))

    def project_tangent(self, base, v):
        return np.array(v, dtype=float)

    def tangent_basis(self, base):
        return np.eye(self.dim)

    def radial_density(self, rho):
        return rho ** (self.dim - 1)

    def radial_quantiles(self, radius, uniforms):
        return radius * uniforms ** (1.0 / self.dim)

    def to_dict(self):
        return {'kind': self.kind, 'dim': self.dim}

    def label(self):
        return f"euclidean{self.dim}"


@dataclass(frozen=True)
class SphereSpace(GeodesicSpace):
    """Round sphere S^n of constant curvature kappa > 0."""

    dim: int
    kappa: float = 1.0
    kind = 'sphere'

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if not self.kappa > 0:
            raise ValueError(f"sphere curvature must be positive, got {self.kappa}")

    @property
    def radius(self):
        return 1.0 / math.sqrt(self.kappa)

    @property
    def chart_dim(self):
        return self.dim + 1

    @property
    def intrinsic_dim(self):
        return self.dim

    @property
    def curvature_upper_bound(self):
        return self.kappa

    def origin_coords(self):
        coords = np.zeros(self.dim + 1)
        coords[0] = self.radius
        return coords

    def retract(self, coords):
        coords = np.asarray(coords, dtype=float)
        return coords * (self.radius / np.linalg.norm(coords))

    def constraint_error(self, coords):
        return abs(float(np.linalg.norm(coords)) - self.radius) / max(1.0, self.radius)

    def distance_coords(self, u, v):
        return sphere_arc(u, v, self.radius)

    def exp_coords(self, base, tangent):
        speed = float(np.linalg.norm(tangent))
        if speed == 0:
            return np.array(base, dtype=float)
        angle = speed / self.radius
        return self.retract(math.cos(angle) * base + self.radius * math.sin(angle) * tangent / speed)

    def log_coords(self, base, target):
        dist = self.distance_coords(base, target)
        if dist == 0:
            return np.zeros_like(base)
        if dist >= math.pi * self.radius * (1.0 - CHART_TOL):
            raise NonUniqueGeodesicError(f"antipodal points on {self.label()} have no unique geodesic")
        direction = target - (np.dot(base, target) / self.radius ** 2) * base
        length = float(np.linalg.norm(direction))
        if length == 0:
            return np.zeros_like(base)
        return dist * direction / length

    def inner(self, base, u, w):
        return float(np.dot(u, w))

    def project_tangent(self, base, v):
        return v - (np.dot(v, base) / self.radius ** 2) * base

    def tangent_basis(self, base):
        return null_space(np.asarray(base, dtype=float)[None, :])

    def radial_density(self, rho):
        return np.sin(rho / self.radius) ** (self.dim - 1)

    def to_dict(self):
        return {'kind': self.kind, 'dim': self.dim, 'kappa': self.kappa}

    def label(self):
        return f"sphere{self.dim}(kappa={self.kappa:g})"


@dataclass(frozen=True)
class HyperbolicSpace(GeodesicSpace):
    """Hyperbolic space H^n of constant curvature kappa < 0, hyperboloid model."""

    dim: int
    kappa: float = -1.0
    kind = 'hyperbolic'

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if not self.kappa < 0:
            raise ValueError(f"hyperbolic curvature must be negative, got {self.kappa}")

    @property
    def radius(self):
        return 1.0 / math.sqrt(-self.kappa)

    @property
    def chart_dim(self):
        return self.dim + 1

    @property
    def intrinsic_dim(self):
        return self.dim

    @property
    def curvature_upper_bound(self):
        return self.kappa

    def origin_coords(self):
        coords = np.zeros(self.dim + 1)
        coords[0] = self.radius
        return coords

    def retract(self, coords):
        coords = np.array(coords, dtype=float)
        coords[0] = math.sqrt(self.radius ** 2 + float(np.dot(coords[1:], coords[1:])))
        return coords

    def constraint_error(self, coords):
        if coords[0] <= 0:
            return math.inf
        scale = max(self.radius ** 2, float(coords[0]) ** 2)
        return abs(minkowski(coords, coords) + self.radius ** 2) / scale

    def distance_coords(self, u, v):
        return hyperboloid_arc(u, v, self.radius)

    def exp_coords(self, base, tangent):
        speed = nonneg_sqrt(minkowski(tangent, tangent))
        if speed == 0:
            return np.array(base, dtype=float)
        angle = speed / self.radius
        return self.retract(math.cosh(angle) * base + self.radius * math.sinh(angle) * tangent / speed)

    def log_coords(self, base, target):
        dist = self.distance_coords(base, target)
        if dist == 0:
            return np.zeros_like(base)
        alpha = -minkowski(base, target) / self.radius ** 2
        direction = target - alpha * base
        length = nonneg_sqrt(minkowski(direction, direction))
        if length == 0:
            return np.zeros_like(base)
        return dist * direction / length

    def inner(self, base, u, w):
        return minkowski(u, w)

    def project_tangent(self, base, v):
        return v + (minkowski(v, base) / self.radius ** 2) * base

    def tangent_basis(self, base):
        base = np.asarray(base, dtype=float)
        metric = np.diag([-1.0] + [1.0] * self.dim)
        candidates = null_space((metric @ base)[None, :])
        gram = candidates.T @ metric @ candidates
        lower = np.linalg.cholesky(gram)
        return candidates @ np.linalg.inv(lower).T

    def radial_density(self, rho):
        return np.sinh(rho / self.radius) ** (self.dim - 1)

    def to_dict(self):
        return {'kind': self.kind, 'dim': self.dim, 'kappa': self.kappa}

    def label(self):
        return f"hyperbolic{self.dim}(kappa={self.kappa:g})"


@dataclass(frozen=True)
class ProductSpace(GeodesicSpace):
    """
    l2-product of geodesic spaces.

    The product of CAT(kappa_i) spaces is CAT(max kappa_i). Radii of ball
    samples follow the Euclidean radial law in the total dimension.
    """

    factors: tuple
    kind = 'product'
    _slices: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        factors = tuple(self.factors)
        if len(factors) < 1:
            raise ValueError("a product needs at least one factor")
        object.__setattr__(self, 'factors', factors)
        slices = []
        offset = 0
        for factor in factors:
            slices.append(slice(offset, offset + factor.chart_dim))
            offset += factor.chart_dim
        object.__setattr__(self, '_slices', tuple(slices))

    @property
    def chart_dim(self):
        return sum(factor.chart_dim for factor in self.factors)

    @property
    def intrinsic_dim(self):
        return sum(factor.intrinsic_dim for factor in self.factors)

    @property
    def curvature_upper_bound(self):
        return max(factor.curvature_upper_bound for factor in self.factors)

    def split(self, coords):
        """Split product coordinates into factor coordinates."""
        return [np.asarray(coords)[part] for part in self._slices]

    def join(self, parts):
        """Concatenate factor coordinates."""
        return np.concatenate([np.asarray(part, dtype=float) for part in parts])

    def factor_point(self, x, index):
        """
        Project a product point onto one factor.

        Args:
            x (SpacePoint): Product point
            index (int): Factor index

        Returns:
            SpacePoint: Point of the factor space
        """
        return SpacePoint(self.factors[index], x.coords[self._slices[index]])

    def combine(self, points):
        """Build a product point from one point per factor."""
        if len(points) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} factor points, got {len(points)}")
        for factor, point in zip(self.factors, points):
            if point.space != factor:
                raise IncompatibleSpaceError(f"{point.space.label()} is not the factor {factor.label()}")
        return SpacePoint(self, self.join([point.coords for point in points]))

    def origin_coords(self):
        return self.join([factor.origin_coords() for factor in self.factors])

    def retract(self, coords):
        return self.join([f.retract(c) for f, c in zip(self.factors, self.split(coords))])

    def constraint_error(self, coords):
        return max(f.constraint_error(c) for f, c in zip(self.factors, self.split(coords)))

    def distance_coords(self, u, v):
        squares = [
            f.distance_coords(a, b) ** 2
            for f, a, b in zip(self.factors, self.split(u), self.split(v))
        ]
        return math.sqrt(sum(squares))

    def exp_coords(self, base, tangent):
        return self.join([
            f.exp_coords(b, t) for f, b, t in zip(self.factors, self.split(base), self.split(tangent))
        ])

    def log_coords(self, base, target):
        return self.join([
            f.log_coords(b, t) for f, b, t in zip(self.factors, self.split(base), self.split(target))
        ])

    def inner(self, base, u, w):
        return sum(
            f.inner(b, a, c)
            for f, b, a, c in zip(self.factors, self.split(base), self.split(u), self.split(w))
        )

    def project_tangent(self, base, v):
        return self.join([
            f.project_tangent(b, part) for f, b, part in zip(self.factors, self.split(base), self.split(v))
        ])

    def tangent_basis(self, base):
        return block_diag(*[f.tangent_basis(b) for f, b in zip(self.factors, self.split(base))])

    def radial_density(self, rho):
        return rho ** (self.intrinsic_dim - 1)

    def radial_quantiles(self, radius, uniforms):
        return radius * uniforms ** (1.0 / self.intrinsic_dim)

    def to_dict(self):
        return {'kind': self.kind, 'factors': [factor.to_dict() for factor in self.factors]}

    def label(self):
        return 'product(' + ','.join(factor.label() for factor in self.factors) + ')'


SpaceRegistry.register('euclidean', EuclideanSpace)
SpaceRegistry.register('sphere', SphereSpace)
SpaceRegistry.register('hyperbolic', HyperbolicSpace)
SpaceRegistry.register('product', ProductSpace)


def space_from_dict(data):
    """
    Build a space from its JSON representation.

    Args:
        data (dict): {"kind": ..., "dim": n, "kappa": k, "factors": [...]}

    Returns:
        GeodesicSpace: The space
    """
    kind = data.get('kind')
    space_class = SpaceRegistry.get_space(kind)
    if space_class is None:
        raise ValueError(f"unknown space kind: {kind!r}")
    if space_class is ProductSpace:
        return ProductSpace(tuple(space_from_dict(factor) for factor in data['factors']))
    if space_class is EuclideanSpace:
        return EuclideanSpace(int(data['dim']))
    default_kappa = 1.0 if space_class is SphereSpace else -1.0
    return space_class(int(data['dim']), float(data.get('kappa', default_kappa)))


def space_from_spec(text, kappa=None):
    """
    Build a space from a textual spec.

    Accepted forms are ``euclidean<n>``, ``sphere<n>``, ``hyperbolic<n>`` and
    ``product:<spec>,<spec>,...``. Spheres take curvature |kappa| and
    hyperbolic spaces -|kappa|, with 1 and -1 when kappa is None or 0.

    Args:
        text (str): Space spec
        kappa (float): Curvature magnitude source

    Returns:
        GeodesicSpace: The space
    """
    text = text.strip().lower()
    if text.startswith('product:'):
        factors = [part for part in text[len('product:'):].split(',') if part.strip()]
        if len(factors) < 2:
            raise ValueError(f"a product needs at least two factors: {text!r}")
        return ProductSpace(tuple(space_from_spec(part, kappa) for part in factors))
    magnitude = abs(float(kappa)) if kappa else 1.0
    for kind, build in (
        ('euclidean', lambda dim: EuclideanSpace(dim)),
        ('sphere', lambda dim: SphereSpace(dim, magnitude)),
        ('hyperbolic', lambda dim: HyperbolicSpace(dim, -magnitude)),
    ):
        if text.startswith(kind):
            suffix = text[len(kind):]
            if not suffix.isdigit():
                raise ValueError(f"expected {kind}<dimension>, got {text!r}")
            return build(int(suffix))
    raise ValueError(f"unknown space spec: {text!r}")


def distance(x, y):
    """
    Geodesic distance between two points.

    Raises:
        IncompatibleSpaceError: If the points live in different spaces
    """
    return x.space.distance(x, y)


def geodesic_point(x, y, t):
    """
    Point at parameter t of the unique geodesic from x to y.

    Args:
        x (SpacePoint): Start point
        y (SpacePoint): End point
        t (float): Parameter in [0, 1]

    Returns:
        SpacePoint: gamma(t) with d(x, gamma(t)) = t d(x, y)
    """
    _require_same_space(x, y)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"geodesic parameter must lie in [0, 1], got {t}")
    if t == 0:
        return x
    if t == 1:
        return y
    space = x.space
    return space.exp(x, t * space.log(x, y))


def geodesic_velocity(x, y, t):
    """
    Velocity of the geodesic from x to y at parameter t.

    Returns:
        numpy.ndarray: Tangent vector at gamma(t) of length d(x, y)
    """
    space = x.space
    if t == 0:
        return space.log(x, y)
    current = geodesic_point(x, y, t)
    if t <= 0.5:
        return -space.log(current, x) / t
    if t == 1:
        return -space.log(y, x)
    return space.log(current, y) / (1.0 - t)


@dataclass(frozen=True, eq=False)
class GeodesicSegment:
    """Constant speed geodesic on [0, 1] between two points."""

    start: SpacePoint
    end: SpacePoint

    def __post_init__(self):
        _require_same_space(self.start, self.end)

    @property
    def space(self):
        return self.start.space

    @property
    def speed(self):
        return distance(self.start, self.end)

    def point_at(self, t):
        return geodesic_point(self.start, self.end, t)

    def sample(self, ts):
        return [self.point_at(float(t)) for t in ts]


def angle_at(vertex, x, y):
    """
    Riemannian angle at ``vertex`` between the geodesics towards x and y.

    Returns:
        float: Angle in [0, pi]

    Raises:
        UndefinedAngleError: If x or y coincides with the vertex
    """
    _require_same_space(vertex, x, y)
    space = vertex.space
    u = space.log(vertex, x)
    w = space.log(vertex, y)
    nu = space.norm(vertex.coords, u)
    nw = space.norm(vertex.coords, w)
    if nu == 0 or nw == 0:
        raise UndefinedAngleError("angle undefined at a point coinciding with an endpoint")
    return safe_arccos(space.inner(vertex.coords, u, w) / (nu * nw))


def comparison_distance(x, y, z, s, t, kappa):
    """
    Comparison distance between gamma_xy(s) and gamma_xz(t).

    Args:
        x, y, z (SpacePoint): Triangle vertices
        s (float): Parameter on the side from x to y
        t (float): Parameter on the side from x to z
        kappa (float): Curvature of the model surface

    Returns:
        float: Distance of the corresponding points of the comparison triangle
    """
    triangle = comparison_triangle(distance(x, y), distance(y, z), distance(z, x), kappa)
    if kappa > 0:
        surface = SphereSpace(2, kappa)
    elif kappa < 0:
        surface = HyperbolicSpace(2, kappa)
    else:
        surface = EuclideanSpace(2)
    vx, vy, vz = (surface.point(vertex, tol=1e-9) for vertex in triangle.vertices)
    return distance(geodesic_point(vx, vy, s), geodesic_point(vx, vz, t))


def sample_in_ball(space, center, radius, rng, count):
    """
    Draw points of the closed ball B(center, radius) with a numpy generator.

    Directions are uniform on the unit sphere of the tangent space at the
    center; radii have density proportional to the area of the model sphere of
    that radius (inverse transform sampling, no rejection).

    Args:
        space (GeodesicSpace): Ambient space
        center (SpacePoint): Ball center
        radius (float): Ball radius, below D_kappa / 2
        rng (numpy.random.Generator): Random source
        count (int): Number of points

    Returns:
        list: SpacePoints inside the ball
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if center.space != space:
        raise IncompatibleSpaceError(f"center belongs to {center.space.label()}, not {space.label()}")
    bound = space.model_diameter
    if not bound.unbounded and radius >= bound.value / 2.0:
        raise InfeasibleError(f"radius {radius} is not below D_kappa / 2 = {bound.value / 2.0}")
    if count == 0:
        return []
    basis = space.tangent_basis(center.coords)
    directions = rng.standard_normal((count, basis.shape[1]))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1.0
    directions /= norms[:, None]
    radii = space.radial_quantiles(radius, rng.random(count))
    return [
        space.exp(center, basis @ (rho * direction))
        for rho, direction in zip(radii, directions)
    ]


def sample_ball(space, center, radius, seed, count):
    """
    Deterministic pseudo-random points of a closed ball.

    Args:
        space (GeodesicSpace): Ambient space
        center (SpacePoint): Ball center
        radius (float): Ball radius
        seed (int): Seed of numpy.random.default_rng
        count (int): Number of points

    Returns:
        list: SpacePoints p with d(center, p) <= radius
    """
    return sample_in_ball(space, center, radius, np.random.default_rng(seed), count)
