"""
Lipschitz Extension Module

Finite-scale extension of a map f: Z -> B(o, r) from a subset Z of a finite
configuration in a Euclidean or spherical source space to the whole
configuration, with the Lipschitz ratio certified against
C_epsilon = Gamma (16 Gamma^2 (2/k) + 1).
"""

import math
from dataclasses import dataclass, field

import numpy as np
import structlog
from scipy.optimize import minimize

from src.barycenter.projection import ClosedBall, orthogonal_project
from src.barycenter.solver import barycenter
from src.errors import IncompatibleSpaceError, RegimeError, SolverError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import EuclideanSpace, SpacePoint, SphereSpace, distance, space_from_dict
from src.transport.measures import DiscreteMeasure

logger = structlog.get_logger(__name__)

BALL_TOL = 1e-12
WEIGHTINGS = ('inverse', 'uniform')


@dataclass(frozen=True, eq=False)
class ExtensionInstance:
    """
    Source configuration, the indices Z where f is known and the values f(Z).

    The values live in the closed ball (center, radius) of the target space.
    """

    domain_points: tuple
    z_indices: tuple
    f_values: tuple
    center: SpacePoint
    radius: float

    def __post_init__(self):
        points = tuple(self.domain_points)
        z_indices = tuple(int(i) for i in self.z_indices)
        f_values = tuple(self.f_values)
        if len(points) < 2:
            raise ValueError("an extension instance needs at least two domain points")
        source = points[0].space
        if not isinstance(source, (EuclideanSpace, SphereSpace)):
            raise ValueError(f"source space must be Euclidean or a sphere, got {source.label()}")
        if any(p.space != source for p in points):
            raise IncompatibleSpaceError("domain points belong to different spaces")
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if distance(points[i], points[j]) == 0:
                    raise ValueError(f"domain points {i} and {j} coincide")
        if not z_indices:
            raise ValueError("the subset Z must be nonempty")
        if len(set(z_indices)) != len(z_indices) or any(not 0 <= i < len(points) for i in z_indices):
            raise ValueError(f"z_indices must be distinct indices below {len(points)}, got {list(z_indices)}")
        if len(f_values) != len(z_indices):
            raise ValueError(f"{len(f_values)} values for {len(z_indices)} indices of Z")
        for value in f_values:
            if value.space != self.center.space:
                raise IncompatibleSpaceError("values of f must live in the space of the ball center")
            if distance(self.center, value) > self.radius + BALL_TOL:
                raise RegimeError(
                    f"f value at distance {distance(self.center, value):.17g} leaves the ball of radius {self.radius}"
                )
        object.__setattr__(self, 'domain_points', points)
        object.__setattr__(self, 'z_indices', z_indices)
        object.__setattr__(self, 'f_values', f_values)
        object.__setattr__(self, 'radius', float(self.radius))

    @property
    def source(self):
        return self.domain_points[0].space

    @property
    def target(self):
        return self.center.space

    @property
    def size(self):
        return len(self.domain_points)

    def unknown_indices(self):
        known = set(self.z_indices)
        return [i for i in range(self.size) if i not in known]

    def to_dict(self):
        return {
            'source': self.source.to_dict(),
            'domain_points': [p.to_list() for p in self.domain_points],
            'z_indices': list(self.z_indices),
            'target': self.target.to_dict(),
            'f_values': [v.to_list() for v in self.f_values],
            'center': self.center.to_list(),
            'radius': self.radius,
        }

    @classmethod
    def from_dict(cls, data):
        """
        Load an instance from its JSON representation.

        Args:
            data (dict): Instance as written by to_dict

        Returns:
            ExtensionInstance: The instance
        """
        source = space_from_dict(data['source'])
        target = space_from_dict(data['target'])
        return cls(
            tuple(SpacePoint(source, coords) for coords in data['domain_points']),
            tuple(data['z_indices']),
            tuple(SpacePoint(target, coords) for coords in data['f_values']),
            SpacePoint(target, data['center']),
            float(data['radius']),
        )


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    """Extended values with their Lipschitz constants and the per-sweep history."""

    values: tuple
    lip_original: float
    lip_extended: float
    ratio: float
    certified: bool
    c_ext: float
    history: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            'values': [v.to_list() for v in self.values],
            'lip_original': self.lip_original,
            'lip_extended': self.lip_extended,
            'ratio': self.ratio,
            'certified': self.certified,
            'c_ext': self.c_ext,
            'history': list(self.history),
        }


def _pair_ratio(source_distance, target_distance):
    if source_distance > 0:
        return target_distance / source_distance
    return math.inf if target_distance > 0 else 0.0


def lipschitz_constant(points, values):
    """
    Largest ratio d(v_i, v_j) / d(p_i, p_j) over pairs.

    Args:
        points (list): Domain SpacePoints
        values (list): Image SpacePoints, one per domain point

    Returns:
        float: The Lipschitz constant, 0 for constant maps and infinity when
            two coincident domain points have different values
    """
    if len(points) != len(values):
        raise ValueError(f"{len(points)} points but {len(values)} values")
    if len(points) < 2:
        raise ValueError("a Lipschitz constant needs at least two points")
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            ratio = _pair_ratio(distance(points[i], points[j]), distance(values[i], values[j]))
            if math.isinf(ratio):
                logger.warning("lipschitz_unbounded", first=i, second=j)
                return math.inf
            best = max(best, ratio)
    return best


class LipschitzExtender:
    """
    Block-coordinate descent on the unknown values.

    Each sweep visits the unknown points in index order and tries two
    candidates for each: the barycenter of its nearest neighbors' current
    values and a minimax refinement of its largest ratio by SLSQP in tangent
    coordinates at the ball center. A candidate replaces the current value only
    if it lowers that point's largest ratio, so the Lipschitz constant of the
    map never increases from one sweep to the next.
    """

    def __init__(self, neighbors=4, weighting='inverse', max_sweeps=10000, improvement_tol=1e-8, refine=True):
        """
        Initialize the extender.

        Args:
            neighbors (int): Number of nearest source neighbors in the barycenter candidate
            weighting (str): 'inverse' source distance or 'uniform' neighbor weights
            max_sweeps (int): Sweep cap
            improvement_tol (float): Stop once a sweep improves the constant by less
            refine (bool): Try the minimax refinement candidate
        """
        if neighbors < 1:
            raise ValueError(f"neighbors must be positive, got {neighbors}")
        if weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
        if max_sweeps < 0:
            raise ValueError(f"max_sweeps must be nonnegative, got {max_sweeps}")
        self.neighbors = int(neighbors)
        self.weighting = weighting
        self.max_sweeps = int(max_sweeps)
        self.improvement_tol = float(improvement_tol)
        self.refine = bool(refine)

    @classmethod
    def from_config(cls, config):
        """
        Build an extender from the ``extension`` configuration section.

        Args:
            config (dict): Application configuration

        Returns:
            LipschitzExtender: Configured extender
        """
        section = (config or {}).get('extension', {}) or {}
        return cls(
            neighbors=int(section.get('neighbors', 4)),
            weighting=section.get('weighting', 'inverse'),
            max_sweeps=int(section.get('max_sweeps', 10000)),
            improvement_tol=float(section.get('improvement_tol', 1e-8)),
            refine=bool(section.get('refine', True)),
        )

    def extend(self, instance, cc):
        """
        Extend f to every domain point.

        Args:
            instance (ExtensionInstance): Instance to extend
            cc (CurvatureClass): Curvature class of the target

        Returns:
            ExtensionResult: Values, constants, certification and history

        Raises:
            RegimeError: If the target ball is out of the regime
        """
        target = instance.target
        if target.curvature_upper_bound > cc.kappa:
            raise RegimeError(f"{target.label()} is not CAT({cc.kappa})")
        if not cc.safe_diameter.admits(4.0 * instance.radius, tol=BALL_TOL):
            raise RegimeError(
                f"target ball radius {instance.radius} exceeds D_kappa,epsilon / 4 = {cc.safe_diameter.value / 4.0}"
            )
        c_ext = effective_constants(cc).c_ext
        ball = ClosedBall(instance.center, instance.radius)
        epsilon = cc.epsilon if cc.kappa > 0 else None

        known_points = [instance.domain_points[i] for i in instance.z_indices]
        lip_original = (
            lipschitz_constant(known_points, instance.f_values) if len(known_points) >= 2 else 0.0
        )

        values = [None] * instance.size
        for index, value in zip(instance.z_indices, instance.f_values):
            values[index] = value
        unknown = instance.unknown_indices()
        if unknown:
            start = barycenter(DiscreteMeasure.uniform(instance.f_values), epsilon, (instance.center,)).point
            start = orthogonal_project(ball, start)
            for index in unknown:
                values[index] = start

        source_distances = np.array([
            [distance(p, q) for q in instance.domain_points] for p in instance.domain_points
        ])
        history = [lipschitz_constant(instance.domain_points, values)]
        for sweep in range(self.max_sweeps if unknown else 0):
            for index in unknown:
                self._improve(index, values, source_distances, ball, epsilon)
            history.append(lipschitz_constant(instance.domain_points, values))
            logger.debug("extension_sweep", sweep=sweep, lipschitz=history[-1])
            if history[-2] - history[-1] < self.improvement_tol:
                break

        lip_extended = history[-1]
        if lip_original > 0:
            ratio = lip_extended / lip_original
        else:
            ratio = 1.0 if lip_extended == 0 else math.inf
        certified = bool(ratio <= c_ext)
        if not certified:
            logger.warning("extension_uncertified", ratio=ratio, c_ext=c_ext, sweeps=len(history) - 1)
        else:
            logger.info("extension_certified", ratio=ratio, c_ext=c_ext, sweeps=len(history) - 1)
        return ExtensionResult(tuple(values), lip_original, lip_extended, ratio, certified, c_ext, tuple(history))

    def _local_ratio(self, index, candidate, values, source_distances):
        return max(
            _pair_ratio(source_distances[index, j], distance(candidate, values[j]))
            for j in range(len(values)) if j != index
        )

    def _improve(self, index, values, source_distances, ball, epsilon):
        current = self._local_ratio(index, values[index], values, source_distances)
        best, best_ratio = None, current
        for candidate in (
            self._neighbor_candidate(index, values, source_distances, ball, epsilon),
            self._minimax_candidate(index, values, source_distances, ball, current) if self.refine else None,
        ):
            if candidate is None:
                continue
            ratio = self._local_ratio(index, candidate, values, source_distances)
            if ratio < best_ratio:
                best, best_ratio = candidate, ratio
        if best is not None:
            values[index] = best

    def _neighbor_candidate(self, index, values, source_distances, ball, epsilon):
        others = [j for j in np.argsort(source_distances[index], kind='stable') if j != index]
        nearest = others[:min(self.neighbors, len(others))]
        if self.weighting == 'inverse':
            weights = np.array([1.0 / source_distances[index, j] for j in nearest])
        else:
            weights = np.ones(len(nearest))
        mu = DiscreteMeasure(tuple(values[j] for j in nearest), weights / weights.sum())
        try:
            point = barycenter(mu, epsilon, (ball.center,)).point
        except SolverError as e:
            logger.debug("neighbor_candidate_failed", point=index, error=str(e))
            return None
        return orthogonal_project(ball, point)

    def _minimax_candidate(self, index, values, source_distances, ball, current):
        space = ball.space
        center = ball.center
        basis = space.tangent_basis(center.coords)
        tangent = space.log(center, values[index])
        start = np.array([space.inner(center.coords, basis[:, k], tangent) for k in range(basis.shape[1])])
        others = [j for j in range(len(values)) if j != index]

        def point_at(w):
            return space.exp(center, basis @ w)

        def ratios(x):
            point = point_at(x[:-1])
            return np.array([x[-1] - distance(point, values[j]) / source_distances[index, j] for j in others])

        constraints = [
            {'type': 'ineq', 'fun': ratios},
            {'type': 'ineq', 'fun': lambda x: ball.radius ** 2 - float(np.dot(x[:-1], x[:-1]))},
        ]
        try:
            result = minimize(
                lambda x: x[-1],
                np.append(start, current),
                method='SLSQP',
                constraints=constraints,
                options={'maxiter': 200, 'ftol': 1e-12},
            )
        except (ValueError, OverflowError) as e:
            logger.debug("minimax_refinement_failed", point=index, error=str(e))
            return None
        if not np.all(np.isfinite(result.x)):
            logger.debug("minimax_refinement_failed", point=index, message=result.message)
            return None
        return orthogonal_project(ball, point_at(result.x[:-1]))


def extend(instance, cc, neighbors=4, weighting='inverse', max_sweeps=10000, improvement_tol=1e-8):
    """
    Extend an instance with a LipschitzExtender.

    Args:
        instance (ExtensionInstance): Instance to extend
        cc (CurvatureClass): Curvature class of the target
        neighbors (int): Neighbor count, capped at |S| - 1
        weighting (str): 'inverse' or 'uniform'
        max_sweeps (int): Sweep cap
        improvement_tol (float): Stopping threshold on the improvement per sweep

    Returns:
        ExtensionResult: The certified or uncertified extension
    """
    extender = LipschitzExtender(neighbors, weighting, max_sweeps, improvement_tol)
    return extender.extend(instance, cc)
