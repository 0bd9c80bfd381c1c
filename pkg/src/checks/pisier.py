"""
Pisier Martingale Check Module

For a barycentric martingale Z_0, ..., Z_n over a finite filtration with
values in a ball of radius D_{kappa,epsilon} / 4,
    (k/2) sum_i E d(Z_i, Z_{i-1})^2 <= E d(Z_n, z)^2 - E d(Z_0, z)^2
for every z in the ball.
"""

from dataclasses import dataclass

import structlog

from src.barycenter.martingale import Filtration, conditional_barycenter, random_filtration
from src.checks.base import BaseCheck, CheckReport
from src.diagnostics import ValidationResult
from src.errors import InvalidInstanceError, RegimeError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import distance

logger = structlog.get_logger(__name__)

BALL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MartingaleInstance:
    """Maps Z_0, ..., Z_n on the outcomes of a filtration, inside the ball (center, radius)."""

    filtration: Filtration
    maps: tuple
    center: object
    radius: float

    def __post_init__(self):
        maps = tuple(tuple(zmap) for zmap in self.maps)
        if len(maps) != self.filtration.depth + 1:
            raise ValueError(f"expected {self.filtration.depth + 1} maps, got {len(maps)}")
        for index, zmap in enumerate(maps):
            if len(zmap) != self.filtration.size:
                raise ValueError(f"map {index} has {len(zmap)} values for {self.filtration.size} outcomes")
        object.__setattr__(self, 'maps', maps)

    @property
    def depth(self):
        return self.filtration.depth

    def expectation(self, values):
        """Integral of per-outcome values against the base measure."""
        return float(sum(w * v for w, v in zip(self.filtration.base_measure, values)))


def _is_measurable(zmap, level):
    for atom in level:
        first = zmap[atom[0]]
        if any(not zmap[w].is_close(first, 0.0) for w in atom[1:]):
            return False
    return True


def build_martingale(filtration, terminal, center, radius, epsilon=None):
    """
    Back-propagate a terminal map through conditional barycenters.

    Args:
        filtration (Filtration): Filtration with levels F_0, ..., F_n
        terminal (list): Z_n, a SpacePoint per outcome, constant on the atoms of F_n
        center (SpacePoint): Ball center
        radius (float): Ball radius
        epsilon (float): Diameter margin for the barycenter regime check

    Returns:
        MartingaleInstance: Instance with Z_{i-1} = B(Z_i | F_{i-1})
    """
    terminal = tuple(terminal)
    if len(terminal) != filtration.size:
        raise ValueError(f"terminal map has {len(terminal)} values for {filtration.size} outcomes")
    if not _is_measurable(terminal, filtration.levels[-1]):
        raise InvalidInstanceError("terminal map is not constant on the atoms of the finest level")
    maps = [terminal]
    for level in range(filtration.depth - 1, -1, -1):
        maps.append(tuple(conditional_barycenter(maps[-1], filtration, level, epsilon, (center,))))
    maps.reverse()
    return MartingaleInstance(filtration, tuple(maps), center, float(radius))


def verify_martingale(instance, tol=1e-8, epsilon=None):
    """
    Check measurability, ball containment and the martingale property.

    Args:
        instance (MartingaleInstance): Instance to verify
        tol (float): Accepted distance between Z_{i-1} and B(Z_i | F_{i-1})
        epsilon (float): Diameter margin for the barycenter regime check

    Returns:
        ValidationResult: ok iff every property holds; diagnostics name the worst violation
    """
    filtration = instance.filtration
    for index, zmap in enumerate(instance.maps):
        if not _is_measurable(zmap, filtration.levels[index]):
            return ValidationResult(False, {'reason': 'not adapted', 'level': index})
        far = max(distance(instance.center, value) for value in zmap)
        if far > instance.radius + BALL_TOL:
            return ValidationResult(False, {'reason': 'outside ball', 'level': index, 'distance': far})

    worst_level = None
    worst_error = 0.0
    for index in range(1, len(instance.maps)):
        expected = conditional_barycenter(
            instance.maps[index], filtration, index - 1, epsilon, (instance.center,)
        )
        error = max(distance(a, b) for a, b in zip(instance.maps[index - 1], expected))
        if worst_level is None or error > worst_error:
            worst_level, worst_error = index, error
    diagnostics = {'worst_level': worst_level, 'martingale_error': worst_error}
    return ValidationResult(worst_error <= tol, diagnostics)


def check_pisier(instance, z, cc, tol=1e-7, fingerprint=''):
    """
    Pisier inequality for a barycentric martingale.

    Args:
        instance (MartingaleInstance): Verified martingale instance
        z (SpacePoint): Point of the ball
        cc (CurvatureClass): Curvature class providing k
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: lhs = (k/2) sum_i E d(Z_i, Z_{i-1})^2, rhs = E d(Z_n, z)^2 - E d(Z_0, z)^2

    Raises:
        RegimeError: If the ball or z is out of the regime
        InvalidInstanceError: If the martingale property fails
    """
    if not cc.safe_diameter.admits(4.0 * instance.radius, tol=1e-12):
        raise RegimeError(
            f"martingale ball radius {instance.radius} exceeds D_kappa,epsilon / 4 = {cc.safe_diameter.value / 4.0}"
        )
    if distance(instance.center, z) > instance.radius + BALL_TOL:
        raise RegimeError("the comparison point z must lie in the martingale ball")
    epsilon = cc.epsilon if cc.kappa > 0 else None
    validation = verify_martingale(instance, epsilon=epsilon)
    if not validation:
        logger.warning("invalid_martingale", fingerprint=fingerprint, **validation.diagnostics)
        raise InvalidInstanceError(f"martingale property violated: {validation.diagnostics}")

    k = effective_constants(cc).k
    maps = instance.maps
    increments = sum(
        instance.expectation([distance(a, b) ** 2 for a, b in zip(maps[i], maps[i - 1])])
        for i in range(1, len(maps))
    )
    lhs = (k / 2.0) * increments
    rhs = (
        instance.expectation([distance(value, z) ** 2 for value in maps[-1]])
        - instance.expectation([distance(value, z) ** 2 for value in maps[0]])
    )
    return CheckReport.from_sides('pisier', lhs, rhs, tol, fingerprint)


class PisierCheck(BaseCheck):
    """Random filtrations with 2 to 16 outcomes and depth 1 to 4."""

    name = 'pisier'
    default_tol = 1e-7

    def evaluate_trial(self, rng, index, fingerprint):
        size = int(rng.integers(2, 17))
        depth = int(rng.integers(1, 5))
        filtration = random_filtration(rng, size, depth)
        finest = filtration.levels[-1]
        values = self.sample(rng, len(finest))
        terminal = [None] * size
        for atom, value in zip(finest, values):
            for w in atom:
                terminal[w] = value
        epsilon = self.cc.epsilon if self.cc.kappa > 0 else None
        instance = build_martingale(filtration, terminal, self.center, self.radius, epsilon)
        (z,) = self.sample(rng, 1)
        return check_pisier(instance, z, self.cc, self.tol, fingerprint)
