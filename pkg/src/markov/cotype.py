"""
Markov Type and Cotype Module

Markov type 2 ratios of point configurations driven by reversible chains, and
the barycentric witness for metric Markov cotype 2 with its certificate
    sum pi_i d(x_i, y_i)^2 + t sum pi_i a_ij d(y_i, y_j)^2
        <= N^2 sum pi_i Abar_t(i, j) d(x_i, x_j)^2.
"""

import math
from dataclasses import dataclass

import numpy as np
import structlog

from src.barycenter.solver import barycenter
from src.diagnostics import CheckReport
from src.errors import IncompatibleSpaceError, InvalidInstanceError, RegimeError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import distance
from src.markov.chains import cesaro_average, matrix_power, validate_chain
from src.transport.measures import DiscreteMeasure

logger = structlog.get_logger(__name__)

BALL_TOL = 1e-12


def squared_distance_matrix(points):
    """Matrix of d(x_i, x_j)^2."""
    n = len(points)
    result = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            result[i, j] = result[j, i] = distance(points[i], points[j]) ** 2
    return result


@dataclass(frozen=True, eq=False)
class PointConfiguration:
    """Points x_1, ..., x_n inside the closed ball (center, radius)."""

    points: tuple
    center: object
    radius: float

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise ValueError("a configuration needs at least one point")
        for point in points:
            if point.space != self.center.space:
                raise IncompatibleSpaceError(
                    f"point of {point.space.label()} in a configuration on {self.center.space.label()}"
                )
            if distance(self.center, point) > self.radius + BALL_TOL:
                raise RegimeError(
                    f"point at distance {distance(self.center, point):.17g} leaves the ball of radius {self.radius}"
                )
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'radius', float(self.radius))

    @property
    def size(self):
        return len(self.points)

    def squared_distances(self):
        return squared_distance_matrix(self.points)


@dataclass(frozen=True)
class TypeRatio:
    """
    Markov type 2 ratio.

    ``unbounded`` marks a zero denominator with a positive numerator (value is
    infinite), ``degenerate`` the 0/0 case reported as 1.
    """

    value: float
    unbounded: bool = False
    degenerate: bool = False

    def to_dict(self):
        return {'value': self.value, 'unbounded': self.unbounded, 'degenerate': self.degenerate}


def _require_instance(config, chain, t):
    if config.size != chain.size:
        raise ValueError(f"configuration has {config.size} points for a {chain.size}-state chain")
    if t < 1:
        raise ValueError(f"t must be at least 1, got {t}")
    validation = validate_chain(chain)
    if not validation:
        raise InvalidInstanceError(f"chain is not reversible and stochastic: {validation.diagnostics}")


def _energy(pi, matrix, squared):
    return float(np.sum(pi[:, None] * matrix * squared))


def markov_type_ratio(config, chain, t):
    """
    Ratio E d(Z_t, Z_0)^2 / (t E d(Z_1, Z_0)^2) for the stationary chain.

    Args:
        config (PointConfiguration): Points x_1, ..., x_n
        chain (ReversibleChain): Chain on n states
        t (int): Number of steps

    Returns:
        TypeRatio: The ratio with its degeneracy flags
    """
    _require_instance(config, chain, t)
    squared = config.squared_distances()
    numerator = _energy(chain.pi, matrix_power(chain.a, t), squared)
    denominator = t * _energy(chain.pi, chain.a, squared)
    if denominator > 0:
        return TypeRatio(numerator / denominator)
    if numerator > 0:
        logger.warning("markov_type_unbounded", numerator=numerator, t=t)
        return TypeRatio(math.inf, unbounded=True)
    logger.info("markov_type_degenerate", t=t)
    return TypeRatio(1.0, degenerate=True)


def _require_cotype_ball(config, cc):
    if not cc.safe_diameter.admits(4.0 * config.radius, tol=BALL_TOL):
        raise RegimeError(
            f"configuration ball radius {config.radius} exceeds D_kappa,epsilon / 4 = {cc.safe_diameter.value / 4.0}"
        )


def cotype_witness(config, chain, t, cc=None):
    """
    Barycentric witness y_i = B(sum_j Abar_t(i, j) delta_{x_j}).

    Args:
        config (PointConfiguration): Points x_1, ..., x_n
        chain (ReversibleChain): Chain on n states
        t (int): Cesaro horizon
        cc (CurvatureClass): Curvature class for the regime checks, or None

    Returns:
        list: SpacePoints y_1, ..., y_n
    """
    _require_instance(config, chain, t)
    epsilon = None
    if cc is not None:
        _require_cotype_ball(config, cc)
        if cc.kappa > 0:
            epsilon = cc.epsilon
    averaged = cesaro_average(chain.a, t)
    witness = []
    for row in averaged:
        row = np.clip(row, 0.0, None)
        mu = DiscreteMeasure(config.points, row / row.sum())
        witness.append(barycenter(mu, epsilon, (config.center,)).point)
    return witness


def cotype_check(config, chain, t, witness, cc, tol=1e-7, fingerprint=''):
    """
    Certify a cotype witness against N = 16 Gamma^2 (2/k) + 1.

    Args:
        config (PointConfiguration): Points x_1, ..., x_n
        chain (ReversibleChain): Chain on n states
        t (int): Cesaro horizon
        witness (list): Points y_1, ..., y_n, any construction
        cc (CurvatureClass): Curvature class providing Gamma and k
        tol (float): Accepted violation
        fingerprint (str): Instance fingerprint

    Returns:
        CheckReport: Report with the smallest constant N this instance needs as extra minimal_n
    """
    _require_instance(config, chain, t)
    _require_cotype_ball(config, cc)
    witness = tuple(witness)
    if len(witness) != config.size:
        raise ValueError(f"witness has {len(witness)} points for {config.size} states")
    if any(y.space != config.center.space for y in witness):
        raise IncompatibleSpaceError("witness points must live in the configuration space")

    pi, a = chain.pi, chain.a
    approximation = float(sum(p * distance(x, y) ** 2 for p, x, y in zip(pi, config.points, witness)))
    witness_squared = squared_distance_matrix(witness)
    lhs = approximation + t * _energy(pi, a, witness_squared)
    spread = _energy(pi, cesaro_average(a, t), config.squared_distances())
    n_constant = effective_constants(cc).cotype_constant
    rhs = n_constant ** 2 * spread

    if spread > 0:
        minimal_n = math.sqrt(lhs / spread)
    else:
        minimal_n = 0.0 if lhs <= 0 else math.inf
    return CheckReport.from_sides('cotype', lhs, rhs, tol, fingerprint, {'minimal_n': minimal_n})
