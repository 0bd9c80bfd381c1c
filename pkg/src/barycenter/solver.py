"""
Barycenter Solver Module

Frechet barycenters of discrete measures on small balls of CAT(kappa) spaces.
The objective z -> sum_i w_i d(z, x_i)^2 is minimized by the Karcher
iteration z <- exp_z(sum_i w_i log_z x_i), started at the extrinsic chart mean,
with step halving as a safeguard; the Euclidean case is solved in closed form.
"""

from dataclasses import dataclass

import numpy as np
import structlog
from scipy.optimize import minimize

from src.errors import IncompatibleSpaceError, RegimeError, SolverError
from src.geometry.model_space import diameter_of_model
from src.geometry.spaces import EuclideanSpace, ProductSpace, distance

logger = structlog.get_logger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 100000
DEFAULT_STEP = 0.5
DESCENT_FRACTION = 1e-4
MAX_HALVINGS = 60
REGIME_TOL = 1e-12
# accuracy of the minimax enclosing radius
ENCLOSING_TOL = 1e-9


def _require_space(z, mu):
    if z.space != mu.space:
        raise IncompatibleSpaceError(
            f"point in {z.space.label()} but measure on {mu.space.label()}"
        )


def frechet_objective(z, mu):
    """
    Frechet objective sum_i w_i d(z, x_i)^2.

    Args:
        z (SpacePoint): Evaluation point
        mu (DiscreteMeasure): Measure

    Returns:
        float: Objective value
    """
    _require_space(z, mu)
    return float(sum(w * distance(z, x) ** 2 for x, w in zip(mu.atoms, mu.weights) if w > 0))


def frechet_gradient(z, mu):
    """Riemannian gradient -2 sum_i w_i log_z(x_i) of the Frechet objective."""
    _require_space(z, mu)
    space = z.space
    gradient = np.zeros(space.chart_dim)
    for x, w in zip(mu.atoms, mu.weights):
        if w > 0:
            gradient -= 2.0 * w * space.log(z, x)
    return gradient


def extrinsic_mean(mu):
    """Weighted chart mean retracted onto the space."""
    coords = np.average(mu.coords(), axis=0, weights=mu.weights)
    return mu.space.project_point(coords)


def _covering_radius(center, atoms):
    return max(distance(center, x) for x in atoms)


def _candidate_center(mu, centers=()):
    atoms = [x for x, w in zip(mu.atoms, mu.weights) if w > 0]
    candidates = [extrinsic_mean(mu)] + atoms + list(centers)
    radii = [_covering_radius(c, atoms) for c in candidates]
    best = int(np.argmin(radii))
    return candidates[best], radii[best], atoms


def _enclosing_radius(start, start_radius, atoms):
    """
    Minimax radius of a ball containing ``atoms``.

    Minimizes s subject to d(c, x_i)^2 <= s over centers c = exp_start(B w)
    with |w| <= start_radius, B an orthonormal tangent basis at ``start``.
    """
    space = start.space
    basis = space.tangent_basis(start.coords)

    def center_at(w):
        return space.exp(start, basis @ w)

    def slack(x):
        center = center_at(x[:-1])
        return np.array([x[-1] - distance(center, a) ** 2 for a in atoms])

    constraints = [
        {'type': 'ineq', 'fun': slack},
        {'type': 'ineq', 'fun': lambda x: start_radius ** 2 - float(np.dot(x[:-1], x[:-1]))},
    ]
    try:
        result = minimize(
            lambda x: x[-1],
            np.append(np.zeros(basis.shape[1]), start_radius ** 2),
            method='SLSQP',
            constraints=constraints,
            options={'maxiter': 200, 'ftol': 1e-15},
        )
    except (ValueError, OverflowError) as e:
        logger.debug("enclosing_radius_failed", error=str(e))
        return start_radius
    if not np.all(np.isfinite(result.x)):
        return start_radius
    return min(start_radius, _covering_radius(center_at(result.x[:-1]), atoms))


def support_radius(mu, centers=()):
    """
    Radius of the smallest ball containing the support.

    The best of the extrinsic mean, the atoms and the optional ``centers`` is
    refined by a minimax solve over the ball center.

    Args:
        mu (DiscreteMeasure): Measure on a single model space
        centers (tuple): Additional starting centers

    Returns:
        float: Minimal enclosing radius, accurate to about ENCLOSING_TOL
    """
    start, radius, atoms = _candidate_center(mu, centers)
    return _enclosing_radius(start, radius, atoms)


def _is_flat(space):
    if isinstance(space, EuclideanSpace):
        return True
    if isinstance(space, ProductSpace):
        return all(_is_flat(factor) for factor in space.factors)
    return False


def check_support_regime(mu, epsilon=None, centers=()):
    """
    Reject measures outside the uniqueness regime of the barycenter.

    With epsilon the support must fit in a closed ball of radius
    D_{kappa,epsilon} / 2, without it in an open ball of radius D_kappa / 2.
    Product measures are checked factor by factor. The minimax enclosing
    radius is only computed when no candidate center already fits.

    Args:
        mu (DiscreteMeasure): Measure to check
        epsilon (float): Diameter margin or None
        centers (tuple): Additional candidate ball centers, e.g. a known sampling center

    Raises:
        RegimeError: If the support is too spread out
    """
    space = mu.space
    if isinstance(space, ProductSpace):
        for index in range(len(space.factors)):
            check_support_regime(
                mu.marginal(index), epsilon, tuple(space.factor_point(c, index) for c in centers)
            )
        return
    bound = diameter_of_model(space.curvature_upper_bound)
    if bound.unbounded:
        return
    if epsilon is None:
        limit = bound.value / 2.0

        def inside(r, tol):
            return r < limit
    else:
        limit = (1.0 - epsilon) * bound.value / 2.0

        def inside(r, tol):
            return r <= limit + tol

    start, radius, atoms = _candidate_center(mu, centers)
    if inside(radius, REGIME_TOL):
        return
    radius = _enclosing_radius(start, radius, atoms)
    if not inside(radius, ENCLOSING_TOL):
        logger.warning("barycenter_out_of_regime", space=space.label(), radius=radius, limit=limit)
        raise RegimeError(
            f"support radius {radius:.17g} exceeds the uniqueness radius {limit:.17g} on {space.label()}"
        )


@dataclass(frozen=True, eq=False)
class BarycenterResult:
    """Minimizer of the Frechet objective with convergence data."""

    point: object
    objective: float
    gradient_norm: float
    iterations: int

    def to_dict(self):
        return {
            'point': self.point.to_list(),
            'objective': self.objective,
            'gradient_norm': self.gradient_norm,
            'iterations': self.iterations,
        }


class BarycenterSolver:
    """Riemannian gradient descent for Frechet barycenters."""

    def __init__(self, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS,
                 initial_step=DEFAULT_STEP):
        """
        Initialize the solver.

        Args:
            tolerance (float): Target Riemannian gradient norm
            max_iterations (int): Iteration cap
            initial_step (float): First trial step of every line search
        """
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.initial_step = initial_step

    @classmethod
    def from_config(cls, config):
        """
        Build a solver from the ``solver.barycenter`` configuration section.

        Args:
            config (dict): Full configuration dictionary

        Returns:
            BarycenterSolver: Configured solver
        """
        section = (config or {}).get('solver', {}).get('barycenter', {})
        return cls(
            tolerance=float(section.get('tolerance', DEFAULT_TOLERANCE)),
            max_iterations=int(section.get('max_iterations', DEFAULT_MAX_ITERATIONS)),
            initial_step=float(section.get('initial_step', DEFAULT_STEP)),
        )

    def solve(self, mu, epsilon=None, centers=()):
        """
        Compute the barycenter of a measure.

        Args:
            mu (DiscreteMeasure): Measure in the uniqueness regime
            epsilon (float): Diameter margin used by the regime check, or None
            centers (tuple): Additional candidate centers for the regime check

        Returns:
            BarycenterResult: The barycenter

        Raises:
            RegimeError: If the support is outside the uniqueness regime
            SolverError: If the iteration cap is reached or the line search fails
        """
        merged = mu.merged()
        if len(merged.atoms) == 1:
            return BarycenterResult(merged.atoms[0], 0.0, 0.0, 0)

        check_support_regime(merged, epsilon, centers)
        space = merged.space

        if _is_flat(space):
            point = space.point(np.average(merged.coords(), axis=0, weights=merged.weights))
            gradient = frechet_gradient(point, merged)
            return BarycenterResult(
                point, frechet_objective(point, merged), space.norm(point.coords, gradient), 0
            )

        return self._descend(merged)

    def _descend(self, mu):
        space = mu.space
        z = extrinsic_mean(mu)
        value = frechet_objective(z, mu)
        gradient = frechet_gradient(z, mu)
        grad_norm = space.norm(z.coords, gradient)

        for iteration in range(self.max_iterations):
            if grad_norm <= self.tolerance:
                logger.debug("barycenter_converged", iterations=iteration, objective=value,
                             gradient_norm=grad_norm)
                return BarycenterResult(z, value, grad_norm, iteration)

            # a step is taken when it shrinks the gradient or decreases the objective
            step = self.initial_step
            for _ in range(MAX_HALVINGS):
                trial = space.exp(z, -step * gradient)
                trial_gradient = frechet_gradient(trial, mu)
                trial_norm = space.norm(trial.coords, trial_gradient)
                trial_value = frechet_objective(trial, mu)
                if trial_norm < grad_norm or trial_value < value - DESCENT_FRACTION * step * grad_norm ** 2:
                    break
                step *= 0.5
            else:
                raise SolverError(
                    "barycenter iteration stalled at the resolution of the objective",
                    {'iteration': iteration, 'objective': value, 'gradient_norm': grad_norm},
                )

            z, value, gradient, grad_norm = trial, trial_value, trial_gradient, trial_norm

        raise SolverError(
            "barycenter solver reached the iteration cap",
            {'iterations': self.max_iterations, 'objective': value, 'gradient_norm': grad_norm},
        )


_default_solver = BarycenterSolver()


def barycenter(mu, epsilon=None, centers=()):
    """
    Frechet barycenter with the default solver settings.

    Args:
        mu (DiscreteMeasure): Measure
        epsilon (float): Diameter margin for the regime check, or None
        centers (tuple): Additional candidate centers for the regime check

    Returns:
        BarycenterResult: The barycenter
    """
    return _default_solver.solve(mu, epsilon, centers)
