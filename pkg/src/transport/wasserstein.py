"""
Wasserstein Distance Module

Exact discrete optimal transport between finitely supported measures. Plans
come from the network simplex solver of POT (``ot.emd``); every solution is
certified by complementary slackness on the returned dual potentials before it
is handed back.
"""

from dataclasses import dataclass, field

import numpy as np
import ot
import structlog

from src.diagnostics import ValidationResult
from src.errors import IncompatibleSpaceError, SolverError
from src.geometry.spaces import distance

logger = structlog.get_logger(__name__)

MARGINAL_TOL = 1e-10
CERTIFICATE_TOL = 1e-9
MAX_SIMPLEX_ITERATIONS = 100000


@dataclass(frozen=True, eq=False)
class Coupling:
    """Transport plan between two discrete measures."""

    row_measure: object
    col_measure: object
    matrix: np.ndarray
    certificate: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'matrix': np.asarray(self.matrix).tolist(),
            'certificate': {key: np.asarray(value).tolist() for key, value in self.certificate.items()},
        }


def validate_coupling(plan, tol=MARGINAL_TOL):
    """
    Check the marginal constraints of a coupling.

    Args:
        plan (Coupling): Coupling to check
        tol (float): Allowed absolute marginal violation

    Returns:
        ValidationResult: ok iff all marginals match; diagnostics name the worst row and column
    """
    matrix = np.asarray(plan.matrix, dtype=float)
    rows = len(plan.row_measure.atoms)
    cols = len(plan.col_measure.atoms)
    if matrix.shape != (rows, cols):
        return ValidationResult(False, {'reason': 'shape', 'shape': matrix.shape, 'expected': (rows, cols)})
    if np.any(matrix < -tol):
        worst = np.unravel_index(int(np.argmin(matrix)), matrix.shape)
        return ValidationResult(False, {'reason': 'negative entry', 'entry': tuple(int(i) for i in worst),
                                        'value': float(matrix[worst])})
    row_error = np.abs(matrix.sum(axis=1) - plan.row_measure.weights)
    col_error = np.abs(matrix.sum(axis=0) - plan.col_measure.weights)
    worst_row = int(np.argmax(row_error))
    worst_col = int(np.argmax(col_error))
    diagnostics = {
        'worst_row': worst_row,
        'row_violation': float(row_error[worst_row]),
        'worst_column': worst_col,
        'column_violation': float(col_error[worst_col]),
    }
    ok = diagnostics['row_violation'] <= tol and diagnostics['column_violation'] <= tol
    return ValidationResult(ok, diagnostics)


def cost_matrix(mu1, mu2, p):
    """Matrix of d(x_i, y_j)^p."""
    return np.array([[distance(x, y) ** p for y in mu2.atoms] for x in mu1.atoms])


def _certify(costs, plan, u, v, tol):
    scale = max(1.0, float(np.max(costs))) if costs.size else 1.0
    reduced = costs - u[:, None] - v[None, :]
    feasibility = float(np.min(reduced)) if reduced.size else 0.0
    support = plan > 0
    slackness = float(np.max(np.abs(reduced[support]))) if np.any(support) else 0.0
    return feasibility >= -tol * scale and slackness <= tol * scale, feasibility, slackness


def wasserstein(p, mu1, mu2, tol=CERTIFICATE_TOL, max_iterations=MAX_SIMPLEX_ITERATIONS):
    """
    Exact Wasserstein-p distance and an optimal plan.

    Args:
        p (float): Exponent, at least 1
        mu1 (DiscreteMeasure): First measure
        mu2 (DiscreteMeasure): Second measure
        tol (float): Relative tolerance of the dual certificate
        max_iterations (int): Network simplex iteration cap

    Returns:
        tuple: (cost, Coupling)

    Raises:
        ValueError: If p < 1
        IncompatibleSpaceError: If the measures live in different spaces
        SolverError: If the solver stops early or the certificate fails
    """
    if p < 1:
        raise ValueError(f"Wasserstein exponent must be at least 1, got {p}")
    if mu1.space != mu2.space:
        raise IncompatibleSpaceError(
            f"measures belong to different spaces: {mu1.space.label()} and {mu2.space.label()}"
        )

    costs = cost_matrix(mu1, mu2, p)
    rows = np.flatnonzero(mu1.weights > 0)
    cols = np.flatnonzero(mu2.weights > 0)
    sub_costs = np.ascontiguousarray(costs[np.ix_(rows, cols)])
    a = mu1.weights[rows] / mu1.weights[rows].sum()
    b = mu2.weights[cols] / mu2.weights[cols].sum()

    sub_plan, log = ot.emd(a, b, sub_costs, numItermax=max_iterations, log=True)
    if log.get('result_code', 1) != 1:
        raise SolverError(
            "network simplex did not reach an optimal basis",
            {'result_code': log.get('result_code'), 'warning': log.get('warning')},
        )

    u_sub = np.asarray(log['u'], dtype=float)
    v_sub = np.asarray(log['v'], dtype=float)
    certified, feasibility, slackness = _certify(sub_costs, sub_plan, u_sub, v_sub, tol)
    if not certified:
        raise SolverError(
            "transport plan failed the complementary slackness certificate",
            {'min_reduced_cost': feasibility, 'max_support_slackness': slackness},
        )

    plan = np.zeros_like(costs)
    plan[np.ix_(rows, cols)] = sub_plan
    u = np.zeros(costs.shape[0])
    v = np.zeros(costs.shape[1])
    v[cols] = v_sub
    u[rows] = u_sub
    # potentials of zero-weight atoms only need dual feasibility
    for i in np.setdiff1d(np.arange(costs.shape[0]), rows):
        u[i] = float(np.min(costs[i, cols] - v_sub))
    for j in np.setdiff1d(np.arange(costs.shape[1]), cols):
        v[j] = float(np.min(costs[:, j] - u))

    total = float(np.sum(sub_plan * sub_costs))
    cost = max(total, 0.0) ** (1.0 / p)
    logger.debug("transport_solved", p=p, rows=len(rows), cols=len(cols), cost=cost)
    return cost, Coupling(mu1, mu2, plan, {'u': u, 'v': v})
