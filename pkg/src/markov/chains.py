"""
Reversible Chains Module

Finite Markov chains (pi, A) with detailed balance pi_i a_ij = pi_j a_ji,
their Cesaro averages and a generator of random reversible chains. Chains use
the JSON format {"pi": [...], "a": [[...]]}.
"""

from dataclasses import dataclass

import numpy as np

from src.diagnostics import ValidationResult

CHAIN_TOL = 1e-12
STOCHASTIC_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ReversibleChain:
    """
    Probability vector pi and transition matrix a.

    Construction only checks shapes; use validate_chain for the stochastic and
    reversibility invariants.
    """

    pi: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        pi = np.array(self.pi, dtype=float).reshape(-1)
        a = np.array(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {a.shape}")
        if a.shape[0] != pi.shape[0]:
            raise ValueError(f"pi has {pi.shape[0]} entries for a {a.shape[0]}-state matrix")
        if pi.shape[0] == 0:
            raise ValueError("a chain needs at least one state")
        pi.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, 'pi', pi)
        object.__setattr__(self, 'a', a)

    @property
    def size(self):
        return self.pi.shape[0]

    def to_dict(self):
        return {'pi': self.pi.tolist(), 'a': self.a.tolist()}

    @classmethod
    def from_dict(cls, data):
        """
        Build a chain from its JSON form.

        Args:
            data (dict): {"pi": [...], "a": [[...]]}

        Returns:
            ReversibleChain: The chain
        """
        return cls(np.asarray(data['pi'], dtype=float), np.asarray(data['a'], dtype=float))


def validate_chain(chain, tol=CHAIN_TOL):
    """
    Check stochasticity and reversibility.

    Args:
        chain (ReversibleChain): Chain to check
        tol (float): Accepted violation of each invariant

    Returns:
        ValidationResult: ok iff all invariants hold; diagnostics name the worst violation
    """
    pi, a = chain.pi, chain.a
    if np.any(pi < -tol) or abs(float(pi.sum()) - 1.0) > tol:
        return ValidationResult(False, {'reason': 'pi is not a probability vector', 'pi_sum': float(pi.sum())})
    if np.any(a < -tol):
        worst = np.unravel_index(np.argmin(a), a.shape)
        return ValidationResult(False, {'reason': 'negative entry', 'entry': tuple(int(i) for i in worst),
                                        'value': float(a[worst])})
    row_error = np.abs(a.sum(axis=1) - 1.0)
    worst_row = int(np.argmax(row_error))
    if row_error[worst_row] > tol:
        return ValidationResult(False, {'reason': 'row sum', 'row': worst_row,
                                        'violation': float(row_error[worst_row])})
    flow = pi[:, None] * a
    balance = np.abs(flow - flow.T)
    worst = np.unravel_index(np.argmax(balance), balance.shape)
    diagnostics = {
        'reason': 'detailed balance',
        'entry': tuple(int(i) for i in worst),
        'violation': float(balance[worst]),
    }
    return ValidationResult(bool(balance[worst] <= tol), diagnostics)


def _require_stochastic(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"transition matrix must be square, got shape {a.shape}")
    if np.any(a < 0) or np.max(np.abs(a.sum(axis=1) - 1.0)) > STOCHASTIC_TOL:
        raise ValueError("transition matrix must be row-stochastic")
    return a


def matrix_power(a, t):
    """A^t by repeated multiplication."""
    if t < 0:
        raise ValueError(f"exponent must be nonnegative, got {t}")
    a = np.asarray(a, dtype=float)
    result = np.eye(a.shape[0])
    for _ in range(int(t)):
        result = result @ a
    return result


def cesaro_average(a, t):
    """
    Cesaro average (1/t) sum_{s=1}^t A^s.

    Args:
        a (array-like): Row-stochastic matrix
        t (int): Number of powers, at least 1

    Returns:
        numpy.ndarray: The averaged matrix
    """
    if t < 1:
        raise ValueError(f"Cesaro average needs t >= 1, got {t}")
    a = _require_stochastic(a)
    power = np.eye(a.shape[0])
    total = np.zeros_like(a)
    for _ in range(int(t)):
        power = power @ a
        total += power
    return total / t


def random_reversible_chain(rng, n):
    """
    Random reversible chain A = D^-1 S.

    S is a symmetric nonnegative matrix with about a third of its off-diagonal
    entries zeroed and positive row sums; pi is proportional to the row sums.

    Args:
        rng (numpy.random.Generator): Random source
        n (int): Number of states

    Returns:
        ReversibleChain: The chain
    """
    if n < 1:
        raise ValueError(f"a chain needs at least one state, got {n}")
    upper = np.triu(rng.random((n, n)) * (rng.random((n, n)) > 1.0 / 3.0), 1)
    s = upper + upper.T
    s[np.diag_indices(n)] = rng.random(n) * (rng.random(n) < 0.5)
    rows = s.sum(axis=1)
    empty = np.flatnonzero(rows <= 0)
    s[empty, empty] = 1.0
    rows = s.sum(axis=1)
    return ReversibleChain(rows / rows.sum(), s / rows[:, None])
