"""
Discrete Measures Module

Finitely supported probability measures on a geodesic space, their
pushforwards and factor marginals, and the JSON measure format
{"space": <space>, "atoms": [[...]], "weights": [...]}.
"""

from dataclasses import dataclass

import numpy as np

from src.errors import IncompatibleSpaceError
from src.geometry.spaces import ProductSpace, SpacePoint, space_from_dict

WEIGHT_SUM_TOL = 1e-12
MERGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability measure with finitely many atoms."""

    atoms: tuple
    weights: np.ndarray

    def __post_init__(self):
        atoms = tuple(self.atoms)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if not atoms:
            raise ValueError("a measure needs at least one atom")
        if len(atoms) != weights.shape[0]:
            raise ValueError(f"{len(atoms)} atoms but {weights.shape[0]} weights")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {weights.sum():.17g}, not 1")
        space = atoms[0].space
        for atom in atoms[1:]:
            if atom.space != space:
                raise IncompatibleSpaceError(
                    f"atoms belong to different spaces: {space.label()} and {atom.space.label()}"
                )
        weights.setflags(write=False)
        object.__setattr__(self, 'atoms', atoms)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def uniform(cls, atoms):
        """Uniform measure on a list of points."""
        atoms = tuple(atoms)
        return cls(atoms, np.full(len(atoms), 1.0 / len(atoms)))

    @classmethod
    def dirac(cls, point):
        return cls((point,), np.ones(1))

    @property
    def space(self):
        return self.atoms[0].space

    @property
    def support_size(self):
        return int(np.count_nonzero(self.weights))

    def coords(self):
        """Atom coordinates stacked row-wise."""
        return np.vstack([atom.coords for atom in self.atoms])

    def merged(self, tol=MERGE_TOL):
        """
        Merge numerically coincident atoms and drop zero weights.

        Args:
            tol (float): Maximal coordinate difference of merged atoms

        Returns:
            DiscreteMeasure: Measure with distinct atoms in first-seen order
        """
        kept_atoms = []
        kept_weights = []
        for atom, weight in zip(self.atoms, self.weights):
            if weight == 0:
                continue
            for index, existing in enumerate(kept_atoms):
                if existing.is_close(atom, tol):
                    kept_weights[index] += weight
                    break
            else:
                kept_atoms.append(atom)
                kept_weights.append(float(weight))
        weights = np.array(kept_weights)
        return DiscreteMeasure(tuple(kept_atoms), weights / weights.sum())

    def marginal(self, index):
        """
        Marginal of a product measure on one factor.

        Args:
            index (int): Factor index

        Returns:
            DiscreteMeasure: Pushforward under the factor projection
        """
        space = self.space
        if not isinstance(space, ProductSpace):
            raise ValueError(f"marginals need a product space, got {space.label()}")
        return pushforward(self, lambda x: space.factor_point(x, index))

    def to_dict(self):
        return {
            'space': self.space.to_dict(),
            'atoms': [atom.to_list() for atom in self.atoms],
            'weights': self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        """
        Load a measure from its JSON representation.

        Args:
            data (dict): Measure in the JSON measure format

        Returns:
            DiscreteMeasure: The measure
        """
        space = space_from_dict(data['space'])
        atoms = tuple(SpacePoint(space, coords) for coords in data['atoms'])
        return cls(atoms, np.asarray(data['weights'], dtype=float))


def pushforward(mu, point_map, tol=MERGE_TOL):
    """
    Image measure of mu under a point map.

    Weights are preserved and images closer than ``tol`` in coordinates are
    merged by adding their weights.

    Args:
        mu (DiscreteMeasure): Source measure
        point_map (callable): SpacePoint -> SpacePoint
        tol (float): Merge tolerance

    Returns:
        DiscreteMeasure: The pushforward
    """
    images = tuple(point_map(atom) for atom in mu.atoms)
    return DiscreteMeasure(images, mu.weights.copy()).merged(tol)
