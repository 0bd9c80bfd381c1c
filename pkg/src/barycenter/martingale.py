"""
Filtrations and conditional barycenters on finite probability spaces.

A filtration over Omega = {0, ..., n-1} is a chain of partitions, each level
refining the previous one. Conditional barycenters replace the conditional
expectation of linear martingale theory.
"""

from dataclasses import dataclass

import numpy as np

from src.barycenter.solver import barycenter
from src.transport.measures import DiscreteMeasure

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Filtration:
    """Nested partitions F_0, ..., F_n of a finite ground set with a full-support measure."""

    size: int
    levels: tuple
    base_measure: np.ndarray

    def __post_init__(self):
        levels = tuple(tuple(tuple(sorted(int(w) for w in atom)) for atom in level) for level in self.levels)
        weights = np.array(self.base_measure, dtype=float).reshape(-1)
        if weights.shape[0] != self.size:
            raise ValueError(f"base measure has {weights.shape[0]} weights for {self.size} outcomes")
        if np.any(weights <= 0):
            raise ValueError("base measure must give positive mass to every outcome")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"base measure sums to {weights.sum():.17g}, not 1")
        if not levels:
            raise ValueError("a filtration needs at least one level")
        ground = list(range(self.size))
        for index, level in enumerate(levels):
            if sorted(w for atom in level for w in atom) != ground:
                raise ValueError(f"level {index} is not a partition of the ground set")
            if any(not atom for atom in level):
                raise ValueError(f"level {index} contains an empty atom")
        for index in range(1, len(levels)):
            coarse = {w: atom for atom in levels[index - 1] for w in atom}
            for atom in levels[index]:
                if len({coarse[w] for w in atom}) != 1:
                    raise ValueError(f"level {index} does not refine level {index - 1}")
        weights.setflags(write=False)
        object.__setattr__(self, 'levels', levels)
        object.__setattr__(self, 'base_measure', weights)

    @property
    def depth(self):
        """Index n of the finest level."""
        return len(self.levels) - 1

    def atom_of(self, omega, level):
        """Atom of the given level containing outcome omega."""
        for atom in self.levels[level]:
            if omega in atom:
                return atom
        raise ValueError(f"outcome {omega} is not in the ground set")

    def to_dict(self):
        return {
            'size': self.size,
            'levels': [[list(atom) for atom in level] for level in self.levels],
            'base_measure': self.base_measure.tolist(),
        }


def random_filtration(rng, size, depth):
    """
    Random filtration by recursive partition splitting.

    Level 0 is {Omega}; each further level splits every atom with at least two
    outcomes into two random nonempty parts with probability 0.6. The base
    measure is Dirichlet(1, ..., 1).

    Args:
        rng (numpy.random.Generator): Random source
        size (int): Number of outcomes
        depth (int): Index n of the finest level

    Returns:
        Filtration: The filtration with depth + 1 levels
    """
    if size < 1:
        raise ValueError(f"ground set must be nonempty, got size {size}")
    levels = [[tuple(range(size))]]
    for _ in range(depth):
        refined = []
        for atom in levels[-1]:
            if len(atom) >= 2 and rng.random() < 0.6:
                shuffled = [int(w) for w in rng.permutation(atom)]
                cut = int(rng.integers(1, len(atom)))
                refined.append(tuple(sorted(shuffled[:cut])))
                refined.append(tuple(sorted(shuffled[cut:])))
            else:
                refined.append(atom)
        levels.append(refined)
    weights = rng.dirichlet(np.ones(size))
    return Filtration(size, tuple(levels), weights / weights.sum())


def conditional_barycenter(zmap, filtration, level, epsilon=None, centers=()):
    """
    Conditional barycenter of a map with respect to one level of a filtration.

    Args:
        zmap (list): SpacePoint per outcome
        filtration (Filtration): Filtration
        level (int): Level index
        epsilon (float): Diameter margin for the regime check, or None
        centers (tuple): Candidate ball centers for the regime check

    Returns:
        list: SpacePoint per outcome, constant on the atoms of the level
    """
    if len(zmap) != filtration.size:
        raise ValueError(f"map has {len(zmap)} values for {filtration.size} outcomes")
    centers_by_atom = {}
    result = []
    for omega in range(filtration.size):
        atom = filtration.atom_of(omega, level)
        if len(atom) == 1:
            result.append(zmap[omega])
            continue
        if atom not in centers_by_atom:
            weights = filtration.base_measure[list(atom)]
            local = DiscreteMeasure(tuple(zmap[w] for w in atom), weights / weights.sum())
            centers_by_atom[atom] = barycenter(local, epsilon, centers).point
        result.append(centers_by_atom[atom])
    return result
