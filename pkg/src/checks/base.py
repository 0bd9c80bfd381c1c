"""
Base Check Module

This module defines the base class and the registry shared by all inequality
checks of the lab. A check turns a seeded trial into a CheckReport comparing
the two sides of an inequality.
"""

from abc import ABC, abstractmethod

import numpy as np
import structlog

from src.diagnostics import CSV_COLUMNS, CheckReport
from src.errors import RegimeError
from src.geometry.model_space import effective_constants
from src.geometry.spaces import distance, sample_in_ball
from src.transport.measures import DiscreteMeasure

logger = structlog.get_logger(__name__)

__all__ = ['CSV_COLUMNS', 'CheckReport', 'CheckRegistry', 'BaseCheck', 'region_diameter', 'require_diameter']


class CheckRegistry:
    """Registry for inequality checks."""

    _checks = {}

    @classmethod
    def register(cls, check_name, check_class):
        """
        Register a check class.

        Args:
            check_name (str): Name used on the command line and in manifests
            check_class (class): BaseCheck subclass
        """
        cls._checks[check_name] = check_class

    @classmethod
    def get_check(cls, check_name):
        """
        Get a check class by name.

        Args:
            check_name (str): Name of the check

        Returns:
            class: Check class or None if not found
        """
        return cls._checks.get(check_name)

    @classmethod
    def names(cls):
        return sorted(cls._checks)

    @classmethod
    def clear(cls):
        cls._checks = {}



class BaseCheck(ABC):
    """Base class for seeded inequality checks."""

    name = None
    default_tol = 1e-9

    def __init__(self, space, cc, radius=None, tol=None, params=None):
        """
        Initialize the check.

        Args:
            space (GeodesicSpace): Space on which trials are drawn
            cc (CurvatureClass): Curvature class whose constants are tested
            radius (float): Sampling radius around the space origin
            tol (float): Tolerance override
            params (dict): Check-specific parameters
        """
        if space.curvature_upper_bound > cc.kappa:
            raise RegimeError(
                f"{space.label()} is not CAT({cc.kappa}); its curvature bound is {space.curvature_upper_bound}"
            )
        self.space = space
        self.cc = cc
        self.constants = effective_constants(cc)
        self.tol = self.default_tol if tol is None else float(tol)
        self.params = dict(params or {})
        self.center = space.origin()
        self.radius = self.default_radius() if radius is None else float(radius)
        self.validate()

    def default_radius(self):
        """Largest radius allowed by the check, or 1 in the unbounded case."""
        safe = self.cc.safe_diameter
        return 1.0 if safe.unbounded else safe.value / 4.0

    def validate(self):
        """Reject sampling radii outside the regime of the inequality."""
        safe = self.cc.safe_diameter
        if not safe.admits(4.0 * self.radius, tol=1e-12):
            raise RegimeError(
                f"{self.name}: radius {self.radius} exceeds D_kappa,epsilon / 4 = {safe.value / 4.0}"
            )

    def param(self, key, default):
        """Check parameter converted to the type of its default."""
        value = self.params.get(key, default)
        return type(default)(value) if default is not None else value

    def flag(self, key):
        value = self.params.get(key, False)
        if isinstance(value, str):
            return value.strip().lower() in ('true', '1', 'yes')
        return bool(value)

    def fingerprint(self, seed, index):
        """
        Replayable description of a trial.

        Args:
            seed (int): Sweep seed
            index (int): Trial index

        Returns:
            str: Fingerprint with a zero-padded trial index
        """
        parts = [
            self.name,
            self.space.label(),
            f"kappa={self.cc.kappa!r}",
            f"epsilon={self.cc.epsilon!r}",
            f"radius={self.radius!r}",
        ]
        parts.extend(f"{key}={self.params[key]}" for key in sorted(self.params))
        parts.append(f"seed={seed}")
        parts.append(f"trial={index:08d}")
        return '|'.join(parts)

    def run_trial(self, seed, index):
        """
        Run one seeded trial.

        Args:
            seed (int): Sweep seed
            index (int): Trial index

        Returns:
            CheckReport: Report of the trial
        """
        rng = np.random.default_rng([int(seed), int(index)])
        return self.evaluate_trial(rng, index, self.fingerprint(seed, index))

    @abstractmethod
    def evaluate_trial(self, rng, index, fingerprint):
        """
        Generate and evaluate one instance.

        Args:
            rng (numpy.random.Generator): Trial random source
            index (int): Trial index
            fingerprint (str): Fingerprint of the trial

        Returns:
            CheckReport: Report of the trial
        """

    def sample(self, rng, count, radius=None):
        """Points of the sampling ball around the space origin."""
        return sample_in_ball(self.space, self.center, self.radius if radius is None else radius, rng, count)

    def random_measure(self, rng, max_atoms=8, radius=None):
        """Measure with 1..max_atoms ball samples and Dirichlet(1, ..., 1) weights."""
        count = int(rng.integers(1, max_atoms + 1))
        atoms = self.sample(rng, count, radius)
        weights = rng.dirichlet(np.ones(count))
        return DiscreteMeasure(tuple(atoms), weights / weights.sum())


def region_diameter(points):
    """Largest pairwise distance of a finite set of points."""
    points = list(points)
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            best = max(best, distance(points[i], points[j]))
    return best


def require_diameter(points, cc, label):
    """
    Enforce diam(points) <= D_{kappa,epsilon} / 2.

    Raises:
        RegimeError: If the points are too spread out
    """
    safe = cc.safe_diameter
    diameter = region_diameter(points)
    if not safe.admits(2.0 * diameter, tol=1e-12):
        logger.warning("region_out_of_regime", check=label, diameter=diameter)
        raise RegimeError(f"{label}: diameter {diameter:.17g} exceeds D_kappa,epsilon / 2 = {safe.value / 2.0}")
