"""
Unit tests for discrete measures and exact Wasserstein distances.
"""

import itertools
import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np

# Add the parent directory to sys.path to allow for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import IncompatibleSpaceError, SolverError
from src.geometry.spaces import EuclideanSpace, ProductSpace, SphereSpace, distance, sample_ball
from src.transport.measures import DiscreteMeasure, pushforward
from src.transport.wasserstein import validate_coupling, wasserstein


class TestDiscreteMeasure(unittest.TestCase):
    """Test cases for discrete probability measures."""

    def setUp(self):
        """Set up test fixtures."""
        self.space = EuclideanSpace(2)
        self.points = [self.space.point(c) for c in ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0])]

    def test_weights_must_sum_to_one(self):
        """Test rejection of unnormalized weights."""
        with self.assertRaises(ValueError):
            DiscreteMeasure(tuple(self.points), [0.5, 0.5, 0.5])

    def test_negative_weights(self):
        """Test rejection of negative weights."""
        with self.assertRaises(ValueError):
            DiscreteMeasure(tuple(self.points), [1.5, -0.5, 0.0])

    def test_length_mismatch(self):
        """Test rejection of atom and weight counts that differ."""
        with self.assertRaises(ValueError):
            DiscreteMeasure(tuple(self.points), [1.0])

    def test_mixed_spaces(self):
        """Test rejection of atoms from different spaces."""
        other = EuclideanSpace(3).origin()
        with self.assertRaises(IncompatibleSpaceError):
            DiscreteMeasure((self.points[0], other), [0.5, 0.5])

    def test_merged(self):
        """Test merging of coincident atoms and removal of zero weights."""
        mu = DiscreteMeasure(
            (self.points[0], self.points[1], self.space.point([0.0, 0.0]), self.points[2]),
            [0.25, 0.25, 0.5, 0.0],
        )
        merged = mu.merged()
        self.assertEqual(len(merged.atoms), 2)
        np.testing.assert_allclose(merged.weights, [0.75, 0.25])
        self.assertEqual(mu.support_size, 3)

    def test_pushforward(self):
        """Test that the image measure keeps the weights and merges images."""
        mu = DiscreteMeasure.uniform(self.points)
        image = pushforward(mu, lambda x: self.space.point([x.coords[0], 0.0]))
        self.assertEqual(len(image.atoms), 2)
        np.testing.assert_allclose(sorted(image.weights), [1.0 / 3.0, 2.0 / 3.0])

    def test_marginal(self):
        """Test the factor marginals of a product measure."""
        product = ProductSpace((SphereSpace(2), EuclideanSpace(1)))
        a = product.point([1.0, 0.0, 0.0, 3.0])
        b = product.point([0.0, 1.0, 0.0, 3.0])
        mu = DiscreteMeasure((a, b), [0.3, 0.7])
        self.assertEqual(len(mu.marginal(0).atoms), 2)
        line = mu.marginal(1)
        self.assertEqual(len(line.atoms), 1)
        self.assertAlmostEqual(float(line.weights[0]), 1.0)
        with self.assertRaises(ValueError):
            DiscreteMeasure.uniform(self.points).marginal(0)

    def test_from_dict(self):
        """Test loading a measure from the JSON measure format."""
        data = {
            'space': {'kind': 'sphere', 'dim': 2, 'kappa': 1.0},
            'atoms': [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            'weights': [0.5, 0.5],
        }
        mu = DiscreteMeasure.from_dict(data)
        self.assertEqual(mu.space, SphereSpace(2, 1.0))
        self.assertEqual(mu.to_dict(), data)


class TestWasserstein(unittest.TestCase):
    """Test cases for the exact Wasserstein distance."""

    def setUp(self):
        """Set up test fixtures."""
        self.sphere = SphereSpace(2)
        self.center = self.sphere.origin()

    def _uniform(self, seed, count):
        return DiscreteMeasure.uniform(sample_ball(self.sphere, self.center, 0.7, seed, count))

    def test_identical_measures(self):
        """Test that a measure is at distance zero from itself."""
        mu = self._uniform(1, 5)
        cost, coupling = wasserstein(2.0, mu, mu)
        self.assertAlmostEqual(cost, 0.0, places=12)
        self.assertTrue(validate_coupling(coupling))

    def test_dirac_masses(self):
        """Test that W_p between Dirac masses is the distance of their atoms."""
        x, y = sample_ball(self.sphere, self.center, 0.7, 2, 2)
        for p in (1.0, 2.0, 3.0):
            cost, _ = wasserstein(p, DiscreteMeasure.dirac(x), DiscreteMeasure.dirac(y))
            self.assertAlmostEqual(cost, distance(x, y), places=12)

    def test_matches_permutation_search(self):
        """Test against brute force over permutations for uniform measures."""
        for seed in range(3):
            mu = self._uniform(10 + seed, 5)
            nu = self._uniform(20 + seed, 5)
            for p in (1.0, 2.0):
                best = min(
                    sum(distance(x, nu.atoms[j]) ** p for x, j in zip(mu.atoms, perm)) / 5.0
                    for perm in itertools.permutations(range(5))
                )
                cost, coupling = wasserstein(p, mu, nu)
                self.assertAlmostEqual(cost, best ** (1.0 / p), places=9)
                self.assertTrue(validate_coupling(coupling))

    def test_w1_below_w2(self):
        """Test the ordering W1 <= W2 of random measures."""
        mu = DiscreteMeasure(
            tuple(sample_ball(self.sphere, self.center, 0.7, 5, 4)), [0.1, 0.2, 0.3, 0.4]
        )
        nu = self._uniform(6, 3)
        w1, _ = wasserstein(1.0, mu, nu)
        w2, _ = wasserstein(2.0, mu, nu)
        self.assertLessEqual(w1, w2 + 1e-12)

    def test_metric_properties(self):
        """Test symmetry and the triangle inequality of W_p on random measures."""
        for seed in range(10):
            mu = self._uniform(30 + seed, 4)
            nu = DiscreteMeasure(tuple(sample_ball(self.sphere, self.center, 0.7, 50 + seed, 3)), [0.2, 0.3, 0.5])
            rho = self._uniform(70 + seed, 5)
            for p in (1.0, 2.0):
                forward, _ = wasserstein(p, mu, nu)
                backward, _ = wasserstein(p, nu, mu)
                self.assertAlmostEqual(forward, backward, places=10)
                via, _ = wasserstein(p, mu, rho)
                onward, _ = wasserstein(p, rho, nu)
                self.assertLessEqual(forward, via + onward + 1e-10)

    def test_pushforward_scales_distance(self):
        """Test W_p(f#mu, f#nu) = L W_p(mu, nu) for isometries and dilations."""
        mu = self._uniform(3, 4)
        nu = self._uniform(4, 4)
        angle = 0.8
        rotation = np.array(
            [[math.cos(angle), -math.sin(angle), 0.0], [math.sin(angle), math.cos(angle), 0.0], [0.0, 0.0, 1.0]]
        )

        def rotate(x):
            return self.sphere.point(rotation @ x.coords)

        for p in (1.0, 2.0):
            before, _ = wasserstein(p, mu, nu)
            after, _ = wasserstein(p, pushforward(mu, rotate), pushforward(nu, rotate))
            self.assertAlmostEqual(after, before, places=10)

        plane = EuclideanSpace(2)
        mu = DiscreteMeasure.uniform(sample_ball(plane, plane.origin(), 2.0, 5, 4))
        nu = DiscreteMeasure.uniform(sample_ball(plane, plane.origin(), 2.0, 6, 3))

        def shrink(x):
            return plane.point(0.5 * x.coords)

        for p in (1.0, 2.0):
            before, _ = wasserstein(p, mu, nu)
            after, _ = wasserstein(p, pushforward(mu, shrink), pushforward(nu, shrink))
            self.assertAlmostEqual(after, 0.5 * before, places=10)

    def test_zero_weight_atoms(self):
        """Test that zero-weight atoms get no mass and finite potentials."""
        points = sample_ball(self.sphere, self.center, 0.7, 7, 3)
        mu = DiscreteMeasure(tuple(points), [0.5, 0.0, 0.5])
        nu = self._uniform(8, 2)
        _, coupling = wasserstein(2.0, mu, nu)
        np.testing.assert_allclose(coupling.matrix[1], [0.0, 0.0])
        self.assertTrue(np.all(np.isfinite(coupling.certificate['u'])))
        self.assertTrue(validate_coupling(coupling))

    def test_invalid_exponent(self):
        """Test that p must be at least 1."""
        mu = self._uniform(1, 2)
        with self.assertRaises(ValueError):
            wasserstein(0.5, mu, mu)

    def test_different_spaces(self):
        """Test rejection of measures on different spaces."""
        mu = self._uniform(1, 2)
        nu = DiscreteMeasure.dirac(EuclideanSpace(3).origin())
        with self.assertRaises(IncompatibleSpaceError):
            wasserstein(2.0, mu, nu)

    @patch('ot.emd')
    def test_solver_failure(self, mock_emd):
        """Test that an unfinished network simplex raises a SolverError."""
        mock_emd.return_value = (np.zeros((2, 2)), {'result_code': 2, 'warning': 'numItermax reached'})
        mu = self._uniform(1, 2)
        with self.assertRaises(SolverError):
            wasserstein(2.0, mu, self._uniform(2, 2))

    @patch('ot.emd')
    def test_certificate_failure(self, mock_emd):
        """Test that a plan failing complementary slackness is rejected."""
        plan = np.full((2, 2), 0.25)
        mock_emd.return_value = (plan, {'result_code': 1, 'u': np.zeros(2), 'v': np.zeros(2)})
        mu = self._uniform(1, 2)
        with self.assertRaises(SolverError):
            wasserstein(2.0, mu, self._uniform(2, 2))


if __name__ == '__main__':
    unittest.main()
