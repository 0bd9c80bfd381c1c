"""
Unit tests for reversible chains, Markov type ratios and cotype witnesses.
"""

import os
import sys
import unittest

import numpy as np

# Add the parent directory to sys.path to allow for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.checks.markov import CotypeCheck, MarkovTypeCheck
from src.errors import InvalidInstanceError, RegimeError
from src.geometry.model_space import CurvatureClass
from src.geometry.spaces import EuclideanSpace, SphereSpace, geodesic_point
from src.markov.chains import (
    ReversibleChain,
    cesaro_average,
    matrix_power,
    random_reversible_chain,
    validate_chain,
)
from src.markov.cotype import PointConfiguration, cotype_check, cotype_witness, markov_type_ratio

SWAP = ReversibleChain([0.5, 0.5], [[0.0, 1.0], [1.0, 0.0]])
LAZY = ReversibleChain([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]])


class TestChains(unittest.TestCase):
    """Test cases for reversible chains."""

    def test_validate_swap(self):
        """Test that the swap chain is reversible and stochastic."""
        self.assertTrue(validate_chain(SWAP))

    def test_detailed_balance_violation(self):
        """Test that a directed cycle violates detailed balance."""
        cycle = ReversibleChain(np.full(3, 1.0 / 3.0), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        validation = validate_chain(cycle)
        self.assertFalse(validation)
        self.assertEqual(validation.diagnostics['reason'], 'detailed balance')

    def test_row_sum_violation(self):
        """Test that rows must sum to one."""
        broken = ReversibleChain([0.5, 0.5], [[0.5, 0.4], [0.5, 0.5]])
        validation = validate_chain(broken)
        self.assertFalse(validation)
        self.assertEqual(validation.diagnostics['row'], 0)

    def test_shape_mismatch(self):
        """Test rejection of a pi that does not match the matrix."""
        with self.assertRaises(ValueError):
            ReversibleChain([1.0], [[0.5, 0.5], [0.5, 0.5]])

    def test_cesaro_average(self):
        """Test (A + A^2) / 2 of the swap chain."""
        np.testing.assert_allclose(cesaro_average(SWAP.a, 2), np.full((2, 2), 0.5))
        np.testing.assert_allclose(matrix_power(SWAP.a, 2), np.eye(2))
        with self.assertRaises(ValueError):
            cesaro_average(SWAP.a, 0)

    def test_random_chains_are_reversible(self):
        """Test the random chain generator over several seeds."""
        for seed in range(20):
            rng = np.random.default_rng(seed)
            chain = random_reversible_chain(rng, int(rng.integers(1, 9)))
            self.assertTrue(validate_chain(chain), seed)

    def test_cesaro_average_stays_reversible(self):
        """Test that Cesaro averages of reversible chains are reversible with the same pi."""
        for seed in range(20):
            rng = np.random.default_rng(100 + seed)
            chain = random_reversible_chain(rng, int(rng.integers(2, 9)))
            for t in (1, 2, 5, 16):
                averaged = cesaro_average(chain.a, t)
                self.assertTrue(validate_chain(ReversibleChain(chain.pi, averaged)), (seed, t))
                np.testing.assert_allclose(chain.pi @ averaged, chain.pi, atol=1e-12)

    def test_from_dict(self):
        """Test loading a chain from its JSON form."""
        chain = ReversibleChain.from_dict(SWAP.to_dict())
        np.testing.assert_array_equal(chain.a, SWAP.a)


class TestMarkovType(unittest.TestCase):
    """Test cases for Markov type 2 ratios."""

    def setUp(self):
        """Set up test fixtures."""
        self.space = EuclideanSpace(1)
        self.config = PointConfiguration(
            (self.space.point([-1.0]), self.space.point([1.0])), self.space.origin(), 1.0
        )

    def test_swap_chain(self):
        """Test that the swap chain returns home after two steps."""
        self.assertAlmostEqual(markov_type_ratio(self.config, SWAP, 1).value, 1.0)
        self.assertAlmostEqual(markov_type_ratio(self.config, SWAP, 2).value, 0.0)

    def test_lazy_chain(self):
        """Test the ratio 1/t of the fully mixing chain."""
        for t in (1, 2, 5):
            self.assertAlmostEqual(markov_type_ratio(self.config, LAZY, t).value, 1.0 / t)

    def test_degenerate_chain(self):
        """Test that a chain that never moves reports 0/0 as 1."""
        still = ReversibleChain([0.5, 0.5], np.eye(2))
        ratio = markov_type_ratio(self.config, still, 3)
        self.assertEqual(ratio.value, 1.0)
        self.assertTrue(ratio.degenerate)

    def test_invalid_instances(self):
        """Test size mismatches, horizons and non-reversible chains."""
        with self.assertRaises(ValueError):
            markov_type_ratio(self.config, ReversibleChain([1.0], [[1.0]]), 1)
        with self.assertRaises(ValueError):
            markov_type_ratio(self.config, SWAP, 0)
        with self.assertRaises(InvalidInstanceError):
            markov_type_ratio(self.config, ReversibleChain([0.9, 0.1], [[0.0, 1.0], [1.0, 0.0]]), 1)

    def test_configuration_ball(self):
        """Test that configuration points must lie in the ball."""
        with self.assertRaises(RegimeError):
            PointConfiguration((self.space.point([2.0]),), self.space.origin(), 1.0)

    def test_hilbert_sweep(self):
        """Test Markov type 2 with M = 1 in Euclidean space."""
        check = MarkovTypeCheck(EuclideanSpace(3), CurvatureClass(0.0, 0.5))
        reports = [check.run_trial(3, index) for index in range(40)]
        self.assertTrue(all(r.passed for r in reports))
        self.assertIn('ratio', reports[0].extras)


class TestCotype(unittest.TestCase):
    """Test cases for barycentric cotype witnesses."""

    def setUp(self):
        """Set up test fixtures."""
        self.space = EuclideanSpace(1)
        self.cc = CurvatureClass(0.0, 0.5)
        self.x = (self.space.point([-1.0]), self.space.point([1.0]))
        self.config = PointConfiguration(self.x, self.space.origin(), 1.0)

    def test_lazy_chain_witness(self):
        """Test that the mixing chain sends both points to their midpoint."""
        witness = cotype_witness(self.config, LAZY, 1, self.cc)
        for y in witness:
            np.testing.assert_allclose(y.coords, [0.0], atol=1e-15)
        report = cotype_check(self.config, LAZY, 1, witness, self.cc)
        # d = 2: lhs = d^2 / 4, rhs = N^2 d^2 / 2 with N = 17
        self.assertAlmostEqual(report.lhs, 1.0)
        self.assertAlmostEqual(report.rhs, 17.0 ** 2 * 2.0)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.extras['minimal_n'], (1.0 / 2.0) ** 0.5)

    def test_swap_chain_witness(self):
        """Test that the swap chain sends each point to the other one."""
        witness = cotype_witness(self.config, SWAP, 1, self.cc)
        self.assertTrue(witness[0].is_close(self.x[1], 1e-15))
        report = cotype_check(self.config, SWAP, 1, witness, self.cc)
        self.assertAlmostEqual(report.lhs, 8.0)
        self.assertAlmostEqual(report.rhs, 17.0 ** 2 * 4.0)

    def test_witness_length(self):
        """Test rejection of a witness of the wrong size."""
        with self.assertRaises(ValueError):
            cotype_check(self.config, SWAP, 1, [self.x[0]], self.cc)

    def test_sphere_ball_regime(self):
        """Test that the configuration ball must fit D_{kappa,epsilon} / 4."""
        sphere = SphereSpace(2)
        center = sphere.origin()
        far = geodesic_point(center, sphere.point([0.0, 1.0, 0.0]), 0.5)
        config = PointConfiguration((center, far), center, 0.8)
        with self.assertRaises(RegimeError):
            cotype_witness(config, SWAP, 1, CurvatureClass(1.0, 0.5))

    def test_sphere_sweep(self):
        """Test barycentric witnesses on the sphere."""
        check = CotypeCheck(SphereSpace(2), CurvatureClass(1.0, 0.5))
        self.assertTrue(all(check.run_trial(2, index).passed for index in range(10)))


if __name__ == '__main__':
    unittest.main()
