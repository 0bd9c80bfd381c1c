"""
Unit tests for the model surface quantities.
"""

import math
import os
import sys
import unittest

# Add the parent directory to sys.path to allow for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.errors import CurvatureError, InfeasibleError, UndefinedAngleError
from src.geometry.model_space import (
    CurvatureClass,
    Diameter,
    comparison_angle,
    comparison_triangle,
    cos_kappa,
    diameter_of_model,
    effective_constants,
)


class TestDiameter(unittest.TestCase):
    """Test cases for model diameters and curvature classes."""

    def test_diameter_of_model(self):
        """Test D_kappa in the three curvature regimes."""
        self.assertAlmostEqual(diameter_of_model(1.0).value, math.pi)
        self.assertAlmostEqual(diameter_of_model(4.0).value, math.pi / 2.0)
        self.assertTrue(diameter_of_model(0.0).unbounded)
        self.assertTrue(diameter_of_model(-1.0).unbounded)

    def test_unbounded_diameter_admits_everything(self):
        """Test that unbounded diameters never reject a length and serialize to null."""
        infinite = Diameter.infinite()
        self.assertTrue(infinite.admits(1e300))
        self.assertTrue(infinite.scaled(0.5).unbounded)
        self.assertIsNone(infinite.to_json())

    def test_admits_strict(self):
        """Test strict and non-strict admission at the boundary."""
        diameter = Diameter(2.0)
        self.assertTrue(diameter.admits(2.0))
        self.assertFalse(diameter.admits(2.0, strict=True))
        self.assertTrue(diameter.admits(2.0 + 1e-13, tol=1e-12))

    def test_safe_diameter(self):
        """Test D_{kappa,epsilon} = (1 - epsilon) D_kappa."""
        cc = CurvatureClass(4.0, 0.5)
        self.assertAlmostEqual(cc.safe_diameter.value, math.pi / 4.0)
        self.assertTrue(CurvatureClass(-2.0, 0.5).safe_diameter.unbounded)

    def test_epsilon_range(self):
        """Test that epsilon must lie strictly inside (0, 1)."""
        for epsilon in (0.0, 1.0, -0.1, 1.5):
            with self.assertRaises(ValueError):
                CurvatureClass(1.0, epsilon)


class TestEffectiveConstants(unittest.TestCase):
    """Test cases for k, Gamma, N and C_epsilon."""

    def test_nonpositive_curvature(self):
        """Test the constants of CAT(0) classes."""
        for kappa in (0.0, -1.0):
            constants = effective_constants(CurvatureClass(kappa, 0.3))
            self.assertEqual(constants.k, 2.0)
            self.assertEqual(constants.gamma, 1.0)
            self.assertAlmostEqual(constants.cotype_constant, 17.0)
            self.assertAlmostEqual(constants.c_ext, 17.0)

    def test_positive_curvature(self):
        """Test the closed forms at epsilon = 1/2."""
        constants = effective_constants(CurvatureClass(1.0, 0.5))
        expected_gamma = math.pi / (2.0 * math.sqrt(2.0) * math.cos(math.pi / 4.0) ** 0.25)
        self.assertAlmostEqual(constants.k, math.pi / 2.0, places=12)
        self.assertAlmostEqual(constants.gamma, expected_gamma, places=12)
        expected_n = 16.0 * expected_gamma ** 2 * (2.0 / (math.pi / 2.0)) + 1.0
        self.assertAlmostEqual(constants.cotype_constant, expected_n, places=9)
        self.assertAlmostEqual(constants.c_ext, expected_gamma * expected_n, places=9)

    def test_constants_do_not_depend_on_kappa_scale(self):
        """Test that only epsilon enters the positive curvature constants."""
        first = effective_constants(CurvatureClass(1.0, 0.25))
        second = effective_constants(CurvatureClass(9.0, 0.25))
        self.assertEqual(first, second)

    def test_modulus_grows_with_margin(self):
        """Test that a larger margin gives a larger convexity modulus."""
        k_values = [effective_constants(CurvatureClass(1.0, eps)).k for eps in (0.1, 0.3, 0.5)]
        self.assertLess(k_values[0], k_values[1])
        self.assertLess(k_values[1], k_values[2])

    def test_lipschitz_constant_shrinks_with_margin(self):
        """Test that Gamma decreases as the margin grows."""
        epsilons = [0.05 * i for i in range(1, 20)]
        gammas = [effective_constants(CurvatureClass(1.0, eps)).gamma for eps in epsilons]
        for smaller, larger in zip(gammas[1:], gammas[:-1]):
            self.assertLess(smaller, larger)
        self.assertGreater(gammas[-1], 1.0)

    def test_to_dict(self):
        """Test the dictionary representation."""
        data = effective_constants(CurvatureClass(0.0, 0.5)).to_dict()
        self.assertEqual(sorted(data), ['c_ext', 'cotype_constant', 'gamma', 'k'])


class TestComparisonGeometry(unittest.TestCase):
    """Test cases for comparison angles and triangles."""

    def test_cos_kappa(self):
        """Test the scaled cosine and its domain."""
        self.assertAlmostEqual(cos_kappa(4.0, math.pi / 4.0), 0.0)
        with self.assertRaises(CurvatureError):
            cos_kappa(0.0, 1.0)

    def test_equilateral_angles(self):
        """Test angles of equilateral comparison triangles."""
        self.assertAlmostEqual(comparison_angle(1.0, 1.0, 1.0, 0.0), math.pi / 3.0)
        # octant triangle of the unit sphere
        side = math.pi / 2.0
        self.assertAlmostEqual(comparison_angle(side, side, side, 1.0), math.pi / 2.0)
        # hyperbolic angles are smaller than Euclidean ones
        self.assertLess(comparison_angle(1.0, 1.0, 1.0, -1.0), math.pi / 3.0)

    def test_angle_grows_with_opposite_side(self):
        """Test that the comparison angle increases with the opposite side."""
        for kappa in (-1.0, 0.0, 1.0):
            angles = [comparison_angle(0.8, 0.6, c, kappa) for c in (0.3, 0.6, 0.9, 1.2)]
            for smaller, larger in zip(angles[:-1], angles[1:]):
                self.assertLess(smaller, larger)

    def test_curvature_orders_angles(self):
        """Test that the same sides span larger angles in more curved model surfaces."""
        for a, b, c in ((0.5, 0.5, 0.5), (0.8, 0.6, 0.9), (1.0, 0.4, 1.1), (0.3, 0.9, 0.7)):
            hyperbolic = comparison_angle(a, b, c, -1.0)
            flat = comparison_angle(a, b, c, 0.0)
            spherical = comparison_angle(a, b, c, 1.0)
            self.assertLessEqual(hyperbolic, flat)
            self.assertGreaterEqual(spherical, flat)

    def test_degenerate_side(self):
        """Test that an angle at a zero side is undefined."""
        with self.assertRaises(UndefinedAngleError):
            comparison_angle(0.0, 1.0, 1.0, 0.0)

    def test_infeasible_triangles(self):
        """Test rejection of impossible side lengths."""
        with self.assertRaises(InfeasibleError):
            comparison_triangle(1.0, 1.0, 3.0, 0.0)
        with self.assertRaises(InfeasibleError):
            comparison_triangle(3.0, 3.0, 1.0, 1.0)

    def test_triangle_realizes_side_lengths(self):
        """Test that the comparison triangle has the prescribed sides."""
        sides = (0.7, 0.9, 1.1)
        for kappa in (-1.0, 0.0, 1.0, 2.5):
            triangle = comparison_triangle(*sides, kappa)
            for actual, expected in zip(triangle.pairwise_distances(), sides):
                self.assertAlmostEqual(actual, expected, places=10)

    def test_triangle_with_zero_side(self):
        """Test a triangle with two coincident vertices."""
        triangle = comparison_triangle(0.0, 0.5, 0.5, 1.0)
        for actual, expected in zip(triangle.pairwise_distances(), (0.0, 0.5, 0.5)):
            self.assertAlmostEqual(actual, expected, places=10)


if __name__ == '__main__':
    unittest.main()
