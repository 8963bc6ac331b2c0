# positioning/tests/test_solver.py
import numpy as np
import scipy.optimize
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from core.config import DEFAULT_RIS_POSITIONS
from core.exceptions import DegenerateGeometryError
from geometry.positions import PhysicalAngles
from positioning.solver import direction_vector, mean_squared_position_error, solve_position


def _rays(ue, ris_positions):
    rays = np.asarray(ue)[None, :] - np.asarray(ris_positions)
    return rays / np.linalg.norm(rays, axis=1, keepdims=True)


class DirectionVectorTests(SimpleTestCase):

    def test_axes(self):
        assert_allclose(direction_vector(PhysicalAngles(theta=0.0, phi=np.pi / 2)), [1, 0, 0], atol=1e-15)
        assert_allclose(direction_vector(PhysicalAngles(theta=np.pi / 2, phi=np.pi / 2)), [0, 1, 0], atol=1e-15)
        assert_allclose(direction_vector(PhysicalAngles(theta=0.3, phi=0.0)), [0, 0, 1], atol=1e-15)

    def test_unit_norm(self):
        t = direction_vector(PhysicalAngles(theta=-1.1, phi=2.0))
        self.assertAlmostEqual(float(np.linalg.norm(t)), 1.0, places=12)


class SolvePositionTests(SimpleTestCase):

    def test_exact_directions_give_exact_position(self):
        ue = np.array([83.0, -2.5, 0.0])
        fix = solve_position(_rays(ue, DEFAULT_RIS_POSITIONS), DEFAULT_RIS_POSITIONS)
        assert_allclose(fix.position, ue, atol=1e-8)
        self.assertLess(fix.f_min, 1e-12)
        expected = np.linalg.norm(ue[None, :] - np.asarray(DEFAULT_RIS_POSITIONS), axis=1)
        assert_allclose(fix.d_star, expected, rtol=1e-9)

    def test_three_ris_are_enough(self):
        ue = np.array([76.0, 4.0, 0.0])
        ris = DEFAULT_RIS_POSITIONS[:3]
        assert_allclose(solve_position(_rays(ue, ris), ris).position, ue, atol=1e-8)

    def test_perturbed_directions_give_nearby_fix(self):
        ue = np.array([80.0, 1.0, 0.0])
        rays = _rays(ue, DEFAULT_RIS_POSITIONS) + 1e-3 * np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]])
        fix = solve_position(rays / np.linalg.norm(rays, axis=1, keepdims=True), DEFAULT_RIS_POSITIONS)
        self.assertLess(np.linalg.norm(fix.position - ue), 0.5)
        self.assertAlmostEqual(
            fix.f_min,
            mean_squared_position_error(rays / np.linalg.norm(rays, axis=1, keepdims=True),
                                        DEFAULT_RIS_POSITIONS, fix.d_star, fix.position),
        )

    def test_too_few_directions_rejected(self):
        ue = np.array([80.0, 0.0, 0.0])
        ris = DEFAULT_RIS_POSITIONS[:2]
        with self.assertRaises(DegenerateGeometryError):
            solve_position(_rays(ue, ris), ris)

    def test_coplanar_directions_rejected(self):
        rays = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.6, 0.8, 0.0]])
        with self.assertRaises(DegenerateGeometryError):
            solve_position(rays, DEFAULT_RIS_POSITIONS[:3])


def _noisy_rays(ue, ris_positions, seed, scale=1e-2):
    rays = _rays(ue, ris_positions) + scale * np.random.default_rng(seed).standard_normal((len(ris_positions), 3))
    return rays / np.linalg.norm(rays, axis=1, keepdims=True)


class SolvePositionOptimalityTests(SimpleTestCase):

    def setUp(self):
        self.ue = np.array([78.0, 3.0, 0.0])
        self.ris = np.asarray(DEFAULT_RIS_POSITIONS)
        self.rays = _noisy_rays(self.ue, self.ris, seed=5)
        self.fix = solve_position(self.rays, self.ris)

    def test_matches_nonlinear_least_squares(self):
        k = len(self.ris)

        def residuals(x):
            position, distances = x[:3], x[3:]
            return (self.ris + distances[:, None] * self.rays - position[None, :]).ravel()

        start = np.concatenate([[80.0, 0.0, 0.0], np.full(k, 50.0)])
        result = scipy.optimize.least_squares(residuals, start, method='lm', xtol=1e-15, ftol=1e-15, gtol=1e-15)
        assert_allclose(self.fix.position, result.x[:3], atol=1e-6)
        assert_allclose(self.fix.d_star, result.x[3:], atol=1e-6)
        self.assertAlmostEqual(self.fix.f_min, float(np.sum(result.fun ** 2)) / k, places=9)

    def test_no_nearby_point_does_better(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            position = self.fix.position + 0.5 * rng.standard_normal(3)
            distances = self.fix.d_star + 0.5 * rng.standard_normal(len(self.ris))
            nearby_f = mean_squared_position_error(self.rays, self.ris, distances, position)
            self.assertGreaterEqual(nearby_f, self.fix.f_min - 1e-12)
