# customization/tests/test_power_oracle.py
import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from core.exceptions import UndefinedRatioError
from customization.power_oracle import (
    PowerScenario, avg_cascaded_power, block_power, customized_power_ratio,
    designed_path_power, los_power, monte_carlo_power, run_oracle_suite,
)
from customization.reflection import designed_inner_product
from geometry.arrays import ArrayShape, UpaFrequency


class ClosedFormTests(SimpleTestCase):

    def test_los_power(self):
        s = PowerScenario(kappa_ur=1.0, kappa_rb=1.0)
        self.assertAlmostEqual(los_power(s), 25 ** 2 * 16 * 4 / 4)

    def test_block_identity_sums_the_cases(self):
        s = PowerScenario()
        total = (avg_cascaded_power('00', s) + s.nlos_ur * avg_cascaded_power('0c', s)
                 + s.nlos_rb * avg_cascaded_power('l0', s) + s.nlos_ur * s.nlos_rb * avg_cascaded_power('lc', s))
        self.assertAlmostEqual(total / block_power(s), 1.0)

    def test_customized_ratio_is_los_share_of_block(self):
        s = PowerScenario()
        self.assertAlmostEqual(customized_power_ratio(25, 10.0, 1000.0), los_power(s) / block_power(s))

    def test_undefined_cases(self):
        with self.assertRaises(UndefinedRatioError):
            avg_cascaded_power('0c', PowerScenario(nlos_ur=0))
        with self.assertRaises(UndefinedRatioError):
            customized_power_ratio(25, 0.0, 10.0)
        with self.assertRaises(ValueError):
            avg_cascaded_power('xx', PowerScenario())


class MonteCarloTests(SimpleTestCase):

    def test_oracle_suite_agrees_within_three_percent(self):
        checks = run_oracle_suite(PowerScenario(), 10 ** 6, np.random.default_rng(2024))
        self.assertEqual(len(checks), 5)
        for check in checks:
            self.assertTrue(check.passed, f"{check.name}: {check.relative_error:.4f}")

    def test_los_case_is_deterministic(self):
        s = PowerScenario()
        self.assertAlmostEqual(monte_carlo_power('00', s, 10, np.random.default_rng(0)) / los_power(s), 1.0)


class DesignedPathPowerTests(SimpleTestCase):

    def setUp(self):
        self.s = PowerScenario()

    def test_los_pair_is_fully_aligned(self):
        power = designed_path_power(self.s, ([0.7], [-0.3]), ([-1.2], [0.9]))
        assert_allclose(power, [1.0], rtol=1e-12)

    def test_direct_responses_agree_with_kernel_expansion(self):
        rng = np.random.default_rng(11)
        rb = rng.uniform(-np.pi, np.pi, (2, 50))
        ur = rng.uniform(-np.pi, np.pi, (2, 50))
        direct = designed_path_power(self.s, rb, ur)
        shape = ArrayShape.upa(self.s.m_v, self.s.m_h)
        kernel = [
            abs(designed_inner_product(
                shape, UpaFrequency(*self.s.rb_design), UpaFrequency(*self.s.ur_design),
                UpaFrequency(rb[0, i], rb[1, i]), UpaFrequency(ur[0, i], ur[1, i]),
            )) ** 2
            for i in range(50)
        ]
        assert_allclose(direct, kernel, rtol=1e-9, atol=1e-14)

    def test_batches_cover_every_draw(self):
        draws = (1 << 15) + 3
        zeros = np.zeros(draws)
        power = designed_path_power(self.s, (zeros, zeros), (zeros, zeros))
        self.assertEqual(power.shape, (draws,))
        self.assertTrue(np.all(np.isfinite(power)))


class ScalingTests(SimpleTestCase):

    def test_nlos_pair_share_vanishes_with_elements(self):
        shares = []
        for side in (2, 3, 5):
            s = PowerScenario(m_v=side, m_h=side)
            closed = avg_cascaded_power('lc', s) / avg_cascaded_power('00', s)
            self.assertAlmostEqual(closed, 1 / (side ** 2 * s.nlos_rb * s.kappa_rb * s.nlos_ur * s.kappa_ur))
            mc = monte_carlo_power('lc', s, 400_000, np.random.default_rng(side)) / los_power(s)
            self.assertAlmostEqual(mc / closed, 1.0, delta=0.05)
            shares.append(mc)
        self.assertGreater(shares[0], shares[1])
        self.assertGreater(shares[1], shares[2])

    def test_customized_ratio_increases_in_elements_and_kappa(self):
        by_elements = [customized_power_ratio(m, 1.0, 1000.0) for m in (25, 49, 100)]
        by_kappa = [customized_power_ratio(25, k, 1000.0) for k in (1.0, 10 ** 0.5, 10.0)]
        self.assertEqual(by_elements, sorted(by_elements))
        self.assertEqual(by_kappa, sorted(by_kappa))
        self.assertLess(by_elements[-1], 1.0)
