# metrics/tests/test_transceiver.py
import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from core.exceptions import DimensionMismatchError, ZeroChannelError
from metrics.transceiver import spectral_efficiency, svd_transceiver, water_filling, water_filling_rate


class WaterFillingTests(SimpleTestCase):

    def test_kkt_conditions(self):
        gains = np.array([4.0, 2.0, 0.5, 0.01])
        powers, mu = water_filling(gains, 3.0, 1.0)
        self.assertAlmostEqual(powers.sum(), 3.0)
        on = powers > 0
        assert_allclose(powers[on] + 1.0 / gains[on], mu)
        self.assertTrue(np.all(1.0 / gains[~on] >= mu - 1e-12))
        self.assertEqual(powers[-1], 0.0)

    def test_equal_gains_split_evenly(self):
        powers, _ = water_filling([1.0, 1.0, 1.0], 6.0, 0.5)
        assert_allclose(powers, [2.0, 2.0, 2.0])

    def test_zero_gain_gets_no_power(self):
        powers, _ = water_filling([0.0, 1.0], 2.0, 1.0)
        assert_allclose(powers, [0.0, 2.0])

    def test_degenerate_budgets(self):
        powers, mu = water_filling([1.0, 2.0], 0.0, 1.0)
        assert_allclose(powers, 0.0)
        self.assertEqual(mu, 0.0)
        with self.assertRaises(ValueError):
            water_filling([1.0], -1.0, 1.0)


class SpectralEfficiencyTests(SimpleTestCase):

    def test_rank_one_channel(self):
        a_b = np.exp(1j * 0.4 * np.arange(16)) / 4.0
        a_u = np.exp(-1j * 1.1 * np.arange(4)) / 2.0
        h = 3.0 * np.outer(a_b, a_u.conj())
        tx = svd_transceiver(h, 2.0, 0.1)
        self.assertEqual(tx.streams, 1)
        self.assertAlmostEqual(spectral_efficiency(h, tx, 0.1), np.log2(1 + 2.0 * 9.0 / 0.1))

    def test_perfect_csi_matches_water_filling_rate(self):
        rng = np.random.default_rng(1)
        h = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
        tx = svd_transceiver(h, 5.0, 1.0)
        self.assertAlmostEqual(spectral_efficiency(h, tx, 1.0), water_filling_rate(tx.gains, tx.powers, 1.0))

    def test_mismatched_csi_loses_rate(self):
        rng = np.random.default_rng(2)
        h = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
        wrong = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
        perfect = spectral_efficiency(h, svd_transceiver(h, 5.0, 1.0), 1.0)
        self.assertLess(spectral_efficiency(h, svd_transceiver(wrong, 5.0, 1.0), 1.0), perfect)

    def test_errors(self):
        with self.assertRaises(ZeroChannelError):
            svd_transceiver(np.zeros((16, 4)), 1.0, 1.0)
        tx = svd_transceiver(np.ones((16, 4)), 1.0, 1.0)
        with self.assertRaises(DimensionMismatchError):
            spectral_efficiency(np.ones((8, 4)), tx, 1.0)
