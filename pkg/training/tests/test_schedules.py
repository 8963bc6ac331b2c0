# training/tests/test_schedules.py
import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from core.config import ScenarioConfig
from core.exceptions import DimensionMismatchError, InvalidReflectionError
from training.schedules import (
    SlowSchedule, dft_slow_schedule, downlink_slot_count, make_fast_matrix,
    make_pilots, make_schedule, uplink_slot_count,
)


class ScheduleTests(SimpleTestCase):

    def test_fast_matrix_columns_are_orthogonal(self):
        fast = make_fast_matrix(4)
        self.assertEqual(fast.size, 5)
        assert_allclose(fast.matrix.conj().T @ fast.matrix, 5 * np.eye(5), atol=1e-12)

    def test_slow_schedule_repeats_columns_for_small_ris(self):
        slow = dft_slow_schedule([4, 2])
        self.assertEqual(slow.num_blocks, 4)
        assert_allclose(slow.gammas[1][:, 2], slow.gammas[1][:, 0])
        assert_allclose(np.abs(slow.gammas[0]), 1.0)

    def test_slow_schedule_validation(self):
        with self.assertRaises(DimensionMismatchError):
            SlowSchedule.from_matrices([np.ones((2, 2)), np.ones((2, 3))])
        with self.assertRaises(InvalidReflectionError):
            SlowSchedule.from_matrices([0.5 * np.ones((2, 2))])

    def test_pilots_are_scaled_unitary(self):
        pilots = make_pilots(4, 3.0)
        assert_allclose(pilots.matrix @ pilots.matrix.conj().T, 3.0 * np.eye(4), atol=1e-12)

    def test_slot_counts(self):
        cfg = ScenarioConfig()
        schedule = make_schedule(cfg)
        self.assertEqual(uplink_slot_count(schedule, make_pilots(cfg.n_ue, 1.0)), 25 * 4 * 5)
        self.assertEqual(downlink_slot_count(schedule, make_pilots(cfg.n_bs, 1.0)), 16 * 5)
