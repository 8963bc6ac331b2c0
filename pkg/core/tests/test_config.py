# core/tests/test_config.py
import math
import tempfile
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from core.config import (
    LosSearchConfig, NompConfig, PipelineOptions, ScenarioConfig, load_simulation_config,
    scenario_from_dict, scenario_to_dict, simulation_from_dict,
)
from core.units import db_to_linear, dbm_to_watts, linear_to_db


class UnitTests(SimpleTestCase):

    def test_conversions(self):
        self.assertAlmostEqual(float(db_to_linear(30.0)), 1000.0)
        self.assertAlmostEqual(float(linear_to_db(100.0)), 20.0)
        self.assertAlmostEqual(float(dbm_to_watts(30.0)), 1.0)


class ScenarioConfigTests(SimpleTestCase):

    def test_defaults(self):
        cfg = ScenarioConfig()
        cfg.full_clean()
        self.assertEqual(cfg.num_ris, 4)
        self.assertEqual(cfg.ris_element_counts, (25,) * 4)
        self.assertAlmostEqual(cfg.uplink_snr_db, 190.0)
        self.assertAlmostEqual(cfg.kappa_ur, 10.0)
        self.assertAlmostEqual(cfg.penetration_loss, 10 ** (-78 / 20))

    def test_default_normals_are_horizontal_toward_the_coverage_centre(self):
        cfg = ScenarioConfig()
        normal = cfg.ris_normal(0)
        self.assertAlmostEqual(normal[2], 0.0)
        np.testing.assert_allclose(normal, np.array([-6.0, 7.0, 0.0]) / np.sqrt(85.0))

    def test_with_snr_sets_both_powers(self):
        cfg = ScenarioConfig().with_snr_db(170)
        self.assertAlmostEqual(cfg.uplink_snr_db, 170.0)
        self.assertAlmostEqual(cfg.downlink_snr_db, 170.0)

    def test_square_ris_and_los_only(self):
        cfg = ScenarioConfig().with_square_ris(49)
        self.assertEqual(cfg.ris_shapes, ((7, 7),) * 4)
        with self.assertRaises(ValidationError):
            ScenarioConfig().with_square_ris(50)
        los = ScenarioConfig().los_only()
        self.assertEqual(los.nlos_ur, (0,) * 4)
        self.assertTrue(math.isinf(los.kappa_ur))

    def test_validation_collects_field_errors(self):
        with self.assertRaises(ValidationError) as cm:
            ScenarioConfig(n_bs=0, nlos_ur=(1, 2)).full_clean()
        self.assertIn('n_bs', cm.exception.message_dict)
        self.assertIn('nlos_ur', cm.exception.message_dict)


class LoadingTests(SimpleTestCase):

    def test_scalars_broadcast_per_ris(self):
        cfg = scenario_from_dict({'ris_shapes': [3, 4], 'nlos_ur': 2})
        self.assertEqual(cfg.ris_shapes, ((3, 4),) * 4)
        self.assertEqual(cfg.nlos_ur, (2,) * 4)

    def test_fewer_ris_resizes_per_ris_fields(self):
        cfg = scenario_from_dict({'ris_positions': [[80, -5, 16], [75, 0, 16], [80, 5, 16]]})
        self.assertEqual(cfg.num_ris, 3)
        self.assertEqual(len(cfg.ris_shapes), 3)
        self.assertEqual(len(cfg.nlos_rb), 3)

    def test_malformed_ris_shapes_rejected(self):
        two_ris = [[80, -5, 16], [80, 5, 16]]
        for shapes in ([5], [], [[5, 5]], [[5, 5], [5]], [[5, 5], 5], 5):
            with self.subTest(shapes=shapes):
                with self.assertRaises(ValidationError) as cm:
                    scenario_from_dict({'ris_positions': two_ris, 'ris_shapes': shapes})
                self.assertIn('ris_shapes', cm.exception.message_dict)

    def test_pair_list_sets_each_ris(self):
        cfg = scenario_from_dict({'ris_positions': [[80, -5, 16], [80, 5, 16]], 'ris_shapes': [[5, 5], [4, 6]]})
        self.assertEqual(cfg.ris_shapes, ((5, 5), (4, 6)))

    def test_unknown_keys_rejected(self):
        with self.assertRaises(ValidationError):
            scenario_from_dict({'antennas': 4})
        with self.assertRaises(ValidationError):
            simulation_from_dict({'nomp': {'oversampling': 3}})

    def test_infinite_kappa_serializes(self):
        data = scenario_to_dict(ScenarioConfig().los_only())
        self.assertEqual(data['kappa_ur_db'], 'inf')
        self.assertTrue(math.isinf(scenario_from_dict({'kappa_ur_db': data['kappa_ur_db']}).kappa_ur_db))

    def test_section_validation(self):
        with self.assertRaises(ValidationError):
            NompConfig(oversampling_bs=0).full_clean()
        with self.assertRaises(ValidationError):
            LosSearchConfig(subset_size=5).full_clean(num_ris=4)
        with self.assertRaises(ValidationError):
            PipelineOptions(customization_mode='magic').full_clean()

    def test_load_yaml_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'sim.yaml'
            path.write_text("scenario:\n  n_ue: 2\nnomp:\n  newton_steps: 5\n", encoding='utf-8')
            sim = load_simulation_config(path)
        self.assertEqual(sim.scenario.n_ue, 2)
        self.assertEqual(sim.nomp.newton_steps, 5)
        self.assertEqual(sim.los_search.subset_size, 3)

    def test_non_mapping_file_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.yaml'
            path.write_text("- 1\n- 2\n", encoding='utf-8')
            with self.assertRaises(ValidationError):
                load_simulation_config(path)
