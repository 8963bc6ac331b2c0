# campaigns/tests/test_recipes.py
import tempfile
from pathlib import Path

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from campaigns.models import SchemeId, SweepAxis
from campaigns.recipes import (
    FIGURE_RECIPES, apply_sweep, campaign_from_dict, load_campaign, recipe_path,
)
from core.config import SimulationConfig

from .fixtures import small_campaign_dict, write_campaign


class ShippedRecipeTests(SimpleTestCase):

    def test_every_figure_recipe_loads(self):
        for figure in FIGURE_RECIPES:
            with self.subTest(figure=figure):
                campaign = load_campaign(recipe_path(figure))
                self.assertEqual(campaign.name, figure)
                self.assertTrue(campaign.schemes)
                for value in campaign.sweep_values:
                    campaign.point_config(value)

    def test_extends_merges_the_default_scenario(self):
        campaign = load_campaign(recipe_path('fig10-m25'))
        self.assertEqual(campaign.sweep_axis, SweepAxis.SNR)
        self.assertEqual(campaign.trials, 500)
        self.assertEqual(campaign.simulation.scenario.n_bs, 16)
        self.assertEqual(campaign.simulation.scenario.ris_shapes, ((5, 5),) * 4)
        self.assertEqual(campaign.metrics[:2], ('nmse_uplink', 'nmse_downlink'))

    def test_ris_size_families(self):
        for prefix in ('fig10', 'fig13a'):
            for elements, side in ((25, 5), (49, 7), (100, 10)):
                with self.subTest(figure=f'{prefix}-m{elements}'):
                    campaign = load_campaign(recipe_path(f'{prefix}-m{elements}'))
                    self.assertEqual(campaign.sweep_axis, SweepAxis.SNR)
                    self.assertEqual(campaign.simulation.scenario.ris_element_counts, (elements,) * 4)
                    self.assertEqual(campaign.simulation.scenario.ris_shapes, ((side, side),) * 4)

    def test_path_count_and_kappa_recipes(self):
        axes = {
            'fig7a': SweepAxis.NLOS_UR,
            'fig7b': SweepAxis.KAPPA_UR,
            'fig9b': SweepAxis.KAPPA_UR,
            'fig11a': SweepAxis.NLOS_UR,
            'fig11b': SweepAxis.NLOS_RB,
        }
        for figure, axis in axes.items():
            with self.subTest(figure=figure):
                self.assertEqual(load_campaign(recipe_path(figure)).sweep_axis, axis)
        self.assertIn('nme_phi_ur_a', load_campaign(recipe_path('fig7a')).metrics)
        self.assertIn('complexity_ratio', load_campaign(recipe_path('fig11b')).metrics)
        fig9b = load_campaign(recipe_path('fig9b'))
        self.assertAlmostEqual(fig9b.simulation.scenario.uplink_snr_db, 170.0)
        self.assertEqual(fig9b.point_config(15).scenario.kappa_ur_db, 15.0)

    def test_unknown_figure(self):
        with self.assertRaises(ValidationError):
            recipe_path('fig99')


class CampaignFileTests(SimpleTestCase):

    def test_overrides_and_validation(self):
        campaign = campaign_from_dict(small_campaign_dict())
        changed = campaign.with_overrides(seed=11, trials=3)
        self.assertEqual((changed.seed, changed.trials), (11, 3))
        with self.assertRaises(ValidationError):
            campaign.with_overrides(trials=0)

    def test_missing_sweep_runs_one_scheme_point(self):
        data = small_campaign_dict()
        del data['sweep']
        campaign = campaign_from_dict(data)
        self.assertEqual(campaign.sweep_axis, SweepAxis.SCHEME)
        self.assertEqual(campaign.sweep_values, (0.0,))

    def test_invalid_campaigns_rejected(self):
        with self.assertRaises(ValidationError):
            campaign_from_dict(small_campaign_dict(schemes=['oracle-magic']))
        with self.assertRaises(ValidationError):
            campaign_from_dict(small_campaign_dict(sweep={'axis': 'temperature', 'values': [1]}))
        with self.assertRaises(ValidationError):
            campaign_from_dict(small_campaign_dict(sweep={'axis': 'snr_db', 'values': []}))

    def test_extends_cycle_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            write_campaign(tmp, 'a.yaml', extends='b.yaml')
            write_campaign(tmp, 'b.yaml', extends='a.yaml')
            with self.assertRaises(ValidationError):
                load_campaign(Path(tmp) / 'a.yaml')

    def test_unknown_key_rejected(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_campaign(tmp, iterations=4)
            with self.assertRaises(ValidationError):
                load_campaign(path)

    def test_child_sections_override_parent(self):
        with tempfile.TemporaryDirectory() as tmp:
            write_campaign(tmp, 'base.yaml')
            child = Path(tmp) / 'child.yaml'
            child.write_text("extends: base.yaml\nname: child\nscenario:\n  n_ue: 4\n", encoding='utf-8')
            campaign = load_campaign(child)
        self.assertEqual(campaign.name, 'child')
        self.assertEqual(campaign.simulation.scenario.n_ue, 4)
        self.assertEqual(campaign.simulation.scenario.n_bs, 8)
        self.assertEqual(campaign.schemes, (SchemeId.PERFECT, SchemeId.PROPOSED))


class ApplySweepTests(SimpleTestCase):

    def setUp(self):
        self.sim = SimulationConfig()

    def test_axes(self):
        self.assertAlmostEqual(apply_sweep(self.sim, SweepAxis.SNR, 175).scenario.uplink_snr_db, 175.0)
        self.assertEqual(apply_sweep(self.sim, SweepAxis.RIS_ELEMENTS, 100).scenario.ris_shapes, ((10, 10),) * 4)
        self.assertEqual(apply_sweep(self.sim, SweepAxis.KAPPA_UR, 5).scenario.kappa_ur_db, 5.0)
        self.assertEqual(apply_sweep(self.sim, SweepAxis.NLOS_UR, 3).scenario.nlos_ur, (3,) * 4)
        self.assertEqual(apply_sweep(self.sim, SweepAxis.NLOS_RB, 4).scenario.nlos_rb, (4,) * 4)
        self.assertIs(apply_sweep(self.sim, SweepAxis.SCHEME, 0).scenario, self.sim.scenario)

    def test_unknown_axis(self):
        with self.assertRaises(ValidationError):
            apply_sweep(self.sim, 'temperature', 1)
