# campaigns/tests/test_runner.py
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from campaigns.recipes import campaign_from_dict
from campaigns.runner import (
    CampaignResult, TrialOutcome, aggregate, run_campaign, run_trial, summarize, trial_rng,
)
from core.exceptions import ZeroChannelError

from .fixtures import small_campaign_dict


class SummarizeTests(SimpleTestCase):

    def test_mean_stderr_and_interval(self):
        mean, stderr, ci95 = summarize([1.0, 2.0, 3.0])
        self.assertAlmostEqual(mean, 2.0)
        self.assertAlmostEqual(stderr, 1.0 / np.sqrt(3.0))
        self.assertAlmostEqual(ci95, stats.t.ppf(0.975, 2) / np.sqrt(3.0))

    def test_single_sample_has_no_spread(self):
        self.assertEqual(summarize([4.5]), (4.5, 0.0, 0.0))


class AggregateTests(SimpleTestCase):

    def setUp(self):
        self.campaign = campaign_from_dict(small_campaign_dict(schemes=['perfect-csi'], trials=2))

    def test_rows_and_failures(self):
        outcomes = [
            TrialOutcome(0, 0, 'perfect-csi', {'se_bps_hz': 1.0}),
            TrialOutcome(0, 1, 'perfect-csi', {'se_bps_hz': 3.0}),
            TrialOutcome(1, 0, 'perfect-csi', {'se_bps_hz': 2.0}),
            TrialOutcome(1, 1, 'perfect-csi', None, 'ZeroChannelError: empty'),
        ]
        result = aggregate(self.campaign, outcomes)
        self.assertEqual(len(result.rows), 2)
        first, second = result.rows
        self.assertEqual((first.sweep_value, first.mean, first.trials, first.failed), (180.0, 2.0, 2, 0))
        self.assertEqual((second.sweep_value, second.mean, second.trials, second.failed), (190.0, 2.0, 1, 1))
        self.assertEqual(result.failed_trials, 1)
        self.assertFalse(result.campaign_failed)
        self.assertEqual(result.errors, ['ZeroChannelError: empty'])

    def test_point_without_successes_fails_the_campaign(self):
        result = CampaignResult(campaign=self.campaign, failures={(0, 'perfect-csi'): 0, (1, 'perfect-csi'): 2})
        self.assertTrue(result.campaign_failed)


class RunTrialTests(SimpleTestCase):

    def test_trial_streams_are_reproducible(self):
        a = trial_rng(7, 1, 3).standard_normal(4)
        np.testing.assert_array_equal(a, trial_rng(7, 1, 3).standard_normal(4))
        self.assertFalse(np.array_equal(a, trial_rng(7, 1, 4).standard_normal(4)))

    def test_simulation_errors_become_failed_outcomes(self):
        campaign = campaign_from_dict(small_campaign_dict())
        with patch('campaigns.runner.run_phase_pipeline', side_effect=ZeroChannelError('zero channel')):
            outcomes = run_trial(campaign, 0, 0, campaign.point_config(180))
        self.assertEqual(len(outcomes), 2)
        self.assertTrue(all(o.failed for o in outcomes))
        self.assertIn('ZeroChannelError', outcomes[0].error)

    def test_metric_filter(self):
        campaign = campaign_from_dict(small_campaign_dict(schemes=['perfect-csi'], metrics=['se_bps_hz']))
        outcomes = run_trial(campaign, 0, 0, campaign.point_config(180))
        self.assertEqual(set(outcomes[0].metrics), {'se_bps_hz'})


class RunCampaignTests(SimpleTestCase):

    def test_thread_count_never_changes_the_numbers(self):
        campaign = campaign_from_dict(small_campaign_dict(trials=3))
        single = run_campaign(campaign, threads=1)
        pooled = run_campaign(campaign, threads=8)
        self.assertEqual(single.rows, pooled.rows)
        self.assertTrue(single.rows)

    def test_seed_changes_the_numbers(self):
        campaign = campaign_from_dict(small_campaign_dict(schemes=['perfect-csi']))
        a = run_campaign(campaign)
        b = run_campaign(campaign.with_overrides(seed=8))
        self.assertNotEqual(
            [r.mean for r in a.rows if r.metric == 'se_bps_hz'],
            [r.mean for r in b.rows if r.metric == 'se_bps_hz'],
        )

    def test_progress_callback(self):
        campaign = campaign_from_dict(small_campaign_dict(schemes=['perfect-csi']))
        calls = []
        run_campaign(campaign, progress=lambda done, total: calls.append((done, total)))
        self.assertEqual(calls, [(1, 4), (2, 4), (3, 4), (4, 4)])
