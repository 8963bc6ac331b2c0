# campaigns/tests/test_models.py
from django.core.exceptions import ValidationError
from django.db import IntegrityError, transaction
from django.test import TestCase

from campaigns.models import CampaignRun, SchemeId, SweepAxis, SweepPointResult


class CampaignRunModelTest(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.campaign_run = CampaignRun.objects.create(name='fig10-m25', recipe='fig10_nmse_snr_m25.yaml', seed=2024, trials=5)

    def test_defaults_and_str(self):
        self.assertEqual(self.campaign_run.status, CampaignRun.RunStatus.PENDING)
        self.assertEqual(self.campaign_run.sweep_axis, SweepAxis.SNR)
        self.assertEqual(self.campaign_run.manifest, {})
        self.assertEqual(str(self.campaign_run), "fig10-m25 (seed 2024, Pending)")

    def test_invalid_trials(self):
        run = CampaignRun(name='bad', recipe='x.yaml', trials=0)
        with self.assertRaises(ValidationError) as cm:
            run.full_clean()
        self.assertIn('trials', cm.exception.message_dict)

    def test_invalid_status(self):
        run = CampaignRun(name='bad', recipe='x.yaml', status='EXPLODED')
        with self.assertRaises(ValidationError) as cm:
            run.full_clean()
        self.assertIn('status', cm.exception.message_dict)


class SweepPointResultModelTest(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.campaign_run = CampaignRun.objects.create(name='fig13a-m25', recipe='fig13a_se_snr_m25.yaml')

    def _result(self, **kwargs):
        data = dict(run=self.campaign_run, sweep_value=190.0, scheme=SchemeId.PROPOSED, metric='se_bps_hz', mean=12.5)
        data.update(kwargs)
        return SweepPointResult(**data)

    def test_str(self):
        self.assertEqual(str(self._result()), "se_bps_hz @ 190 [proposed-customized] = 12.5")

    def test_unique_per_point_scheme_metric(self):
        self._result().save()
        with self.assertRaises(IntegrityError):
            with transaction.atomic():
                self._result(mean=3.0).save()
        self._result(scheme=SchemeId.PERFECT).save()
        self.assertEqual(self.campaign_run.results.count(), 2)

    def test_validation(self):
        with self.assertRaises(ValidationError) as cm:
            self._result(sweep_value=float('inf')).full_clean()
        self.assertIn('sweep_value', cm.exception.message_dict)
        with self.assertRaises(ValidationError) as cm:
            self._result(stderr=-1.0).full_clean()
        self.assertIn('stderr', cm.exception.message_dict)
        with self.assertRaises(ValidationError):
            self._result(scheme='oracle-magic').full_clean()

    def test_results_deleted_with_run(self):
        run = CampaignRun.objects.create(name='tmp', recipe='tmp.yaml')
        SweepPointResult.objects.create(run=run, sweep_value=1.0, scheme=SchemeId.PERFECT, metric='m', mean=0.0)
        run.delete()
        self.assertFalse(SweepPointResult.objects.filter(metric='m').exists())
