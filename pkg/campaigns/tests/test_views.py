# campaigns/tests/test_views.py
import io

import openpyxl
from django.contrib.auth import get_user_model
from django.test import TestCase
from django.urls import reverse

from campaigns.exports import XLSX_HEADERS
from campaigns.models import CampaignRun, SchemeId, SweepPointResult


def create_user(username, password="password123", is_staff=False, is_superuser=False):
    User = get_user_model()
    if is_superuser:
        return User.objects.create_superuser(username=username, password=password, email=f"{username}@example.com")
    return User.objects.create_user(username=username, password=password, email=f"{username}@example.com",
                                    is_staff=is_staff)


class ResultExportViewTests(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.staff = create_user('export_staff', is_staff=True)
        cls.viewer = create_user('export_viewer')
        cls.campaign_run = CampaignRun.objects.create(name='fig13a-m25', recipe='fig13a_se_snr_m25.yaml', sweep_axis='snr_db')
        for scheme, mean in ((SchemeId.PERFECT, 14.0), (SchemeId.PROPOSED, 13.2)):
            SweepPointResult.objects.create(
                run=cls.campaign_run, sweep_value=190.0, scheme=scheme, metric='se_bps_hz', mean=mean, trials=10,
            )
        cls.export_url = reverse('campaigns:result-export')

    def test_export_view_redirects_if_not_logged_in(self):
        response = self.client.get(self.export_url)
        self.assertEqual(response.status_code, 302)
        self.assertIn(reverse('admin:login'), response.url)

    def test_export_view_redirects_non_staff(self):
        self.client.login(username='export_viewer', password='password123')
        response = self.client.get(self.export_url)
        self.assertEqual(response.status_code, 302)

    def test_export_view_success_for_staff(self):
        self.client.login(username='export_staff', password='password123')
        response = self.client.get(self.export_url)
        self.assertEqual(response.status_code, 200)
        self.assertEqual(
            response['Content-Type'],
            'application/vnd.openxmlformats-officedocument.spreadsheetml.sheet'
        )
        self.assertIn('campaign_results.xlsx', response['Content-Disposition'])
        workbook = openpyxl.load_workbook(io.BytesIO(response.content))
        self.assertEqual(sorted(workbook.sheetnames), ['perfect-csi', 'proposed-customized'])
        worksheet = workbook['proposed-customized']
        self.assertEqual([cell.value for cell in worksheet[1]], XLSX_HEADERS)
        self.assertEqual(worksheet['D2'].value, 13.2)

    def test_export_view_filters_by_scheme(self):
        self.client.login(username='export_staff', password='password123')
        response = self.client.get(self.export_url, {'scheme': SchemeId.PERFECT})
        workbook = openpyxl.load_workbook(io.BytesIO(response.content))
        self.assertEqual(workbook.sheetnames, ['perfect-csi'])


class CampaignAdminTests(TestCase):
    @classmethod
    def setUpTestData(cls):
        cls.admin_user = create_user('campaign_admin', is_superuser=True)
        cls.campaign_run = CampaignRun.objects.create(name='fig4', recipe='fig4_separation_nmse.yaml')
        SweepPointResult.objects.create(
            run=cls.campaign_run, sweep_value=180.0, scheme=SchemeId.PERFECT, metric='nmse_separation_mc', mean=1e-3,
        )

    def setUp(self):
        self.client.login(username='campaign_admin', password='password123')

    def test_changelist_and_change_page(self):
        response = self.client.get(reverse('admin:campaigns_campaignrun_changelist'))
        self.assertContains(response, 'fig4')
        response = self.client.get(reverse('admin:campaigns_campaignrun_change', args=[self.campaign_run.pk]))
        self.assertContains(response, 'nmse_separation_mc')

    def test_result_changelist_search(self):
        response = self.client.get(reverse('admin:campaigns_sweeppointresult_changelist'), {'q': 'nmse'})
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, 'nmse_separation_mc')
