import math

from django.core.exceptions import ValidationError
from django.db import models
from django.utils.translation import gettext_lazy as _


class SweepAxis(models.TextChoices):
    SNR = 'snr_db', _('SNR (dB)')
    RIS_ELEMENTS = 'ris_elements', _('RIS elements M_k')
    KAPPA_UR = 'kappa_ur_db', _('UE-RIS Rician factor (dB)')
    NLOS_UR = 'nlos_ur', _('UE-RIS NLoS paths')
    NLOS_RB = 'nlos_rb', _('RIS-BS NLoS paths')
    SCHEME = 'scheme', _('Scheme')


class SchemeId(models.TextChoices):
    FULL_NOMP = 'full-nomp-baseline', _('Full NOMP baseline')
    PROPOSED = 'proposed-customized', _('Proposed (customized)')
    PERFECT = 'perfect-csi', _('Perfect CSI')


class CampaignRun(models.Model):
    """One execution of a campaign recipe."""
    class RunStatus(models.TextChoices):
        PENDING = 'PENDING', _('Pending')
        RUNNING = 'RUNNING', _('Running')
        COMPLETED = 'COMPLETED', _('Completed')
        FAILED = 'FAILED', _('Failed')

    name = models.CharField(max_length=100)
    recipe = models.CharField(
        max_length=500,
        help_text=_("Path of the campaign file that was run"),
    )
    sweep_axis = models.CharField(
        max_length=20,
        choices=SweepAxis.choices,
        default=SweepAxis.SNR,
    )
    seed = models.BigIntegerField(default=2024)
    trials = models.PositiveIntegerField(default=500)
    threads = models.PositiveSmallIntegerField(default=1)
    status = models.CharField(
        max_length=10,
        choices=RunStatus.choices,
        default=RunStatus.PENDING,
    )
    failed_trials = models.PositiveIntegerField(default=0)
    output_dir = models.CharField(max_length=500, blank=True)
    manifest = models.JSONField(default=dict, blank=True)
    started_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        verbose_name = _("Campaign Run")
        verbose_name_plural = _("Campaign Runs")
        ordering = ['-started_at']

    def __str__(self):
        return f"{self.name} (seed {self.seed}, {self.get_status_display()})"

    def clean(self):
        super().clean()
        if self.trials is not None and self.trials < 1:
            raise ValidationError({'trials': _("At least one trial is required.")})
        if self.threads is not None and self.threads < 1:
            raise ValidationError({'threads': _("At least one thread is required.")})


class SweepPointResult(models.Model):
    """Aggregate of one metric at one sweep value for one scheme."""
    run = models.ForeignKey(
        CampaignRun,
        related_name='results',
        on_delete=models.CASCADE,
    )
    sweep_value = models.FloatField()
    scheme = models.CharField(max_length=30, choices=SchemeId.choices)
    metric = models.CharField(max_length=50)
    mean = models.FloatField()
    stderr = models.FloatField(default=0.0)
    ci95 = models.FloatField(default=0.0)
    trials = models.PositiveIntegerField(default=0)
    failed = models.PositiveIntegerField(default=0)

    class Meta:
        verbose_name = _("Sweep Point Result")
        verbose_name_plural = _("Sweep Point Results")
        ordering = ['run', 'scheme', 'metric', 'sweep_value']
        constraints = [
            models.UniqueConstraint(
                fields=['run', 'sweep_value', 'scheme', 'metric'],
                name='unique_sweep_point_metric',
            ),
        ]

    def __str__(self):
        return f"{self.metric} @ {self.sweep_value:g} [{self.scheme}] = {self.mean:.4g}"

    def clean(self):
        super().clean()
        if self.sweep_value is not None and not math.isfinite(self.sweep_value):
            raise ValidationError({'sweep_value': _("Sweep values must be finite.")})
        if self.stderr is not None and self.stderr < 0:
            raise ValidationError({'stderr': _("Standard error cannot be negative.")})
