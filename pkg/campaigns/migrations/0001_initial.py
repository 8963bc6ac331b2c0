# Generated by Django 5.2 on 2026-10-18 09:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='CampaignRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=100)),
                ('recipe', models.CharField(help_text='Path of the campaign file that was run', max_length=500)),
                ('sweep_axis', models.CharField(choices=[('snr_db', 'SNR (dB)'), ('ris_elements', 'RIS elements M_k'), ('kappa_ur_db', 'UE-RIS Rician factor (dB)'), ('nlos_ur', 'UE-RIS NLoS paths'), ('scheme', 'Scheme')], default='snr_db', max_length=20)),
                ('seed', models.BigIntegerField(default=2024)),
                ('trials', models.PositiveIntegerField(default=500)),
                ('threads', models.PositiveSmallIntegerField(default=1)),
                ('status', models.CharField(choices=[('PENDING', 'Pending'), ('RUNNING', 'Running'), ('COMPLETED', 'Completed'), ('FAILED', 'Failed')], default='PENDING', max_length=10)),
                ('failed_trials', models.PositiveIntegerField(default=0)),
                ('output_dir', models.CharField(blank=True, max_length=500)),
                ('manifest', models.JSONField(blank=True, default=dict)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'verbose_name': 'Campaign Run',
                'verbose_name_plural': 'Campaign Runs',
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='SweepPointResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('sweep_value', models.FloatField()),
                ('scheme', models.CharField(choices=[('full-nomp-baseline', 'Full NOMP baseline'), ('proposed-customized', 'Proposed (customized)'), ('perfect-csi', 'Perfect CSI')], max_length=30)),
                ('metric', models.CharField(max_length=50)),
                ('mean', models.FloatField()),
                ('stderr', models.FloatField(default=0.0)),
                ('ci95', models.FloatField(default=0.0)),
                ('trials', models.PositiveIntegerField(default=0)),
                ('failed', models.PositiveIntegerField(default=0)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='results', to='campaigns.campaignrun')),
            ],
            options={
                'verbose_name': 'Sweep Point Result',
                'verbose_name_plural': 'Sweep Point Results',
                'ordering': ['run', 'scheme', 'metric', 'sweep_value'],
                'constraints': [models.UniqueConstraint(fields=('run', 'sweep_value', 'scheme', 'metric'), name='unique_sweep_point_metric')],
            },
        ),
    ]
