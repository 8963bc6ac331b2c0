# Generated by Django 5.2 on 2026-10-18 14:20

from django.db import migrations, models


class Migration(migrations.Migration):

    dependencies = [
        ('campaigns', '0001_initial'),
    ]

    operations = [
        migrations.AlterField(
            model_name='campaignrun',
            name='sweep_axis',
            field=models.CharField(choices=[('snr_db', 'SNR (dB)'), ('ris_elements', 'RIS elements M_k'), ('kappa_ur_db', 'UE-RIS Rician factor (dB)'), ('nlos_ur', 'UE-RIS NLoS paths'), ('nlos_rb', 'RIS-BS NLoS paths'), ('scheme', 'Scheme')], default='snr_db', max_length=20),
        ),
    ]
