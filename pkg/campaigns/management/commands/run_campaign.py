# campaigns/management/commands/run_campaign.py
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from django.db import transaction
from django.utils import timezone

from campaigns.exports import build_manifest, write_outputs
from campaigns.models import CampaignRun, SweepPointResult
from campaigns.recipes import load_campaign
from campaigns.runner import run_campaign


class Command(BaseCommand):
    help = 'Run a Monte Carlo campaign file and write results.csv and manifest.json'

    def add_arguments(self, parser):
        parser.add_argument('campaign', help='Path of the campaign YAML file')
        self.add_run_arguments(parser)

    def add_run_arguments(self, parser):
        defaults = settings.RIS_SIMULATION
        parser.add_argument('--seed', type=int, default=None, help='Override the campaign seed')
        parser.add_argument('--trials', type=int, default=None, help='Override the trials per sweep point')
        parser.add_argument('--threads', type=int, default=defaults['THREADS'], help='Worker threads for trials')
        parser.add_argument('--out', default=None, help='Output directory (default: OUTPUT_DIR/<campaign name>)')
        parser.add_argument('--no-record', action='store_true', help='Do not store the run in the database')
        parser.add_argument('--xlsx', action='store_true', help='Also write results.xlsx')

    def handle(self, *args, **options):
        campaign = self.load(options['campaign'], options)
        self.execute_campaign(campaign, options)

    def load(self, path, options):
        if not Path(path).is_file():
            raise CommandError(f"Campaign file not found: {path}")
        try:
            return load_campaign(path).with_overrides(seed=options['seed'], trials=options['trials'])
        except ValidationError as exc:
            raise CommandError(f"Invalid campaign {path}: {exc}") from exc

    def execute_campaign(self, campaign, options):
        threads = max(1, options['threads'])
        out_dir = Path(options['out'] or Path(settings.RIS_SIMULATION['OUTPUT_DIR']) / campaign.name)
        run = None
        if not options['no_record']:
            run = CampaignRun.objects.create(
                name=campaign.name,
                recipe=campaign.source,
                sweep_axis=campaign.sweep_axis,
                seed=campaign.seed,
                trials=campaign.trials,
                threads=threads,
                status=CampaignRun.RunStatus.RUNNING,
                output_dir=str(out_dir),
            )
        self.stdout.write(
            f"Running '{campaign.name}': {len(campaign.sweep_values)} point(s) x {campaign.trials} trial(s), "
            f"schemes {', '.join(campaign.schemes)}"
        )
        try:
            result = run_campaign(campaign, threads=threads)
            paths = write_outputs(result, out_dir, threads=threads, xlsx=options['xlsx'])
        except OSError as exc:
            if run is not None:
                run.status = CampaignRun.RunStatus.FAILED
                run.finished_at = timezone.now()
                run.save(update_fields=['status', 'finished_at'])
            raise CommandError(f"Could not write results: {exc}") from exc

        if run is not None:
            self.record(run, result, threads)
        for path in paths:
            self.stdout.write(f"  wrote {path}")
        if result.failed_trials:
            self.stdout.write(self.style.WARNING(f"{result.failed_trials} scheme-trial(s) failed"))
        if result.campaign_failed:
            raise CommandError(f"Campaign '{campaign.name}' failed: a sweep point had no successful trial")
        self.stdout.write(self.style.SUCCESS(f"Campaign '{campaign.name}' completed"))
        return result

    @transaction.atomic
    def record(self, run, result, threads):
        SweepPointResult.objects.bulk_create([
            SweepPointResult(
                run=run,
                sweep_value=row.sweep_value,
                scheme=row.scheme,
                metric=row.metric,
                mean=row.mean,
                stderr=row.stderr,
                ci95=row.ci95,
                trials=row.trials,
                failed=row.failed,
            )
            for row in result.rows
        ])
        run.failed_trials = result.failed_trials
        run.manifest = build_manifest(result, threads)
        run.status = CampaignRun.RunStatus.FAILED if result.campaign_failed else CampaignRun.RunStatus.COMPLETED
        run.finished_at = timezone.now()
        run.save()
