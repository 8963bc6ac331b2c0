# campaigns/management/commands/reproduce.py
from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from campaigns.recipes import FIGURE_RECIPES, recipe_path

from .run_campaign import Command as RunCampaignCommand


class Command(RunCampaignCommand):
    help = 'Run the shipped recipe for a figure id'

    def add_arguments(self, parser):
        parser.add_argument('figure', choices=sorted(FIGURE_RECIPES), help='Figure id')
        self.add_run_arguments(parser)

    def handle(self, *args, **options):
        try:
            path = recipe_path(options['figure'])
        except ValidationError as exc:
            raise CommandError(str(exc)) from exc
        campaign = self.load(path, options)
        self.execute_campaign(campaign, options)
