# campaigns/management/commands/list_recipes.py
from django.core.management.base import BaseCommand

from campaigns.recipes import FIGURE_RECIPES, load_campaign, recipe_path


class Command(BaseCommand):
    help = 'List figure ids and their campaign files'

    def handle(self, *args, **options):
        for figure in FIGURE_RECIPES:
            path = recipe_path(figure)
            if not path.is_file():
                self.stdout.write(self.style.ERROR(f"{figure:16s} missing {path.name}"))
                continue
            campaign = load_campaign(path)
            self.stdout.write(
                f"{figure:16s} {path.name:36s} {campaign.sweep_axis:13s} "
                f"{len(campaign.sweep_values)} point(s)  {campaign.description}"
            )
