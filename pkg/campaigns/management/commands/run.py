# campaigns/management/commands/run.py
from .run_campaign import Command as RunCampaignCommand


class Command(RunCampaignCommand):
    help = 'Alias of run_campaign'
