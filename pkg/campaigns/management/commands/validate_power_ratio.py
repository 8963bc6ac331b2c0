# campaigns/management/commands/validate_power_ratio.py
import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from customization.power_oracle import PowerScenario, customized_power_ratio, run_oracle_suite


class Command(BaseCommand):
    help = 'Check the closed-form cascaded-path powers against Monte Carlo draws'

    def add_arguments(self, parser):
        parser.add_argument('--draws', type=int, default=1_000_000, help='Monte Carlo draws per case')
        parser.add_argument('--seed', type=int, default=settings.RIS_SIMULATION['DEFAULT_SEED'])
        parser.add_argument('--tolerance', type=float, default=0.03, help='Allowed relative error')

    def handle(self, *args, **options):
        if options['draws'] < 1:
            raise CommandError("--draws must be positive")
        scenario = PowerScenario()
        rng = np.random.default_rng(options['seed'])
        checks = run_oracle_suite(scenario, options['draws'], rng, options['tolerance'])
        for check in checks:
            line = (
                f"{check.name:16s} closed form {check.closed_form:.6e}  "
                f"Monte Carlo {check.monte_carlo:.6e}  rel. error {check.relative_error:.4f}"
            )
            self.stdout.write(self.style.SUCCESS(line) if check.passed else self.style.ERROR(line))
        ratio = customized_power_ratio(scenario.elements, scenario.kappa_ur, scenario.kappa_rb)
        self.stdout.write(f"Customized power ratio approximation: {ratio:.6f}")
        failed = [check.name for check in checks if not check.passed]
        if failed:
            raise CommandError(f"Out of tolerance: {', '.join(failed)}")
        self.stdout.write(self.style.SUCCESS("All cascaded-power checks passed"))
