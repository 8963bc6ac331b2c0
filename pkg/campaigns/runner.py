# campaigns/runner.py
"""Seeded Monte Carlo execution of a campaign.

Every (sweep point, trial) pair gets its own generator spawned from
``SeedSequence([seed, point, trial])`` and every scheme replays that same
stream, so schemes are compared on identical realizations. Results are
gathered in task order, so thread count never changes the output.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from core.exceptions import SimulationError

from .pipeline import run_phase_pipeline

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrialOutcome:
    point: int
    trial: int
    scheme: str
    metrics: dict | None
    error: str = ''

    @property
    def failed(self):
        return self.metrics is None


@dataclass(frozen=True)
class AggregateRow:
    sweep_axis: str
    sweep_value: float
    scheme: str
    metric: str
    mean: float
    stderr: float
    ci95: float
    trials: int
    failed: int


@dataclass
class CampaignResult:
    campaign: object
    rows: list = field(default_factory=list)
    failures: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def failed_trials(self):
        return sum(self.failures.values())

    @property
    def campaign_failed(self):
        """True when some (point, scheme) produced no successful trial."""
        trials = self.campaign.trials
        return any(count >= trials for count in self.failures.values())


def trial_rng(seed, point, trial):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(point), int(trial)]))


def run_trial(campaign, point, trial, sim):
    """All schemes of one trial, each on a fresh copy of the trial's stream."""
    outcomes = []
    for scheme in campaign.schemes:
        try:
            report = run_phase_pipeline(sim, scheme, trial_rng(campaign.seed, point, trial), campaign.noiseless)
        except (SimulationError, np.linalg.LinAlgError) as exc:
            logger.warning("Trial %d at point %d failed for %s: %s", trial, point, scheme, exc)
            outcomes.append(TrialOutcome(point, trial, scheme, None, f"{type(exc).__name__}: {exc}"))
            continue
        metrics = report.metrics
        if campaign.metrics:
            metrics = {k: v for k, v in metrics.items() if k in campaign.metrics}
        outcomes.append(TrialOutcome(point, trial, scheme, metrics))
    return outcomes


def summarize(values):
    """(mean, stderr, ci95 half-width) of a sample."""
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(np.mean(values))
    if n < 2:
        return mean, 0.0, 0.0
    stderr = float(np.std(values, ddof=1) / np.sqrt(n))
    return mean, stderr, float(stats.t.ppf(0.975, n - 1) * stderr)


def aggregate(campaign, outcomes):
    result = CampaignResult(campaign=campaign)
    for point, value in enumerate(campaign.sweep_values):
        for scheme in campaign.schemes:
            selected = [o for o in outcomes if o.point == point and o.scheme == scheme]
            failed = sum(o.failed for o in selected)
            result.failures[(point, scheme)] = failed
            result.errors.extend(o.error for o in selected if o.failed)
            samples = {}
            for outcome in selected:
                if outcome.failed:
                    continue
                for metric, metric_value in outcome.metrics.items():
                    samples.setdefault(metric, []).append(metric_value)
            for metric in sorted(samples):
                mean, stderr, ci95 = summarize(samples[metric])
                result.rows.append(AggregateRow(
                    sweep_axis=campaign.sweep_axis,
                    sweep_value=float(value),
                    scheme=scheme,
                    metric=metric,
                    mean=mean,
                    stderr=stderr,
                    ci95=ci95,
                    trials=len(samples[metric]),
                    failed=failed,
                ))
    return result


def run_campaign(campaign, threads=1, progress=None):
    """Run every trial of every sweep point and aggregate.

    ``progress`` is called with ``(done, total)`` after each trial.
    """
    configs = [campaign.point_config(value) for value in campaign.sweep_values]
    tasks = [(point, trial) for point in range(len(configs)) for trial in range(campaign.trials)]
    logger.info("Running %s: %d points x %d trials on %d thread(s)",
                campaign.name, len(configs), campaign.trials, threads)

    def work(task):
        point, trial = task
        return run_trial(campaign, point, trial, configs[point])

    outcomes = []
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        for done, batch in enumerate(pool.map(work, tasks), start=1):
            outcomes.extend(batch)
            if progress is not None:
                progress(done, len(tasks))
    result = aggregate(campaign, outcomes)
    if result.failed_trials:
        logger.warning("%s: %d failed scheme-trials", campaign.name, result.failed_trials)
    return result
