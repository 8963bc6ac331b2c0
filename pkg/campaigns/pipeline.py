# campaigns/pipeline.py
"""One Monte Carlo trial of the five-phase acquisition pipeline.

Phase 1 trains the uplink and separates the links. Phase 2 extracts the
LoS paths (joint LoS search) or every path (full NOMP baseline). Phase 3
designs the reflections and rebuilds the sparse channel. Phase 4 trains
the downlink under the designed reflections, and Phase 5 estimates the
downlink channel at the UE. Metrics are computed against the ground truth
kept here, never passed to the estimators.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from channel.cascade import reflection_channel
from channel.synthesis import ris_bs_los_frequencies, ris_frame, ris_shape, sample_realization, ue_ris_los_frequencies
from core.exceptions import DegenerateGeometryError, SingularSystemError
from customization.reflection import (
    design_reflections, designed_inner_product, enhanced_sparse_approx, power_ratio, random_reflections,
    sparse_approx,
)
from downlink.estimation import estimate_downlink
from metrics.errors import nme, nmse, nmse_separation, position_error
from metrics.transceiver import spectral_efficiency, svd_transceiver
from nomp.complexity import complexity_ratio, default_path_counts
from nomp.extraction import CascadedExtractor, build_links, full_extraction
from nomp.paths import ComplexityCounter
from positioning.los_identification import identify_los_paths
from positioning.solver import solve_position
from training.schedules import downlink_slot_count, make_pilots, make_schedule, uplink_slot_count
from training.separation import separate_downlink, separate_uplink, synthesize_downlink, synthesize_uplink

from .models import SchemeId

logger = logging.getLogger(__name__)


@dataclass
class MetricReport:
    scheme: str
    metrics: dict = field(default_factory=dict)

    def add(self, name, value):
        value = float(value)
        if not np.isfinite(value):
            logger.debug("Dropping non-finite %s for %s", name, self.scheme)
            return
        self.metrics[name] = value


@dataclass
class UplinkPhase:
    realization: object
    schedule: object
    pilots: object
    separated: list
    links: list

    @property
    def ris_observations(self):
        return self.separated[1:]


@dataclass
class LosChoice:
    """Per-RIS LoS estimates feeding the reflection design."""
    ur_paths: list
    rb_frequencies: list
    ur_design: list


# --- Phase 1 ---
def run_uplink_phase(cfg, rng, noise_power=None):
    realization = sample_realization(cfg, rng)
    cfg = realization.config
    schedule = make_schedule(cfg)
    pilots = make_pilots(cfg.n_ue, cfg.ue_power)
    raw = synthesize_uplink(realization, schedule, pilots, rng, noise_power=noise_power)
    separated = separate_uplink(raw, schedule.fast, pilots)
    return UplinkPhase(realization, schedule, pilots, separated, build_links(cfg, schedule, pilots))


def _separation_metrics(report, uplink, noise_power):
    k_f = uplink.schedule.fast.size
    mc_values, theory_values = [], []
    for observation in uplink.separated:
        mc, theory = nmse_separation(observation.signal, observation.ideal, k_f * noise_power)
        report.add(f'nmse_separation_mc_link{observation.link}', mc)
        report.add(f'nmse_separation_theory_link{observation.link}', theory)
        mc_values.append(mc)
        theory_values.append(theory)
    report.add('nmse_separation_mc', np.mean(mc_values))
    report.add('nmse_separation_theory', np.mean(theory_values))


# --- Phase 2 ---
def _true_los(cfg, realization):
    return [ue_ris_los_frequencies(cfg, k, realization.ue_position) for k in range(cfg.num_ris)]


def _angle_metrics(report, cfg, realization, ris_frequencies):
    truth = [arrival for arrival, _ in _true_los(cfg, realization)]
    report.add('nme_theta_ur_a', nme([f.theta_cap for f in ris_frequencies], [t.theta_cap for t in truth]))
    report.add('nme_phi_ur_a', nme([f.phi_cap for f in ris_frequencies], [t.phi_cap for t in truth]))


def identify_los_with_confirmation(sim, uplink):
    """Proposed Phase 2: joint LoS search plus one BS-side LoS confirmation per RIS."""
    cfg = uplink.realization.config
    counter = ComplexityCounter()
    extractors = [
        CascadedExtractor(observation, link, sim.nomp, counter)
        for observation, link in zip(uplink.ris_observations, uplink.links)
    ]
    max_candidates = [sim.nomp.max_paths or n + 1 for n in cfg.nlos_ur]
    result = identify_los_paths(
        extractors,
        cfg.ris_positions,
        [ris_frame(cfg, k) for k in range(cfg.num_ris)],
        [ris_shape(cfg, k) for k in range(cfg.num_ris)],
        sim.los_search,
        max_candidates,
    )
    los_paths = result.los_paths or [ex.ur_paths[0] for ex in extractors]
    confirmed = [ex.confirm_ris_bs_los(path) for ex, path in zip(extractors, los_paths)]
    return result, los_paths, confirmed, counter


def _baseline_los(extraction):
    """Strongest extracted UE-RIS path per RIS."""
    return [max(ex.ur_paths, key=lambda p: abs(p.gain)) for ex in extraction.extractors]


# --- Phase 3 ---
def _design(cfg, sim, choice, realization, back_computed=None):
    mode, source = sim.pipeline.customization_mode, sim.pipeline.design_source
    if mode == 'oracle':
        ur_design = [arrival for arrival, _ in _true_los(cfg, realization)]
    elif source == 'geometric' and back_computed:
        ur_design = list(back_computed)
    else:
        ur_design = [p.ris_frequency for p in choice.ur_paths]
    choice.ur_design = ur_design
    shapes = [ris_shape(cfg, k) for k in range(cfg.num_ris)]
    return design_reflections(shapes, choice.rb_frequencies, ur_design)


def _estimated_sparse(cfg, links, choice, design):
    """Uplink reconstruction of H_e from the extracted LoS paths."""
    gains = []
    for k, (link, path) in enumerate(zip(links, choice.ur_paths)):
        inner = designed_inner_product(
            link.ris_shape, design.rb_frequencies[k], design.ur_frequencies[k],
            link.rb_los.ris_frequency, path.ris_frequency,
        )
        gains.append(link.rb_los.gain * path.gain * inner)
    return sparse_approx(
        cfg.n_bs,
        cfg.n_ue,
        [link.rb_los.ula_frequency.theta_cap for link in links],
        [path.ula_frequency.theta_cap for path in choice.ur_paths],
        gains,
    )


def _customization_metrics(report, realization, gammas, rng):
    cfg = realization.config
    h = reflection_channel(realization, gammas)
    ratio, _ = power_ratio(h, enhanced_sparse_approx(realization, gammas).matrix)
    report.add('power_ratio_customized', ratio)
    shapes = [ris_shape(cfg, k) for k in range(cfg.num_ris)]
    random_gammas = random_reflections(shapes, rng)
    h_random = reflection_channel(realization, random_gammas)
    ratio, _ = power_ratio(h_random, enhanced_sparse_approx(realization, random_gammas).matrix)
    report.add('power_ratio_uncustomized', ratio)
    return h


def _se_metrics(report, cfg, h_true, h_estimate):
    noise = cfg.noise_power
    perfect = spectral_efficiency(h_true, svd_transceiver(h_true, cfg.bs_power, noise), noise)
    report.add('se_perfect_bps_hz', perfect)
    if h_estimate is None:
        report.add('se_bps_hz', perfect)
        return
    report.add('se_bps_hz', spectral_efficiency(h_true, svd_transceiver(h_estimate, cfg.bs_power, noise), noise))


# --- Schemes ---
def _run_perfect(sim, uplink, report, rng, noise_power):
    cfg = uplink.realization.config
    design = design_reflections(
        [ris_shape(cfg, k) for k in range(cfg.num_ris)],
        [ris_bs_los_frequencies(cfg, k)[1] for k in range(cfg.num_ris)],
        [arrival for arrival, _ in _true_los(cfg, uplink.realization)],
    )
    h = _customization_metrics(report, uplink.realization, design.gammas, rng)
    _se_metrics(report, cfg, h, None)


def _run_baseline(sim, uplink, report, rng, noise_power):
    cfg = uplink.realization.config
    extraction = full_extraction(uplink.ris_observations, uplink.links, sim.nomp, default_path_counts(cfg))
    report.add('complexity', extraction.counter.total)
    report.add('complexity_ratio', np.mean([
        complexity_ratio(n_ur, n_rb, cfg.n_ue, cfg.n_bs) for n_ur, n_rb in default_path_counts(cfg)
    ]))
    los = _baseline_los(extraction)
    _angle_metrics(report, cfg, uplink.realization, [p.ris_frequency for p in los])
    frames = [ris_frame(cfg, k) for k in range(cfg.num_ris)]
    try:
        fix = solve_position([f.direction(p.ris_frequency) for f, p in zip(frames, los)], cfg.ris_positions)
        report.add('position_error_m', position_error(fix.position, uplink.realization.ue_position))
    except (DegenerateGeometryError, SingularSystemError) as exc:
        logger.debug("Baseline position fix failed: %s", exc)
    choice = LosChoice(
        ur_paths=los,
        rb_frequencies=[link.rb_los.ris_frequency for link in uplink.links],
        ur_design=[],
    )
    design = _design(cfg, sim, choice, uplink.realization)
    h = _customization_metrics(report, uplink.realization, design.gammas, rng)
    h_hat = extraction.reconstruct(design.gammas)
    report.add('nmse_uplink', nmse(h, h_hat))
    _se_metrics(report, cfg, h, h_hat)


def _run_proposed(sim, uplink, report, rng, noise_power):
    cfg = uplink.realization.config
    realization = uplink.realization
    identification, los_paths, confirmed, counter = identify_los_with_confirmation(sim, uplink)
    report.add('complexity', counter.total)
    report.add('los_rounds', identification.rounds)
    report.add('los_search_converged', 1.0 if identification.converged else 0.0)
    report.add('rb_los_confirmed', np.mean(confirmed))
    _angle_metrics(report, cfg, realization, [p.ris_frequency for p in los_paths])
    if identification.fix is not None:
        report.add('position_error_m', position_error(identification.fix.position, realization.ue_position))
    choice = LosChoice(
        ur_paths=los_paths,
        rb_frequencies=[link.rb_los.ris_frequency for link in uplink.links],
        ur_design=[],
    )
    design = _design(cfg, sim, choice, realization, back_computed=identification.back_computed)
    h = _customization_metrics(report, realization, design.gammas, rng)
    report.add('nmse_uplink', nmse(h, _estimated_sparse(cfg, uplink.links, choice, design).matrix))

    # Phases 4 and 5
    fast = uplink.schedule.fast
    bs_pilots = make_pilots(cfg.n_bs, cfg.bs_power)
    raw = synthesize_downlink(realization, design.gammas, bs_pilots, fast, rng, noise_power=noise_power)
    separated = separate_downlink(raw, fast)
    bs_frequencies = [link.rb_los.ula_frequency.theta_cap for link in uplink.links]
    downlink = estimate_downlink(
        separated[1:], bs_pilots, bs_frequencies, fast.size, sim.nomp.oversampling_ue, sim.nomp.newton_steps,
    )
    truth = [departure.theta_cap for _, departure in _true_los(cfg, realization)]
    report.add('nme_theta_ur_d_downlink', nme([p.ue_frequency.theta_cap for p in downlink.paths], truth))
    report.add('nmse_downlink', nmse(h, downlink.matrix))
    _se_metrics(report, cfg, h, downlink.matrix)
    uplink_slots = uplink_slot_count(uplink.schedule, uplink.pilots)
    downlink_slots = downlink_slot_count(uplink.schedule, bs_pilots)
    report.add('uplink_pilot_slots', uplink_slots)
    report.add('downlink_pilot_slots', downlink_slots)
    report.add('pilot_overhead_reduction', uplink_slots / downlink_slots)


_SCHEMES = {
    SchemeId.PERFECT: _run_perfect,
    SchemeId.FULL_NOMP: _run_baseline,
    SchemeId.PROPOSED: _run_proposed,
}


def run_phase_pipeline(sim, scheme, rng, noiseless=False):
    """Run one trial of ``scheme`` and return its :class:`MetricReport`.

    ``noiseless`` removes the training noise only; SE is still evaluated
    at the configured noise power.
    """
    scheme = SchemeId(scheme)
    cfg = sim.scenario
    noise_power = 0.0 if noiseless else cfg.noise_power
    report = MetricReport(scheme=scheme.value)
    uplink = run_uplink_phase(cfg, rng, noise_power=noise_power)
    _separation_metrics(report, uplink, noise_power)
    _SCHEMES[scheme](sim, uplink, report, rng, noise_power)
    return report
