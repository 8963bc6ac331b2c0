# nomp/extraction.py
"""Newtonized OMP over the separated uplink observation of each RIS.

UE-RIS paths are extracted first with the RIS-BS hop fixed to its known
LoS path. RIS-BS NLoS paths follow with the UE-RIS estimate fixed. The
cascade attenuation rho_k depends on the unknown UE distance, so it is
absorbed into the UE-RIS gains.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from channel.synthesis import rician_gains, ris_bs_los_frequencies, ris_shape

from .dictionary import RIS_BS, UE_RIS, AtomDictionary, CascadedLink, response_correlation
from .paths import ComplexityCounter, PathEstimate
from .refinement import newton_refine

logger = logging.getLogger(__name__)

_RISE_TOL = 1e-9


def build_link(cfg, k, schedule, pilots):
    theta_b, rb_departure = ris_bs_los_frequencies(cfg, k)
    shape = ris_shape(cfg, k)
    g0, _ = rician_gains(cfg.n_bs * shape.size, cfg.kappa_rb, cfg.nlos_rb[k])
    los = PathEstimate(RIS_BS, rb_departure, theta_b, complex(g0), PathEstimate.KNOWN, known=True)
    return CascadedLink(
        ris_shape=shape,
        n_bs=cfg.n_bs,
        n_ue=cfg.n_ue,
        pilots=pilots.matrix,
        slow=schedule.slow.gammas[k],
        scale=float(schedule.fast.size),
        rb_los=los,
    )


def build_links(cfg, schedule, pilots):
    return [build_link(cfg, k, schedule, pilots) for k in range(cfg.num_ris)]


def _least_squares(atoms, target):
    matrix = np.column_stack(atoms)
    gains, *_ = scipy.linalg.lstsq(matrix, target)
    return gains


class CascadedExtractor:
    """Extraction state for one RIS: residual, accepted paths and counter."""

    def __init__(self, observation, link, config, counter=None):
        self.y = np.asarray(observation.signal if hasattr(observation, 'signal') else observation)
        self.link = link
        self.config = config
        self.counter = counter if counter is not None else ComplexityCounter()
        self.ur_paths = []
        self.rb_paths = [link.rb_los]
        shape = link.ris_shape
        self.ur_grid = AtomDictionary.build(shape, link.n_ue, config.oversampling_h, config.oversampling_v, config.oversampling_ue)
        self.rb_grid = AtomDictionary.build(shape, link.n_bs, config.oversampling_h, config.oversampling_v, config.oversampling_bs)
        self.energy_history = [self.observation_energy]

    # --- State ---
    @property
    def observation_energy(self):
        return float(np.sum(np.abs(self.y) ** 2))

    def ur_estimate(self):
        """Estimated UE-RIS channel (attenuation absorbed)."""
        return self.link.u_matrix(self.ur_paths)

    def rb_estimate(self):
        return self.link.b_matrix(self.rb_paths)

    def model(self):
        return self.link.model(self.rb_estimate(), self.ur_estimate())

    def residual(self):
        return self.y - self.model()

    def residual_energy(self):
        return float(np.sum(np.abs(self.residual()) ** 2))

    def reconstruct(self, gamma):
        """Estimated ``rho_k H_rb diag(gamma) H_ur`` for any reflection vector."""
        return (self.rb_estimate() * np.asarray(gamma)[None, :]) @ self.ur_estimate()

    def _record(self, stage):
        energy = self.residual_energy()
        if energy > self.energy_history[-1] * (1 + _RISE_TOL):
            logger.warning("Residual energy rose during %s: %.3e -> %.3e", stage, self.energy_history[-1], energy)
        self.energy_history.append(energy)
        return energy

    # --- Gains ---
    def _update_ur_gains(self):
        if not self.ur_paths:
            return
        b = self.rb_estimate()
        atoms = [self.link.ur_atom(p.params, b)[0] for p in self.ur_paths]
        gains = _least_squares(atoms, self.y.ravel())
        self.ur_paths = [p.with_gain(g) for p, g in zip(self.ur_paths, gains)]

    def _update_rb_gains(self):
        free = [p for p in self.rb_paths if not p.known]
        if not free:
            return
        u = self.ur_estimate()
        known = [p for p in self.rb_paths if p.known]
        target = self.y - self.link.model(self.link.b_matrix(known), u)
        atoms = [self.link.rb_atom(p.params, u)[0] for p in free]
        gains = iter(_least_squares(atoms, target.ravel()))
        self.rb_paths = [p if p.known else p.with_gain(next(gains)) for p in self.rb_paths]

    # --- Refinement ---
    def _ur_atom_fn(self, b_matrix):
        return lambda x, derivatives: self.link.ur_atom(x, b_matrix, derivatives)

    def _rb_atom_fn(self, u_matrix):
        return lambda x, derivatives: self.link.rb_atom(x, u_matrix, derivatives)

    def _cyclic_refine(self, hop):
        paths_attr = 'ur_paths' if hop == UE_RIS else 'rb_paths'
        for _ in range(self.config.cyclic_rounds):
            before = self.residual_energy()
            snapshot = list(getattr(self, paths_attr))
            for i, path in enumerate(snapshot):
                if path.known:
                    continue
                current = getattr(self, paths_attr)
                others = current[:i] + current[i + 1:]
                if hop == UE_RIS:
                    b = self.rb_estimate()
                    z = self.y - self.link.model(b, self.link.u_matrix(others))
                    atom_fn = self._ur_atom_fn(b)
                else:
                    u = self.ur_estimate()
                    z = self.y - self.link.model(self.link.b_matrix(others), u)
                    atom_fn = self._rb_atom_fn(u)
                x, _ = newton_refine(current[i].params, atom_fn, z.ravel(), self.config.newton_steps)
                current[i] = current[i].with_params(x)
                setattr(self, paths_attr, current)
            if hop == UE_RIS:
                self._update_ur_gains()
            else:
                self._update_rb_gains()
            after = self.residual_energy()
            if after > before * (1 + _RISE_TOL):
                setattr(self, paths_attr, snapshot)
                break
            if before - after <= 1e-9 * before:
                break

    # --- Extraction steps ---
    def extract_ue_ris_path(self):
        """Coarse search, single refinement, cyclic refinement, gains update."""
        residual = self.residual()
        x, _, evaluations = self.link.coarse_ue_ris(residual, self.ur_grid)
        self.counter.add(evaluations, UE_RIS)
        b = self.rb_estimate()
        x, _ = newton_refine(x, self._ur_atom_fn(b), residual.ravel(), self.config.newton_steps)
        path = PathEstimate.from_params(UE_RIS, x)
        self.ur_paths.append(path)
        self._update_ur_gains()
        self._cyclic_refine(UE_RIS)
        self._record('UE-RIS extraction')
        logger.debug("UE-RIS path %d at %s", len(self.ur_paths), self.ur_paths[-1].params)
        return self.ur_paths[-1]

    def extract_ris_bs_path(self):
        residual = self.residual()
        u = self.ur_estimate()
        x0, _, evaluations = self.link.coarse_ris_bs(
            residual, u, self.rb_grid, exclude=self.link.rb_los, threshold=self.config.duplicate_threshold,
        )
        self.counter.add(evaluations, RIS_BS)
        x, _ = newton_refine(x0, self._rb_atom_fn(u), residual.ravel(), self.config.newton_steps)
        if self._duplicates_los(x):
            x = x0
        self.rb_paths.append(PathEstimate.from_params(RIS_BS, x))
        self._update_rb_gains()
        self._cyclic_refine(RIS_BS)
        self._record('RIS-BS extraction')
        return self.rb_paths[-1]

    def _duplicates_los(self, x):
        los = self.link.rb_los
        candidate = PathEstimate.from_params(RIS_BS, x)
        threshold = self.config.duplicate_threshold
        return (
            response_correlation(self.link.n_bs, los.ula_frequency.theta_cap, candidate.ula_frequency.theta_cap) >= threshold
            and response_correlation(self.link.ris_shape, los.ris_frequency, candidate.ris_frequency) >= threshold
        )

    def final_gain_refit(self):
        self._update_ur_gains()
        self._update_rb_gains()
        self._record('final gain refit')

    def confirm_ris_bs_los(self, ur_path):
        """Check that the strongest RIS-BS atom, seen through ``ur_path``
        alone, is the known LoS path. Counts one BS-side coarse search."""
        u = self.link.u_matrix([ur_path])
        x, _, evaluations = self.link.coarse_ris_bs(self.y, u, self.rb_grid)
        self.counter.add(evaluations, 'los-confirmation')
        x, _ = newton_refine(x, self._rb_atom_fn(u), self.y.ravel(), self.config.newton_steps)
        return self._duplicates_los(x)

    # --- Snapshots for residual-threshold stopping ---
    def snapshot(self):
        return list(self.ur_paths), list(self.rb_paths), list(self.energy_history)

    def restore(self, state):
        self.ur_paths, self.rb_paths, self.energy_history = (list(s) for s in state)


@dataclass
class FullExtraction:
    extractors: list = field(default_factory=list)
    counter: ComplexityCounter = field(default_factory=ComplexityCounter)

    def reconstruct(self, gammas):
        """Estimated reflection channel under reflection vectors ``gammas``."""
        return sum(ex.reconstruct(g) for ex, g in zip(self.extractors, gammas))

    @property
    def path_lists(self):
        return [(ex.ur_paths, ex.rb_paths) for ex in self.extractors]


def _extract_until(extractor, step, count, config):
    """Run ``step`` ``count`` times, or until the newest path explains less
    than the stop fraction of the observation when counts are unknown."""
    limit = count if config.known_path_counts else (config.max_paths or count)
    total = extractor.observation_energy
    for _ in range(limit):
        if config.known_path_counts:
            step()
            continue
        state = extractor.snapshot()
        before = extractor.residual_energy()
        step()
        if before - extractor.residual_energy() < config.residual_stop_fraction * total:
            extractor.restore(state)
            break


def full_extraction(observations, links, config, path_counts):
    """Full-CSI baseline: every UE-RIS and RIS-BS path of every RIS.

    ``observations`` are the separated uplink observations of the RIS links
    (not the direct one); ``path_counts`` holds (L_ur + 1, L_rb) per RIS.
    """
    result = FullExtraction()
    for observation, link, (n_ur, n_rb) in zip(observations, links, path_counts):
        extractor = CascadedExtractor(observation, link, config, result.counter)
        _extract_until(extractor, extractor.extract_ue_ris_path, n_ur, config)
        _extract_until(extractor, extractor.extract_ris_bs_path, n_rb, config)
        if config.final_gain_refit:
            extractor.final_gain_refit()
        result.extractors.append(extractor)
    logger.debug("Full extraction evaluated %d coarse atoms", result.counter.total)
    return result
