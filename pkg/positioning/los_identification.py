# positioning/los_identification.py
"""Positioning-based LoS identification among extracted UE-RIS paths.

Each round every RIS extracts one more candidate path. The candidate
assignment over every RIS subset that best agrees on a common UE position
wins; the round passes when the angles back-computed from that position
match a candidate at every RIS.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import DegenerateGeometryError, SingularSystemError
from nomp.dictionary import response_correlation

from .solver import PositionFix, solve_position

logger = logging.getLogger(__name__)


@dataclass
class LosIdentification:
    fix: PositionFix | None
    los_paths: list
    los_indices: list
    rounds: int
    converged: bool
    subset: tuple = ()
    evaluations_per_round: list = field(default_factory=list)
    back_computed: list = field(default_factory=list)
    correlations: list = field(default_factory=list)


def candidate_count(num_ris, subset_size, candidates_per_ris):
    """Number of (subset, assignment) pairs evaluated in one round."""
    total = 0
    for subset in itertools.combinations(range(num_ris), subset_size):
        total += int(np.prod([candidates_per_ris[k] for k in subset]))
    return total


def _best_assignment(candidates, ris_positions, frames, subset_size):
    best = None
    evaluations = 0
    for subset in itertools.combinations(range(len(candidates)), subset_size):
        for assignment in itertools.product(*(range(len(candidates[k])) for k in subset)):
            evaluations += 1
            directions = [frames[k].direction(candidates[k][i].ris_frequency) for k, i in zip(subset, assignment)]
            try:
                fix = solve_position(directions, [ris_positions[k] for k in subset])
            except (DegenerateGeometryError, SingularSystemError):
                continue
            if best is None or fix.f_min < best[0].f_min:
                best = (fix, subset, assignment)
    return best, evaluations


def identify_los_paths(sources, ris_positions, frames, shapes, config, max_candidates):
    """Run the identification rounds.

    ``sources[k]`` must provide ``extract_ue_ris_path()`` and the current
    candidate list ``ur_paths``; ``max_candidates[k]`` caps how many paths
    RIS k may extract.
    """
    num_ris = len(sources)
    ris_positions = [np.asarray(p, dtype=float) for p in ris_positions]
    max_rounds = config.max_rounds or max(max_candidates)
    result = LosIdentification(fix=None, los_paths=[], los_indices=[], rounds=0, converged=False)
    for round_index in range(1, max_rounds + 1):
        for k, source in enumerate(sources):
            if len(source.ur_paths) < round_index and round_index <= max_candidates[k]:
                source.extract_ue_ris_path()
        candidates = [list(source.ur_paths) for source in sources]
        best, evaluations = _best_assignment(candidates, ris_positions, frames, config.subset_size)
        result.rounds = round_index
        result.evaluations_per_round.append(evaluations)
        if best is None:
            logger.debug("Round %d: no subset gave a valid position", round_index)
            continue
        fix, subset, assignment = best
        chosen = dict(zip(subset, assignment))
        back, indices, correlations = [], [], []
        for k in range(num_ris):
            target = frames[k].frequency(_unit(fix.position - ris_positions[k]))
            scores = [response_correlation(shapes[k], c.ris_frequency, target) for c in candidates[k]]
            index = chosen.get(k, int(np.argmax(scores)))
            back.append(target)
            indices.append(index)
            correlations.append(scores[index])
        fix.chosen = chosen
        result.fix = fix
        result.subset = subset
        result.los_indices = indices
        result.los_paths = [candidates[k][i] for k, i in enumerate(indices)]
        result.back_computed = back
        result.correlations = correlations
        if all(c >= config.threshold for c in correlations):
            result.converged = True
            logger.debug("LoS identified in round %d at %s", round_index, fix.position)
            break
    if not result.converged:
        logger.info("LoS identification did not converge after %d rounds", result.rounds)
    return result


def _unit(v):
    return v / np.linalg.norm(v)
