# training/schedules.py
"""Slow and fast RIS reflection schedules and orthogonal pilot matrices."""
from dataclasses import dataclass

import numpy as np

from core.exceptions import DimensionMismatchError, InvalidReflectionError, InvalidShapeError


def dft_matrix(n):
    """Unnormalized DFT, entry (v, k) = exp(-j 2 pi v k / n)."""
    idx = np.arange(int(n))
    return np.exp(-2j * np.pi * np.outer(idx, idx) / int(n))


@dataclass(frozen=True)
class FastReflectionMatrix:
    matrix: np.ndarray

    @property
    def size(self):
        """K_F, the number of fast slots (links K plus the direct one)."""
        return self.matrix.shape[0]

    def column(self, link):
        return self.matrix[:, link]


def make_fast_matrix(num_ris):
    if num_ris < 0:
        raise InvalidShapeError("The number of RISs cannot be negative")
    return FastReflectionMatrix(dft_matrix(num_ris + 1))


@dataclass(frozen=True)
class SlowSchedule:
    """Per-RIS slow reflection matrices, each M_k x K_S."""
    gammas: tuple

    def __post_init__(self):
        widths = {g.shape[1] for g in self.gammas}
        if len(widths) > 1:
            raise DimensionMismatchError("All slow schedules must have the same number of blocks")
        for g in self.gammas:
            if np.any(np.abs(np.abs(g) - 1.0) > 1e-9):
                raise InvalidReflectionError("Slow reflection entries must have unit modulus")

    @property
    def num_blocks(self):
        """K_S"""
        return self.gammas[0].shape[1] if self.gammas else 1

    @classmethod
    def from_matrices(cls, matrices):
        return cls(tuple(np.asarray(m, dtype=complex) for m in matrices))


def dft_slow_schedule(element_counts):
    """M_k-point DFT columns per RIS; smaller RISs repeat columns cyclically
    so every RIS spans K_S = max M_k blocks."""
    num_blocks = max(element_counts, default=1)
    gammas = []
    for m in element_counts:
        base = dft_matrix(m)
        gammas.append(base[:, np.arange(num_blocks) % m])
    return SlowSchedule(tuple(gammas))


@dataclass(frozen=True)
class ReflectionSchedule:
    slow: SlowSchedule
    fast: FastReflectionMatrix


def make_schedule(cfg):
    return ReflectionSchedule(
        slow=dft_slow_schedule(cfg.ris_element_counts),
        fast=make_fast_matrix(cfg.num_ris),
    )


@dataclass(frozen=True)
class PilotMatrix:
    matrix: np.ndarray
    power: float

    @property
    def size(self):
        return self.matrix.shape[0]


def make_pilots(n, power):
    """Scaled unitary DFT so that ``S S^H = P I``."""
    if n < 1:
        raise InvalidShapeError("Pilot matrix needs at least one antenna")
    return PilotMatrix(np.sqrt(power) * dft_matrix(n) / np.sqrt(n), float(power))


def uplink_slot_count(schedule, pilots):
    return schedule.slow.num_blocks * pilots.size * schedule.fast.size


def downlink_slot_count(schedule, pilots):
    return pilots.size * schedule.fast.size
