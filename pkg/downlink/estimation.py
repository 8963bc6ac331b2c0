# downlink/estimation.py
"""UE-side estimation of the customized channel.

With the reflections customized, each separated downlink component is
close to a single path, so the UE only needs one angle and one gain per
RIS. The UE knows each RIS's BS-side angle and the fast schedule.
"""
import logging
from dataclasses import dataclass

import numpy as np

from core.exceptions import DimensionMismatchError, NoSignalError
from geometry.arrays import UlaFrequency, frequency_grid, ula_response, ula_response_derivatives, ula_response_matrix
from nomp.refinement import newton_refine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DownlinkPathEstimate:
    """``gain_conj`` is the conjugated impaired cascaded gain."""
    gain_conj: complex
    ue_frequency: UlaFrequency
    n_ue: int

    @property
    def response(self):
        return ula_response(self.n_ue, self.ue_frequency.theta_cap)


@dataclass
class DownlinkEstimate:
    paths: list
    bs_frequencies: list
    n_bs: int

    @property
    def matrix_h(self):
        """Reconstructed downlink channel H^H, N_u x N_b."""
        return reconstruct_downlink(self.paths, self.bs_frequencies, self.n_bs)

    @property
    def matrix(self):
        """The corresponding uplink-orientation channel, N_b x N_u."""
        return self.matrix_h.conj().T


def reduce_signal(y_u, pilots, a_b, power, k_f):
    """``Y S_b^H a_b / (P_b K_F)``"""
    y_u = np.asarray(y_u)
    pilots = np.asarray(pilots)
    if y_u.shape[1] != pilots.shape[1] or pilots.shape[0] != a_b.shape[0]:
        raise DimensionMismatchError("Observation, pilots and BS response do not line up")
    return y_u @ pilots.conj().T @ a_b / (power * k_f)


def ml_single_path(y, oversampling=2, newton_steps=3):
    """Single-path ML angle and gain over an oversampled grid, then Newton."""
    y = np.asarray(y, dtype=complex)
    if not np.any(y):
        raise NoSignalError("Reduced downlink signal is all zeros")
    n = y.size
    grid = frequency_grid(oversampling * n)
    scores = np.abs(ula_response_matrix(n, grid).conj().T @ y) ** 2
    x0 = np.array([grid[int(np.argmax(scores))]])

    def atom_fn(x, derivatives):
        a, da, dda = ula_response_derivatives(n, x[0])
        if not derivatives:
            return a, None, None
        return a, [da], [[dda]]

    x, _ = newton_refine(x0, atom_fn, y, newton_steps, max_step=np.pi / n)
    theta = float(x[0])
    gain_conj = complex(np.vdot(ula_response(n, theta), y))
    return DownlinkPathEstimate(gain_conj=gain_conj, ue_frequency=UlaFrequency(theta), n_ue=n)


def reconstruct_downlink(paths, bs_frequencies, n_bs):
    """Sum of the K rank-one terms ``xi* a_u(Theta_k) a_b^H(Theta_k^rb)``."""
    if len(paths) != len(bs_frequencies) or not paths:
        raise DimensionMismatchError("One BS angle per path is required")
    return sum(p.gain_conj * np.outer(p.response, ula_response(n_bs, f).conj()) for p, f in zip(paths, bs_frequencies))


def estimate_downlink(observations, pilots, bs_frequencies, k_f, oversampling=2, newton_steps=3):
    """Reduce and detect one path per RIS link.

    ``observations`` are the separated RIS links (direct link excluded),
    in the same order as ``bs_frequencies``.
    """
    paths = []
    for observation, theta_b in zip(observations, bs_frequencies):
        a_b = ula_response(pilots.size, theta_b)
        y = reduce_signal(observation.signal, pilots.matrix, a_b, pilots.power, k_f)
        paths.append(ml_single_path(y, oversampling, newton_steps))
        logger.debug("Link %d: UE frequency %.4f", observation.link, paths[-1].ue_frequency.theta_cap)
    return DownlinkEstimate(paths=paths, bs_frequencies=list(bs_frequencies), n_bs=pilots.size)
