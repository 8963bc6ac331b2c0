# training/separation.py
"""Received pilot synthesis and per-link separation via fast reflections.

Noise is drawn once per physical receive slot and kept beside the signal,
so separation and the metrics see the very same realization.
"""
import logging
from dataclasses import dataclass

import numpy as np

from channel.cascade import check_reflection
from core.exceptions import DimensionMismatchError
from core.units import complex_normal

logger = logging.getLogger(__name__)


@dataclass
class RawObservation:
    """Received slots. Uplink axes are (K_S, N_u pilots, K_F, N_b);
    downlink axes are (N_b pilots, K_F, N_u)."""
    signal: np.ndarray
    noise: np.ndarray
    direction: str

    UPLINK = 'uplink'
    DOWNLINK = 'downlink'


@dataclass
class SeparatedObservation:
    """One link after separation. ``link`` 0 is the direct hop and RIS k is
    link ``k + 1``. Uplink signals are N_b N_u x K_S, downlink N_u x N_b."""
    link: int
    signal: np.ndarray
    noise: np.ndarray
    direction: str

    @property
    def ideal(self):
        return self.signal - self.noise


def _attenuated_cascades(realization, gammas_per_block):
    """rho_k H_rb diag(gamma) H_ur for every RIS and every gamma column."""
    ls = realization.large_scale
    out = []
    for k, (ur, rb) in enumerate(realization.segments):
        gammas = np.asarray(gammas_per_block[k])
        if gammas.ndim == 1:
            gammas = gammas[:, None]
        if gammas.shape[0] != rb.matrix.shape[1]:
            raise DimensionMismatchError(f"RIS {k} schedule has {gammas.shape[0]} rows, expected {rb.matrix.shape[1]}")
        check_reflection(gammas)
        # (blocks, N_b, N_u)
        out.append(ls.rho[k] * np.einsum('bm,ms,mu->sbu', rb.matrix, gammas, ur.matrix))
    return out


def _link_channels(realization, cascades, fast):
    """H(v) per fast slot, shape (blocks, K_F, N_b, N_u)."""
    f = fast.matrix
    if f.shape[0] != len(realization.segments) + 1:
        raise DimensionMismatchError("Fast reflection size must be the number of RISs plus one")
    num_blocks = cascades[0].shape[0] if cascades else 1
    if realization.direct is not None:
        n_b, n_u = realization.direct.matrix.shape
    else:
        n_b, n_u = cascades[0].shape[1:]
    total = np.zeros((num_blocks, f.shape[0], n_b, n_u), dtype=complex)
    if realization.direct is not None:
        direct = realization.large_scale.rho_0 * realization.direct.matrix
        total += f[None, :, 0, None, None] * direct[None, None, :, :]
    for k, cascade in enumerate(cascades):
        total += f[None, :, k + 1, None, None] * cascade[:, None, :, :]
    return total


def synthesize_uplink(realization, schedule, pilots, rng, noise_power=None):
    """r_{s,p,v} = H(s, v) s_p + n for every slow block, pilot and fast slot."""
    cfg = realization.config
    noise_power = cfg.noise_power if noise_power is None else noise_power
    if pilots.size != cfg.n_ue:
        raise DimensionMismatchError(f"Uplink pilots are {pilots.size}x{pilots.size}, UE has {cfg.n_ue} antennas")
    if len(schedule.slow.gammas) != cfg.num_ris:
        raise DimensionMismatchError("Slow schedule must cover every RIS")
    cascades = _attenuated_cascades(realization, schedule.slow.gammas)
    channels = _link_channels(realization, cascades, schedule.fast)
    if channels.shape[0] == 1 and schedule.slow.num_blocks > 1:
        channels = np.repeat(channels, schedule.slow.num_blocks, axis=0)
    signal = np.einsum('svbu,up->spvb', channels, pilots.matrix)
    noise = complex_normal(rng, signal.shape, noise_power)
    return RawObservation(signal=signal + noise, noise=noise, direction=RawObservation.UPLINK)


def separate_uplink(raw, fast, pilots=None):
    """Correlate against the fast DFT columns and stack per link.

    Column s of link k is vec of the N_b x N_u block for slow block s.
    """
    if raw.direction != RawObservation.UPLINK:
        raise DimensionMismatchError("separate_uplink needs an uplink observation")
    num_blocks, n_pilots, k_f, n_b = raw.signal.shape
    if k_f != fast.size:
        raise DimensionMismatchError(f"Observation has {k_f} fast slots, schedule has {fast.size}")
    if pilots is not None and pilots.size != n_pilots:
        raise DimensionMismatchError("Pilot matrix does not match the observation")

    def stack(tensor):
        links = np.einsum('spvb,vk->kspb', tensor, fast.matrix.conj())
        return links.reshape(k_f, num_blocks, n_pilots * n_b).transpose(0, 2, 1)

    signal, noise = stack(raw.signal), stack(raw.noise)
    return [
        SeparatedObservation(link=k, signal=signal[k], noise=noise[k], direction=RawObservation.UPLINK)
        for k in range(k_f)
    ]


def synthesize_downlink(realization, gammas, pilots, fast, rng, noise_power=None):
    """r_{q,v} = H(v)^H s_q + n under fixed reflections ``gammas``."""
    cfg = realization.config
    noise_power = cfg.noise_power if noise_power is None else noise_power
    if pilots.size != cfg.n_bs:
        raise DimensionMismatchError(f"Downlink pilots are {pilots.size}x{pilots.size}, BS has {cfg.n_bs} antennas")
    cascades = _attenuated_cascades(realization, [np.asarray(g)[:, None] for g in gammas])
    channels = _link_channels(realization, cascades, fast)[0]
    # (K_F, N_b, N_u) -> H(v)^H s_q
    signal = np.einsum('vbu,bq->qvu', channels.conj(), pilots.matrix)
    noise = complex_normal(rng, signal.shape, noise_power)
    return RawObservation(signal=signal + noise, noise=noise, direction=RawObservation.DOWNLINK)


def separate_downlink(raw, fast):
    if raw.direction != RawObservation.DOWNLINK:
        raise DimensionMismatchError("separate_downlink needs a downlink observation")
    if raw.signal.shape[1] != fast.size:
        raise DimensionMismatchError(f"Observation has {raw.signal.shape[1]} fast slots, schedule has {fast.size}")

    def stack(tensor):
        # y_{k,q} = R_q f_k, columns over pilots q
        return np.einsum('qvu,vk->kuq', tensor, fast.matrix)

    signal, noise = stack(raw.signal), stack(raw.noise)
    return [
        SeparatedObservation(link=k, signal=signal[k], noise=noise[k], direction=RawObservation.DOWNLINK)
        for k in range(fast.size)
    ]
