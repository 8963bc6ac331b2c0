# metrics/transceiver.py
"""SVD precoding, water-filling and the downlink spectral efficiency."""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from core.exceptions import DimensionMismatchError, ZeroChannelError

_BISECTION_TOL = 1e-12


@dataclass
class Transceiver:
    """``w_b`` is the N_b x r precoder, ``w_u`` the N_u x r combiner."""
    w_b: np.ndarray
    w_u: np.ndarray
    powers: np.ndarray
    gains: np.ndarray
    water_level: float

    @property
    def streams(self):
        return int(np.count_nonzero(self.powers))


def water_filling(gains, total_power, noise_power):
    """Powers maximizing sum log(1 + p g / sigma^2) with sum p = P.

    Returns ``(powers, mu)`` with ``p_i = max(mu - sigma^2 / g_i, 0)``.
    Channels with zero gain never receive power.
    """
    gains = np.asarray(gains, dtype=float)
    if total_power < 0:
        raise ValueError("Total power cannot be negative")
    powers = np.zeros_like(gains)
    active = gains > 0
    if total_power == 0 or not np.any(active):
        return powers, 0.0
    floors = noise_power / gains[active]

    def used(mu):
        return np.sum(np.maximum(mu - floors, 0.0))

    low, high = float(np.min(floors)), float(np.max(floors)) + total_power
    while high - low > _BISECTION_TOL * max(1.0, high):
        mid = 0.5 * (low + high)
        if used(mid) > total_power:
            high = mid
        else:
            low = mid
    on = floors < 0.5 * (low + high)
    # Exact level on the settled active set so the budget is met to rounding.
    for _ in range(floors.size + 1):
        mu = (total_power + np.sum(floors[on])) / np.count_nonzero(on)
        settled = floors < mu
        if np.array_equal(settled, on) or not np.any(settled):
            break
        on = settled
    powers[active] = np.maximum(mu - floors, 0.0)
    return powers, float(mu)


def svd_transceiver(h_hat, power, noise_power):
    """Precoder and combiner from the SVD of the downlink channel ``H^H``.

    ``h_hat`` is in uplink orientation (N_b x N_u).
    """
    h_hat = np.asarray(h_hat, dtype=complex)
    if h_hat.ndim != 2:
        raise DimensionMismatchError("Channel estimate must be a matrix")
    if not np.any(h_hat):
        raise ZeroChannelError("Cannot design a transceiver for a zero channel")
    v_u, singular, v_b_h = linalg.svd(h_hat.conj().T, full_matrices=False)
    gains = singular ** 2
    powers, mu = water_filling(gains, power, noise_power)
    w_b = v_b_h.conj().T * np.sqrt(powers)[None, :]
    return Transceiver(w_b=w_b, w_u=v_u, powers=powers, gains=gains, water_level=mu)


def spectral_efficiency(h_true, tx, noise_power):
    """log2 det(I + W_u^H H^H W_b W_b^H H W_u / sigma^2), evaluated on the
    true channel whatever CSI the transceiver was designed from."""
    h_true = np.asarray(h_true, dtype=complex)
    if h_true.shape[0] != tx.w_b.shape[0] or h_true.shape[1] != tx.w_u.shape[0]:
        raise DimensionMismatchError(f"Channel {h_true.shape} does not fit the transceiver")
    effective = tx.w_u.conj().T @ h_true.conj().T @ tx.w_b
    gram = np.eye(effective.shape[0]) + effective @ effective.conj().T / noise_power
    _, logdet = np.linalg.slogdet(gram)
    return float(logdet / np.log(2.0))


def water_filling_rate(gains, powers, noise_power):
    """sum log2(1 + p_i g_i / sigma^2)"""
    return float(np.sum(np.log2(1.0 + np.asarray(powers) * np.asarray(gains) / noise_power)))
