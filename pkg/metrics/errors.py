# metrics/errors.py
"""Estimation error metrics: NMSE, separation NMSE, NME, position error."""
import numpy as np

from core.exceptions import DimensionMismatchError, ZeroChannelError
from geometry.arrays import wrap_frequency


def nmse(reference, estimate):
    """||ref - est||_F^2 / ||ref||_F^2"""
    reference = np.asarray(reference)
    estimate = np.asarray(estimate)
    if reference.shape != estimate.shape:
        raise DimensionMismatchError(f"Shapes differ: {reference.shape} vs {estimate.shape}")
    energy = float(np.sum(np.abs(reference) ** 2))
    if energy == 0.0:
        raise ZeroChannelError("NMSE against a zero reference is undefined")
    return float(np.sum(np.abs(reference - estimate) ** 2)) / energy


def nmse_separation(separated, ideal, noise_variance):
    """Monte Carlo and expected NMSE of one separated link.

    The Monte Carlo value compares the separated signal with its noiseless
    counterpart. The expected value replaces the realized noise energy by
    ``entries * noise_variance``, where ``noise_variance`` is the per-entry
    variance after separation (K_F sigma^2).
    """
    separated = np.asarray(separated)
    ideal = np.asarray(ideal)
    if separated.shape != ideal.shape:
        raise DimensionMismatchError(f"Shapes differ: {separated.shape} vs {ideal.shape}")
    energy = float(np.sum(np.abs(separated) ** 2))
    if energy == 0.0:
        raise ZeroChannelError("Separated signal is all zeros")
    mc = float(np.sum(np.abs(separated - ideal) ** 2)) / energy
    return mc, separated.size * float(noise_variance) / energy


def nme(estimates, truths):
    """sum_k |X_k^est - X_k^real| / (2 pi K), differences wrapped to [-pi, pi)."""
    estimates = np.asarray(estimates, dtype=float)
    truths = np.asarray(truths, dtype=float)
    if estimates.shape != truths.shape or estimates.size == 0:
        raise DimensionMismatchError("One estimate per true value is required")
    return float(np.sum(np.abs(wrap_frequency(estimates - truths))) / (2.0 * np.pi * estimates.size))


def position_error(estimate, truth):
    return float(np.linalg.norm(np.asarray(estimate, dtype=float) - np.asarray(truth, dtype=float)))
