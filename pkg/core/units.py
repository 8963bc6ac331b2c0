# core/units.py
import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def db_to_linear(value_db):
    """Power ratio in dB to linear scale."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)


def db_to_amplitude(value_db):
    """Power loss in dB to a linear amplitude factor."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 20.0)


def dbm_to_watts(value_dbm):
    return 10.0 ** ((np.asarray(value_dbm, dtype=float) - 30.0) / 10.0)


def wavelength(carrier_frequency_hz):
    return SPEED_OF_LIGHT / carrier_frequency_hz


def complex_normal(rng, shape, variance=1.0):
    """Circularly-symmetric complex normal draws, variance/2 per real part."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
