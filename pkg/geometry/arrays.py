# geometry/arrays.py
"""Array shapes, spatial frequencies and array response vectors.

Half-wavelength element spacing is implied by the pi factor in every
spatial frequency. UPA responses are ordered vertical-slowest,
``a_v(Phi) kron a_h(Theta)``.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import InvalidShapeError


@dataclass(frozen=True)
class UlaFrequency:
    theta_cap: float

    def as_array(self):
        return np.array([self.theta_cap])


@dataclass(frozen=True)
class UpaFrequency:
    theta_cap: float
    phi_cap: float

    def as_array(self):
        return np.array([self.theta_cap, self.phi_cap])


@dataclass(frozen=True)
class ArrayShape:
    kind: str
    counts: tuple

    ULA = 'ULA'
    UPA = 'UPA'

    def __post_init__(self):
        expected = 1 if self.kind == self.ULA else 2 if self.kind == self.UPA else None
        if expected is None:
            raise InvalidShapeError(f"Unknown array kind {self.kind!r}")
        if len(self.counts) != expected or any(int(c) < 1 for c in self.counts):
            raise InvalidShapeError(f"Invalid element counts {self.counts!r} for {self.kind}")

    @classmethod
    def ula(cls, n):
        return cls(cls.ULA, (int(n),))

    @classmethod
    def upa(cls, m_v, m_h):
        return cls(cls.UPA, (int(m_v), int(m_h)))

    @property
    def size(self):
        return int(np.prod(self.counts))

    @property
    def vertical(self):
        return self.counts[0]

    @property
    def horizontal(self):
        return self.counts[-1]

    def __str__(self):
        if self.kind == self.ULA:
            return f"ULA({self.counts[0]})"
        return f"UPA({self.counts[0]}x{self.counts[1]})"


def wrap_frequency(x):
    """Wrap spatial frequencies into [-pi, pi)."""
    return (np.asarray(x, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


def ula_response(n, x):
    """``(1/sqrt(n)) exp(j m x)`` for m = 0..n-1."""
    n = int(n)
    if n < 1:
        raise InvalidShapeError("A ULA needs at least one element")
    if isinstance(x, UlaFrequency):
        x = x.theta_cap
    return np.exp(1j * np.arange(n) * float(x)) / np.sqrt(n)


def ula_response_derivatives(n, x):
    """Response and its first two derivatives with respect to ``x``."""
    a = ula_response(n, x)
    m = np.arange(int(n))
    return a, 1j * m * a, -(m ** 2) * a


def upa_response(shape, f):
    if not isinstance(shape, ArrayShape) or shape.kind != ArrayShape.UPA:
        raise InvalidShapeError(f"upa_response needs a UPA shape, got {shape}")
    theta_cap, phi_cap = (f.theta_cap, f.phi_cap) if isinstance(f, UpaFrequency) else f
    return np.kron(ula_response(shape.vertical, phi_cap), ula_response(shape.horizontal, theta_cap))


def upa_response_derivatives(shape, f):
    """UPA response with gradient and Hessian over (Theta, Phi).

    Returns ``(a, [da/dTheta, da/dPhi], [[d2/dTheta2, d2/dTheta dPhi], [.., d2/dPhi2]])``.
    """
    theta_cap, phi_cap = (f.theta_cap, f.phi_cap) if isinstance(f, UpaFrequency) else f
    h, dh, ddh = ula_response_derivatives(shape.horizontal, theta_cap)
    v, dv, ddv = ula_response_derivatives(shape.vertical, phi_cap)
    a = np.kron(v, h)
    d_theta = np.kron(v, dh)
    d_phi = np.kron(dv, h)
    cross = np.kron(dv, dh)
    return a, [d_theta, d_phi], [[np.kron(v, ddh), cross], [cross, np.kron(ddv, h)]]


def array_response(shape, frequency):
    """Dispatch on the shape kind."""
    if shape.kind == ArrayShape.ULA:
        return ula_response(shape.size, frequency)
    return upa_response(shape, frequency)


def frequency_grid(points):
    """Uniform grid of ``points`` frequencies over [-pi, pi)."""
    points = int(points)
    return -np.pi + 2.0 * np.pi * np.arange(points) / points


def ula_response_matrix(n, frequencies):
    """Columns are ULA responses at ``frequencies``."""
    frequencies = np.atleast_1d(np.asarray(frequencies, dtype=float))
    return np.exp(1j * np.outer(np.arange(int(n)), frequencies)) / np.sqrt(int(n))


def upa_response_matrix(shape, theta_caps, phi_caps):
    """Columns are UPA responses for every (Theta, Phi) pair, Phi slowest."""
    h = ula_response_matrix(shape.horizontal, theta_caps)
    v = ula_response_matrix(shape.vertical, phi_caps)
    # column index = i_phi * len(theta_caps) + i_theta
    cols = v[:, :, None, None] * h[None, None, :, :]
    cols = cols.transpose(0, 2, 1, 3).reshape(shape.size, v.shape[1] * h.shape[1])
    return cols
