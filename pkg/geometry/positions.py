# geometry/positions.py
"""Positions, physical angles and the per-array frames that map rays to
spatial frequencies."""
from dataclasses import dataclass

import numpy as np

from core.exceptions import DegenerateGeometryError

from .arrays import UlaFrequency, UpaFrequency

_EPS = 1e-12


@dataclass(frozen=True)
class Position:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.x, self.y, self.z])):
            raise DegenerateGeometryError(f"Non-finite position {self!r}")

    @classmethod
    def from_array(cls, values):
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self):
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class PhysicalAngles:
    """Azimuth ``theta`` and elevation ``phi`` (from the z axis)."""
    theta: float
    phi: float


def direction_from_angles(angles):
    return np.array([
        np.sin(angles.phi) * np.cos(angles.theta),
        np.sin(angles.phi) * np.sin(angles.theta),
        np.cos(angles.phi),
    ])


def angles_from_direction(t):
    t = np.asarray(t, dtype=float)
    t = t / np.linalg.norm(t)
    phi = float(np.arccos(np.clip(t[2], -1.0, 1.0)))
    theta = float(np.arctan2(t[1], t[0])) if np.hypot(t[0], t[1]) > _EPS else 0.0
    return PhysicalAngles(theta=theta, phi=phi)


def to_upa_frequency(angles):
    return UpaFrequency(
        theta_cap=float(np.pi * np.sin(angles.phi) * np.sin(angles.theta)),
        phi_cap=float(np.pi * np.cos(angles.phi)),
    )


def from_upa_frequency(f):
    """Inverse of ``to_upa_frequency`` on the front half-space (theta in [-pi/2, pi/2])."""
    cos_phi = np.clip(f.phi_cap / np.pi, -1.0, 1.0)
    phi = float(np.arccos(cos_phi))
    sin_phi = np.sqrt(max(0.0, 1.0 - cos_phi ** 2))
    if sin_phi < _EPS:
        return PhysicalAngles(theta=0.0, phi=phi)
    theta = float(np.arcsin(np.clip(f.theta_cap / (np.pi * sin_phi), -1.0, 1.0)))
    return PhysicalAngles(theta=theta, phi=phi)


def los_geometry(a, b):
    """Distance and the ray angles seen from each end of the segment a-b."""
    a_arr = a.as_array() if isinstance(a, Position) else np.asarray(a, dtype=float)
    b_arr = b.as_array() if isinstance(b, Position) else np.asarray(b, dtype=float)
    delta = b_arr - a_arr
    distance = float(np.linalg.norm(delta))
    if distance < _EPS:
        raise DegenerateGeometryError("Coincident endpoints have no defined direction")
    return distance, angles_from_direction(delta), angles_from_direction(-delta)


@dataclass(frozen=True)
class LinearFrame:
    """A ULA lying along ``axis``."""
    axis: tuple

    def frequency(self, t):
        axis = np.asarray(self.axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        return UlaFrequency(theta_cap=float(np.pi * np.clip(np.dot(t, axis), -1.0, 1.0)))


@dataclass(frozen=True)
class PlanarFrame:
    """A UPA with boresight ``normal``; its local x, y, z axes are
    (normal, horizontal, vertical) so the local angle convention applies."""
    normal: tuple
    horizontal: tuple
    vertical: tuple

    @classmethod
    def facing(cls, normal, up=(0.0, 0.0, 1.0)):
        n = np.asarray(normal, dtype=float)
        n = n / np.linalg.norm(n)
        v = np.asarray(up, dtype=float)
        v = v - np.dot(v, n) * n
        if np.linalg.norm(v) < _EPS:
            raise DegenerateGeometryError("Boresight is parallel to the vertical axis")
        v = v / np.linalg.norm(v)
        h = np.cross(v, n)
        return cls(tuple(n), tuple(h), tuple(v))

    @property
    def rotation(self):
        """Columns are the local axes in global coordinates."""
        return np.column_stack([self.normal, self.horizontal, self.vertical])

    def to_local(self, t):
        return self.rotation.T @ np.asarray(t, dtype=float)

    def to_global(self, t_local):
        return self.rotation @ np.asarray(t_local, dtype=float)

    def frequency(self, t):
        return to_upa_frequency(angles_from_direction(self.to_local(t)))

    def direction(self, f):
        """Unit ray in global coordinates for frequency ``f``, front half-space."""
        t_h = np.clip(f.theta_cap / np.pi, -1.0, 1.0)
        t_v = np.clip(f.phi_cap / np.pi, -1.0, 1.0)
        t_n = np.sqrt(max(0.0, 1.0 - t_h ** 2 - t_v ** 2))
        t = self.to_global([t_n, t_h, t_v])
        return t / np.linalg.norm(t)


def ray_frequency(frame, origin, target):
    """Spatial frequency at ``origin`` of the LoS ray toward ``target``."""
    _, angles, _ = los_geometry(origin, target)
    return frame.frequency(direction_from_angles(angles))
