# positioning/solver.py
"""Closed-form UE position from LoS directions at several RISs."""
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import DegenerateGeometryError, SingularSystemError
from geometry.positions import Position, direction_from_angles

_COND_LIMIT = 1e12


@dataclass
class PositionFix:
    e_u_star: Position
    d_star: np.ndarray
    f_min: float
    chosen: dict = field(default_factory=dict)

    @property
    def position(self):
        return self.e_u_star.as_array()


def direction_vector(angles):
    """[sin(phi)cos(theta), sin(phi)sin(theta), cos(phi)]"""
    return direction_from_angles(angles)


def mean_squared_position_error(directions, ris_positions, distances, position):
    """Average squared gap between the ray end points e_k + d_k t_k and ``position``."""
    ends = np.asarray(ris_positions) + np.asarray(distances)[:, None] * np.asarray(directions)
    return float(np.mean(np.sum((ends - np.asarray(position)[None, :]) ** 2, axis=1)))


def solve_position(directions, ris_positions):
    """Jointly optimal ray lengths d* and UE position e_u*.

    ``directions`` is the K_L x 3 matrix T of unit rays leaving each RIS.
    """
    t = np.asarray(directions, dtype=float)
    e = np.asarray(ris_positions, dtype=float)
    if t.ndim != 2 or t.shape[1] != 3 or t.shape[0] < 3 or np.linalg.matrix_rank(t) < 3:
        raise DegenerateGeometryError("At least three non-coplanar LoS directions are needed")
    k_l = t.shape[0]
    t_p = np.linalg.solve(t.T @ t, t.T)
    d_0 = np.einsum('ki,ki->k', t, e)
    projector = t @ t_p
    gram = k_l * t_p.T @ t_p + np.eye(k_l)
    inner = gram - 2.0 * projector
    if np.linalg.cond(inner) > _COND_LIMIT:
        raise SingularSystemError("Ray-length system is singular")
    rhs = t_p.T @ e.sum(axis=0) - (gram - projector) @ d_0
    d_star = np.linalg.solve(inner, rhs)
    e_u = t_p @ (d_star + d_0)
    f_min = mean_squared_position_error(t, e, d_star, e_u)
    return PositionFix(e_u_star=Position.from_array(e_u), d_star=d_star, f_min=f_min)
