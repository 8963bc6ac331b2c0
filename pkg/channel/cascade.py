# channel/cascade.py
"""End-to-end channel composition and the cascaded-gain factorization."""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from core.exceptions import DimensionMismatchError, IndexOutOfRangeError, InvalidReflectionError
from geometry.arrays import array_response

UNIT_MODULUS_TOL = 1e-9


def check_reflection(gamma, size=None):
    gamma = np.asarray(gamma, dtype=complex).ravel()
    if size is not None and gamma.size != size:
        raise DimensionMismatchError(f"Reflection vector has {gamma.size} entries, RIS has {size}")
    if np.any(np.abs(np.abs(gamma) - 1.0) > UNIT_MODULUS_TOL):
        raise InvalidReflectionError("Reflection coefficients must have unit modulus")
    return gamma


def khatri_rao(a, b):
    """Column-wise Kronecker product; column j is ``a[:, j] kron b[:, j]``."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(f"Column counts differ: {a.shape[1]} vs {b.shape[1]}")
    return scipy.linalg.khatri_rao(a, b)


def cascade(ur, rb, gamma):
    """``H_rb diag(gamma) H_ur`` for one RIS, without attenuation."""
    gamma = check_reflection(gamma, rb.matrix.shape[1])
    return (rb.matrix * gamma[None, :]) @ ur.matrix


def compose(h0, segs, gammas, ls):
    """Direct term plus the attenuated cascade of every RIS.

    ``h0`` may be None to get the reflection channel alone.
    """
    if len(segs) != len(gammas):
        raise DimensionMismatchError("One reflection vector per RIS is required")
    total = None if h0 is None else ls.rho_0 * h0.matrix
    for k, ((ur, rb), gamma) in enumerate(zip(segs, gammas)):
        term = ls.rho[k] * cascade(ur, rb, gamma)
        if total is None:
            total = term.astype(complex)
        elif total.shape != term.shape:
            raise DimensionMismatchError(f"RIS {k} cascade has shape {term.shape}, expected {total.shape}")
        else:
            total = total + term
    if total is None:
        raise DimensionMismatchError("Nothing to compose: no direct hop and no RIS")
    return total


def reflection_channel(realization, gammas):
    return compose(None, realization.segments, gammas, realization.large_scale)


def cascaded_gain(k, l, c, gamma, segs, ls):
    """xi_{k,l,c}: gain of RIS-BS path ``l`` cascaded with UE-RIS path ``c``."""
    if not 0 <= k < len(segs):
        raise IndexOutOfRangeError(f"No RIS with index {k}")
    ur, rb = segs[k]
    if not 0 <= l < len(rb.paths) or not 0 <= c < len(ur.paths):
        raise IndexOutOfRangeError(f"Path pair ({l}, {c}) out of range for RIS {k}")
    gamma = check_reflection(gamma, rb.departure_shape.size)
    rb_path, ur_path = rb.paths[l], ur.paths[c]
    a_dep = array_response(rb.departure_shape, rb_path.departure)
    a_arr = array_response(ur.arrival_shape, ur_path.arrival)
    inner = np.vdot(a_dep, gamma * a_arr)
    return ls.rho[k] * rb_path.gain * ur_path.gain * inner


@dataclass
class CascadedForm:
    a_b: np.ndarray
    a_u: np.ndarray
    xi: np.ndarray
    block_shapes: list

    @property
    def matrix(self):
        return self.a_b @ self.xi @ self.a_u.conj().T

    def block(self, k):
        row = sum(r for r, _ in self.block_shapes[:k])
        col = sum(c for _, c in self.block_shapes[:k])
        rows, cols = self.block_shapes[k]
        return self.xi[row:row + rows, col:col + cols]


def cascaded_form(segs, gammas, ls):
    """``A_b Xi A_u^H`` factorization of the reflection channel."""
    a_b_cols, a_u_cols, blocks = [], [], []
    for k, ((ur, rb), gamma) in enumerate(zip(segs, gammas)):
        a_b_cols.extend(array_response(rb.arrival_shape, p.arrival) for p in rb.paths)
        a_u_cols.extend(array_response(ur.departure_shape, p.departure) for p in ur.paths)
        blocks.append(np.array([
            [cascaded_gain(k, l, c, gamma, segs, ls) for c in range(len(ur.paths))]
            for l in range(len(rb.paths))
        ], dtype=complex).reshape(len(rb.paths), len(ur.paths)))
    return CascadedForm(
        a_b=np.column_stack(a_b_cols),
        a_u=np.column_stack(a_u_cols),
        xi=scipy.linalg.block_diag(*blocks),
        block_shapes=[b.shape for b in blocks],
    )
