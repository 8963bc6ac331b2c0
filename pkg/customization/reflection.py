# customization/reflection.py
"""Reflection design that aligns each RIS with its cascaded LoS path, and
the sparse channel it produces."""
from dataclasses import dataclass

import numpy as np

from channel.cascade import cascaded_gain
from core.exceptions import DimensionMismatchError, ZeroChannelError
from geometry.arrays import UpaFrequency, ula_response, upa_response


@dataclass
class ReflectionDesign:
    gammas: list
    rb_frequencies: list
    ur_frequencies: list


def design_reflection(shape, rb_los, ur_los):
    """``M a_r(rb departure) * conj(a_r(ur arrival))``, unit modulus per entry."""
    gamma = shape.size * upa_response(shape, rb_los) * upa_response(shape, ur_los).conj()
    return gamma / np.abs(gamma)


def design_reflections(shapes, rb_los, ur_los):
    return ReflectionDesign(
        gammas=[design_reflection(s, rb, ur) for s, rb, ur in zip(shapes, rb_los, ur_los)],
        rb_frequencies=list(rb_los),
        ur_frequencies=list(ur_los),
    )


def random_reflections(shapes, rng):
    return [np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, s.size)) for s in shapes]


def dirichlet_kernel(n, delta):
    """sin(n delta) / (n sin delta), by its limit where sin(delta) vanishes."""
    delta = np.asarray(delta, dtype=float)
    s = np.sin(delta)
    safe = np.abs(s) >= 1e-9
    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.where(safe, np.sin(n * delta) / (n * np.where(safe, s, 1.0)), np.cos(n * delta) / np.cos(delta))
    return out if out.ndim else float(out)


def designed_inner_product(shape, rb_design, ur_design, rb_path, ur_path):
    """``a_r^H(rb_path) diag(gamma) a_r(ur_path)`` for gamma designed from
    (rb_design, ur_design), via the Dirichlet-kernel expansion."""
    delta_h = (ur_path.theta_cap - ur_design.theta_cap) / 2 - (rb_path.theta_cap - rb_design.theta_cap) / 2
    delta_v = (ur_path.phi_cap - ur_design.phi_cap) / 2 - (rb_path.phi_cap - rb_design.phi_cap) / 2
    m_v, m_h = shape.vertical, shape.horizontal
    phase = np.exp(1j * (delta_h * (m_h - 1) + delta_v * (m_v - 1)))
    return dirichlet_kernel(m_h, delta_h) * dirichlet_kernel(m_v, delta_v) * phase


@dataclass
class SparseApprox:
    a_b: np.ndarray
    a_u: np.ndarray
    xi: np.ndarray

    @property
    def matrix(self):
        """H_e = A_b,e Xi_e A_u,e^H"""
        return self.a_b @ np.diag(self.xi) @ self.a_u.conj().T

    def weakened(self, h_full):
        return np.asarray(h_full) - self.matrix


def sparse_approx(n_bs, n_ue, bs_frequencies, ue_frequencies, enhanced_gains):
    """Sum of the K enhanced cascaded LoS paths."""
    if not len(bs_frequencies) == len(ue_frequencies) == len(enhanced_gains):
        raise DimensionMismatchError("One BS angle, UE angle and gain per RIS")
    return SparseApprox(
        a_b=np.column_stack([ula_response(n_bs, f) for f in bs_frequencies]),
        a_u=np.column_stack([ula_response(n_ue, f) for f in ue_frequencies]),
        xi=np.asarray(enhanced_gains, dtype=complex),
    )


def true_sparse_approx(realization):
    """H_e from the true LoS parameters: xi_k = rho_k g0_rb g0_ur."""
    cfg = realization.config
    bs, ue, gains = [], [], []
    for k, (ur, rb) in enumerate(realization.segments):
        bs.append(rb.paths[0].arrival.theta_cap)
        ue.append(ur.paths[0].departure.theta_cap)
        gains.append(realization.large_scale.rho[k] * rb.paths[0].gain * ur.paths[0].gain)
    return sparse_approx(cfg.n_bs, cfg.n_ue, bs, ue, gains)


def enhanced_sparse_approx(realization, gammas):
    """H_e with the LoS-LoS cascaded gains actually obtained under ``gammas``.

    Equals :func:`true_sparse_approx` when ``gammas`` are designed from the
    true LoS parameters.
    """
    cfg = realization.config
    segs, ls = realization.segments, realization.large_scale
    return sparse_approx(
        cfg.n_bs,
        cfg.n_ue,
        [rb.paths[0].arrival.theta_cap for _, rb in segs],
        [ur.paths[0].departure.theta_cap for ur, _ in segs],
        [cascaded_gain(k, 0, 0, gamma, segs, ls) for k, gamma in enumerate(gammas)],
    )


def power_ratio(h_full, h_e):
    """Share of enhanced power, ||H_e||^2 / (||H_e||^2 + ||H_w||^2), and H_w."""
    h_full = np.asarray(h_full)
    h_e = np.asarray(h_e)
    if h_full.shape != h_e.shape:
        raise DimensionMismatchError(f"Shapes differ: {h_full.shape} vs {h_e.shape}")
    h_w = h_full - h_e
    enhanced = float(np.sum(np.abs(h_e) ** 2))
    weakened = float(np.sum(np.abs(h_w) ** 2))
    if enhanced + weakened == 0.0 or not np.any(h_full):
        raise ZeroChannelError("Power ratio of a zero channel is undefined")
    return enhanced / (enhanced + weakened), h_w


def upa_frequency(value):
    if isinstance(value, UpaFrequency):
        return value
    theta_cap, phi_cap = value
    return UpaFrequency(float(theta_cap), float(phi_cap))
