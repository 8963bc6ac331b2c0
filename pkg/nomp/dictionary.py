# nomp/dictionary.py
"""Atoms of the stacked uplink observation of one RIS.

Column s of the observation is ``K_F vec(H_rb diag(gamma_s) H_ur S_u)``
(vec is column-major, so row ``p * N_b + b`` holds BS antenna b under
pilot p). Every atom is this model evaluated with one hop replaced by a
single unit-gain path.
"""
from dataclasses import dataclass

import numpy as np

from core.exceptions import EmptyGridError
from geometry.arrays import (
    ArrayShape, frequency_grid, ula_response_derivatives, ula_response_matrix,
    upa_response, upa_response_derivatives, upa_response_matrix, ula_response,
)

from .paths import PathEstimate

UE_RIS = 'ue-ris'
RIS_BS = 'ris-bs'


@dataclass(frozen=True)
class AtomDictionary:
    """Coarse grids for one hop: RIS (Theta, Phi) and the ULA side Theta."""
    ris_theta: np.ndarray
    ris_phi: np.ndarray
    ula_theta: np.ndarray

    @classmethod
    def build(cls, ris_shape, ula_size, eta_h, eta_v, eta_ula):
        return cls(
            ris_theta=frequency_grid(eta_h * ris_shape.horizontal),
            ris_phi=frequency_grid(eta_v * ris_shape.vertical),
            ula_theta=frequency_grid(eta_ula * ula_size),
        )

    @property
    def ris_points(self):
        return self.ris_theta.size * self.ris_phi.size

    @property
    def size(self):
        return self.ris_points * self.ula_theta.size

    def ris_params(self, index):
        """(Theta, Phi) of flat RIS grid index (Phi slowest)."""
        return self.ris_theta[index % self.ris_theta.size], self.ris_phi[index // self.ris_theta.size]


def steering_outer(ris_shape, ula_size, x, ris_on_left, derivatives):
    """Outer product of a RIS and a ULA response with derivatives in
    x = (Theta_ris, Phi_ris, Theta_ula).

    ``ris_on_left`` gives ``a_r a_u^H`` (UE-RIS), otherwise ``a_b a_r^H``.
    """
    if not derivatives:
        a = upa_response(ris_shape, (x[0], x[1]))
        u = ula_response(ula_size, x[2])
        return (np.outer(a, u.conj()) if ris_on_left else np.outer(u, a.conj())), None, None
    a, da, dda = upa_response_derivatives(ris_shape, (x[0], x[1]))
    u, du, ddu = ula_response_derivatives(ula_size, x[2])
    def outer(ris_part, ula_part):
        if ris_on_left:
            return np.outer(ris_part, ula_part.conj())
        return np.outer(ula_part, ris_part.conj())

    value = outer(a, u)
    first = [outer(da[0], u), outer(da[1], u), outer(a, du)]
    second = [
        [outer(dda[0][0], u), outer(dda[0][1], u), outer(da[0], du)],
        [outer(dda[1][0], u), outer(dda[1][1], u), outer(da[1], du)],
        [outer(da[0], du), outer(da[1], du), outer(a, ddu)],
    ]
    return value, first, second


@dataclass
class CascadedLink:
    """What the BS knows about RIS k when extracting its paths."""
    ris_shape: ArrayShape
    n_bs: int
    n_ue: int
    pilots: np.ndarray
    slow: np.ndarray
    scale: float
    rb_los: PathEstimate

    @property
    def num_blocks(self):
        return self.slow.shape[1]

    # --- Dense model ---
    def model(self, b_matrix, u_matrix):
        """K_F [vec(B diag(gamma_s) U S)]_s as an N_b N_u x K_S matrix."""
        hs = u_matrix @ self.pilots
        x = np.einsum('bm,ms,mp->pbs', b_matrix, self.slow, hs)
        return self.scale * x.reshape(self.n_ue * self.n_bs, self.num_blocks)

    def b_matrix(self, rb_paths):
        out = np.zeros((self.n_bs, self.ris_shape.size), dtype=complex)
        for path in rb_paths:
            out += path.gain * steering_outer(self.ris_shape, self.n_bs, path.params, False, False)[0]
        return out

    def u_matrix(self, ur_paths):
        out = np.zeros((self.ris_shape.size, self.n_ue), dtype=complex)
        for path in ur_paths:
            out += path.gain * steering_outer(self.ris_shape, self.n_ue, path.params, True, False)[0]
        return out

    def ur_atom(self, x, b_matrix, derivatives=False):
        value, first, second = steering_outer(self.ris_shape, self.n_ue, x, True, derivatives)
        atom = self.model(b_matrix, value).ravel()
        if not derivatives:
            return atom, None, None
        return (
            atom,
            [self.model(b_matrix, d).ravel() for d in first],
            [[self.model(b_matrix, d).ravel() for d in row] for row in second],
        )

    def rb_atom(self, x, u_matrix, derivatives=False):
        value, first, second = steering_outer(self.ris_shape, self.n_bs, x, False, derivatives)
        atom = self.model(value, u_matrix).ravel()
        if not derivatives:
            return atom, None, None
        return (
            atom,
            [self.model(d, u_matrix).ravel() for d in first],
            [[self.model(d, u_matrix).ravel() for d in row] for row in second],
        )

    # --- Coarse searches ---
    def coarse_ue_ris(self, z, grid):
        """Best UE-RIS grid atom when the RIS-BS hop is its known LoS path.

        With a rank-one RIS-BS hop every atom factorizes as ``u v^T`` with
        u depending on the UE angle and v on the RIS angles, so the whole
        grid is scored by one matrix product.
        """
        if grid.size == 0:
            raise EmptyGridError("UE-RIS grid is empty")
        los = self.rb_los
        a_b0 = ula_response(self.n_bs, los.ula_frequency.theta_cap)
        a_r0 = upa_response(self.ris_shape, los.ris_frequency)
        a_u = ula_response_matrix(self.n_ue, grid.ula_theta)
        # u = (S^T conj(a_u)) kron a_b0
        u_grid = np.kron(self.pilots.T @ a_u.conj(), a_b0[:, None])
        a_r = upa_response_matrix(self.ris_shape, grid.ris_theta, grid.ris_phi)
        v_grid = self.slow.T @ (a_r0.conj()[:, None] * a_r)
        corr = u_grid.conj().T @ z @ v_grid.conj()
        norms = np.outer(np.sum(np.abs(u_grid) ** 2, axis=0), np.sum(np.abs(v_grid) ** 2, axis=0))
        score = np.where(norms > 0, np.abs(corr) ** 2 / np.where(norms > 0, norms, 1.0), 0.0)
        i_ula, i_ris = np.unravel_index(int(np.argmax(score)), score.shape)
        theta, phi = grid.ris_params(i_ris)
        return np.array([theta, phi, grid.ula_theta[i_ula]]), float(score[i_ula, i_ris]), grid.size

    def coarse_ris_bs(self, z, u_matrix, grid, exclude=None, threshold=0.95):
        """Best RIS-BS grid atom given the current UE-RIS estimate.

        ``exclude`` is a path whose neighbourhood (both responses correlating
        above ``threshold``) is removed from the grid.
        """
        if grid.size == 0:
            raise EmptyGridError("RIS-BS grid is empty")
        w = u_matrix @ self.pilots
        a_b = ula_response_matrix(self.n_bs, grid.ula_theta)
        a_r = upa_response_matrix(self.ris_shape, grid.ris_theta, grid.ris_phi)
        z3 = z.reshape(self.n_ue, self.n_bs, self.num_blocks)
        zb = np.einsum('bg,pbs->gps', a_b.conj(), z3)
        q = np.einsum('mp,ms,gps->gm', w.conj(), self.slow.conj(), zb)
        corr = q @ a_r
        t_all = np.einsum('mp,mr,ms->rps', w, a_r.conj(), self.slow)
        norms = np.sum(np.abs(t_all) ** 2, axis=(1, 2))
        score = np.where(norms[None, :] > 0, np.abs(corr) ** 2 / np.where(norms > 0, norms, 1.0)[None, :], 0.0)
        if exclude is not None:
            near_b = np.abs(a_b.conj().T @ ula_response(self.n_bs, exclude.ula_frequency.theta_cap)) >= threshold
            near_r = np.abs(a_r.conj().T @ upa_response(self.ris_shape, exclude.ris_frequency)) >= threshold
            score = np.where(np.outer(near_b, near_r), -np.inf, score)
        if not np.any(np.isfinite(score)):
            raise EmptyGridError("Every RIS-BS grid point was excluded")
        i_ula, i_ris = np.unravel_index(int(np.argmax(score)), score.shape)
        theta, phi = grid.ris_params(i_ris)
        return np.array([theta, phi, grid.ula_theta[i_ula]]), float(score[i_ula, i_ris]), grid.size


def response_correlation(shape, f_a, f_b):
    """|a^H(f_a) a(f_b)| for a UPA shape or a ULA size."""
    if isinstance(shape, ArrayShape):
        return float(abs(np.vdot(upa_response(shape, f_a), upa_response(shape, f_b))))
    return float(abs(np.vdot(ula_response(shape, f_a), ula_response(shape, f_b))))
