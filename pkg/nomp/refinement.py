# nomp/refinement.py
"""Safeguarded Newton refinement of a single atom's frequencies.

The objective is the normalized correlation ``|A(x)^H z|^2 / ||A(x)||^2``,
i.e. the residual energy one atom with its best gain removes from ``z``.
``atom_fn(x, derivatives)`` returns the atom as a flat vector and, when
asked, its gradient list and Hessian table with respect to ``x``.
"""
import logging

import numpy as np

from geometry.arrays import wrap_frequency

logger = logging.getLogger(__name__)

_BACKTRACK_STEPS = 30


def objective(atom, z):
    norm = np.vdot(atom, atom).real
    if norm <= 0.0:
        return 0.0
    return abs(np.vdot(atom, z)) ** 2 / norm


def objective_derivatives(atom, d_atom, dd_atom, z):
    """Objective value, gradient and Hessian from analytic atom derivatives."""
    n_params = len(d_atom)
    c = np.vdot(atom, z)
    ci = np.array([np.vdot(d, z) for d in d_atom])
    n = np.vdot(atom, atom).real
    ni = np.array([2.0 * np.vdot(atom, d).real for d in d_atom])
    p = abs(c) ** 2
    pi = 2.0 * (np.conj(c) * ci).real
    grad = pi / n - p * ni / n ** 2
    hess = np.empty((n_params, n_params))
    for i in range(n_params):
        for j in range(n_params):
            cij = np.vdot(dd_atom[i][j], z)
            nij = 2.0 * (np.vdot(d_atom[j], d_atom[i]) + np.vdot(atom, dd_atom[i][j])).real
            pij = 2.0 * (np.conj(ci[j]) * ci[i] + np.conj(c) * cij).real
            hess[i, j] = (
                pij / n - pi[i] * ni[j] / n ** 2 - pi[j] * ni[i] / n ** 2
                - p * nij / n ** 2 + 2.0 * p * ni[i] * ni[j] / n ** 3
            )
    return p / n, grad, 0.5 * (hess + hess.T)


def _ascent_direction(grad, hess):
    try:
        eigenvalues = np.linalg.eigvalsh(hess)
        if np.all(eigenvalues < 0):
            return -np.linalg.solve(hess, grad)
    except np.linalg.LinAlgError:
        pass
    curvature = np.max(np.abs(np.diag(hess)))
    return grad / curvature if curvature > 0 else grad


def newton_refine(x, atom_fn, z, steps, max_step=np.pi / 4):
    """Run up to ``steps`` safeguarded Newton iterations from ``x``.

    A step is only taken when it does not lower the objective; otherwise it
    is halved, and a step that still fails leaves ``x`` where it was.
    """
    x = wrap_frequency(np.asarray(x, dtype=float))
    value = objective(atom_fn(x, False)[0], z)
    for _ in range(int(steps)):
        atom, d_atom, dd_atom = atom_fn(x, True)
        value, grad, hess = objective_derivatives(atom, d_atom, dd_atom, z)
        if not np.all(np.isfinite(grad)) or not np.all(np.isfinite(hess)):
            logger.debug("Non-finite derivatives at %s, keeping coarse value", x)
            break
        step = _ascent_direction(grad, hess)
        length = np.linalg.norm(step)
        if length > max_step:
            step = step * (max_step / length)
        scale = 1.0
        for _ in range(_BACKTRACK_STEPS):
            candidate = wrap_frequency(x + scale * step)
            candidate_value = objective(atom_fn(candidate, False)[0], z)
            if candidate_value >= value:
                x, value = candidate, candidate_value
                break
            scale *= 0.5
        else:
            break
    return x, value
