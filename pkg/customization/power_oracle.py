# customization/power_oracle.py
"""Expected cascaded-path power under a LoS-aligned reflection design.

Closed forms for the four (RIS-BS path, UE-RIS path) cases, the block
identity that sums them, and a Monte Carlo oracle that draws NLoS
frequencies uniformly over [-pi, pi) and evaluates each cascaded path
through explicit array responses.
"""
import logging
from dataclasses import dataclass

import numpy as np

from channel.cascade import khatri_rao
from core.exceptions import UndefinedRatioError
from core.units import complex_normal
from geometry.arrays import ArrayShape, UpaFrequency, ula_response_matrix

from .reflection import design_reflection

logger = logging.getLogger(__name__)

CASES = ('00', '0c', 'l0', 'lc')


@dataclass(frozen=True)
class PowerScenario:
    m_v: int = 5
    m_h: int = 5
    kappa_ur: float = 10.0
    kappa_rb: float = 1000.0
    nlos_ur: int = 5
    nlos_rb: int = 2
    rho: float = 1.0
    n_bs: int = 16
    n_ue: int = 4
    # LoS (Theta, Phi) pair the reflection vector is designed for
    rb_design: tuple = (0.7, -0.3)
    ur_design: tuple = (-1.2, 0.9)

    @property
    def elements(self):
        return self.m_v * self.m_h

    @property
    def shape(self):
        return ArrayShape.upa(self.m_v, self.m_h)


def los_power(s):
    """E|xi_00|^2 = rho^2 M^2 N_b N_u kappa_rb kappa_ur / ((kappa_rb+1)(kappa_ur+1))."""
    m = s.elements
    return s.rho ** 2 * m ** 2 * s.n_bs * s.n_ue * s.kappa_rb * s.kappa_ur / ((s.kappa_rb + 1) * (s.kappa_ur + 1))


def avg_cascaded_power(case, s):
    base = los_power(s)
    m = s.elements
    if case == '00':
        return base
    if case == '0c':
        _require(s.kappa_ur > 0 and s.nlos_ur > 0, case)
        return base / (m * s.nlos_ur * s.kappa_ur)
    if case == 'l0':
        _require(s.kappa_rb > 0 and s.nlos_rb > 0, case)
        return base / (m * s.nlos_rb * s.kappa_rb)
    if case == 'lc':
        _require(s.kappa_ur > 0 and s.kappa_rb > 0 and s.nlos_ur > 0 and s.nlos_rb > 0, case)
        return base / (m * s.nlos_rb * s.kappa_rb * s.nlos_ur * s.kappa_ur)
    raise ValueError(f"Unknown case {case!r}; expected one of {CASES}")


def _require(condition, case):
    if not condition:
        raise UndefinedRatioError(f"Case {case} needs positive Rician factors and path counts")


def block_power(s):
    """E||Xi_k||^2 summed over all path pairs."""
    m = s.elements
    return los_power(s) * (1 + (1 / s.kappa_ur + 1 / s.kappa_rb + 1 / (s.kappa_ur * s.kappa_rb)) / m)


def customized_power_ratio(elements, kappa_ur, kappa_rb):
    """Approximate enhanced-power share of a customized RIS."""
    if kappa_ur <= 0 or kappa_rb <= 0:
        raise UndefinedRatioError("Rician factors must be positive")
    return 1.0 / (1.0 + (1 / kappa_ur + 1 / kappa_rb + 1 / (kappa_ur * kappa_rb)) / elements)


_BATCH = 1 << 15


def designed_path_power(s, rb_paths, ur_paths):
    """|a_r^H(rb path) diag(gamma) a_r(ur path)|^2 per draw, from explicit
    array responses and the reflection vector designed for the scenario
    LoS pair. ``rb_paths`` and ``ur_paths`` are (Theta, Phi) array pairs.
    """
    shape = s.shape
    gamma = design_reflection(shape, UpaFrequency(*s.rb_design), UpaFrequency(*s.ur_design))
    rb_theta, rb_phi = (np.asarray(x, dtype=float) for x in rb_paths)
    ur_theta, ur_phi = (np.asarray(x, dtype=float) for x in ur_paths)
    out = np.empty(rb_theta.size)
    for start in range(0, rb_theta.size, _BATCH):
        stop = start + _BATCH
        a_rb = _responses(shape, rb_theta[start:stop], rb_phi[start:stop])
        a_ur = _responses(shape, ur_theta[start:stop], ur_phi[start:stop])
        inner = np.einsum('md,m,md->d', a_rb.conj(), gamma, a_ur)
        out[start:stop] = np.abs(inner) ** 2
    return out


def _responses(shape, theta_caps, phi_caps):
    """One UPA response per column, for paired (Theta, Phi) draws."""
    h = ula_response_matrix(shape.horizontal, theta_caps)
    v = ula_response_matrix(shape.vertical, phi_caps)
    return khatri_rao(v, h)


def monte_carlo_power(case, s, draws, rng):
    """Sample mean of |xi|^2 for one case.

    LoS paths sit exactly on the design, NLoS frequencies are uniform and
    NLoS small-scale gains are CN(0, 1).
    """
    if case not in CASES:
        raise ValueError(f"Unknown case {case!r}; expected one of {CASES}")
    m = s.elements
    g_ur0 = s.m_v * s.m_h * s.n_ue * s.kappa_ur / (s.kappa_ur + 1)
    g_rb0 = m * s.n_bs * s.kappa_rb / (s.kappa_rb + 1)
    rb_los = tuple(np.full(draws, x) for x in s.rb_design)
    ur_los = tuple(np.full(draws, x) for x in s.ur_design)
    if case in ('0c', 'lc'):
        ur = (rng.uniform(-np.pi, np.pi, draws), rng.uniform(-np.pi, np.pi, draws))
        g_ur = m * s.n_ue / ((s.kappa_ur + 1) * s.nlos_ur) * np.abs(complex_normal(rng, draws)) ** 2
    else:
        ur = ur_los
        g_ur = np.full(draws, g_ur0)
    if case in ('l0', 'lc'):
        rb = (rng.uniform(-np.pi, np.pi, draws), rng.uniform(-np.pi, np.pi, draws))
        g_rb = m * s.n_bs / ((s.kappa_rb + 1) * s.nlos_rb) * np.abs(complex_normal(rng, draws)) ** 2
    else:
        rb = rb_los
        g_rb = np.full(draws, g_rb0)
    power = s.rho ** 2 * g_rb * g_ur * designed_path_power(s, rb, ur)
    return float(np.mean(power))


def monte_carlo_block_power(s, draws, rng):
    """Sample mean of ||Xi_k||^2 over all (L_rb+1)(L_ur+1) path pairs."""
    counts = {'00': 1, '0c': s.nlos_ur, 'l0': s.nlos_rb, 'lc': s.nlos_ur * s.nlos_rb}
    return sum(counts[case] * monte_carlo_power(case, s, draws, rng) for case in CASES if counts[case])


@dataclass
class OracleCheck:
    name: str
    closed_form: float
    monte_carlo: float
    tolerance: float

    @property
    def relative_error(self):
        return abs(self.monte_carlo - self.closed_form) / abs(self.closed_form)

    @property
    def passed(self):
        return self.relative_error <= self.tolerance


def run_oracle_suite(s, draws, rng, tolerance=0.03):
    checks = [
        OracleCheck(f"case {case}", avg_cascaded_power(case, s), monte_carlo_power(case, s, draws, rng), tolerance)
        for case in CASES
    ]
    checks.append(OracleCheck('block identity', block_power(s), monte_carlo_block_power(s, draws, rng), tolerance))
    for check in checks:
        logger.debug("%s: closed form %.6e, Monte Carlo %.6e", check.name, check.closed_form, check.monte_carlo)
    return checks
