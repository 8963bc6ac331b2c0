# channel/synthesis.py
"""Geometric Rician multipath channels for every hop of the scenario."""
import logging
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import IndexOutOfRangeError
from core.units import complex_normal
from geometry.arrays import ArrayShape, UlaFrequency, UpaFrequency, array_response
from geometry.positions import LinearFrame, PlanarFrame, los_geometry, ray_frequency

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hop:
    kind: str
    ris: int | None = None

    UE_RIS = 'ue-ris'
    RIS_BS = 'ris-bs'
    DIRECT = 'direct'

    @classmethod
    def ue_ris(cls, k):
        return cls(cls.UE_RIS, int(k))

    @classmethod
    def ris_bs(cls, k):
        return cls(cls.RIS_BS, int(k))

    @classmethod
    def direct(cls):
        return cls(cls.DIRECT)

    def __str__(self):
        return self.kind if self.ris is None else f"{self.kind}[{self.ris}]"


@dataclass(frozen=True)
class PathParams:
    role: str
    arrival: UlaFrequency | UpaFrequency
    departure: UlaFrequency | UpaFrequency
    beta: complex
    gain: complex

    LOS = 'LoS'
    NLOS = 'NLoS'


@dataclass
class SegmentChannel:
    matrix: np.ndarray
    paths: list
    hop: Hop
    arrival_shape: ArrayShape
    departure_shape: ArrayShape

    @property
    def los(self):
        return self.paths[0] if self.paths and self.paths[0].role == PathParams.LOS else None

    @property
    def nlos(self):
        return [p for p in self.paths if p.role == PathParams.NLOS]

    def rebuild(self):
        """Sum of gain-weighted outer products over the stored paths."""
        out = np.zeros((self.arrival_shape.size, self.departure_shape.size), dtype=complex)
        for path in self.paths:
            out += path.gain * np.outer(
                array_response(self.arrival_shape, path.arrival),
                array_response(self.departure_shape, path.departure).conj(),
            )
        return out


@dataclass(frozen=True)
class LargeScale:
    rho_0: float
    rho: tuple


@dataclass
class ChannelRealization:
    """Ground truth for one trial; only the harness looks inside."""
    config: object
    ue_position: np.ndarray
    direct: SegmentChannel | None
    segments: list = field(default_factory=list)
    large_scale: LargeScale | None = None


# --- Frames ---
def bs_frame(cfg):
    return LinearFrame(tuple(cfg.bs_axis))


def ue_frame(cfg):
    return LinearFrame(tuple(cfg.ue_axis))


def ris_frame(cfg, k):
    return PlanarFrame.facing(cfg.ris_normal(k))


def ris_shape(cfg, k):
    mv, mh = cfg.ris_shapes[k]
    return ArrayShape.upa(mv, mh)


def ue_position_of(cfg):
    return np.asarray(cfg.ue_position if cfg.ue_position is not None else cfg.ue_center, dtype=float)


def place_ue(cfg, rng):
    """Uniform draw in the horizontal disk around the coverage centre."""
    radius = cfg.ue_radius * np.sqrt(rng.uniform())
    angle = rng.uniform(0.0, 2.0 * np.pi)
    center = np.asarray(cfg.ue_center, dtype=float)
    return center + np.array([radius * np.cos(angle), radius * np.sin(angle), 0.0])


def ris_bs_los_frequencies(cfg, k):
    """(BS arrival, RIS departure) frequencies of the fixed RIS-BS LoS path."""
    bs = np.asarray(cfg.bs_position, dtype=float)
    ris = np.asarray(cfg.ris_positions[k], dtype=float)
    return ray_frequency(bs_frame(cfg), bs, ris), ray_frequency(ris_frame(cfg, k), ris, bs)


def ue_ris_los_frequencies(cfg, k, ue_position=None):
    """(RIS arrival, UE departure) frequencies of the UE-RIS LoS path."""
    ue = ue_position_of(cfg) if ue_position is None else np.asarray(ue_position, dtype=float)
    ris = np.asarray(cfg.ris_positions[k], dtype=float)
    return ray_frequency(ris_frame(cfg, k), ris, ue), ray_frequency(ue_frame(cfg), ue, ris)


# --- Gains ---
def rician_gains(size, kappa, nlos_count):
    """Amplitude scale of the LoS term and of each NLoS term."""
    if np.isinf(kappa):
        return np.sqrt(size), 0.0
    los = np.sqrt(size * kappa / (kappa + 1.0))
    nlos = np.sqrt(size / ((kappa + 1.0) * nlos_count)) if nlos_count else 0.0
    return los, nlos


def _random_upa_frequency(rng):
    return UpaFrequency(theta_cap=float(rng.uniform(-np.pi, np.pi)), phi_cap=float(rng.uniform(-np.pi, np.pi)))


def _random_ula_frequency(rng):
    return UlaFrequency(theta_cap=float(np.pi * np.sin(rng.uniform(-np.pi / 2, np.pi / 2))))


def _assemble(hop, arrival_shape, departure_shape, paths):
    segment = SegmentChannel(
        matrix=np.zeros((arrival_shape.size, departure_shape.size), dtype=complex),
        paths=paths, hop=hop, arrival_shape=arrival_shape, departure_shape=departure_shape,
    )
    segment.matrix = segment.rebuild()
    return segment


def sample_segment(cfg, hop, rng):
    """Draw one hop of the scenario geometry.

    LoS frequencies come from the deployment; NLoS UPA frequencies are
    uniform over [-pi, pi) in both dimensions and NLoS ULA azimuths are
    uniform over (-pi/2, pi/2).
    """
    if hop.kind == Hop.DIRECT:
        rows, cols = ArrayShape.ula(cfg.n_bs), ArrayShape.ula(cfg.n_ue)
        if cfg.nlos_direct == 0:
            matrix = complex_normal(rng, (cfg.n_bs, cfg.n_ue))
            return SegmentChannel(matrix, [], hop, rows, cols)
        scale = np.sqrt(cfg.n_bs * cfg.n_ue / cfg.nlos_direct)
        paths = []
        for _ in range(cfg.nlos_direct):
            arrival, departure = _random_ula_frequency(rng), _random_ula_frequency(rng)
            beta = complex(complex_normal(rng, ()))
            paths.append(PathParams(PathParams.NLOS, arrival, departure, beta, scale * beta))
        return _assemble(hop, rows, cols, paths)

    k = hop.ris
    if k is None or not 0 <= k < cfg.num_ris:
        raise IndexOutOfRangeError(f"No RIS with index {k}")
    shape = ris_shape(cfg, k)
    if hop.kind == Hop.UE_RIS:
        rows, cols = shape, ArrayShape.ula(cfg.n_ue)
        kappa, count = cfg.kappa_ur, cfg.nlos_ur[k]
        los_arrival, los_departure = ue_ris_los_frequencies(cfg, k)
        draw_arrival, draw_departure = _random_upa_frequency, _random_ula_frequency
    else:
        rows, cols = ArrayShape.ula(cfg.n_bs), shape
        kappa, count = cfg.kappa_rb, cfg.nlos_rb[k]
        los_arrival, los_departure = ris_bs_los_frequencies(cfg, k)
        draw_arrival, draw_departure = _random_ula_frequency, _random_upa_frequency

    los_scale, nlos_scale = rician_gains(rows.size * cols.size, kappa, count)
    paths = [PathParams(PathParams.LOS, los_arrival, los_departure, 1.0 + 0.0j, complex(los_scale))]
    for _ in range(count):
        arrival, departure = draw_arrival(rng), draw_departure(rng)
        beta = complex(complex_normal(rng, ()))
        paths.append(PathParams(PathParams.NLOS, arrival, departure, beta, nlos_scale * beta))
    return _assemble(hop, rows, cols, paths)


def large_scale(cfg, ue_position=None):
    ue = ue_position_of(cfg) if ue_position is None else np.asarray(ue_position, dtype=float)
    lam = cfg.wavelength
    bs = np.asarray(cfg.bs_position, dtype=float)
    d_0, _, _ = los_geometry(ue, bs)
    rho = []
    for position in cfg.ris_positions:
        d_ur, _, _ = los_geometry(ue, np.asarray(position, dtype=float))
        d_rb, _, _ = los_geometry(np.asarray(position, dtype=float), bs)
        rho.append((lam / (4 * np.pi * d_ur)) * (lam / (4 * np.pi * d_rb)))
    return LargeScale(rho_0=lam * cfg.penetration_loss / (4 * np.pi * d_0), rho=tuple(rho))


def sample_realization(cfg, rng):
    """UE placement, direct hop and both hops of every RIS for one trial."""
    if cfg.ue_position is None:
        cfg = cfg.with_ue_position(place_ue(cfg, rng))
    direct = sample_segment(cfg, Hop.direct(), rng)
    segments = [
        (sample_segment(cfg, Hop.ue_ris(k), rng), sample_segment(cfg, Hop.ris_bs(k), rng))
        for k in range(cfg.num_ris)
    ]
    logger.debug("Sampled realization with UE at %s", cfg.ue_position)
    return ChannelRealization(
        config=cfg,
        ue_position=ue_position_of(cfg),
        direct=direct,
        segments=segments,
        large_scale=large_scale(cfg),
    )
