# nomp/paths.py
from dataclasses import dataclass, replace

import numpy as np

from geometry.arrays import UlaFrequency, UpaFrequency, wrap_frequency


@dataclass(frozen=True)
class PathEstimate:
    """One extracted path.

    ``ris_frequency`` is the RIS-side UPA frequency (arrival for a UE-RIS
    path, departure for a RIS-BS path). ``ula_frequency`` is the UE or BS
    side. ``params`` orders them as (Theta_ris, Phi_ris, Theta_ula).
    """
    hop: str
    ris_frequency: UpaFrequency | None
    ula_frequency: UlaFrequency | None
    gain: complex = 0j
    provenance: str = 'uplink-nomp'
    known: bool = False

    UPLINK_NOMP = 'uplink-nomp'
    DOWNLINK_ML = 'downlink-ml'
    GEOMETRIC = 'geometric'
    KNOWN = 'known'

    @property
    def params(self):
        return np.array([
            self.ris_frequency.theta_cap, self.ris_frequency.phi_cap, self.ula_frequency.theta_cap,
        ])

    def with_params(self, x):
        x = wrap_frequency(x)
        return replace(
            self,
            ris_frequency=UpaFrequency(float(x[0]), float(x[1])),
            ula_frequency=UlaFrequency(float(x[2])),
        )

    def with_gain(self, gain):
        return replace(self, gain=complex(gain))

    @classmethod
    def from_params(cls, hop, x, gain=0j, provenance=UPLINK_NOMP):
        x = wrap_frequency(x)
        return cls(hop, UpaFrequency(float(x[0]), float(x[1])), UlaFrequency(float(x[2])), complex(gain), provenance)


@dataclass
class ComplexityCounter:
    """Number of coarse-search atom evaluations, per label."""
    counts: dict = None

    def __post_init__(self):
        if self.counts is None:
            self.counts = {}

    def add(self, evaluations, label='search'):
        self.counts[label] = self.counts.get(label, 0) + int(evaluations)

    @property
    def total(self):
        return sum(self.counts.values())
