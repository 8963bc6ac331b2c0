# core/config.py
"""Scenario and algorithm configuration.

Configs are frozen dataclasses so a trial can never mutate the scenario it
was handed; sweeps derive new configs with ``dataclasses.replace``. Values
in YAML files use dB / dBm for powers and Rician factors.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from django.core.exceptions import ValidationError
from django.utils.translation import gettext_lazy as _

from .units import db_to_amplitude, db_to_linear, dbm_to_watts, wavelength

logger = logging.getLogger(__name__)

DEFAULT_RIS_POSITIONS = (
    (86.0, -7.0, 16.0),
    (71.0, -2.0, 16.0),
    (71.0, 2.0, 16.0),
    (86.0, 7.0, 16.0),
)


def _as_tuple3(value):
    return tuple(float(v) for v in value)


def _broadcast(value, count, cast=int):
    """Accept a scalar or a per-RIS list and return a tuple of ``count`` items."""
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) if not isinstance(v, (list, tuple)) else tuple(cast(x) for x in v) for v in value)
    return tuple(cast(value) for _ in range(count))


@dataclass(frozen=True)
class ScenarioConfig:
    carrier_frequency_hz: float = 26e9
    bs_position: tuple = (0.0, 0.0, 60.0)
    ris_positions: tuple = DEFAULT_RIS_POSITIONS
    # (M_v, M_h) per RIS
    ris_shapes: tuple = ((5, 5),) * 4
    # Boresight normals; None means "horizontal, toward the UE disk centre".
    ris_normals: tuple | None = None
    ue_center: tuple = (80.0, 0.0, 0.0)
    ue_radius: float = 8.0
    ue_position: tuple | None = None
    n_bs: int = 16
    n_ue: int = 4
    bs_axis: tuple = (0.0, 1.0, 0.0)
    ue_axis: tuple = (0.0, 1.0, 0.0)
    nlos_ur: tuple = (5,) * 4
    nlos_rb: tuple = (2,) * 4
    nlos_direct: int = 0
    kappa_ur_db: float = 10.0
    kappa_rb_db: float = 30.0
    penetration_loss_db: float = 78.0
    noise_power_dbm: float = -110.0
    ue_power_dbm: float = 80.0
    bs_power_dbm: float = 80.0
    seed: int = 2024

    # --- Derived quantities ---
    @property
    def wavelength(self):
        return wavelength(self.carrier_frequency_hz)

    @property
    def num_ris(self):
        return len(self.ris_positions)

    @property
    def ris_element_counts(self):
        return tuple(mv * mh for mv, mh in self.ris_shapes)

    @property
    def kappa_ur(self):
        return float(db_to_linear(self.kappa_ur_db))

    @property
    def kappa_rb(self):
        return float(db_to_linear(self.kappa_rb_db))

    @property
    def penetration_loss(self):
        """epsilon_0 as a linear amplitude factor."""
        return float(1.0 / db_to_amplitude(self.penetration_loss_db))

    @property
    def noise_power(self):
        return float(dbm_to_watts(self.noise_power_dbm))

    @property
    def ue_power(self):
        return float(dbm_to_watts(self.ue_power_dbm))

    @property
    def bs_power(self):
        return float(dbm_to_watts(self.bs_power_dbm))

    @property
    def uplink_snr_db(self):
        return self.ue_power_dbm - self.noise_power_dbm

    @property
    def downlink_snr_db(self):
        return self.bs_power_dbm - self.noise_power_dbm

    def ris_normal(self, k):
        if self.ris_normals is not None:
            normal = np.asarray(self.ris_normals[k], dtype=float)
        else:
            normal = np.asarray(self.ue_center, dtype=float) - np.asarray(self.ris_positions[k], dtype=float)
            normal[2] = 0.0
            if np.linalg.norm(normal) < 1e-12:
                normal = np.array([1.0, 0.0, 0.0])
        return normal / np.linalg.norm(normal)

    # --- Derived configs ---
    def with_snr_db(self, snr_db):
        """Set both transmit powers so that P/sigma^2 equals ``snr_db``."""
        power = self.noise_power_dbm + float(snr_db)
        return dataclasses.replace(self, ue_power_dbm=power, bs_power_dbm=power)

    def with_ue_position(self, position):
        return dataclasses.replace(self, ue_position=_as_tuple3(position))

    def with_square_ris(self, elements):
        side = math.isqrt(int(elements))
        if side * side != int(elements):
            raise ValidationError({'ris_shapes': _('RIS element count must be a perfect square for a square UPA.')})
        return dataclasses.replace(self, ris_shapes=((side, side),) * self.num_ris)

    def with_nlos_ur(self, count):
        return dataclasses.replace(self, nlos_ur=(int(count),) * self.num_ris)

    def with_nlos_rb(self, count):
        return dataclasses.replace(self, nlos_rb=(int(count),) * self.num_ris)

    def los_only(self):
        return dataclasses.replace(
            self,
            nlos_ur=(0,) * self.num_ris,
            nlos_rb=(0,) * self.num_ris,
            kappa_ur_db=math.inf,
            kappa_rb_db=math.inf,
        )

    # --- Validation ---
    def full_clean(self):
        errors = {}
        k = self.num_ris
        if self.n_bs < 1:
            errors['n_bs'] = _('The BS needs at least one antenna.')
        if self.n_ue < 1:
            errors['n_ue'] = _('The UE needs at least one antenna.')
        if self.carrier_frequency_hz <= 0:
            errors['carrier_frequency_hz'] = _('Carrier frequency must be positive.')
        for name in ('ris_shapes', 'nlos_ur', 'nlos_rb'):
            if len(getattr(self, name)) != k:
                errors[name] = _('Expected one entry per RIS.')
        if self.ris_normals is not None and len(self.ris_normals) != k:
            errors['ris_normals'] = _('Expected one entry per RIS.')
        if any(len(shape) != 2 for shape in self.ris_shapes):
            errors['ris_shapes'] = _('Each RIS shape needs exactly two dimensions.')
        elif any(mv < 1 or mh < 1 for mv, mh in self.ris_shapes):
            errors['ris_shapes'] = _('RIS dimensions must be positive.')
        if any(n < 0 for n in self.nlos_ur + self.nlos_rb) or self.nlos_direct < 0:
            errors['nlos_ur'] = _('Path counts cannot be negative.')
        if self.ue_radius < 0:
            errors['ue_radius'] = _('UE radius cannot be negative.')
        for name in ('noise_power_dbm', 'ue_power_dbm', 'bs_power_dbm', 'penetration_loss_db'):
            if not math.isfinite(getattr(self, name)):
                errors[name] = _('Value must be finite.')
        for name in ('kappa_ur_db', 'kappa_rb_db'):
            if math.isnan(getattr(self, name)):
                errors[name] = _('Rician factor cannot be NaN.')
        for name in ('bs_axis', 'ue_axis'):
            if np.linalg.norm(getattr(self, name)) < 1e-12:
                errors[name] = _('Array axis must be a non-zero vector.')
        if errors:
            raise ValidationError(errors)


@dataclass(frozen=True)
class NompConfig:
    oversampling_bs: int = 2
    oversampling_ue: int = 2
    oversampling_h: int = 2
    oversampling_v: int = 2
    newton_steps: int = 3
    cyclic_rounds: int = 3
    max_paths: int | None = None
    residual_stop_fraction: float = 0.01
    known_path_counts: bool = True
    final_gain_refit: bool = True
    duplicate_threshold: float = 0.95

    def full_clean(self):
        errors = {}
        for name in ('oversampling_bs', 'oversampling_ue', 'oversampling_h', 'oversampling_v'):
            if getattr(self, name) < 1:
                errors[name] = _('Oversampling factors must be at least 1.')
        if self.newton_steps < 0:
            errors['newton_steps'] = _('Newton steps cannot be negative.')
        if self.cyclic_rounds < 0:
            errors['cyclic_rounds'] = _('Cyclic rounds cannot be negative.')
        if not 0 < self.residual_stop_fraction < 1:
            errors['residual_stop_fraction'] = _('Stop fraction must lie in (0, 1).')
        if errors:
            raise ValidationError(errors)


@dataclass(frozen=True)
class LosSearchConfig:
    subset_size: int = 3
    threshold: float = 0.95
    max_rounds: int | None = None

    def full_clean(self, num_ris=None):
        errors = {}
        if self.subset_size < 3:
            errors['subset_size'] = _('At least three RISs are needed for a 3-D fix.')
        elif num_ris is not None and self.subset_size > num_ris:
            errors['subset_size'] = _('Subset size cannot exceed the number of RISs.')
        if not 0 < self.threshold <= 1:
            errors['threshold'] = _('Threshold must lie in (0, 1].')
        if self.max_rounds is not None and self.max_rounds < 1:
            errors['max_rounds'] = _('At least one round is required.')
        if errors:
            raise ValidationError(errors)


@dataclass(frozen=True)
class PipelineOptions:
    customization_mode: str = 'estimated'
    design_source: str = 'extracted'

    CUSTOMIZATION_MODES = ('estimated', 'oracle')
    DESIGN_SOURCES = ('extracted', 'geometric')

    def full_clean(self):
        errors = {}
        if self.customization_mode not in self.CUSTOMIZATION_MODES:
            errors['customization_mode'] = _('Unknown customization mode.')
        if self.design_source not in self.DESIGN_SOURCES:
            errors['design_source'] = _('Unknown design source.')
        if errors:
            raise ValidationError(errors)


@dataclass(frozen=True)
class SimulationConfig:
    """Everything one trial needs."""
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    nomp: NompConfig = field(default_factory=NompConfig)
    los_search: LosSearchConfig = field(default_factory=LosSearchConfig)
    pipeline: PipelineOptions = field(default_factory=PipelineOptions)

    def full_clean(self):
        self.scenario.full_clean()
        self.nomp.full_clean()
        self.los_search.full_clean(num_ris=self.scenario.num_ris)
        self.pipeline.full_clean()

    def replace_scenario(self, scenario):
        return dataclasses.replace(self, scenario=scenario)

    def as_dict(self):
        return {
            'scenario': scenario_to_dict(self.scenario),
            'nomp': dataclasses.asdict(self.nomp),
            'los_search': dataclasses.asdict(self.los_search),
            'pipeline': dataclasses.asdict(self.pipeline),
        }


# --- Loading ---
_TUPLE3_FIELDS = ('bs_position', 'ue_center', 'bs_axis', 'ue_axis')


def scenario_from_dict(data, base=None):
    """Merge a mapping of overrides onto ``base`` (the built-in defaults)."""
    base = base or ScenarioConfig()
    data = dict(data or {})
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError({name: _('Unknown scenario key.') for name in unknown})
    if 'ris_positions' in data:
        data['ris_positions'] = tuple(_as_tuple3(p) for p in data['ris_positions'])
    count = len(data.get('ris_positions', base.ris_positions))
    for name in _TUPLE3_FIELDS:
        if name in data:
            data[name] = _as_tuple3(data[name])
    if data.get('ue_position') is not None:
        data['ue_position'] = _as_tuple3(data['ue_position'])
    if data.get('ris_normals') is not None:
        data['ris_normals'] = tuple(_as_tuple3(n) for n in data['ris_normals'])
    if 'ris_shapes' in data:
        data['ris_shapes'] = _parse_shapes(data['ris_shapes'], count)
    elif count != base.num_ris:
        data['ris_shapes'] = (base.ris_shapes[0],) * count
    for name in ('nlos_ur', 'nlos_rb'):
        if name in data:
            data[name] = _broadcast(data[name], count)
        elif count != base.num_ris:
            data[name] = (getattr(base, name)[0],) * count
    for name in ('kappa_ur_db', 'kappa_rb_db', 'penetration_loss_db', 'noise_power_dbm',
                 'ue_power_dbm', 'bs_power_dbm', 'carrier_frequency_hz', 'ue_radius'):
        if name in data:
            data[name] = float(data[name])
    scenario = dataclasses.replace(base, **data)
    scenario.full_clean()
    return scenario


def _parse_shapes(shapes, count):
    """``[M_v, M_h]`` for every RIS, or one ``[M_v, M_h]`` pair per RIS."""
    if not isinstance(shapes, (list, tuple)) or not shapes:
        raise ValidationError({'ris_shapes': _('Give [M_v, M_h] or one [M_v, M_h] pair per RIS.')})
    if all(isinstance(s, (list, tuple)) for s in shapes):
        pairs = shapes
    elif any(isinstance(s, (list, tuple)) for s in shapes):
        raise ValidationError({'ris_shapes': _('Do not mix pairs and scalars.')})
    else:
        pairs = [shapes] * count
    if any(len(pair) != 2 for pair in pairs):
        raise ValidationError({'ris_shapes': _('Each RIS shape needs exactly two dimensions.')})
    return tuple((int(mv), int(mh)) for mv, mh in pairs)


def scenario_to_dict(scenario):
    data = dataclasses.asdict(scenario)
    for name in ('kappa_ur_db', 'kappa_rb_db'):
        if math.isinf(data[name]):
            data[name] = 'inf' if data[name] > 0 else '-inf'
    return data


def _section(cls, data):
    data = dict(data or {})
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError({name: _('Unknown %(section)s key.') % {'section': cls.__name__} for name in unknown})
    return cls(**data)


def simulation_from_dict(data, base=None):
    data = dict(data or {})
    base = base or SimulationConfig()
    config = SimulationConfig(
        scenario=scenario_from_dict(data.get('scenario'), base=base.scenario),
        nomp=_section(NompConfig, {**dataclasses.asdict(base.nomp), **(data.get('nomp') or {})}),
        los_search=_section(LosSearchConfig, {**dataclasses.asdict(base.los_search), **(data.get('los_search') or {})}),
        pipeline=_section(PipelineOptions, {**dataclasses.asdict(base.pipeline), **(data.get('pipeline') or {})}),
    )
    config.full_clean()
    return config


def load_yaml(path):
    path = Path(path)
    with path.open('r', encoding='utf-8') as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise ValidationError(_('%(path)s does not contain a mapping.') % {'path': path})
    logger.debug("Loaded %s", path)
    return data


def load_simulation_config(path):
    return simulation_from_dict(load_yaml(path))
