# campaigns/recipes.py
"""Campaign files: a base configuration, one swept parameter and the
schemes to compare.

A campaign file is YAML with these keys::

    name: fig10-m25
    sweep: {axis: snr_db, values: [170, 180, 190]}
    schemes: [full-nomp-baseline, proposed-customized]
    trials: 500
    seed: 2024
    noiseless: false
    metrics: [nmse_uplink]        # optional filter
    scenario: {...}               # ScenarioConfig overrides
    nomp: {...}
    los_search: {...}
    pipeline: {...}

``extends`` names another campaign file (relative to this one) whose
sections are merged first.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.utils.translation import gettext_lazy as _

from core.config import SimulationConfig, load_yaml, simulation_from_dict

from .models import SchemeId, SweepAxis

logger = logging.getLogger(__name__)

FIGURE_RECIPES = {
    'fig4': 'fig4_separation_nmse.yaml',
    'fig5a': 'fig5a_power_ratio_elements.yaml',
    'fig5b': 'fig5b_power_ratio_kappa.yaml',
    'fig6': 'fig6_uplink_nme_snr.yaml',
    'fig6-complexity': 'fig6_complexity_elements.yaml',
    'fig7a': 'fig7a_uplink_nme_paths.yaml',
    'fig7b': 'fig7b_uplink_nme_kappa.yaml',
    'fig8': 'fig8_downlink_nme_snr.yaml',
    'fig9a': 'fig9a_position_error_snr.yaml',
    'fig9b': 'fig9b_position_error_kappa.yaml',
    'fig10-m25': 'fig10_nmse_snr_m25.yaml',
    'fig10-m49': 'fig10_nmse_snr_m49.yaml',
    'fig10-m100': 'fig10_nmse_snr_m100.yaml',
    'fig11a': 'fig11a_nmse_paths.yaml',
    'fig11b': 'fig11b_complexity_ratio_paths.yaml',
    'fig12': 'fig12_nmse_kappa.yaml',
    'fig13a-m25': 'fig13a_se_snr_m25.yaml',
    'fig13a-m49': 'fig13a_se_snr_m49.yaml',
    'fig13a-m100': 'fig13a_se_snr_m100.yaml',
    'fig13b': 'fig13b_se_kappa.yaml',
}

_SECTIONS = ('scenario', 'nomp', 'los_search', 'pipeline')
_KEYS = {'name', 'extends', 'sweep', 'schemes', 'trials', 'seed', 'noiseless', 'metrics', 'description', *_SECTIONS}


@dataclass(frozen=True)
class Campaign:
    name: str
    sweep_axis: str
    sweep_values: tuple
    schemes: tuple
    trials: int
    seed: int
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    noiseless: bool = False
    metrics: tuple = ()
    source: str = ''
    description: str = ''

    def full_clean(self):
        errors = {}
        if self.trials < 1:
            errors['trials'] = _('At least one trial is required.')
        if self.sweep_axis not in SweepAxis.values:
            errors['sweep'] = _('Unknown sweep axis.')
        if not self.sweep_values:
            errors['sweep'] = _('At least one sweep value is required.')
        elif any(not math.isfinite(v) for v in self.sweep_values):
            errors['sweep'] = _('Sweep values must be finite.')
        unknown = [s for s in self.schemes if s not in SchemeId.values]
        if unknown or not self.schemes:
            errors['schemes'] = _('Schemes must be a non-empty subset of %(choices)s.') % {
                'choices': ', '.join(SchemeId.values),
            }
        if errors:
            raise ValidationError(errors)

    def with_overrides(self, seed=None, trials=None):
        changes = {}
        if seed is not None:
            changes['seed'] = int(seed)
        if trials is not None:
            changes['trials'] = int(trials)
        campaign = dataclasses.replace(self, **changes)
        campaign.full_clean()
        return campaign

    def point_config(self, value):
        """The simulation config at one sweep value."""
        return apply_sweep(self.simulation, self.sweep_axis, value)

    def as_dict(self):
        return {
            'name': self.name,
            'source': self.source,
            'description': self.description,
            'sweep': {'axis': self.sweep_axis, 'values': list(self.sweep_values)},
            'schemes': list(self.schemes),
            'trials': self.trials,
            'seed': self.seed,
            'noiseless': self.noiseless,
            'metrics': list(self.metrics),
            **self.simulation.as_dict(),
        }


def apply_sweep(sim, axis, value):
    scenario = sim.scenario
    if axis == SweepAxis.SNR:
        scenario = scenario.with_snr_db(value)
    elif axis == SweepAxis.RIS_ELEMENTS:
        scenario = scenario.with_square_ris(int(round(value)))
    elif axis == SweepAxis.KAPPA_UR:
        scenario = dataclasses.replace(scenario, kappa_ur_db=float(value))
    elif axis == SweepAxis.NLOS_UR:
        scenario = scenario.with_nlos_ur(int(round(value)))
    elif axis == SweepAxis.NLOS_RB:
        scenario = scenario.with_nlos_rb(int(round(value)))
    elif axis != SweepAxis.SCHEME:
        raise ValidationError({'sweep': _('Unknown sweep axis %(axis)s.') % {'axis': axis}})
    scenario.full_clean()
    return sim.replace_scenario(scenario)


def _merge(base, override):
    merged = dict(base)
    for key, value in override.items():
        if key in _SECTIONS and isinstance(value, dict):
            merged[key] = {**(merged.get(key) or {}), **value}
        else:
            merged[key] = value
    return merged


def _resolve(path, seen=()):
    path = Path(path).resolve()
    if path in seen:
        raise ValidationError(_('Campaign %(path)s extends itself.') % {'path': path})
    data = load_yaml(path)
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ValidationError({key: _('Unknown campaign key.') for key in unknown})
    parent = data.pop('extends', None)
    if parent is None:
        return data
    return _merge(_resolve(path.parent / parent, seen + (path,)), data)


def campaign_from_dict(data, source=''):
    sweep = data.get('sweep') or {'axis': SweepAxis.SCHEME, 'values': [0]}
    simulation = simulation_from_dict({section: data.get(section) for section in _SECTIONS})
    defaults = settings.RIS_SIMULATION
    campaign = Campaign(
        name=str(data.get('name') or Path(source).stem or 'campaign'),
        sweep_axis=str(sweep.get('axis', SweepAxis.SCHEME)),
        sweep_values=tuple(float(v) for v in sweep.get('values', [0])),
        schemes=tuple(data.get('schemes') or [SchemeId.PROPOSED.value]),
        trials=int(data.get('trials', defaults['DEFAULT_TRIALS'])),
        seed=int(data.get('seed', defaults['DEFAULT_SEED'])),
        simulation=simulation,
        noiseless=bool(data.get('noiseless', False)),
        metrics=tuple(data.get('metrics') or ()),
        source=str(source),
        description=str(data.get('description') or ''),
    )
    campaign.full_clean()
    return campaign


def load_campaign(path):
    data = _resolve(path)
    logger.debug("Resolved campaign %s", path)
    return campaign_from_dict(data, source=path)


def recipe_path(figure_id):
    try:
        filename = FIGURE_RECIPES[figure_id]
    except KeyError:
        raise ValidationError(
            _('Unknown figure id %(figure)s; expected one of %(choices)s.') % {
                'figure': figure_id, 'choices': ', '.join(FIGURE_RECIPES),
            }
        ) from None
    return Path(settings.RIS_SIMULATION['RECIPES_DIR']) / filename
