# campaigns/tests/fixtures.py
"""Small campaigns that run in a test-suite budget."""
from pathlib import Path

import yaml

SMALL_SCENARIO = {
    'ris_shapes': [2, 2],
    'nlos_ur': 1,
    'nlos_rb': 1,
    'n_bs': 8,
    'n_ue': 2,
}


def small_campaign_dict(**overrides):
    data = {
        'name': 'tiny',
        'description': 'Two-point smoke campaign',
        'sweep': {'axis': 'snr_db', 'values': [180, 190]},
        'schemes': ['perfect-csi', 'proposed-customized'],
        'trials': 2,
        'seed': 7,
        'scenario': dict(SMALL_SCENARIO),
    }
    data.update(overrides)
    return data


def write_campaign(directory, filename='tiny.yaml', **overrides):
    path = Path(directory) / filename
    path.write_text(yaml.safe_dump(small_campaign_dict(**overrides)), encoding='utf-8')
    return path
