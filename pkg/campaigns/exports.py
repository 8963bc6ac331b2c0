# campaigns/exports.py
import csv
import json
from pathlib import Path

import numpy as np
import openpyxl
from django.core.serializers.json import DjangoJSONEncoder
from openpyxl.styles import Font
from openpyxl.utils import get_column_letter

import ris_project

CSV_COLUMNS = ['sweep_axis', 'sweep_value', 'scheme', 'metric', 'mean', 'stderr', 'ci95', 'trials', 'failed']
XLSX_HEADERS = ["Sweep Axis", "Sweep Value", "Metric", "Mean", "Std. Error", "95% CI", "Trials", "Failed"]


def _float(value):
    return repr(float(value))


class ManifestEncoder(DjangoJSONEncoder):
    """Also serializes numpy scalars and arrays."""

    def default(self, o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def write_csv(result, path):
    path = Path(path)
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            writer.writerow([
                row.sweep_axis, _float(row.sweep_value), row.scheme, row.metric,
                _float(row.mean), _float(row.stderr), _float(row.ci95), row.trials, row.failed,
            ])
    return path


def build_manifest(result, threads):
    campaign = result.campaign
    return {
        'version': ris_project.__version__,
        'campaign': campaign.as_dict(),
        'failures': [
            {'sweep_value': campaign.sweep_values[point], 'scheme': scheme, 'failed': count}
            for (point, scheme), count in sorted(result.failures.items())
        ],
        'failed_trials': result.failed_trials,
        'campaign_failed': result.campaign_failed,
        # Thread count is recorded but never changes the numbers.
        'threads': int(threads),
    }


def write_manifest(result, path, threads=1):
    path = Path(path)
    text = json.dumps(build_manifest(result, threads), cls=ManifestEncoder, indent=2, sort_keys=True)
    path.write_text(text + '\n', encoding='utf-8')
    return path


def build_workbook(rows):
    """One sheet per scheme; bold header row, columns sized to content."""
    wb = openpyxl.Workbook()
    wb.remove(wb.active)
    by_scheme = {}
    for row in rows:
        by_scheme.setdefault(row.scheme, []).append(row)
    if not by_scheme:
        ws = wb.create_sheet("Results")
        ws.append(XLSX_HEADERS)
    for scheme, scheme_rows in by_scheme.items():
        ws = wb.create_sheet(scheme[:31])
        ws.append(XLSX_HEADERS)
        for row in scheme_rows:
            ws.append([
                row.sweep_axis, row.sweep_value, row.metric, row.mean,
                row.stderr, row.ci95, row.trials, row.failed,
            ])
    for ws in wb.worksheets:
        for cell in ws[1]:
            cell.font = Font(bold=True)
        for index, column in enumerate(ws.columns, start=1):
            width = max(len(str(cell.value)) for cell in column if cell.value is not None)
            ws.column_dimensions[get_column_letter(index)].width = width + 2
    return wb


def write_outputs(result, out_dir, threads=1, xlsx=False):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [write_csv(result, out_dir / 'results.csv'), write_manifest(result, out_dir / 'manifest.json', threads)]
    if xlsx:
        path = out_dir / 'results.xlsx'
        build_workbook(result.rows).save(path)
        paths.append(path)
    return paths
