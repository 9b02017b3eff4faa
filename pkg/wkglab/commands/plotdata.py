import os

import click
from flask import Blueprint, current_app

from ..decorators import artifact_command
from ..lib.errors import MissingArtifact, InputError
from ..lib.utils import read_csv, csv_text, fit_power_law

plotdata_bp = Blueprint('plotdata', __name__, cli_group=None)

KINDS = ('decay', 'residuals', 'contraction', 'shells')
HEADER = ('x', 'series', 'value')
SOURCES = {
    'decay': 'diagnostics.csv',
    'shells': 'diagnostics.csv',
    'residuals': 'residuals.csv',
    'contraction': 'contraction.csv',
}


def _table(directory, kind):
    path = os.path.join(directory, SOURCES[kind])
    if not os.path.exists(path):
        raise MissingArtifact(name=path)
    rows = read_csv(path)
    if not rows:
        raise InputError(name=path, message="Artifact is empty")
    return rows[0], rows[1:]


def _diagnostic_series(body, wanted):
    series = {}
    for t, name, value in body:
        if wanted(name):
            series.setdefault(name, []).append((float(t), float(value)))
    return series


def decay_rows(directory, t_min=1.0):
    _, body = _table(directory, 'decay')
    series = _diagnostic_series(body, lambda name: name in ('sup_v', 'sup_u'))
    rows, footer = [], []
    for name in ('sup_v', 'sup_u'):
        points = series.get(name, [])
        rows.extend((t, name, v) for t, v in points)
        fit = [(t, v) for t, v in points if t >= t_min and v > 0]
        if len(fit) >= 2:
            p, _ = fit_power_law([t for t, _ in fit], [v for _, v in fit])
            footer.append(('fit', '{0}_exponent'.format(name), p))
    return rows + footer


def shell_rows(directory):
    _, body = _table(directory, 'shells')
    series = _diagnostic_series(body, lambda name: name.startswith('shell_'))
    return [(t, name, v) for name in sorted(series) for t, v in series[name]]


def residual_rows(directory):
    header, body = _table(directory, 'residuals')
    rows = []
    for column in range(1, len(header)):
        rows.extend((float(r[0]), header[column], float(r[column])) for r in body)
    return rows


def contraction_rows(directory):
    _, body = _table(directory, 'contraction')
    rows = [(int(r[0]), 'ratio', float(r[2])) for r in body if r[2] != '']
    rows.extend((int(r[0]), 'distance', float(r[1])) for r in body)
    return rows


BUILDERS = {
    'decay': decay_rows,
    'shells': shell_rows,
    'residuals': residual_rows,
    'contraction': contraction_rows,
}


def plot_data(directory, kind):
    if not os.path.isdir(directory):
        raise MissingArtifact(name=directory)
    return csv_text(HEADER, BUILDERS[kind](directory))


@plotdata_bp.cli.command('plotdata')
@click.argument('artifact_dir', type=click.Path())
@click.argument('which', type=click.Choice(KINDS))
@click.option('--output', type=click.Path(dir_okay=False), help='Write the CSV here')
@artifact_command
def plotdata(artifact_dir, which, output):
    """Tidy (x, series, value) CSV from a run directory."""
    text = plot_data(artifact_dir, which)
    if output:
        with open(output, 'w', newline='') as f:
            f.write(text)
        current_app.logger.info('Plot data written to {0}'.format(output))
    else:
        click.echo(text, nl=False)
