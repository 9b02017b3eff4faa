import os

import click
from flask import Blueprint, current_app

from ..decorators import run_options, run_command
from ..lib.utils import write_csv
from ..models.snapshot import write_snapshot
from ..models.state import ProfileState
from ..services.solver import solve_forward
from .base import output_dir, load_data, write_manifest

simulate_bp = Blueprint('simulate', __name__, cli_group=None)

DIAGNOSTICS = 'diagnostics.csv'


def diagnostic_rows(trajectory):
    rows = []
    for t, snap in zip(trajectory.diagnostic_times, trajectory.diagnostics):
        for name in sorted(snap.breakdown):
            rows.append((t, name, snap.breakdown[name]))
    return rows


def run_simulation(run):
    """Forward solve from the data profiles; returns the artifact paths."""
    out = output_dir(run)
    data = load_data(run)
    solver = run.solver_config(dump_dir=os.path.join(out, 'dump'))
    init = ProfileState(data.V_wa, data.V_kg, t=0.0)
    trajectory = solve_forward(init, solver,
                               sobolev_index=run.get('DIAGNOSTIC_SOBOLEV_INDEX', 2))

    outputs = []
    for step, state in zip(trajectory.steps, trajectory.states):
        stem = os.path.join(out, 'snapshots', 'step_{0}'.format(step))
        outputs.append(write_snapshot(stem + '_wa.wkgs', state.V_wa, state.t))
        outputs.append(write_snapshot(stem + '_kg.wkgs', state.V_kg, state.t))
    outputs.append(write_csv(os.path.join(out, DIAGNOSTICS), ('t', 'name', 'value'),
                             diagnostic_rows(trajectory)))
    outputs.append(write_manifest(out, 'simulate', run, outputs, data))
    current_app.logger.info('Simulation finished at t={0!r} with {1} snapshots'.format(
        trajectory.final.t, len(trajectory)))
    return trajectory, outputs


@simulate_bp.cli.command('simulate')
@run_options
@click.option('--t-end', type=float, help='Final time')
@click.option('--dt', type=float, help='Time step')
@run_command
def simulate(run, t_end, dt):
    """Forward pseudo-spectral run with snapshots and diagnostics."""
    if t_end is not None:
        run.settings['SOLVER_T_END'] = t_end
    if dt is not None:
        run.settings['SOLVER_DT'] = dt
    run.check()
    trajectory, outputs = run_simulation(run)
    click.echo('{0} snapshots written to {1}'.format(len(trajectory),
                                                    os.path.dirname(outputs[-1])))
