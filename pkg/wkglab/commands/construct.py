import os

import click
from flask import Blueprint, current_app

from ..decorators import run_options, run_command
from ..lib.schema import ResidualReportSchema, NormDetailSchema
from ..lib.utils import write_json, write_csv
from ..services.asymptotics import build_cache, export_cache
from ..services.constructor import WaveOperatorBuilder, verify_scattering
from ..services.norms import norm_Y, norm_X
from .base import output_dir, load_data, write_profiles, write_manifest

construct_bp = Blueprint('construct', __name__, cli_group=None)

residual_schema = ResidualReportSchema()
norm_schema = NormDetailSchema()


def perturbation_norms(builder, G, params):
    """Y norms of the data, X norms of the perturbation at the nodes."""
    series_wa = [(t, f) for t, f in zip(G.times, G.G_wa)]
    series_kg = [(t, f) for t, f in zip(G.times, G.G_kg)]
    derivative = builder.time_derivative_series(G)
    d_wa = [(s.t, s.V_wa) for s in derivative]
    d_kg = [(s.t, s.V_kg) for s in derivative]
    data = builder.data
    return {
        'Y1': norm_schema.dump(norm_Y(data.V_wa, 'Y1', params)),
        'Y2': norm_schema.dump(norm_Y(data.V_kg, 'Y2', params)),
        'X1': norm_schema.dump(norm_X(series_wa, d_wa, 'X1', params)),
        'X2': norm_schema.dump(norm_X(series_kg, d_kg, 'X2', params)),
    }


def run_construction(run):
    out = output_dir(run)
    data = load_data(run)
    cache = build_cache(data, run.cache_config())
    outputs = [export_cache(cache, os.path.join(out, 'cache'))]

    builder = WaveOperatorBuilder(data, cache, run.builder_config(log_dir=out))
    G, log = builder.iterate_to_fixed_point()
    outputs.append(os.path.join(out, 'contraction.csv'))

    profiles = builder.reconstruct_solution(G)
    outputs.extend(write_profiles(os.path.join(out, 'profiles'), profiles))
    report = verify_scattering(profiles, data, cache)
    outputs.append(write_json(os.path.join(out, 'residuals.json'),
                              residual_schema.dump(report)))
    outputs.append(write_csv(os.path.join(out, 'residuals.csv'),
                             ('t', 'r_wa', 'r_kg', 'r_kg_uncorrected'), report.rows()))
    outputs.append(write_json(os.path.join(out, 'norms.json'),
                              perturbation_norms(builder, G, run.norm_params())))
    outputs.append(write_manifest(out, 'construct', run, outputs, data))
    current_app.logger.info('Construction converged after {0} iterations'.format(len(log)))
    return report, log, outputs


@construct_bp.cli.command('construct')
@run_options
@click.option('--t-max', type=float, help='Horizon of the backward construction')
@click.option('--tol', type=float, help='Fixed-point tolerance')
@click.option('--max-iter', type=int, help='Picard iteration cap')
@run_command
def construct(run, t_max, tol, max_iter):
    """Build the solution with prescribed asymptotics by backward Picard iteration."""
    for key, value in (('T_MAX', t_max), ('FIXED_POINT_TOL', tol),
                       ('FIXED_POINT_MAX_ITER', max_iter)):
        if value is not None:
            run.settings[key] = value
    run.check()
    report, log, outputs = run_construction(run)
    click.echo('iterations={0} final_distance={1!r} r_kg(T)={2!r} decreasing={3}'.format(
        len(log), log.final_distance, report.r_kg[-1], report.decreasing))
