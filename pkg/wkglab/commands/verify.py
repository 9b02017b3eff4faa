import os

import click
from flask import Blueprint, current_app

from ..decorators import run_options, run_command
from ..lib.errors import VerifyFailure
from ..lib.schema import CheckResultSchema
from ..lib.utils import write_json
from ..services.verification import (SECTIONS, run_suites, oracle_suite, failures,
                                     report_table, margin_csv)
from .base import output_dir, write_manifest

verify_bp = Blueprint('verify', __name__, cli_group=None)

check_schema = CheckResultSchema(many=True)


def write_report(directory, name, results):
    failed = failures(results)
    doc = {
        'results': check_schema.dump(results),
        'passed': not failed,
        'failed': [r.name for r in failed],
    }
    return write_json(os.path.join(directory, name), doc)


def _finish(run, command, results, report_name):
    out = output_dir(run)
    outputs = [write_report(out, report_name, results)]
    for result in results:
        margins = result.measured.get('margins') if result.measured else None
        if margins:
            path = os.path.join(out, 'phase_margins.csv')
            with open(path, 'w', newline='') as f:
                f.write(margin_csv(margins))
            outputs.append(path)
    outputs.append(write_manifest(out, command, run, outputs))
    click.echo(report_table(results), nl=False)

    failed = failures(results)
    if failed:
        raise VerifyFailure(name=', '.join(r.name for r in failed))
    current_app.logger.info('All {0} checks passed or skipped'.format(len(results)))


@verify_bp.cli.command('verify')
@run_options
@click.option('--section', 'sections', multiple=True,
              type=click.Choice(SECTIONS), help='Run only these sections')
@run_command
def verify(run, sections):
    """Property suites of every module, as a pass/fail report."""
    results = run_suites(run, sections or None)
    _finish(run, 'verify', results, 'verify.json')


@verify_bp.cli.command('oracle')
@run_options
@run_command
def oracle(run):
    """Brute-force pseudo-product comparisons on an 8^3 grid."""
    results = oracle_suite(run, force=True)
    _finish(run, 'oracle', results, 'oracle.json')
