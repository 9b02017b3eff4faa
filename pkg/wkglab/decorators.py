import sys
from functools import wraps

import click
from flask import current_app

from .lib.errors import StructuredException, InputError
from .lib.utils import read_json
from .models.config import RunConfig, OPTION_PATHS


def run_options(f):
    """
    Options shared by every command that builds a RunConfig
    """
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                     help='JSON run document'),
        click.option('--output', type=click.Path(file_okay=False),
                     help='Artifact directory'),
        click.option('--eps', type=float),
        click.option('--preset', type=str),
        click.option('--seed', type=int),
        click.option('--n', 'n', type=int, help='Points per axis'),
        click.option('--L', 'L', type=float, help='Box length'),
        click.option('--threads', type=int),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def run_command(f):
    """
    Turn the shared options into a RunConfig passed as `run`, and map
    StructuredException onto the process exit code
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            config_path = kwargs.pop('config_path', None)
            doc = {}
            if config_path:
                doc = read_json(config_path)
                if not isinstance(doc, dict):
                    raise InputError(name=config_path,
                                     message="Run document must be a JSON object")
            options = dict((name, kwargs.pop(name)) for name in list(kwargs)
                           if name in OPTION_PATHS)
            kwargs['run'] = RunConfig.build(current_app.config, doc, options)
            return f(*args, **kwargs)
        except StructuredException as e:
            rv = e.to_dict()
            current_app.logger.error('{0} (exit code {1})'.format(
                rv['msg'], rv['exit_code']))
            click.echo('Error: {0}'.format(rv['msg']), err=True)
            for key in ('last_good_time', 'dump_path', 'log_path'):
                if rv.get(key) is not None:
                    click.echo('{0}: {1}'.format(key, rv[key]), err=True)
            sys.exit(e.exit_code)

    return decorated_function


def artifact_command(f):
    """
    StructuredException handling for commands that only read artifacts
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except StructuredException as e:
            rv = e.to_dict()
            current_app.logger.error(rv['msg'])
            click.echo('Error: {0}'.format(rv['msg']), err=True)
            sys.exit(e.exit_code)

    return decorated_function
