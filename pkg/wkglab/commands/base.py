import os

from flask import current_app

from .. import __version__
from ..lib.schema import RunManifestSchema
from ..lib.utils import write_json
from ..models.snapshot import write_snapshot
from ..services.data import make_data

MANIFEST = 'manifest.json'

run_manifest_schema = RunManifestSchema()


def output_dir(run):
    path = os.path.abspath(run.output_dir)
    os.makedirs(path, exist_ok=True)
    return path


def load_data(run):
    return make_data(run.grid(), run.preset, eps=run.eps, seed=run.seed,
                     width=run.get('DATA_WIDTH', 0.4))


def write_profiles(directory, states, prefix='node'):
    """One wa and one kg snapshot per state, numbered in order."""
    paths = []
    for i, state in enumerate(states):
        stem = os.path.join(directory, '{0}_{1:04d}'.format(prefix, i))
        paths.append(write_snapshot(stem + '_wa.wkgs', state.V_wa, state.t))
        paths.append(write_snapshot(stem + '_kg.wkgs', state.V_kg, state.t))
    return paths


def write_manifest(directory, command, run, outputs, data=None):
    grid = run.grid()
    manifest = run_manifest_schema.dump({
        'command': command,
        'version': __version__,
        'grid': grid,
        'config': run.to_dict(),
        'data': data.to_dict() if data is not None else None,
        'outputs': sorted(os.path.relpath(p, directory) for p in outputs),
        'exit_code': 0,
    })
    path = write_json(os.path.join(directory, MANIFEST), manifest)
    current_app.logger.info('Manifest written to {0}'.format(path))
    return path
