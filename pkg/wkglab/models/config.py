import copy
import os

from ..lib.errors import ConfigurationError
from ..lib.validators import validate_run_config
from .grid import make_grid
from .norm import NormParams
from .scattering import CacheConfig, BuilderConfig
from .trajectory import SolverConfig

# run document path -> app config key
DOC_KEYS = {
    ('grid', 'n'): 'GRID_N',
    ('grid', 'L'): 'GRID_L',
    ('eps',): 'EPS',
    ('data', 'preset'): 'DATA_PRESET',
    ('data', 'width'): 'DATA_WIDTH',
    ('seed',): 'SEED',
    ('threads',): 'THREADS',
    ('output',): 'OUTPUT_DIR',
    ('solver', 'dt'): 'SOLVER_DT',
    ('solver', 't_end'): 'SOLVER_T_END',
    ('solver', 'snapshot_stride'): 'SNAPSHOT_STRIDE',
    ('solver', 'diagnostic_stride'): 'DIAGNOSTIC_STRIDE',
    ('solver', 'dealiasing'): 'DEALIASING',
    ('solver', 'coupling'): 'COUPLING',
    ('solver', 'blowup_threshold'): 'BLOWUP_THRESHOLD',
    ('t_max',): 'T_MAX',
    ('cache', 'per_octave'): 'CACHE_PER_OCTAVE',
    ('cache', 'max_step'): 'CACHE_MAX_STEP',
    ('cache', 'extra_times'): 'CACHE_EXTRA_TIMES',
    ('cache', 'slow_dt'): 'SLOW_QUADRATURE_DT',
    ('cache', 'fine_dt'): 'QUADRATURE_DT',
    ('cache', 'rule'): 'QUADRATURE_RULE',
    ('fixed_point', 'tol'): 'FIXED_POINT_TOL',
    ('fixed_point', 'max_iter'): 'FIXED_POINT_MAX_ITER',
    ('fixed_point', 'warn_ratio'): 'CONTRACTION_WARN_RATIO',
    ('norms', 'n0'): 'NORM_N0',
    ('norms', 'n1'): 'NORM_N1',
    ('norms', 'd'): 'NORM_D',
    ('norms', 'delta'): 'NORM_DELTA',
    ('norms', 'order'): 'VECTOR_FIELD_ORDER',
    ('verify', 'sections'): 'VERIFY_SECTIONS',
}

# CLI option name -> run document path
OPTION_PATHS = {
    'n': ('grid', 'n'),
    'L': ('grid', 'L'),
    'eps': ('eps',),
    'preset': ('data', 'preset'),
    'seed': ('seed',),
    'threads': ('threads',),
    'output': ('output',),
}

OUTPUT_ROOT_ENV = 'WKGLAB_OUTPUT_ROOT'


def _lookup(doc, path):
    for part in path:
        if not isinstance(doc, dict) or part not in doc:
            return False, None
        doc = doc[part]
    return True, doc


def _assign(doc, path, value):
    for part in path[:-1]:
        doc = doc.setdefault(part, {})
    doc[path[-1]] = value


class RunConfig(object):
    """
    Settings of one command: the app config, then the run document, then
    CLI options. The merged document is validated before anything runs.
    """

    def __init__(self, settings, doc=None):
        self.settings = dict(settings)
        self.doc = copy.deepcopy(doc or {})

    @classmethod
    def build(cls, app_config, doc=None, options=None):
        doc = copy.deepcopy(doc or {})
        for name, value in (options or {}).items():
            if value is None:
                continue
            if name not in OPTION_PATHS:
                raise ConfigurationError(name=name, message="Unknown option")
            _assign(doc, OPTION_PATHS[name], value)
        validate_run_config(doc)

        settings = dict(app_config)
        for path, key in DOC_KEYS.items():
            found, value = _lookup(doc, path)
            if found:
                settings[key] = value
        if os.environ.get(OUTPUT_ROOT_ENV) and not _lookup(doc, ('output',))[0]:
            settings['OUTPUT_DIR'] = os.environ[OUTPUT_ROOT_ENV]
        rv = cls(settings, doc)
        rv.check()
        return rv

    def get(self, name, default=None):
        return self.settings.get(name, default)

    def __getitem__(self, name):
        return self.settings[name]

    def check(self):
        """Builds every sub-config once so bad values fail before compute."""
        self.grid()
        self.solver_config()
        self.cache_config()
        self.builder_config()
        self.norm_params()
        if self.eps < 0:
            raise ConfigurationError(name=self.eps, message="eps must be non-negative")

    @property
    def eps(self):
        return float(self.get('EPS', 0.01))

    @property
    def seed(self):
        return self.get('SEED')

    @property
    def preset(self):
        return self.get('DATA_PRESET', 'gaussian-kg')

    @property
    def output_dir(self):
        return self.get('OUTPUT_DIR', 'output')

    def grid(self):
        return make_grid(self.get('GRID_N', 32), self.get('GRID_L'), self.get('THREADS'))

    def solver_config(self, **overrides):
        overrides.setdefault('coupling', self.get('COUPLING', 1.0))
        return SolverConfig.from_config(self.settings, **overrides)

    def cache_config(self, **overrides):
        return CacheConfig.from_config(self.settings, **overrides)

    def builder_config(self, **overrides):
        return BuilderConfig.from_config(self.settings, **overrides)

    def norm_params(self):
        return NormParams.from_config(self.settings)

    def to_dict(self):
        """What a manifest needs to reproduce the run."""
        grid = self.grid()
        return {
            'grid': {'n': grid.n, 'L': grid.length},
            'eps': self.eps,
            'data': {'preset': self.preset, 'width': self.get('DATA_WIDTH')},
            'seed': self.seed,
            'threads': self.get('THREADS'),
            'solver': self.solver_config().to_dict(),
            'cache': self.cache_config().to_dict(),
            'fixed_point': self.builder_config().to_dict(),
            'norms': self.norm_params().to_dict(),
            'document': self.doc,
        }

    def __repr__(self):
        return '<RunConfig n={0} eps={1!r} preset={2}>'.format(
            self.get('GRID_N'), self.eps, self.preset)
