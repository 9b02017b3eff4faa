from ..lib.errors import ConfigurationError, InputError

SCHEMES = ('rk4-integrating-factor', )


class SolverConfig(object):

    def __init__(self, dt=0.05, t_end=50.0, snapshot_stride=100,
                 diagnostic_stride=20, dealiasing=True,
                 scheme='rk4-integrating-factor', coupling=1.0,
                 blowup_threshold=1e8, dump_dir=None, max_dt=0.1):
        if not 0 < dt <= max_dt:
            raise ConfigurationError(name=dt,
                                     message="Time step must lie in (0, {0}]".format(max_dt))
        if scheme not in SCHEMES:
            raise ConfigurationError(name=scheme, message="Unknown time scheme")
        if snapshot_stride < 1 or diagnostic_stride < 1:
            raise ConfigurationError(name=(snapshot_stride, diagnostic_stride),
                                     message="Strides must be positive")
        self.dt = float(dt)
        self.t_end = float(t_end)
        self.snapshot_stride = int(snapshot_stride)
        self.diagnostic_stride = int(diagnostic_stride)
        self.dealiasing = bool(dealiasing)
        self.scheme = scheme
        self.coupling = float(coupling)
        self.blowup_threshold = float(blowup_threshold)
        self.dump_dir = dump_dir

    @classmethod
    def from_config(cls, config, **overrides):
        kwargs = {
            'dt': config.get('SOLVER_DT', 0.05),
            't_end': config.get('SOLVER_T_END', 50.0),
            'snapshot_stride': config.get('SNAPSHOT_STRIDE', 100),
            'diagnostic_stride': config.get('DIAGNOSTIC_STRIDE', 20),
            'dealiasing': config.get('DEALIASING', True),
            'blowup_threshold': config.get('BLOWUP_THRESHOLD', 1e8),
            'max_dt': config.get('SOLVER_MAX_DT', 0.1),
        }
        kwargs.update(overrides)
        return cls(**kwargs)

    def to_dict(self):
        return {
            'dt': self.dt, 't_end': self.t_end,
            'snapshot_stride': self.snapshot_stride,
            'diagnostic_stride': self.diagnostic_stride,
            'dealiasing': self.dealiasing, 'scheme': self.scheme,
            'coupling': self.coupling,
            'blowup_threshold': self.blowup_threshold,
        }


class Trajectory(object):
    """Strided states and diagnostics of one forward run."""

    def __init__(self, grid):
        self.grid = grid
        self.times = []
        self.states = []
        self.steps = []
        self.diagnostic_times = []
        self.diagnostics = []

    def add_state(self, step, state):
        if self.times and state.t <= self.times[-1]:
            raise InputError(name=state.t, message="Trajectory times must increase")
        self.steps.append(step)
        self.times.append(state.t)
        self.states.append(state)

    def add_diagnostics(self, t, snapshot):
        self.diagnostic_times.append(t)
        self.diagnostics.append(snapshot)

    @property
    def final(self):
        return self.states[-1]

    def series(self, name):
        """(times, values) of one diagnostic breakdown entry."""
        times, values = [], []
        for t, snap in zip(self.diagnostic_times, self.diagnostics):
            if name in snap.breakdown:
                times.append(t)
                values.append(snap.breakdown[name])
        return times, values

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return '<Trajectory {0} states>'.format(len(self.states))
