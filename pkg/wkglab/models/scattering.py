import bisect

import numpy as np

from ..lib.errors import ConfigurationError, InputError, ShapeError
from .field import SpectralField
from .state import ProfileState

CACHE_QUANTITIES = ('h', 'Hcal', 'H', 'C', 'D', 'b', 'B')
# h oscillates in t and is only available at nodes
INTERPOLABLE = ('Hcal', 'H', 'C', 'D', 'b', 'B')


class ScatteringData(object):
    """Asymptotic profiles (V^wa_inf, V^kg_inf) with their amplitude."""

    def __init__(self, V_wa, V_kg, eps=0.0, recipe=None):
        if V_wa.grid != V_kg.grid:
            raise ShapeError(name='{0!r} vs {1!r}'.format(V_wa.grid, V_kg.grid))
        self.V_wa = V_wa.retag('wa')
        self.V_kg = V_kg.retag('kg')
        self.eps = float(eps)
        self.recipe = dict(recipe or {})

    @classmethod
    def zeros(cls, grid):
        return cls(SpectralField.zeros(grid, 'wa'),
                   SpectralField.zeros(grid, 'kg'), eps=0.0,
                   recipe={'preset': 'zero'})

    @property
    def grid(self):
        return self.V_wa.grid

    def is_zero(self):
        return not (np.any(self.V_wa.values) or np.any(self.V_kg.values))

    def to_dict(self):
        return {
            'eps': self.eps,
            'recipe': self.recipe,
            'l2_wa': self.V_wa.l2_norm(),
            'l2_kg': self.V_kg.l2_norm(),
        }

    def __repr__(self):
        return '<ScatteringData eps={0!r} {1}>'.format(
            self.eps, self.recipe.get('preset', 'custom'))


class ResonantCache(object):
    """
    Asymptotic quantities at the cache nodes. Each quantity is a list of
    SpectralFields aligned with times. Once built the cache is read-only.
    """

    def __init__(self, grid, times, t_max, quantities=None, tails=None):
        times = [float(t) for t in times]
        if not times or times[0] != 0.0 or times[-1] != float(t_max):
            raise ConfigurationError(name=(times[:1], times[-1:], t_max),
                                     message="Cache nodes must run from 0 to T_max")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigurationError(name=times, message="Cache nodes must increase")
        self.grid = grid
        self.times = times
        self.t_max = float(t_max)
        self.quantities = {}
        for name in CACHE_QUANTITIES:
            series = (quantities or {}).get(name)
            if series is None:
                tag = 'kg' if name in ('C', 'D', 'b', 'B') else 'wa'
                series = [SpectralField.zeros(grid, tag) for _ in times]
            if len(series) != len(times):
                raise ShapeError(name='{0}: {1} vs {2}'.format(
                    name, len(series), len(times)))
            self.quantities[name] = list(series)
        self.tails = dict(tails or {})

    def __repr__(self):
        return '<ResonantCache {0} nodes T_max={1!r}>'.format(
            len(self.times), self.t_max)

    def __len__(self):
        return len(self.times)

    def index(self, t):
        i = bisect.bisect_left(self.times, t)
        if i < len(self.times) and abs(self.times[i] - t) <= 1e-12 * max(1.0, t):
            return i
        return None

    def series(self, name):
        if name not in self.quantities:
            raise InputError(name=name, message="Unknown cache quantity")
        return self.quantities[name]

    def at(self, name, t):
        """Quantity at a cache node."""
        i = self.index(t)
        if i is None:
            raise InputError(name='{0} at t={1!r}'.format(name, t),
                             message="Time is not a cache node")
        return self.series(name)[i]

    def interpolate(self, name, t):
        """Linear interpolation in t between nodes; h is node-only."""
        if name not in INTERPOLABLE:
            i = self.index(t)
            if i is None:
                raise InputError(name='{0} at t={1!r}'.format(name, t),
                                 message="Quantity is only available at cache nodes")
            return self.series(name)[i]
        return interpolate_series(self.times, self.series(name), t)

    def check_grid(self, grid):
        if grid != self.grid:
            raise ConfigurationError(name='{0!r} vs {1!r}'.format(grid, self.grid),
                                     message="Cache was built on another grid")


def interpolate_series(times, fields, t):
    if t < times[0] or t > times[-1]:
        raise InputError(name=t, message="Time outside the cache range")
    i = bisect.bisect_right(times, t) - 1
    if i >= len(times) - 1:
        return fields[-1]
    a, b = times[i], times[i + 1]
    w = (t - a) / (b - a)
    if w == 0.0:
        return fields[i]
    return fields[i] * (1.0 - w) + fields[i + 1] * w


class PerturbationPair(object):
    """G^wa and G^kg sampled at the cache nodes."""

    def __init__(self, times, G_wa, G_kg):
        if not len(times) == len(G_wa) == len(G_kg):
            raise ShapeError(name=(len(times), len(G_wa), len(G_kg)))
        self.times = [float(t) for t in times]
        self.G_wa = [g.retag('wa') for g in G_wa]
        self.G_kg = [g.retag('kg') for g in G_kg]

    @classmethod
    def zeros(cls, grid, times):
        return cls(times,
                   [SpectralField.zeros(grid, 'wa') for _ in times],
                   [SpectralField.zeros(grid, 'kg') for _ in times])

    @property
    def grid(self):
        return self.G_wa[0].grid

    def __len__(self):
        return len(self.times)

    def __repr__(self):
        return '<PerturbationPair {0} nodes sup={1:.3e}>'.format(
            len(self.times), self.sup_l2())

    def at(self, t):
        return ProfileState(interpolate_series(self.times, self.G_wa, t),
                            interpolate_series(self.times, self.G_kg, t), t=t)

    def distance(self, other):
        """sup over nodes of the larger L2 distance of the two components."""
        if self.times != other.times:
            raise ShapeError(name='node mismatch',
                             message="Perturbations live on different time grids")
        return max(max((a - b).l2_norm(), (c - d).l2_norm())
                   for a, b, c, d in zip(self.G_wa, other.G_wa,
                                         self.G_kg, other.G_kg))

    def sup_l2(self):
        return max(max(a.l2_norm(), c.l2_norm())
                   for a, c in zip(self.G_wa, self.G_kg))

    def final_data_defect(self):
        return max(np.max(np.abs(self.G_wa[-1].values)),
                   np.max(np.abs(self.G_kg[-1].values)))


class ContractionLog(object):
    """Per-iteration distances and ratios of the Picard loop."""

    def __init__(self):
        self.entries = []

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return '<ContractionLog {0} iterations>'.format(len(self.entries))

    def add(self, distance, residual_wa=None, residual_kg=None):
        ratio = None
        if self.entries:
            previous = self.entries[-1]['distance']
            if previous > 0:
                ratio = distance / previous
            elif distance == 0:
                ratio = 0.0
        entry = {
            'iteration': len(self.entries) + 1,
            'distance': float(distance),
            'ratio': ratio,
            'residual_wa': residual_wa,
            'residual_kg': residual_kg,
        }
        self.entries.append(entry)
        return entry

    @property
    def ratios(self):
        return [e['ratio'] for e in self.entries if e['ratio'] is not None]

    @property
    def final_distance(self):
        return self.entries[-1]['distance'] if self.entries else None

    def rows(self):
        return [(e['iteration'], e['distance'],
                 '' if e['ratio'] is None else e['ratio'])
                for e in self.entries]


class CacheConfig(object):
    """Horizon, node layout and quadrature steps of the resonant cache."""

    RULES = ('simpson', 'trapezoid')

    def __init__(self, t_max=200.0, per_octave=4, max_step=4.0,
                 extra_times=(10.0, 40.0), slow_dt=0.05, fine_dt=0.05,
                 rule='simpson', density_drop=1e-14, dealiasing=True,
                 chunk=4096):
        if not t_max > 0:
            raise ConfigurationError(name=t_max, message="T_max must be positive")
        if per_octave < 1 or not max_step > 0:
            raise ConfigurationError(name=(per_octave, max_step),
                                     message="Bad cache node spacing")
        if not (slow_dt > 0 and fine_dt > 0):
            raise ConfigurationError(name=(slow_dt, fine_dt),
                                     message="Quadrature steps must be positive")
        if rule not in self.RULES:
            raise ConfigurationError(name=rule, message="Unknown quadrature rule")
        self.t_max = float(t_max)
        self.per_octave = int(per_octave)
        self.max_step = float(max_step)
        self.extra_times = tuple(float(t) for t in extra_times)
        self.slow_dt = float(slow_dt)
        self.fine_dt = float(fine_dt)
        self.rule = rule
        self.density_drop = float(density_drop)
        self.dealiasing = bool(dealiasing)
        self.chunk = int(chunk)

    @classmethod
    def from_config(cls, config, **overrides):
        kwargs = {
            't_max': config.get('T_MAX', 200.0),
            'per_octave': config.get('CACHE_PER_OCTAVE', 4),
            'max_step': config.get('CACHE_MAX_STEP', 4.0),
            'extra_times': config.get('CACHE_EXTRA_TIMES', (10.0, 40.0)),
            'slow_dt': config.get('SLOW_QUADRATURE_DT', 0.05),
            'fine_dt': config.get('QUADRATURE_DT', 0.05),
            'rule': config.get('QUADRATURE_RULE', 'simpson'),
            'density_drop': config.get('DENSITY_DROP_RTOL', 1e-14),
            'dealiasing': config.get('DEALIASING', True),
        }
        kwargs.update(overrides)
        return cls(**kwargs)

    def with_horizon(self, t_max):
        rv = CacheConfig(**self.to_dict())
        rv.t_max = float(t_max)
        return rv

    def to_dict(self):
        return {
            't_max': self.t_max, 'per_octave': self.per_octave,
            'max_step': self.max_step, 'extra_times': list(self.extra_times),
            'slow_dt': self.slow_dt, 'fine_dt': self.fine_dt,
            'rule': self.rule, 'density_drop': self.density_drop,
            'dealiasing': self.dealiasing, 'chunk': self.chunk,
        }


class BuilderConfig(object):
    """Picard loop controls and the fine quadrature of the fixed-point map."""

    def __init__(self, tol=1e-8, max_iter=8, warn_ratio=0.5, fine_dt=0.05,
                 rule='simpson', dealiasing=True, log_dir=None):
        if not tol > 0:
            raise ConfigurationError(name=tol, message="Tolerance must be positive")
        if max_iter < 1:
            raise ConfigurationError(name=max_iter,
                                     message="At least one iteration is required")
        if rule not in CacheConfig.RULES:
            raise ConfigurationError(name=rule, message="Unknown quadrature rule")
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.warn_ratio = float(warn_ratio)
        self.fine_dt = float(fine_dt)
        self.rule = rule
        self.dealiasing = bool(dealiasing)
        self.log_dir = log_dir

    @classmethod
    def from_config(cls, config, **overrides):
        kwargs = {
            'tol': config.get('FIXED_POINT_TOL', 1e-8),
            'max_iter': config.get('FIXED_POINT_MAX_ITER', 8),
            'warn_ratio': config.get('CONTRACTION_WARN_RATIO', 0.5),
            'fine_dt': config.get('QUADRATURE_DT', 0.05),
            'rule': config.get('QUADRATURE_RULE', 'simpson'),
            'dealiasing': config.get('DEALIASING', True),
        }
        kwargs.update(overrides)
        return cls(**kwargs)

    def to_dict(self):
        return {
            'tol': self.tol, 'max_iter': self.max_iter,
            'warn_ratio': self.warn_ratio, 'fine_dt': self.fine_dt,
            'rule': self.rule, 'dealiasing': self.dealiasing,
        }


class ResidualReport(object):
    """Scattering residuals at the cache nodes and their verdicts."""

    def __init__(self, times, r_wa, r_kg, r_kg_uncorrected, eps,
                 trend_start=10.0):
        self.times = [float(t) for t in times]
        self.r_wa = [float(r) for r in r_wa]
        self.r_kg = [float(r) for r in r_kg]
        self.r_kg_uncorrected = [float(r) for r in r_kg_uncorrected]
        self.eps = float(eps)
        self.trend_start = float(trend_start)
        self.decreasing = None
        self.slope = None
        self.envelope_constant = None

    @property
    def terminal(self):
        return {'r_wa': self.r_wa[-1], 'r_kg': self.r_kg[-1],
                'r_kg_uncorrected': self.r_kg_uncorrected[-1]}

    def rows(self):
        return list(zip(self.times, self.r_wa, self.r_kg, self.r_kg_uncorrected))

    def __repr__(self):
        return '<ResidualReport {0} nodes decreasing={1}>'.format(
            len(self.times), self.decreasing)
