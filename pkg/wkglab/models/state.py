import numpy as np

from ..lib.errors import ConfigurationError, ShapeError
from .field import SpectralField

GENERATORS = (
    'Gamma1', 'Gamma2', 'Gamma3',
    'Omega23', 'Omega31', 'Omega12',
    'd0', 'd1', 'd2', 'd3',
)
MAX_ORDER_CAP = 2


class PhysicalState(object):
    """Real fields u, u_t, v, v_t sampled on the grid at time t."""

    def __init__(self, grid, u, u_t, v, v_t, t=0.0):
        for name, arr in (('u', u), ('u_t', u_t), ('v', v), ('v_t', v_t)):
            if np.shape(arr) != grid.shape:
                raise ShapeError(name='{0} {1}'.format(name, np.shape(arr)))
        self.grid = grid
        self.u = np.asarray(u, dtype=float)
        self.u_t = np.asarray(u_t, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.v_t = np.asarray(v_t, dtype=float)
        self.t = float(t)

    @classmethod
    def zeros(cls, grid, t=0.0):
        z = np.zeros(grid.shape)
        return cls(grid, z, z, z, z, t=t)

    def __repr__(self):
        return '<PhysicalState t={0!r} {1!r}>'.format(self.t, self.grid)


class NormalizedState(object):
    """U^wa = u_t - i|D|u and U^kg = v_t - i<D>v, stored spectrally."""

    def __init__(self, U_wa, U_kg, t=0.0):
        if U_wa.grid != U_kg.grid:
            raise ShapeError(name='{0!r} vs {1!r}'.format(U_wa.grid, U_kg.grid))
        self.U_wa = U_wa.retag('wa')
        self.U_kg = U_kg.retag('kg')
        self.t = float(t)

    @property
    def grid(self):
        return self.U_wa.grid

    def __repr__(self):
        return '<NormalizedState t={0!r}>'.format(self.t)


class ProfileState(object):
    """Profiles V = exp(it Lambda) U of both components at time t."""

    def __init__(self, V_wa, V_kg, t=0.0):
        if V_wa.grid != V_kg.grid:
            raise ShapeError(name='{0!r} vs {1!r}'.format(V_wa.grid, V_kg.grid))
        self.V_wa = V_wa.retag('wa')
        self.V_kg = V_kg.retag('kg')
        self.t = float(t)

    @classmethod
    def zeros(cls, grid, t=0.0):
        return cls(SpectralField.zeros(grid, 'wa'),
                   SpectralField.zeros(grid, 'kg'), t=t)

    @property
    def grid(self):
        return self.V_wa.grid

    def __repr__(self):
        return '<ProfileState t={0!r} |V_wa|={1:.3e} |V_kg|={2:.3e}>'.format(
            self.t, self.V_wa.l2_norm(), self.V_kg.l2_norm())

    def at_time(self, t):
        return ProfileState(self.V_wa, self.V_kg, t=t)

    def combine(self, other, scale=1.0):
        """self + scale * other, keeping self's time."""
        return ProfileState(self.V_wa + other.V_wa * scale,
                            self.V_kg + other.V_kg * scale, t=self.t)

    def distance(self, other):
        return max((self.V_wa - other.V_wa).l2_norm(),
                   (self.V_kg - other.V_kg).l2_norm())

    def sup_abs(self):
        return max(self.V_wa.sup_norm(), self.V_kg.sup_norm())

    def is_finite(self):
        return bool(np.all(np.isfinite(self.V_wa.values)) and
                    np.all(np.isfinite(self.V_kg.values)))


class VectorFieldSpec(object):
    """
    A word over the generators. Words act right to left, so
    ('Gamma1', 'd2') means Gamma1 applied to d2 f.
    """

    def __init__(self, word=(), max_order=1):
        word = tuple(word)
        for letter in word:
            if letter not in GENERATORS:
                raise ConfigurationError(name=letter,
                                         message="Unknown vector field")
        if max_order > MAX_ORDER_CAP:
            raise ConfigurationError(name=max_order,
                                     message="Vector field order cap is 2")
        if len(word) > max_order:
            raise ConfigurationError(
                name='{0} > {1}'.format(len(word), max_order),
                message="Vector field order exceeds the configured cap")
        self.word = word
        self.max_order = max_order

    @property
    def order(self):
        return len(self.word)

    @property
    def label(self):
        return '.'.join(self.word) if self.word else 'id'

    def __repr__(self):
        return '<VectorFieldSpec {0}>'.format(self.label)

    def __eq__(self, other):
        return isinstance(other, VectorFieldSpec) and self.word == other.word

    def __hash__(self):
        return hash(self.word)
