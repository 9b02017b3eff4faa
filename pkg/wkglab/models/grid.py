from functools import cached_property
import math

import numpy as np

from ..lib.errors import ConfigurationError

FAMILIES = ('wa', 'kg')
SIGNS = (1, -1)


class FourierGrid(object):
    """
    Periodic cube [-L/2, L/2)^3 with n points per axis and its dual
    frequency lattice (2*pi/L) * {-n/2, ..., n/2 - 1}^3.

    Arrays on the grid, physical or spectral, are stored in FFT-standard
    wraparound order, so index i on an axis stands for i when i < n/2 and
    for i - n otherwise.
    """

    def __init__(self, n_per_axis, box_length, workers=None):
        self.n = int(n_per_axis)
        self.length = float(box_length)
        self.spacing = 2.0 * math.pi / self.length
        self.dx = self.length / self.n
        self.workers = workers

    def __eq__(self, other):
        if not isinstance(other, FourierGrid):
            return NotImplemented
        return self.n == other.n and self.length == other.length

    def __ne__(self, other):
        rv = self.__eq__(other)
        return rv if rv is NotImplemented else not rv

    def __hash__(self):
        return hash((self.n, self.length))

    def __repr__(self):
        return '<FourierGrid n={0} L={1!r}>'.format(self.n, self.length)

    @property
    def shape(self):
        return (self.n, self.n, self.n)

    @property
    def cell_volume(self):
        return self.dx**3

    @property
    def frequency_volume(self):
        return self.spacing**3

    @property
    def axis_max(self):
        """Largest |xi_l| on an axis before the Nyquist row."""
        return (self.n // 2 - 1) * self.spacing

    @cached_property
    def axis_indices(self):
        return np.fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def axis_frequencies(self):
        return self.spacing * self.axis_indices

    @cached_property
    def xi(self):
        """Frequency components, shape (3, n, n, n)."""
        return np.array(
            np.meshgrid(self.axis_frequencies,
                        self.axis_frequencies,
                        self.axis_frequencies,
                        indexing='ij'))

    @cached_property
    def xi_norm(self):
        return np.sqrt(np.sum(self.xi**2, axis=0))

    @cached_property
    def xi_bracket(self):
        return np.sqrt(1.0 + self.xi_norm**2)

    @cached_property
    def x(self):
        """Sawtooth coordinates, shape (3, n, n, n)."""
        axis = self.dx * self.axis_indices
        return np.array(np.meshgrid(axis, axis, axis, indexing='ij'))

    @cached_property
    def x_norm(self):
        """Periodic distance to the origin."""
        return np.sqrt(np.sum(self.x**2, axis=0))

    @cached_property
    def nyquist_mask(self):
        row = self.axis_indices == -(self.n // 2)
        return row[:, None, None] | row[None, :, None] | row[None, None, :]

    @cached_property
    def dealias_mask(self):
        keep = np.abs(self.axis_indices) < self.n / 3.0
        return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]

    def contains(self, xi):
        """True when the frequency vector lies on the lattice."""
        idx = np.asarray(xi, dtype=float) / self.spacing
        on_lattice = np.allclose(idx, np.round(idx), atol=1e-9)
        inside = np.all(np.round(idx) >= -(self.n // 2)) and np.all(
            np.round(idx) < self.n // 2)
        return bool(on_lattice and inside)

    def index_of(self, xi):
        """Array index of a lattice frequency vector."""
        idx = np.round(np.asarray(xi, dtype=float) / self.spacing).astype(int)
        return tuple(int(i) % self.n for i in idx)


class DispersionKind(object):
    """A dispersion family with a sign, i.e. one of Lambda_{wa,+-}, Lambda_{kg,+-}."""

    def __init__(self, family, sign=1):
        if family not in FAMILIES:
            raise ConfigurationError(name=family,
                                     message="Unknown dispersion family")
        if sign not in SIGNS:
            raise ConfigurationError(name=sign, message="Sign must be +1 or -1")
        self.family = family
        self.sign = sign

    def __eq__(self, other):
        if not isinstance(other, DispersionKind):
            return NotImplemented
        return self.family == other.family and self.sign == other.sign

    def __hash__(self):
        return hash((self.family, self.sign))

    def __repr__(self):
        return '<DispersionKind {0}{1}>'.format(self.family,
                                               '+' if self.sign > 0 else '-')

    def flipped(self):
        return DispersionKind(self.family, -self.sign)


WA_PLUS = DispersionKind('wa', 1)
WA_MINUS = DispersionKind('wa', -1)
KG_PLUS = DispersionKind('kg', 1)
KG_MINUS = DispersionKind('kg', -1)


def make_grid(n_per_axis, box_length, workers=None):
    if int(n_per_axis) != n_per_axis or n_per_axis % 2 != 0:
        raise ConfigurationError(name=n_per_axis,
                                 message="Points per axis must be even")
    if n_per_axis < 8:
        raise ConfigurationError(name=n_per_axis,
                                 message="Points per axis must be at least 8")
    if not box_length > 0:
        raise ConfigurationError(name=box_length,
                                 message="Box length must be positive")
    return FourierGrid(n_per_axis, box_length, workers=workers)
