import numpy as np

from ..lib.errors import ShapeError, ConfigurationError

TAGS = ('wa', 'kg', 'scalar')


def reflect_array(values):
    """Values at -xi on the lattice: index i -> -i mod n on every axis."""
    out = values
    for axis in range(values.ndim):
        out = np.roll(np.flip(out, axis=axis), 1, axis=axis)
    return out


class SpectralField(object):
    """
    Complex function on the frequency lattice of a FourierGrid.

    Fields are values: arithmetic returns new fields and the Nyquist rows
    are zeroed on construction.
    """

    def __init__(self, grid, values, tag='scalar'):
        if tag not in TAGS:
            raise ConfigurationError(name=tag, message="Unknown field tag")
        values = np.array(values, dtype=np.complex128)
        if values.shape != grid.shape:
            raise ShapeError(name='{0} vs {1}'.format(values.shape, grid.shape))
        values[grid.nyquist_mask] = 0.0
        self.grid = grid
        self.values = values
        self.tag = tag

    @classmethod
    def zeros(cls, grid, tag='scalar'):
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), tag=tag)

    def __repr__(self):
        return '<SpectralField {0} {1!r} l2={2:.3e}>'.format(
            self.tag, self.grid, self.l2_norm())

    def _check(self, other):
        if not isinstance(other, SpectralField):
            raise ShapeError(name=type(other).__name__,
                             message="Expected a SpectralField")
        if other.grid != self.grid:
            raise ShapeError(name='{0!r} vs {1!r}'.format(self.grid, other.grid),
                             message="Fields live on different grids")

    def with_values(self, values):
        return SpectralField(self.grid, values, tag=self.tag)

    def retag(self, tag):
        return SpectralField(self.grid, self.values, tag=tag)

    def __add__(self, other):
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self.with_values(self.values - other.values)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, other):
        if isinstance(other, SpectralField):
            self._check(other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def conj(self):
        return self.with_values(np.conj(self.values))

    def reflect(self):
        return self.with_values(reflect_array(self.values))

    def conjugate_reflect(self):
        """The minus object f^-(xi) = conj(f(-xi))."""
        return self.with_values(np.conj(reflect_array(self.values)))

    def l2_norm(self):
        return float(
            np.sqrt(np.sum(np.abs(self.values)**2) *
                    self.grid.frequency_volume))

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def symmetry_defect(self):
        """Relative size of f(-xi) - conj(f(xi)); zero for real functions."""
        scale = max(self.l2_norm(), np.finfo(float).tiny)
        return (self - self.conjugate_reflect()).l2_norm() / scale

    def parity_defect(self):
        """Relative size of f(-xi) - f(xi); zero for even fields."""
        scale = max(self.l2_norm(), np.finfo(float).tiny)
        return (self - self.reflect()).l2_norm() / scale
