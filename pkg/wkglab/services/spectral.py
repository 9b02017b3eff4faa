"""
Transforms, dispersion symbols, propagators and frequency derivatives.

Discrete normalization, used everywhere in the package:

    f_hat = (2 pi)^(-3/2) * dx^3 * FFT(f)
    f     = (2 pi)^(-3/2) * dxi^3 * n^3 * IFFT(f_hat)

With dx * dxi = 2 pi / n this makes Plancherel exact,
sum |f|^2 dx^3 == sum |f_hat|^2 dxi^3, and turns the wraparound lattice
convolution (2 pi)^(-3/2) dxi^3 sum_eta f_hat(xi - eta) g_hat(eta) into
the transform of the pointwise product f * g.
"""
import math

import numpy as np
import scipy.fft

from ..lib.errors import ShapeError
from ..models.field import SpectralField
from ..models.grid import DispersionKind

NORMALIZATION = (2.0 * math.pi)**-1.5


def forward_scale(grid):
    return NORMALIZATION * grid.cell_volume


def inverse_scale(grid):
    return NORMALIZATION * grid.frequency_volume * grid.n**3


def _check_physical(grid, samples):
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ShapeError(name='{0} vs {1}'.format(samples.shape, grid.shape))
    return samples


def forward_array(grid, samples):
    """Forward transform of raw samples, Nyquist rows zeroed."""
    samples = _check_physical(grid, samples)
    values = scipy.fft.fftn(samples, workers=grid.workers) * forward_scale(grid)
    values[grid.nyquist_mask] = 0.0
    return values


def inverse_array(grid, values):
    values = _check_physical(grid, values)
    values = np.where(grid.nyquist_mask, 0.0, values)
    return scipy.fft.ifftn(values, workers=grid.workers) * inverse_scale(grid)


def forward_transform(grid, samples, tag='scalar'):
    return SpectralField(grid, forward_array(grid, samples), tag=tag)


def inverse_transform(field, real=False):
    """
    Physical samples of a field. With real=True the imaginary residue is
    dropped, which is only meaningful for conjugate-symmetric fields.
    """
    out = inverse_array(field.grid, field.values)
    return out.real.copy() if real else out


def dispersion_symbol(kind, xi):
    """Lambda_kind at one or many frequency vectors (last axis has length 3)."""
    norm = np.linalg.norm(np.asarray(xi, dtype=float), axis=-1)
    if kind.family == 'wa':
        value = norm
    else:
        value = np.sqrt(1.0 + norm**2)
    return kind.sign * value


def symbol_on_grid(grid, kind):
    base = grid.xi_norm if kind.family == 'wa' else grid.xi_bracket
    return kind.sign * base


def propagator(grid, kind, t):
    return np.exp(1j * t * symbol_on_grid(grid, kind))


def propagate(field, kind, t):
    """Multiply by exp(i t Lambda_kind(xi))."""
    if t == 0:
        return field.with_values(field.values)
    return field.with_values(field.values * propagator(field.grid, kind, t))


def propagate_family(field, family, t):
    return propagate(field, DispersionKind(family, 1), t)


def xi_derivative(field, axis):
    """
    d/dxi_axis of a field, computed as the transform of (-i x_axis) f(x)
    with the periodic sawtooth coordinate.
    """
    grid = field.grid
    physical = inverse_array(grid, field.values)
    return field.with_values(
        forward_array(grid, -1j * grid.x[axis] * physical))


def dealias_mask(grid):
    return grid.dealias_mask


def dealias(values, grid):
    return np.where(grid.dealias_mask, values, 0.0)


def physical_coordinates(grid):
    """Sawtooth coordinates in FFT order and their periodic radius."""
    return grid.x, grid.x_norm


def reflect(field):
    return field.reflect()


def conjugate_reflect(field):
    return field.conjugate_reflect()


def l2_norm(field):
    return field.l2_norm()


def physical_l2_norm(grid, samples):
    return float(np.sqrt(np.sum(np.abs(samples)**2) * grid.cell_volume))


def sobolev_norm(field, index):
    """H^s norm sqrt(sum <xi>^(2s) |f|^2 dxi^3)."""
    weight = field.grid.xi_bracket**(2.0 * index)
    return float(
        np.sqrt(np.sum(weight * np.abs(field.values)**2) *
                field.grid.frequency_volume))
