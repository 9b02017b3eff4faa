"""
Named recipes for scattering data. Profiles come from real physical
functions, so every preset is conjugate symmetric.
"""
import numpy as np

from ..lib.errors import ConfigurationError
from ..lib.utils import get_logger
from ..models.field import SpectralField
from ..models.scattering import ScatteringData

PRESETS = ('gaussian-kg', 'gaussian-both', 'two-mode')
DEFAULT_WIDTH = 0.4
CENTRE_JITTER = 1.0
WIDTH_JITTER = 0.1


def gaussian_profile(grid, eps, width, centre=(0.0, 0.0, 0.0)):
    """Transform of eps * exp(-width^2 |x - centre|^2 / 2)."""
    shift = sum(grid.xi[i] * centre[i] for i in range(3))
    values = (eps * width**-3 *
              np.exp(-grid.xi_norm**2 / (2.0 * width**2)) *
              np.exp(-1j * shift))
    return values


def two_mode_profile(grid, eps, direction=(1.0, 0.0, 0.0)):
    """Amplitude eps on the lattice pair closest to +-direction at |xi| ~ 1."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    xi0 = np.round(direction / grid.spacing) * grid.spacing
    if not grid.contains(xi0) or not grid.contains(-xi0):
        raise ConfigurationError(name=tuple(xi0),
                                 message="Mode pair is not on the lattice")
    values = np.zeros(grid.shape, dtype=np.complex128)
    values[grid.index_of(xi0)] = eps
    values[grid.index_of(-xi0)] = eps
    return values


def _jitter(seed):
    rng = np.random.default_rng(seed)
    centre = rng.uniform(-CENTRE_JITTER, CENTRE_JITTER, size=3)
    scale = 1.0 + rng.uniform(-WIDTH_JITTER, WIDTH_JITTER)
    return centre, scale


def make_data(grid, preset='gaussian-kg', eps=0.01, seed=None, width=DEFAULT_WIDTH):
    if preset not in PRESETS:
        raise ConfigurationError(name=preset, message="Unknown data preset")
    if eps < 0:
        raise ConfigurationError(name=eps, message="Amplitude must be non-negative")
    if not width > 0:
        raise ConfigurationError(name=width, message="Width must be positive")

    centre, scale = (np.zeros(3), 1.0) if seed is None else _jitter(seed)
    recipe = {'preset': preset, 'eps': float(eps), 'seed': seed,
              'width': float(width * scale),
              'centre': [float(c) for c in centre]}

    if preset == 'two-mode':
        kg = two_mode_profile(grid, eps)
        wa = np.zeros(grid.shape, dtype=np.complex128)
    else:
        kg = gaussian_profile(grid, eps, width * scale, centre)
        if preset == 'gaussian-both':
            wa = gaussian_profile(grid, eps, width * scale, centre)
        else:
            wa = np.zeros(grid.shape, dtype=np.complex128)

    get_logger().info('Scattering data {0} eps={1!r} seed={2!r}'.format(
        preset, eps, seed))
    return ScatteringData(SpectralField(grid, wa, tag='wa'),
                          SpectralField(grid, kg, tag='kg'),
                          eps=eps, recipe=recipe)
