import math

import numpy as np
import pytest

from wkglab import create_app
from wkglab.models.field import SpectralField
from wkglab.models.grid import make_grid
from wkglab.models.state import PhysicalState
from wkglab.services.littlewood_paley import random_field
from wkglab.services.spectral import inverse_array


@pytest.fixture(scope="session")
def app():
    app = create_app('../configs/test.py')
    yield app


@pytest.fixture
def runner(app):
    app.config['TESTING'] = True
    runner = app.test_cli_runner()
    yield runner


@pytest.fixture
def app_context(app):
    with app.app_context():
        yield app


@pytest.fixture
def grid():
    return make_grid(8, 2 * math.pi)


@pytest.fixture
def small_grid():
    """The grid of configs/test.py."""
    return make_grid(8, 4 * math.pi)


def real_field(grid, seed, tag='scalar'):
    """Conjugate-symmetric random field, i.e. the transform of a real function."""
    f = random_field(grid, seed, tag=tag)
    return (f + f.conjugate_reflect()) * 0.5


def real_state(grid, seed, t=0.0):
    """Band-limited real physical state with mean-free u."""
    fields = []
    for i in range(4):
        f = real_field(grid, 4 * seed + i)
        values = f.values.copy()
        if i == 0:
            values[0, 0, 0] = 0.0
        fields.append(inverse_array(grid, values).real)
    return PhysicalState(grid, *fields, t=t)


def single_mode_field(grid, xi0, amplitude=1.0, tag='scalar'):
    values = np.zeros(grid.shape, dtype=np.complex128)
    values[grid.index_of(xi0)] = amplitude
    return SpectralField(grid, values, tag=tag)
