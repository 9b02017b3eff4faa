import os

import numpy as np

from ..lib.errors import InputError
from .grid import make_grid
from .field import SpectralField

MAGIC = b'WKGS'
VERSION = 1

HEADER_DTYPE = np.dtype([
    ('magic', 'S4'),
    ('version', '<u4'),
    ('n', '<u4'),
    ('length', '<f8'),
    ('t', '<f8'),
])
VALUE_DTYPE = np.dtype('<c16')


def write_snapshot(path, field, t):
    """
    Binary layout: magic "WKGS", u32 version, u32 n, f64 L, f64 t, then
    n^3 little-endian complex128 values in FFT-standard index order.
    """
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header['magic'] = MAGIC
    header['version'] = VERSION
    header['n'] = field.grid.n
    header['length'] = field.grid.length
    header['t'] = t

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(field.values, dtype=VALUE_DTYPE).tobytes())
    return path


def read_snapshot(path, tag='scalar', workers=None):
    if not os.path.exists(path):
        raise InputError(name=path, message="Snapshot not found")

    with open(path, 'rb') as f:
        raw = f.read()

    if len(raw) < HEADER_DTYPE.itemsize:
        raise InputError(name=path, message="Snapshot header truncated")
    header = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if header['magic'] != MAGIC:
        raise InputError(name=path, message="Not a snapshot file")
    if int(header['version']) != VERSION:
        raise InputError(name=int(header['version']),
                         message="Unsupported snapshot version")

    n = int(header['n'])
    payload = raw[HEADER_DTYPE.itemsize:]
    if len(payload) != n**3 * VALUE_DTYPE.itemsize:
        raise InputError(name=path, message="Snapshot payload truncated")

    grid = make_grid(n, float(header['length']), workers=workers)
    values = np.frombuffer(payload, dtype=VALUE_DTYPE).reshape(grid.shape)
    return SpectralField(grid, values.copy(), tag=tag), float(header['t'])
