import csv
import io
import json
import logging
import math
import os

import numpy as np
from flask import current_app, has_app_context

from .errors import InputError


def get_logger():
    """
    App logger inside an application context, the package logger otherwise.
    """
    if has_app_context():
        return current_app.logger
    return logging.getLogger('wkglab')


def bracket(x, axis=None):
    """
    Japanese bracket <x> = sqrt(1 + |x|^2). With an axis, x holds vectors
    along that axis.
    """
    if axis is None:
        return np.sqrt(1.0 + np.square(x))
    return np.sqrt(1.0 + np.sum(np.square(x), axis=axis))


def fit_power_law(xs, ys):
    """
    Least-squares fit of ys ~ c * xs^p on log-log axes.
    Returns (p, c). Non-positive samples are dropped.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    if np.count_nonzero(keep) < 2:
        raise InputError(name=int(np.count_nonzero(keep)),
                         message="Need at least two positive samples to fit")
    p, logc = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    return float(p), float(math.exp(logc))


def observed_order(steps, errors):
    """Convergence order from errors at successively refined steps."""
    p, _ = fit_power_law(steps, errors)
    return p


def linear_slope(xs, ys):
    slope, _ = np.polyfit(np.asarray(xs, dtype=float),
                          np.asarray(ys, dtype=float), 1)
    return float(slope)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return value
    return obj


def pretty_json(data):
    """Deterministic JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(_plain(data), sort_keys=True, indent=2) + '\n'


def write_json(path, data):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='\n') as f:
        f.write(pretty_json(data))
    return path


def read_json(path):
    if not os.path.exists(path):
        raise InputError(name=path, message="File not found")
    with open(path, 'r') as f:
        return json.load(f)


def format_cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer, )):
        return str(int(value))
    return str(value)


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', newline='') as f:
        f.write(csv_text(header, rows))
    return path


def read_csv(path):
    if not os.path.exists(path):
        raise InputError(name=path, message="File not found")
    with open(path, 'r', newline='') as f:
        return list(csv.reader(f))
