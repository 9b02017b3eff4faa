"""
Data norms Y, time-weighted norms S, T, S', T' and working norms X.

Every weight is evaluated literally. Vector fields act on the profile side
and only orders up to the configured cap are evaluated; the skipped orders
are recorded on the snapshot.
"""
import numpy as np

from ..lib.errors import ConfigurationError, InputError
from ..models.norm import NormSnapshot
from .littlewood_paley import resolvable_window, shell_multiplier
from .profiles import apply_profile_vector_field, enumerate_words
from .spectral import xi_derivative, propagate_family

FAMILIES = ('S1', 'S2', 'T1', 'T2', "S'1", "S'2", "T'1", "T'2")
PRIMED = ("S'1", "S'2", "T'1", "T'2")


def _weighted_l2(field, weight):
    return float(np.sqrt(np.sum(weight * np.abs(field.values)**2) *
                         field.grid.frequency_volume))


def _inverse_half_gradient_sq(grid):
    """|xi|^(-1), zero at the origin."""
    r = grid.xi_norm
    return np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0), 0.0)


def sobolev_term(field, index, wave):
    """||f||_{H^index}, or || |grad|^(-1/2) f ||_{H^index} when wave is set."""
    grid = field.grid
    weight = grid.xi_bracket**(2.0 * index)
    if wave:
        weight = weight * _inverse_half_gradient_sq(grid)
    return _weighted_l2(field, weight)


def _k_plus(k):
    return max(k, 0)


def _k_minus(k):
    return min(k, 0)


def _orders(limit, params):
    cap = min(params.order, limit)
    return list(range(0, max(cap, -1) + 1)), list(range(cap + 1, limit + 1))


def _words(n):
    return [()] if n == 0 else enumerate_words(n)


def _label(word):
    return '.'.join(word) if word else 'id'


def _shell_norms(field, k_window):
    return dict((k, field.with_values(shell_multiplier(field.grid, k) *
                                      field.values).l2_norm())
                for k in k_window)


def norm_Y(field, which, params):
    """
    Y1 (wave data) or Y2 (Klein-Gordon data): a Sobolev supremum over
    n <= N1 + 2 plus a shell-weighted xi-derivative supremum over n <= N1 + 1.
    """
    if which not in ('Y1', 'Y2'):
        raise ConfigurationError(name=which, message="Unknown data norm")
    wave = which == 'Y1'
    family = 'wa' if wave else 'kg'
    k_min, k_max = resolvable_window(field.grid)
    k_window = range(k_min, k_max + 1)

    sob = NormSnapshot(which)
    weighted = NormSnapshot(which)
    orders, skipped = _orders(params.n1 + 2, params)
    for n in orders:
        for word in _words(n):
            f_L = apply_profile_vector_field(field, word, family)
            sob.record('sobolev/n={0}/{1}'.format(n, _label(word)),
                       sobolev_term(f_L, params.N(n - 3), wave))
            if n > params.n1 + 1:
                continue
            for l in range(3):
                shells = _shell_norms(xi_derivative(f_L, l), k_window)
                for k, value in shells.items():
                    low = 2.0**(k / 2.0) if wave else 2.0**_k_plus(k)
                    weighted.record(
                        'weighted/n={0}/{1}/k={2}/l={3}'.format(n, _label(word), k, l + 1),
                        2.0**(params.N(n - 2) * _k_plus(k)) * low * value)

    out = NormSnapshot(which, order_cap=params.order, skipped_orders=skipped,
                       combine='sum')
    out.detail = dict(sob.breakdown)
    out.detail.update(weighted.breakdown)
    out.breakdown['sobolev'] = sob.value
    out.breakdown['weighted'] = weighted.value
    return out


def _time_weight(t, exponent, delta):
    return (1.0 + t * t)**(0.5 * exponent * delta)


def _check_series(series):
    times = [t for t, _ in series]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise InputError(name=times[:5], message="Series times must increase")


def norm_timeweighted(series, family, params, derivative_series=None):
    """
    Literal suprema over the sampled (t, n, word, k, l) of one family.
    series and derivative_series are lists of (t, field); primed families
    read derivative_series.
    """
    if family not in FAMILIES:
        raise ConfigurationError(name=family, message="Unknown norm family")
    primed = family in PRIMED
    if primed:
        if derivative_series is None:
            raise InputError(name=family,
                             message="Primed norms need the time-derivative series")
        series = derivative_series
    _check_series(series)

    index = family[-1]
    wave = index == '1'
    kind = family.replace("'", '')[0]
    profile_family = 'wa' if wave else 'kg'
    delta = params.delta

    snap = NormSnapshot(family, order_cap=params.order)
    limit = params.n1 if kind == 'S' else params.n1 - 1
    orders, skipped = _orders(limit, params)
    snap.skipped_orders = skipped
    for t, field in series:
        grid = field.grid
        k_min, k_max = resolvable_window(grid)
        k_window = range(k_min, k_max + 1)
        prefix = 't={0!r}/'.format(float(t))
        for n in orders:
            for word in _words(n):
                f_L = apply_profile_vector_field(field, word, profile_family)
                label = _label(word)
                if kind == 'S' and not primed:
                    value = sobolev_term(propagate_family(f_L, profile_family, -t),
                                         params.N(n), wave)
                    snap.record('{0}sobolev/n={1}/{2}'.format(prefix, n, label),
                                _time_weight(t, params.H(n), delta) * value)
                elif kind == 'S':
                    weight_t = _time_weight(t, 1 + params.H2(n), delta)
                    for k, value in _shell_norms(f_L, k_window).items():
                        w = 2.0**(params.N2(n) * _k_plus(k))
                        if wave:
                            w *= 2.0**(-_k_minus(k) / 2.0)
                        snap.record('{0}shell/n={1}/{2}/k={3}'.format(prefix, n, label, k),
                                    weight_t * w * value)
                else:
                    for l in range(3):
                        if primed:
                            base = xi_derivative(
                                propagate_family(f_L, profile_family, -t), l)
                            weight_t = _time_weight(t, params.H2(n), delta)
                        else:
                            base = xi_derivative(f_L, l)
                            weight_t = _time_weight(t, params.H(n + 1), delta)
                        for k, value in _shell_norms(base, k_window).items():
                            if primed:
                                w = 2.0**(params.N2(n) * _k_plus(k))
                                if wave:
                                    w *= 2.0**(-_k_minus(k) / 2.0)
                            else:
                                w = 2.0**(params.N(n + 1) * _k_plus(k))
                                w *= 2.0**(k / 2.0) if wave else 2.0**_k_plus(k)
                            snap.record('{0}weighted/n={1}/{2}/k={3}/l={4}'.format(
                                prefix, n, label, k, l + 1), weight_t * w * value)
    return snap


def norm_X(series, derivative_series, which, params):
    """X1 = S1 + T1 + S'1(d_t) + T'1(d_t), and X2 likewise."""
    if which not in ('X1', 'X2'):
        raise ConfigurationError(name=which, message="Unknown working norm")
    index = which[-1]
    out = NormSnapshot(which, order_cap=params.order, combine='sum')
    for family in ('S' + index, 'T' + index, "S'" + index, "T'" + index):
        part = norm_timeweighted(series, family, params, derivative_series)
        out.breakdown[family] = part.value
        out.skipped_orders = sorted(set(out.skipped_orders) | set(part.skipped_orders))
        for key, value in part.breakdown.items():
            out.detail[family + '/' + key] = value
    return out
