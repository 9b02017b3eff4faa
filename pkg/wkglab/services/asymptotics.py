"""
Resonant asymptotics of the scattering data.

Low-frequency bulk of the wave component

    h(t, xi)    = (2 pi)^(-3/2) phi_{<=0}(xi <t>^(7/8))
                  * int exp(i t (|xi| - xi.eta/<eta>)) |V_kg(eta)|^2 d eta
    Hcal(t, xi) = int_0^t h(s, xi) ds
    H(t, xi)    = phi_{<=0}(xi <t>^(7/8)) (V_wa(xi) + Hcal(t, xi))

phase correction of the Klein-Gordon component

    C(t, xi) = 1/2 (2 pi)^(-3/2) |xi|^2/<xi>
               * Im int exp(i t (xi.eta/<xi> - |eta|)) H(t, eta)/|eta| d eta
    D(t, xi) = int_0^t C(s, xi) ds

and the non-resonant high-low correction b, the (-, +-) Klein-Gordon
interaction of exp(iD) V_kg with H, together with

    B(t) = -exp(i D(t)) int_t^T_max exp(-i D(s)) b(s) ds.

Every eta-integral is a lattice sum with weight dxi^3. The improper
integrals are truncated at T_max.
"""
import math
import os

import numpy as np
import scipy.integrate

from ..lib.errors import InputError
from ..lib.schema import CacheManifestSchema
from ..lib.utils import get_logger, write_json, read_json, bracket
from ..models.field import SpectralField
from ..models.grid import make_grid
from ..models.scattering import ResonantCache, CACHE_QUANTITIES
from ..models.snapshot import write_snapshot, read_snapshot
from ..models.state import ProfileState
from .bilinear import eval_bilinear, BilinearJob
from .littlewood_paley import phi_leq
from .spectral import NORMALIZATION

CUTOFF_EXPONENT = 7.0 / 8.0
MANIFEST = 'manifest.json'


def cache_times(t_max, per_octave=4, max_step=4.0, extra_times=(10.0, 40.0)):
    """
    Nodes {0} u {2^(i/per_octave)} u extra_times u {T_max}, with every gap
    wider than max_step split evenly.
    """
    nodes = {0.0, float(t_max)}
    i = 0
    while 2.0**(i / float(per_octave)) < t_max:
        nodes.add(2.0**(i / float(per_octave)))
        i += 1
    nodes.update(float(t) for t in extra_times if 0 < t < t_max)
    nodes = sorted(nodes)

    out = [nodes[0]]
    for a, b in zip(nodes, nodes[1:]):
        pieces = int(math.ceil((b - a) / max_step - 1e-12))
        for p in range(1, pieces):
            out.append(a + (b - a) * p / pieces)
        out.append(b)
    return out


def sub_grid(a, b, max_dt):
    """Even number of equal sub-steps of [a, b], each at most max_dt."""
    steps = max(2, int(math.ceil((b - a) / max_dt - 1e-12)))
    if steps % 2:
        steps += 1
    return np.linspace(a, b, steps + 1)


def integrate(samples, times, rule='simpson'):
    """Integral over the sampled times of stacked arrays (time on axis 0)."""
    if rule == 'trapezoid':
        return scipy.integrate.trapezoid(samples, x=times, axis=0)
    return scipy.integrate.simpson(samples, x=times, axis=0)


def cumulative(samples, times, rule='simpson'):
    if rule == 'trapezoid':
        return scipy.integrate.cumulative_trapezoid(samples, x=times, axis=0,
                                                    initial=0)
    return scipy.integrate.cumulative_simpson(samples, x=times, axis=0,
                                              initial=0)


def low_cutoff(grid, t, radius=None):
    """phi_{<=0}(xi <t>^(7/8)) on the lattice."""
    r = grid.xi_norm if radius is None else radius
    return phi_leq(r * (1.0 + t * t)**(CUTOFF_EXPONENT / 2.0), 0)


def support_radius(grid, t):
    """Largest axis index that can meet the cutoff support |xi| < 2<t>^(-7/8)."""
    r = 2.0 * (1.0 + t * t)**(-CUTOFF_EXPONENT / 2.0) / grid.spacing
    return min(int(math.floor(r)), grid.n // 2 - 1)


def _box(grid, t):
    """Axis indices of the support box and their positions in FFT order."""
    r = support_radius(grid, t)
    idx = np.arange(-r, r + 1)
    return idx, idx % grid.n


def _scatter_box(grid, box, positions, tag):
    values = np.zeros(grid.shape, dtype=np.complex128)
    values[np.ix_(positions, positions, positions)] = box
    return SpectralField(grid, values, tag=tag)


def _retained(grid, density, drop):
    """Lattice points whose weight exceeds drop * max, as (points, weights)."""
    flat = density.ravel()
    peak = np.max(np.abs(flat)) if flat.size else 0.0
    if peak == 0:
        return np.zeros((0, 3)), np.zeros(0)
    keep = np.abs(flat) > drop * peak
    points = np.stack([grid.xi[i].ravel()[keep] for i in range(3)], axis=-1)
    return points, flat[keep]


def compute_h_inf(data, t, density_drop=1e-14):
    grid = data.grid
    points, rho = _retained(grid, np.abs(data.V_kg.values)**2, density_drop)
    if rho.size == 0:
        return SpectralField.zeros(grid, 'wa')

    idx, positions = _box(grid, t)
    w = points / bracket(points, axis=-1)[:, None]
    # exp(-i t xi.w) factors per axis over the lattice indices of xi
    E = [np.exp(-1j * t * grid.spacing * np.outer(idx, w[:, l])) for l in range(3)]
    box = np.empty((idx.size,) * 3, dtype=np.complex128)
    for a in range(idx.size):
        box[a] = (E[1] * (rho * E[0][a])) @ E[2].T

    h = _scatter_box(grid, box, positions, 'wa')
    weight = (NORMALIZATION * grid.frequency_volume *
              np.exp(1j * t * grid.xi_norm) * low_cutoff(grid, t))
    return h.with_values(weight * h.values)


def assemble_H(data, Hcal, t):
    grid = data.grid
    return SpectralField(grid, low_cutoff(grid, t) * (data.V_wa.values + Hcal.values),
                         tag='wa')


def compute_C_inf(H, t, chunk=4096):
    """C(t) from H(t); real by construction, zero at xi = 0."""
    grid = H.grid
    idx, positions = _box(grid, t)
    g = H.values[np.ix_(positions, positions, positions)]
    r = grid.xi_norm[np.ix_(positions, positions, positions)]
    with np.errstate(divide='ignore', invalid='ignore'):
        g = np.where(r > 0, np.exp(-1j * t * r) * g / np.where(r > 0, r, 1.0), 0.0)
    if not np.any(g):
        return SpectralField.zeros(grid, 'kg')

    m = idx.size
    u = [(grid.xi[l] / grid.xi_bracket).ravel() for l in range(3)]
    g2 = g.reshape(m * m, m)
    total = np.empty(grid.n**3, dtype=np.complex128)
    for start in range(0, grid.n**3, chunk):
        stop = min(start + chunk, grid.n**3)
        E = [np.exp(1j * t * grid.spacing * np.outer(u[l][start:stop], idx))
             for l in range(3)]
        pair = (E[0][:, :, None] * E[1][:, None, :]).reshape(stop - start, m * m)
        total[start:stop] = np.sum((pair @ g2) * E[2], axis=1)

    prefactor = 0.5 * NORMALIZATION * grid.frequency_volume * \
        grid.xi_norm**2 / grid.xi_bracket
    return SpectralField(grid, prefactor * total.reshape(grid.shape).imag, tag='kg')


def accumulate_wave_terms(data, times, slow_dt=0.05, rule='simpson',
                          density_drop=1e-14, chunk=4096):
    """
    Slow quantities at the nodes: h, Hcal, H, C and D, accumulated over a
    slow sub-grid of every node interval.
    """
    grid = data.grid
    logger = get_logger()
    out = {name: [] for name in ('h', 'Hcal', 'H', 'C', 'D')}

    Hcal = np.zeros(grid.shape, dtype=np.complex128)
    D = np.zeros(grid.shape)
    h0 = compute_h_inf(data, times[0], density_drop)
    H0 = assemble_H(data, SpectralField.zeros(grid, 'wa'), times[0])
    C0 = compute_C_inf(H0, times[0], chunk)
    for name, value in (('h', h0), ('Hcal', SpectralField.zeros(grid, 'wa')),
                        ('H', H0), ('C', C0), ('D', SpectralField.zeros(grid, 'kg'))):
        out[name].append(value)

    for a, b in zip(times, times[1:]):
        s = sub_grid(a, b, slow_dt)
        hs = np.stack([out['h'][-1].values] +
                      [compute_h_inf(data, t, density_drop).values for t in s[1:]])
        Hcal_s = Hcal + cumulative(hs, s, rule)
        Hs = [assemble_H(data, SpectralField(grid, Hcal_s[j], 'wa'), t)
              for j, t in enumerate(s)]
        Cs = np.stack([out['C'][-1].values.real] +
                      [compute_C_inf(Hs[j], t, chunk).values.real
                       for j, t in enumerate(s) if j > 0])
        # node H must be the one C was evaluated on
        Hcal = Hcal_s[-1]
        D = D + integrate(Cs, s, rule)

        out['h'].append(SpectralField(grid, hs[-1], 'wa'))
        out['Hcal'].append(SpectralField(grid, Hcal, 'wa'))
        out['H'].append(assemble_H(data, out['Hcal'][-1], b))
        out['C'].append(SpectralField(grid, Cs[-1], 'kg'))
        out['D'].append(SpectralField(grid, D, 'kg'))
        logger.debug('Slow quantities to t={0!r} ({1} sub-steps)'.format(b, len(s) - 1))
    return out


def _interpolate_node_values(times, series, t):
    i = int(np.searchsorted(times, t, side='right')) - 1
    i = min(max(i, 0), len(times) - 2)
    w = (t - times[i]) / (times[i + 1] - times[i])
    return (1.0 - w) * series[i].values + w * series[i + 1].values


def phase_corrected_data(data, D):
    """exp(i D) V_kg."""
    return data.V_kg.with_values(np.exp(1j * D.values.real) * data.V_kg.values)


def compute_b_inf(data, D, H, t, dealias=True):
    """
    Sum over iota2 of the (-, iota2) Klein-Gordon interaction of exp(iD) V_kg
    with H^iota2. The minus object is taken of the whole product.
    """
    grid = data.grid
    if not np.any(H.values[grid.xi_norm > 0]):
        return SpectralField.zeros(grid, 'kg')
    F = phase_corrected_data(data, D).conjugate_reflect()
    total = SpectralField.zeros(grid, 'kg')
    for iota2, G in ((1, H), (-1, H.conjugate_reflect())):
        total = total + eval_bilinear(BilinearJob('kg', -1, iota2, F, G, t),
                                      dealias=dealias)
    return total


def compute_nonresonant_terms(data, slow, times, fine_dt=0.05, rule='simpson',
                              dealias=True):
    """
    (b, B) at the nodes. B is built backward from B(T_max) = 0 on a fine
    sub-grid with D and Hcal interpolated between nodes.
    """
    grid = data.grid
    b_nodes = [None] * len(times)
    A = np.zeros(grid.shape, dtype=np.complex128)
    A_nodes = [None] * len(times)
    A_nodes[-1] = A.copy()

    def b_at(t):
        D = SpectralField(grid, _interpolate_node_values(times, slow['D'], t), 'kg')
        Hcal = SpectralField(grid, _interpolate_node_values(times, slow['Hcal'], t), 'wa')
        return D, compute_b_inf(data, D, assemble_H(data, Hcal, t), t, dealias)

    for i in range(len(times) - 1, 0, -1):
        a, b = times[i - 1], times[i]
        s = sub_grid(a, b, fine_dt)
        samples = []
        for j, t in enumerate(s):
            D, bt = b_at(t)
            if j == len(s) - 1 and b_nodes[i] is None:
                b_nodes[i] = bt
            if j == 0:
                b_nodes[i - 1] = bt
            samples.append(np.exp(-1j * D.values.real) * bt.values)
        A = A + integrate(np.stack(samples), s, rule)
        A_nodes[i - 1] = A.copy()

    B_nodes = [SpectralField(grid, -np.exp(1j * slow['D'][i].values.real) * A_nodes[i], 'kg')
               for i in range(len(times))]
    return b_nodes, B_nodes


def tail_estimates(cache):
    """Logged bounds on what the truncation at T_max leaves out."""
    T = cache.t_max
    b_tail = cache.series('b')[-1].l2_norm() * T
    C_last = cache.series('C')[-1]
    d_tail = float(np.max(np.abs(C_last.values))) * T * math.log(max(T, math.e))
    tails = {'B_tail': b_tail, 'D_tail': d_tail}
    get_logger().warning(
        'Truncation at T_max={0!r}: B tail <= {1:.3e}, D tail <= {2:.3e}'.format(
            T, b_tail, d_tail))
    return tails


def build_cache(data, config):
    """Populate every asymptotic quantity on the cache nodes."""
    times = cache_times(config.t_max, config.per_octave, config.max_step,
                        config.extra_times)
    logger = get_logger()
    logger.info('Building resonant cache: {0} nodes up to T_max={1!r}'.format(
        len(times), config.t_max))
    if data.is_zero():
        cache = ResonantCache(data.grid, times, config.t_max)
        cache.tails = {'B_tail': 0.0, 'D_tail': 0.0}
        return cache

    slow = accumulate_wave_terms(data, times, config.slow_dt, config.rule,
                                 config.density_drop, config.chunk)
    b_nodes, B_nodes = compute_nonresonant_terms(data, slow, times, config.fine_dt,
                                                 config.rule, config.dealiasing)
    quantities = dict(slow)
    quantities['b'] = b_nodes
    quantities['B'] = B_nodes
    cache = ResonantCache(data.grid, times, config.t_max, quantities)
    cache.tails = tail_estimates(cache)
    return cache


def compute_phase_correction(cache, t):
    """(C, D) at t, D linearly interpolated between nodes."""
    return cache.interpolate('C', t), cache.interpolate('D', t)


def resonant_profile(data, cache, t, include_B=True):
    """(V_wa + Hcal(t), exp(i D(t)) V_kg + B(t))."""
    cache.check_grid(data.grid)
    wa = data.V_wa + cache.interpolate('Hcal', t)
    kg = phase_corrected_data(data, cache.interpolate('D', t))
    if include_B:
        kg = kg + cache.interpolate('B', t)
    return ProfileState(wa, kg, t=t)


def leading_kg_interaction(data, cache, t, chunk=2048):
    """
    Direct sum of the low-frequency (+, +-) Klein-Gordon interaction with
    linearized phase xi.eta/<xi> - iota2 |eta| and symbol
    iota2 |xi|^2/(<xi> |eta|), acting on exp(i D) V_kg.
    """
    grid = data.grid
    H = cache.at('H', t)
    D = cache.at('D', t)
    K0 = phase_corrected_data(data, D).values
    mask = (grid.xi_norm > 0) & (low_cutoff(grid, t) > 0)
    eta = np.stack([grid.xi[i][mask] for i in range(3)], axis=-1)
    r = grid.xi_norm[mask]
    H_plus = H.values[mask]
    H_minus = H.conjugate_reflect().values[mask]

    u = np.stack([(grid.xi[i] / grid.xi_bracket).ravel() for i in range(3)], axis=-1)
    total = np.zeros(grid.n**3, dtype=np.complex128)
    if eta.size:
        for start in range(0, grid.n**3, chunk):
            dot = u[start:start + chunk] @ eta.T
            for iota2, Hs in ((1, H_plus), (-1, H_minus)):
                phase = np.exp(1j * t * (dot - iota2 * r))
                total[start:start + chunk] += iota2 * (phase @ (Hs / r))
    prefactor = 0.25 * NORMALIZATION * grid.frequency_volume * \
        grid.xi_norm**2 / grid.xi_bracket
    return SpectralField(grid, prefactor * K0 * total.reshape(grid.shape), tag='kg')


def _snapshot_name(name, i):
    return '{0}_{1:04d}.wkgs'.format(name, i)


def export_cache(cache, directory):
    os.makedirs(directory, exist_ok=True)
    for name in CACHE_QUANTITIES:
        for i, (t, field) in enumerate(zip(cache.times, cache.series(name))):
            write_snapshot(os.path.join(directory, _snapshot_name(name, i)), field, t)
    manifest = CacheManifestSchema().dump(cache)
    write_json(os.path.join(directory, MANIFEST), manifest)
    get_logger().info('Cache exported to {0}'.format(directory))
    return directory


def load_cache(directory, workers=None):
    manifest = read_json(os.path.join(directory, MANIFEST))
    grid = make_grid(manifest['grid']['n'], manifest['grid']['length'], workers)
    quantities = {}
    for name in CACHE_QUANTITIES:
        tag = 'kg' if name in ('C', 'D', 'b', 'B') else 'wa'
        series = []
        for i, t in enumerate(manifest['times']):
            field, stamp = read_snapshot(
                os.path.join(directory, _snapshot_name(name, i)), tag=tag,
                workers=workers)
            if field.grid != grid or stamp != t:
                raise InputError(name=_snapshot_name(name, i),
                                 message="Snapshot does not match the cache manifest")
            series.append(field)
        quantities[name] = series
    return ResonantCache(grid, manifest['times'], manifest['t_max'], quantities,
                         tails=manifest.get('tails'))
