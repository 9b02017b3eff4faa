"""
Backward construction of the solution with prescribed asymptotics.

The perturbation (G_wa, G_kg) solves G = T(G) with

    T_wa(G)(t) = Hcal(T_max) - Hcal(t) - int_t^T_max S_wa(s) ds
    T_kg(G)(t) = (exp(iD(T_max)) - exp(iD(t))) V_kg - B(t) - int_t^T_max S_kg(s) ds

where S_wa and S_kg are the four-sign Duhamel sums of

    K = G_kg + exp(iD) V_kg + B     and     W = G_wa + V_wa + Hcal,

namely S_wa = sum I_wa[K, K] and S_kg = sum I_kg[K, W]. The output has
zero final data by construction.
"""
import os

import numpy as np

from ..lib.errors import NonContractionError, ConfigurationError
from ..lib.utils import get_logger, write_csv, linear_slope, observed_order
from ..models.field import SpectralField
from ..models.scattering import (PerturbationPair, ContractionLog,
                                 ResidualReport, interpolate_series)
from ..models.state import ProfileState
from .asymptotics import sub_grid, integrate, phase_corrected_data
from .bilinear import duhamel_sum
from .solver import solve_to

CONTRACTION_LOG = 'contraction.csv'


class WaveOperatorBuilder(object):
    """Picard iteration of the backward fixed-point map on the cache nodes."""

    def __init__(self, data, cache, config):
        cache.check_grid(data.grid)
        self.data = data
        self.cache = cache
        self.config = config
        self.times = cache.times
        self.grid = data.grid

    def __repr__(self):
        return '<WaveOperatorBuilder {0!r} {1!r}>'.format(self.data, self.cache)

    def _check(self, G):
        if G.times != self.times:
            raise ConfigurationError(name='{0} vs {1} nodes'.format(
                len(G.times), len(self.times)),
                message="Perturbation and cache use different time grids")
        if G.grid != self.grid:
            raise ConfigurationError(name='{0!r} vs {1!r}'.format(G.grid, self.grid),
                                     message="Perturbation and cache use different grids")

    def arguments(self, G, t):
        """(K, W) at time t, slow quantities and G interpolated between nodes."""
        cache = self.cache
        K = (interpolate_series(self.times, G.G_kg, t) +
             phase_corrected_data(self.data, cache.interpolate('D', t)) +
             cache.interpolate('B', t))
        W = (interpolate_series(self.times, G.G_wa, t) + self.data.V_wa +
             cache.interpolate('Hcal', t))
        return K, W

    def bilinear_terms(self, G, t):
        K, W = self.arguments(G, t)
        dealias = self.config.dealiasing
        return (duhamel_sum('wa', K, K, t, dealias=dealias),
                duhamel_sum('kg', K, W, t, dealias=dealias))

    def differential_rhs(self, G, t):
        """
        d/dt of T(G) at t:
        -h + S_wa and -iC exp(iD) V_kg - b - iC B + S_kg.
        h is sampled at nodes only, so t must be a node for the full form.
        """
        S_wa, S_kg = self.bilinear_terms(G, t)
        cache = self.cache
        C = cache.interpolate('C', t).values.real
        D = cache.interpolate('D', t)
        forcing_kg = (-1j * C * phase_corrected_data(self.data, D).values -
                      cache.interpolate('b', t).values -
                      1j * C * cache.interpolate('B', t).values)
        d_wa = S_wa - cache.interpolate('h', t)
        d_kg = S_kg + S_kg.with_values(forcing_kg)
        return ProfileState(d_wa, d_kg, t=t)

    def window_integral(self, G, a, b, steps=16):
        """Simpson integral of (S_wa, S_kg) over [a, b]."""
        s = np.linspace(a, b, steps + 1 + (steps % 2))
        wa, kg = [], []
        for t in s:
            S_wa, S_kg = self.bilinear_terms(G, t)
            wa.append(S_wa.values)
            kg.append(S_kg.values)
        return ProfileState(SpectralField(self.grid, integrate(np.stack(wa), s), 'wa'),
                            SpectralField(self.grid, integrate(np.stack(kg), s), 'kg'),
                            t=0.5 * (a + b))

    def apply_T(self, G):
        self._check(G)
        grid, times, cache = self.grid, self.times, self.cache
        n = len(times)
        J_wa = np.zeros(grid.shape, dtype=np.complex128)
        J_kg = np.zeros(grid.shape, dtype=np.complex128)
        out_wa = [None] * n
        out_kg = [None] * n

        Hcal = cache.series('Hcal')
        D = cache.series('D')
        B = cache.series('B')
        V_kg = self.data.V_kg.values
        end_phase = np.exp(1j * D[-1].values.real)

        def assemble(i):
            wa = Hcal[-1].values - Hcal[i].values - J_wa
            kg = ((end_phase - np.exp(1j * D[i].values.real)) * V_kg -
                  B[i].values - J_kg)
            return SpectralField(grid, wa, 'wa'), SpectralField(grid, kg, 'kg')

        # final data are zero bitwise
        out_wa[-1] = SpectralField.zeros(grid, 'wa')
        out_kg[-1] = SpectralField.zeros(grid, 'kg')
        for i in range(n - 1, 0, -1):
            s = sub_grid(times[i - 1], times[i], self.config.fine_dt)
            wa, kg = [], []
            for t in s:
                S_wa, S_kg = self.bilinear_terms(G, t)
                wa.append(S_wa.values)
                kg.append(S_kg.values)
            J_wa = J_wa + integrate(np.stack(wa), s, self.config.rule)
            J_kg = J_kg + integrate(np.stack(kg), s, self.config.rule)
            out_wa[i - 1], out_kg[i - 1] = assemble(i - 1)
        return PerturbationPair(times, out_wa, out_kg)

    def _write_log(self, log):
        if not self.config.log_dir:
            return None
        path = os.path.join(self.config.log_dir, CONTRACTION_LOG)
        write_csv(path, ('iteration', 'distance', 'ratio'), log.rows())
        return path

    def iterate_to_fixed_point(self, G0=None):
        logger = get_logger()
        config = self.config
        G = G0 if G0 is not None else PerturbationPair.zeros(self.grid, self.times)
        log = ContractionLog()
        logger.info('Picard iteration: tol={0!r} max_iter={1}'.format(
            config.tol, config.max_iter))

        above_one = 0
        for _ in range(config.max_iter):
            new = self.apply_T(G)
            entry = log.add(new.distance(G), new.sup_l2(), None)
            G = new
            ratio = entry['ratio']
            logger.info('iteration {0}: distance={1:.6e} ratio={2}'.format(
                entry['iteration'], entry['distance'],
                'n/a' if ratio is None else '{0:.4f}'.format(ratio)))
            if entry['distance'] <= config.tol:
                self._write_log(log)
                return G, log
            if ratio is not None and ratio > config.warn_ratio:
                logger.warning('Contraction ratio {0:.4f} exceeds {1!r}'.format(
                    ratio, config.warn_ratio))
            above_one = above_one + 1 if ratio is not None and ratio >= 1 else 0
            if above_one >= 2:
                path = self._write_log(log)
                raise NonContractionError(name='ratio {0:.4f}'.format(ratio),
                                          log_path=path)

        path = self._write_log(log)
        raise NonContractionError(
            name='distance {0:.3e} > tol {1!r} after {2} iterations'.format(
                log.final_distance, config.tol, config.max_iter),
            message="Fixed-point iteration did not reach the tolerance",
            log_path=path)

    def reconstruct_solution(self, G):
        """Profiles G + resonant profile at every node."""
        self._check(G)
        cache = self.cache
        out = []
        for i, t in enumerate(self.times):
            wa = G.G_wa[i] + self.data.V_wa + cache.series('Hcal')[i]
            kg = (G.G_kg[i] + phase_corrected_data(self.data, cache.series('D')[i]) +
                  cache.series('B')[i])
            out.append(ProfileState(wa, kg, t=t))
        return out

    def time_derivative_series(self, G):
        """d/dt T(G) at every node, for the primed norm families."""
        return [self.differential_rhs(G, t) for t in self.times]


def first_contraction_ratio(builder):
    """Ratio of the first two Picard steps from G = 0, read off a ContractionLog."""
    log = ContractionLog()
    G = PerturbationPair.zeros(builder.grid, builder.times)
    for _ in range(2):
        new = builder.apply_T(G)
        log.add(new.distance(G), new.sup_l2(), None)
        G = new
    return log.ratios[0]


def verify_scattering(profiles, data, cache, trend_start=10.0):
    r_wa, r_kg, r_unc = [], [], []
    for i, state in enumerate(profiles):
        corrected = phase_corrected_data(data, cache.series('D')[i])
        r_wa.append((state.V_wa - data.V_wa - cache.series('Hcal')[i]).l2_norm())
        r_kg.append((state.V_kg - corrected).l2_norm())
        r_unc.append((state.V_kg - data.V_kg).l2_norm())

    times = [p.t for p in profiles]
    report = ResidualReport(times, r_wa, r_kg, r_unc, data.eps, trend_start)
    window = [i for i, t in enumerate(times) if t >= trend_start]
    if len(window) >= 2:
        xs = [times[i] for i in window]
        ys = [r_kg[i] for i in window]
        report.slope = linear_slope(xs, ys)
        report.decreasing = bool(report.slope < 0 and ys[-1] <= ys[0])
    if data.eps > 0:
        report.envelope_constant = max(max(r_wa), max(r_kg)) / data.eps**1.5
    else:
        report.envelope_constant = 0.0
    get_logger().info('Scattering residuals: r_wa(T)={0:.3e} r_kg(T)={1:.3e} C={2!r}'.format(
        r_wa[-1], r_kg[-1], report.envelope_constant))
    return report


def forward_backward_check(builder, G, t0=10.0, t1=40.0, dt=0.05, coupling=1.0):
    """
    Restart the forward solver from the reconstruction at t0 and compare
    with the reconstruction at t1. Returns the L2 discrepancy over eps.
    """
    profiles = builder.reconstruct_solution(G)
    by_time = dict((p.t, p) for p in profiles)
    if t0 not in by_time or t1 not in by_time:
        raise ConfigurationError(name=(t0, t1),
                                 message="Both times must be cache nodes")
    final = solve_to(by_time[t0], t1, dt, coupling=coupling,
                     dealias=builder.config.dealiasing)
    discrepancy = final.distance(by_time[t1])
    eps = builder.data.eps
    return {
        't0': t0, 't1': t1, 'discrepancy': discrepancy,
        'relative': discrepancy / eps if eps > 0 else discrepancy,
    }


def consistency_check(builder, G, t=None, steps=(0.4, 0.2, 0.1)):
    """
    Window averages of the bilinear part against its value at t for
    shrinking half-widths; returns the half-widths, errors and the order.
    """
    if t is None:
        t = _consistency_time(builder.times, max(steps))
    S_wa, S_kg = builder.bilinear_terms(G, t)
    errors = []
    for h in steps:
        window = builder.window_integral(G, t - h, t + h)
        err = max((window.V_wa * (0.5 / h) - S_wa).l2_norm(),
                  (window.V_kg * (0.5 / h) - S_kg).l2_norm())
        errors.append(err)
    order = observed_order(steps, errors) if all(e > 0 for e in errors) else None
    return {'t': t, 'steps': list(steps), 'errors': errors, 'order': order}


def _consistency_time(times, h):
    """Midpoint of the first node interval wide enough for the widest window."""
    for a, b in zip(times, times[1:]):
        if b - a > 2.2 * h:
            return 0.5 * (a + b)
    raise ConfigurationError(name=h, message="No node interval fits the window")
