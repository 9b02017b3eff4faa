"""
Property suites. Each check returns a CheckResult carrying what it
measured; run_suites collects them section by section.
"""
import math

import numpy as np

from ..lib.utils import get_logger, fit_power_law, observed_order, csv_text
from ..models.check import CheckResult, FAIL
from ..models.grid import make_grid
from ..models.norm import NormParams
from ..models.scattering import CacheConfig, BuilderConfig
from ..models.state import PhysicalState, ProfileState, GENERATORS
from ..models.trajectory import SolverConfig
from . import littlewood_paley as lp
from .asymptotics import (build_cache, leading_kg_interaction, phase_corrected_data,
                          compute_phase_correction, cache_times, accumulate_wave_terms)
from .bilinear import (BilinearJob, eval_bilinear, eval_bilinear_oracle,
                       duhamel_sum, ORACLE_MAX_N)
from .constructor import (WaveOperatorBuilder, verify_scattering, first_contraction_ratio,
                          forward_backward_check, consistency_check)
from .data import make_data
from .norms import norm_Y
from .phase import (CASES, check_resonance_table, fit_taylor_remainder,
                    check_phase_lower_bound, check_est_phi, stationary_phase_probe,
                    check_phase_symmetries)
from .profiles import (physical_to_profile, profile_to_physical, evolve_linear,
                       laplacian, commutation_defect)
from .solver import solve_forward, solve_to

SECTIONS = ('lp', 'phase', 'probe', 'oracle', 'linear', 'decay', 'stepper',
            'asymptotics', 'construction')


def _cfg(config, name, default):
    return config.get(name, default)


def _grid(config):
    return make_grid(_cfg(config, 'GRID_N', 32), _cfg(config, 'GRID_L', 16 * math.pi),
                     _cfg(config, 'THREADS', None))


def gaussian_state(grid, width=1.0, wave=True, kg=True):
    """u_t and v given by exp(-|x|^2 / (2 width^2)), everything else zero."""
    bump = np.exp(-grid.x_norm**2 / (2.0 * width**2))
    zero = np.zeros(grid.shape)
    return PhysicalState(grid, zero, bump if wave else zero,
                         bump if kg else zero, zero, t=0.0)


def stretched_gaussian_state(grid, width=None, stretch=(1.0, 0.9, 0.8)):
    """
    Even data built on g = exp(-sum x_i^2 / (2 stretch_i width^2)):
    u = g, u_t = Lap g, v = g / 2, v_t = g. u_t is mean-free and no
    generator annihilates g.

    The default width puts the boundary tail and the Nyquist tail of g at
    the same size, exp(-pi n / 4).
    """
    if width is None:
        width = grid.length / math.sqrt(2.0 * math.pi * grid.n)
    g = np.exp(-sum(grid.x[i]**2 / (2.0 * stretch[i] * width**2) for i in range(3)))
    return PhysicalState(grid, g, laplacian(grid, g), 0.5 * g, g, t=0.0)


# Littlewood-Paley

def lp_suite(config):
    grid = _grid(config)
    seeds = tuple(range(_cfg(config, 'VERIFY_LP_SEEDS', 3)))
    k_min, k_max = lp.resolvable_window(grid)
    k2 = min(k_max, k_min + 3)
    return [
        lp.check_partition_identities(grid, seed=0),
        lp.check_q_vs_scriptq(grid, seeds=seeds),
        lp.check_bony_support(grid, k_min, k2),
        lp.check_ak_bk(grid, seeds=seeds),
    ]


# Phases

def phase_margins(config):
    samples = _cfg(config, 'VERIFY_PHASE_SAMPLES', 1000000)
    balls = _cfg(config, 'VERIFY_PHASE_BALLS', (1, 2, 4))
    seed = _cfg(config, 'VERIFY_SEED', 0)
    return [check_phase_lower_bound(kind, i1, i2, b, samples, seed)
            for kind, i1, i2 in CASES for b in balls]


def margin_csv(margins):
    return csv_text(('case', 'b', 'samples', 'min_ratio', 'argmin'),
                    [(m['case'], m['b'], m['samples'], m['min_ratio'], m['argmin'])
                     for m in margins])


def phase_suite(config):
    margins = phase_margins(config)
    worst = min(m['min_ratio'] for m in margins)
    rv = [CheckResult.judge('phase.lower_bound', all(m['passed'] for m in margins),
                            measured={'min_ratio': worst, 'cases': len(margins),
                                      'margins': margins},
                            threshold=1.0)]

    seed = _cfg(config, 'VERIFY_SEED', 0)
    samples = _cfg(config, 'VERIFY_PHASE_SAMPLES', 1000000)
    rv.append(check_resonance_table(min(samples, 100000), seed))
    rv.append(check_phase_symmetries(min(samples, 100000), seed))
    rv.append(check_est_phi(samples // 10, seed))

    remainders = dict(('{0}{1}'.format(kind, '+' if iota > 0 else '-'),
                       fit_taylor_remainder(kind, iota, min(samples, 100000), seed))
                      for kind in ('wa-bulk', 'kg-highlow') for iota in (1, -1))
    ceiling = _cfg(config, 'VERIFY_TAYLOR_CEILING', 10.0)
    rv.append(CheckResult.judge('phase.taylor_remainder',
                                max(remainders.values()) <= ceiling,
                                measured=remainders, threshold=ceiling))
    return rv


def probe_suite(config):
    gauss = stationary_phase_probe('quadratic-gaussian', (4.0, 8.0, 16.0, 32.0))
    bump = stationary_phase_probe('linear-bump', (8.0, 16.0, 32.0, 64.0))
    return [
        CheckResult.judge('probe.quadratic', abs(gauss['exponent'] - 1.5) <= 0.05,
                          measured={'exponent': gauss['exponent']}, threshold='1.5 +- 0.05'),
        CheckResult.judge('probe.nonstationary', bump['exponent'] >= 3.0,
                          measured={'exponent': bump['exponent']}, threshold='>= 3'),
    ]


# Pseudo-products

def oracle_suite(config, force=False):
    n = _cfg(config, 'GRID_N', 32)
    if n > ORACLE_MAX_N and not force:
        return [CheckResult.skipped('oracle.equivalence',
                                    'grid {0}^3 exceeds {1}^3'.format(n, ORACLE_MAX_N))]
    grid = make_grid(8, _cfg(config, 'VERIFY_ORACLE_L', 2 * math.pi))
    seeds = _cfg(config, 'VERIFY_ORACLE_SEEDS', 20)
    t = 0.7
    worst = 0.0
    for kind, i1, i2 in CASES:
        for seed in range(seeds):
            F = lp.random_field(grid, 2 * seed)
            G = lp.random_field(grid, 2 * seed + 1)
            job = BilinearJob(kind, i1, i2, F, G, t)
            slow = eval_bilinear_oracle(job)
            fast = eval_bilinear(job, dealias=False)
            worst = max(worst, (fast - slow).l2_norm() / max(slow.l2_norm(), 1e-300))

    fused = 0.0
    for kind in ('wa', 'kg'):
        F = lp.random_field(grid, 100)
        G = lp.random_field(grid, 101)
        total = duhamel_sum(kind, F, G, t, dealias=False)
        pieces = None
        for _, i1, i2 in [c for c in CASES if c[0] == kind]:
            Fi = F if i1 > 0 else F.conjugate_reflect()
            Gi = G if i2 > 0 else G.conjugate_reflect()
            part = eval_bilinear(BilinearJob(kind, i1, i2, Fi, Gi, t), dealias=False)
            pieces = part if pieces is None else pieces + part
        fused = max(fused, (total - pieces).l2_norm() / max(pieces.l2_norm(), 1e-300))

    return [
        CheckResult.judge('oracle.equivalence', worst <= 1e-12,
                          measured={'max_rel_error': worst}, threshold=1e-12),
        CheckResult.judge('oracle.fused_sum', fused <= 1e-12,
                          measured={'max_rel_error': fused}, threshold=1e-12),
    ]


# Linear flow

def linear_suite(config):
    grid = _grid(config)
    state = gaussian_state(grid, width=_cfg(config, 'VERIFY_LINEAR_WIDTH', 2.0))
    V0 = physical_to_profile(state)
    scale = max(V0.V_wa.l2_norm(), V0.V_kg.l2_norm())
    worst = 0.0
    for t in np.linspace(0.0, 10.0, 11):
        Vt = physical_to_profile(evolve_linear(state, t))
        worst = max(worst, Vt.distance(V0) / scale)
    return [CheckResult.judge('linear.profile_constancy', worst <= 1e-10,
                              measured={'max_rel_drift': worst}, threshold=1e-10),
            commutation_check(config)]


def commutation_defects(grid, times=(1.0, 2.5, 5.0)):
    state = stretched_gaussian_state(grid)
    return dict((letter, max(commutation_defect(state, (letter, ), t) for t in times))
                for letter in GENERATORS)


def commutation_check(config):
    """Every generator against the free flow, on a box wide enough for t <= 5."""
    grid = make_grid(_cfg(config, 'VERIFY_COMMUTATION_N', 48),
                     _cfg(config, 'VERIFY_COMMUTATION_L', 24 * math.pi),
                     _cfg(config, 'THREADS', None))
    defects = commutation_defects(grid)
    worst = max(defects.values())
    return CheckResult.judge('linear.commutation', worst <= 1e-8,
                             measured={'max_rel_defect': worst, 'generators': defects},
                             threshold=1e-8)


def decay_exponents(config):
    """Fitted sup-norm decay exponents of free evolution on the decay box."""
    grid = make_grid(_cfg(config, 'VERIFY_DECAY_N', 160),
                     _cfg(config, 'VERIFY_DECAY_L', 110.0),
                     _cfg(config, 'THREADS', None))
    t_start = _cfg(config, 'VERIFY_DECAY_T0', 5.0)
    t_end = _cfg(config, 'VERIFY_DECAY_T1', 50.0)
    init = physical_to_profile(gaussian_state(grid, width=1.0))
    solver = SolverConfig(dt=0.1, t_end=t_end, snapshot_stride=int(round(t_start / 0.1)),
                          coupling=0.0)
    traj = solve_forward(init, solver, record_diagnostics=False)
    times, sup_u, sup_v = [], [], []
    for t, state in zip(traj.times, traj.states):
        if t < t_start - 1e-9:
            continue
        physical = profile_to_physical(state)
        times.append(t)
        sup_u.append(float(np.max(np.abs(physical.u))))
        sup_v.append(float(np.max(np.abs(physical.v))))
    return {
        'times': times, 'sup_u': sup_u, 'sup_v': sup_v,
        'wave': fit_power_law(times, sup_u)[0],
        'kg': fit_power_law(times, sup_v)[0],
    }


def decay_suite(config):
    fit = decay_exponents(config)
    return [
        CheckResult.judge('decay.kg', abs(fit['kg'] + 1.5) <= 0.15,
                          measured={'exponent': fit['kg']}, threshold='-1.5 +- 0.15'),
        CheckResult.judge('decay.wave', abs(fit['wave'] + 1.0) <= 0.15,
                          measured={'exponent': fit['wave']}, threshold='-1.0 +- 0.15'),
    ]


def stepper_order(config):
    grid = make_grid(_cfg(config, 'VERIFY_STEPPER_N', 16),
                     _cfg(config, 'VERIFY_STEPPER_L', 4 * math.pi))
    data = make_data(grid, 'gaussian-both', eps=_cfg(config, 'VERIFY_STEPPER_EPS', 0.5),
                     width=1.0)
    init = ProfileState(data.V_wa, data.V_kg, t=0.0)
    steps = (0.1, 0.05, 0.025)
    reference = solve_to(init, 1.0, steps[-1] / 8.0)
    errors = [solve_to(init, 1.0, dt).distance(reference) for dt in steps]
    return steps, errors, observed_order(steps, errors)


def stepper_suite(config):
    steps, errors, order = stepper_order(config)
    return [CheckResult.judge('stepper.order', order >= 3.7,
                              measured={'order': order, 'errors': errors, 'steps': list(steps)},
                              threshold=3.7)]


# Asymptotics and construction

def _data(config, grid, seed=None):
    return make_data(grid, _cfg(config, 'DATA_PRESET', 'gaussian-kg'),
                     eps=_cfg(config, 'EPS', 0.01),
                     seed=_cfg(config, 'SEED', None) if seed is None else seed,
                     width=_cfg(config, 'DATA_WIDTH', 0.4))


def d_growth_ratio(cache, t_min=2.0, t_max=100.0):
    """Largest |D(t, xi)| / (|xi| ln^2 <t>) over the nodes in [t_min, t_max]."""
    grid = cache.grid
    ratios = []
    for t, D in zip(cache.times, cache.series('D')):
        if t_min <= t <= t_max:
            weight = grid.xi_norm * math.log(math.sqrt(1 + t * t))**2
            mask = weight > 0
            ratios.append(float(np.max(np.abs(D.values.real[mask]) / weight[mask])))
    return max(ratios) if ratios else 0.0


def b_decay_exponent(cache, t_min=2.0):
    """Fitted power of ||b(t)|| over nodes past t_min, None below three samples."""
    samples = [(t, b.l2_norm()) for t, b in zip(cache.times, cache.series('b'))
               if t >= t_min and b.l2_norm() > 0]
    if len(samples) < 3:
        return None
    p, _ = fit_power_law([s[0] for s in samples], [s[1] for s in samples])
    return p


def refinement_shift(data, cache_config, t=10.0):
    """
    Relative change of Hcal and D at the node nearest t when the slow
    quadrature step is halved.
    """
    times = cache_times(cache_config.t_max, cache_config.per_octave,
                        cache_config.max_step, cache_config.extra_times)
    end = min(range(len(times)), key=lambda i: abs(times[i] - t))
    nodes = times[:max(end, 1) + 1]
    runs = [accumulate_wave_terms(data, nodes, dt, cache_config.rule,
                                  cache_config.density_drop, cache_config.chunk)
            for dt in (cache_config.slow_dt, 0.5 * cache_config.slow_dt)]
    rv = {'t': nodes[-1]}
    for name in ('Hcal', 'D'):
        coarse, fine = runs[0][name][-1], runs[1][name][-1]
        diff = (coarse - fine).l2_norm()
        scale = fine.l2_norm()
        rv[name] = diff / scale if scale > 0 else diff
    return rv


def horizon_shift(data, cache, cache_config, t):
    """Relative change of B at the node nearest t when T_max is doubled."""
    doubled = build_cache(data, cache_config.with_horizon(2 * cache_config.t_max))
    t_ref = _interior_node(cache, t)
    B1, B2 = cache.at('B', t_ref), doubled.at('B', t_ref)
    shift = (B1 - B2).l2_norm() / B2.l2_norm() if B2.l2_norm() > 0 else 0.0
    return {'t': t_ref, 'rel_shift': shift}


def asymptotics_suite(config):
    grid = _grid(config)
    data = _data(config, grid)
    cache_config = CacheConfig.from_config(config)
    cache = build_cache(data, cache_config)
    rv = []

    ceiling = _cfg(config, 'VERIFY_D_CEILING', 1.0)
    worst = d_growth_ratio(cache)
    rv.append(CheckResult.judge('asymptotics.D_growth', worst <= ceiling,
                                measured={'max_ratio': worst}, threshold=ceiling))

    p = b_decay_exponent(cache)
    if p is None:
        rv.append(CheckResult.skipped('asymptotics.b_decay',
                                      'b vanishes on this box after t=2'))
    else:
        rv.append(CheckResult.judge('asymptotics.b_decay', p <= -0.9,
                                    measured={'exponent': p}, threshold=-0.9))

    at_t = _interior_node(cache, _cfg(config, 'VERIFY_LEADING_T', 2.0))
    leading = leading_kg_interaction(data, cache, at_t)
    C, D = compute_phase_correction(cache, at_t)
    target = phase_corrected_data(data, D) * (1j * C.values)
    err = (leading - target).l2_norm() / target.l2_norm() if target.l2_norm() > 0 \
        else leading.l2_norm()
    rv.append(CheckResult.judge('asymptotics.leading_interaction', err <= 1e-10,
                                measured={'t': at_t, 'rel_error': err}, threshold=1e-10))

    refinement_t = min(_cfg(config, 'VERIFY_REFINEMENT_T', 10.0), cache_config.t_max)
    tol = _cfg(config, 'VERIFY_REFINEMENT_TOL', 1e-6)
    shift = refinement_shift(data, cache_config, refinement_t)
    rv.append(CheckResult.judge('asymptotics.quadrature_refinement', shift['Hcal'] <= tol,
                                measured=shift, threshold=tol))

    if _cfg(config, 'VERIFY_HORIZON_DOUBLING', True):
        t = min(_cfg(config, 'VERIFY_HORIZON_T', 10.0), 0.5 * cache_config.t_max)
        doubling = horizon_shift(data, cache, cache_config, t)
        rv.append(CheckResult.judge('asymptotics.horizon_doubling',
                                    doubling['rel_shift'] <= 0.05,
                                    measured=doubling, threshold=0.05))

    params = NormParams.from_config(config)
    y1 = norm_Y(data.V_wa, 'Y1', params).value
    y2 = norm_Y(data.V_kg, 'Y2', params).value
    rv.append(CheckResult.judge('asymptotics.data_norms',
                                math.isfinite(y1) and math.isfinite(y2),
                                measured={'Y1': y1, 'Y2': y2}))
    return rv


def _interior_node(cache, t):
    """The cache node closest to t."""
    return min(cache.times, key=lambda s: abs(s - t))


def construction_suite(config):
    grid = _grid(config)
    data = _data(config, grid)
    builder = _builder(config, data)
    cache = builder.cache
    G, log = builder.iterate_to_fixed_point()
    rv = [CheckResult.judge('construction.contraction',
                            all(r < 1 for r in log.ratios) and
                            log.final_distance <= builder.config.tol,
                            measured={'ratios': log.ratios,
                                      'final_distance': log.final_distance,
                                      'iterations': len(log)},
                            threshold=builder.config.tol)]

    profiles = builder.reconstruct_solution(G)
    report = verify_scattering(profiles, data, cache)
    rv.append(CheckResult.judge('construction.residual_trend', bool(report.decreasing),
                                measured={'slope': report.slope,
                                          'terminal': report.terminal}))
    half = _interior_node(cache, cache.t_max / 2.0)
    i = cache.index(half)
    if np.max(np.abs(cache.series('D')[i].values)) > 0:
        rv.append(CheckResult.judge(
            'construction.phase_ablation',
            report.r_kg_uncorrected[i] > report.r_kg[i],
            measured={'t': half, 'corrected': report.r_kg[i],
                      'uncorrected': report.r_kg_uncorrected[i]}))

    consistency = consistency_check(builder, G)
    order = consistency['order']
    rv.append(CheckResult.judge('construction.consistency',
                                order is not None and order >= 1.9,
                                measured=consistency, threshold=1.9))

    t0, t1 = _cfg(config, 'VERIFY_FB_T0', 10.0), _cfg(config, 'VERIFY_FB_T1', 40.0)
    if cache.index(t0) is not None and cache.index(t1) is not None:
        fb = forward_backward_check(builder, G, t0, t1, dt=_cfg(config, 'SOLVER_DT', 0.05))
        rv.append(CheckResult.judge('construction.forward_backward',
                                    fb['relative'] <= 5e-3, measured=fb, threshold=5e-3))
    else:
        rv.append(CheckResult.skipped('construction.forward_backward',
                                      'times {0!r} and {1!r} are not cache nodes'.format(t0, t1)))

    rv.append(envelope_check(config))
    rv.append(eps_scaling_check(config))
    return rv


def _builder(config, data):
    cache = build_cache(data, CacheConfig.from_config(config))
    return WaveOperatorBuilder(data, cache, BuilderConfig.from_config(config))


def envelope_constants(config, seeds=None):
    """sup_t residual / eps^(3/2) of the converged construction, per data seed."""
    grid = _grid(config)
    if seeds is None:
        seeds = range(_cfg(config, 'VERIFY_ENVELOPE_SEEDS', 3))
    rv = []
    for seed in seeds:
        data = _data(config, grid, seed=seed)
        builder = _builder(config, data)
        G, _ = builder.iterate_to_fixed_point()
        report = verify_scattering(builder.reconstruct_solution(G), data, builder.cache)
        rv.append(report.envelope_constant)
    return rv


def envelope_check(config):
    constants = envelope_constants(config)
    median = float(np.median(constants))
    spread = max(abs(c - median) for c in constants) / median if median > 0 else 0.0
    get_logger().info('Envelope constants {0!r}, median {1:.4e}'.format(constants, median))
    return CheckResult.judge('construction.envelope_stability', spread <= 0.5,
                             measured={'constants': constants, 'median': median,
                                       'spread': spread},
                             threshold=0.5)


def eps_scaling(config):
    """First contraction ratios at eps and eps / 2 and their quotient."""
    grid = _grid(config)
    eps = _cfg(config, 'EPS', 0.01)
    ratios = []
    for amplitude in (eps, 0.5 * eps):
        data = make_data(grid, _cfg(config, 'DATA_PRESET', 'gaussian-kg'), eps=amplitude,
                         seed=_cfg(config, 'SEED', None), width=_cfg(config, 'DATA_WIDTH', 0.4))
        ratios.append(first_contraction_ratio(_builder(config, data)))
    gain = ratios[0] / ratios[1] if ratios[1] > 0 else None
    return {'eps': eps, 'ratios': ratios, 'gain': gain}


def eps_scaling_check(config):
    # halving eps should halve the first ratio, within a factor 1.5
    scaling = eps_scaling(config)
    gain = scaling['gain']
    if gain is None:
        return CheckResult.skipped('construction.eps_scaling',
                                   'first contraction ratio vanishes at eps / 2')
    return CheckResult.judge('construction.eps_scaling', gain >= 2.0 / 1.5,
                             measured=scaling, threshold=2.0 / 1.5)


SUITES = {
    'lp': lp_suite,
    'phase': phase_suite,
    'probe': probe_suite,
    'oracle': oracle_suite,
    'linear': linear_suite,
    'decay': decay_suite,
    'stepper': stepper_suite,
    'asymptotics': asymptotics_suite,
    'construction': construction_suite,
}


def run_suites(config, sections=None):
    logger = get_logger()
    sections = list(sections or _cfg(config, 'VERIFY_SECTIONS', SECTIONS))
    results = []
    for name in SECTIONS:
        if name not in sections:
            results.append(CheckResult.skipped(name, 'section not selected'))
            continue
        logger.info('Running {0} checks'.format(name))
        for result in SUITES[name](config):
            logger.info('{0}: {1}'.format(result.name, result.status))
            results.append(result)
    return results


def failures(results):
    return [r for r in results if r.status == FAIL]


def report_table(results):
    width = max([len(r.name) for r in results] + [5])
    lines = ['{0}  {1}'.format('check'.ljust(width), 'status')]
    for r in results:
        lines.append('{0}  {1}  {2}'.format(r.name.ljust(width), r.status, r.note))
    return '\n'.join(line.rstrip() for line in lines) + '\n'
