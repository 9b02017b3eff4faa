import os

import numpy as np

from ..lib.errors import BlowUpError, ConfigurationError
from ..lib.utils import get_logger
from ..models.norm import NormSnapshot
from ..models.snapshot import write_snapshot
from ..models.trajectory import Trajectory
from .bilinear import rhs_state
from .littlewood_paley import resolvable_window, project_P_k
from .profiles import from_profile, recover, imaginary_residue
from .spectral import sobolev_norm


def step(state, dt, coupling=1.0, dealias=True):
    """
    One classical RK4 step of the profile equations. The linear flow is
    carried exactly by the profiles, so only the bilinear terms are
    integrated.
    """
    t = state.t
    if coupling == 0:
        return state.at_time(t + dt)

    def f(s):
        return rhs_state(s, coupling=coupling, dealias=dealias)

    half = t + 0.5 * dt
    k1 = f(state)
    k2 = f(state.combine(k1, 0.5 * dt).at_time(half))
    k3 = f(state.combine(k2, 0.5 * dt).at_time(half))
    k4 = f(state.combine(k3, dt).at_time(t + dt))

    increment = k1.combine(k2, 2.0).combine(k3, 2.0).combine(k4, 1.0)
    return state.combine(increment, dt / 6.0).at_time(t + dt)


def diagnostics(state, sobolev_index=2):
    grid = state.grid
    snap = NormSnapshot('diagnostics')
    normalized = from_profile(state)
    physical = recover(normalized)
    snap.record('sup_u', np.max(np.abs(physical.u)))
    snap.record('sup_v', np.max(np.abs(physical.v)))
    snap.record('sobolev_wa', sobolev_norm(normalized.U_wa, sobolev_index))
    snap.record('sobolev_kg', sobolev_norm(normalized.U_kg, sobolev_index))
    snap.record('l2_wa', state.V_wa.l2_norm())
    snap.record('l2_kg', state.V_kg.l2_norm())
    k_min, k_max = resolvable_window(grid)
    for k in range(k_min, k_max + 1):
        snap.record('shell_wa_k={0}'.format(k), project_P_k(state.V_wa, k).l2_norm())
        snap.record('shell_kg_k={0}'.format(k), project_P_k(state.V_kg, k).l2_norm())
    snap.record('imag_residue', imaginary_residue(normalized))
    return snap


def dump_state(state, dump_dir):
    if not dump_dir:
        return None
    prefix = os.path.join(dump_dir, 'blowup_t={0!r}'.format(state.t))
    write_snapshot(prefix + '_wa.wkgs', state.V_wa, state.t)
    write_snapshot(prefix + '_kg.wkgs', state.V_kg, state.t)
    return prefix


def _check_blowup(state, last_good, config):
    if state.is_finite() and state.sup_abs() <= config.blowup_threshold:
        return
    path = dump_state(last_good, config.dump_dir)
    get_logger().warning('Blow-up after t={0!r}, state dumped to {1}'.format(
        last_good.t, path))
    raise BlowUpError(name='t={0!r}'.format(state.t),
                      last_good_time=last_good.t, dump_path=path)


def step_count(t_start, t_end, dt):
    return int(round((t_end - t_start) / dt))


def solve_forward(init, config, sobolev_index=2, record_diagnostics=True):
    if not config.t_end > init.t:
        raise ConfigurationError(name=config.t_end,
                                 message="t_end must exceed the initial time")
    n_steps = step_count(init.t, config.t_end, config.dt)
    logger = get_logger()
    logger.info('Forward solve: {0} steps of dt={1!r} from t={2!r}'.format(
        n_steps, config.dt, init.t))

    traj = Trajectory(init.grid)
    traj.add_state(0, init)
    if record_diagnostics:
        traj.add_diagnostics(init.t, diagnostics(init, sobolev_index))

    state = init
    for i in range(1, n_steps + 1):
        new = step(state, config.dt, coupling=config.coupling,
                   dealias=config.dealiasing)
        _check_blowup(new, state, config)
        state = new
        if i % config.snapshot_stride == 0 or i == n_steps:
            traj.add_state(i, state)
            logger.info('t={0:.4f} |V_wa|={1:.6e} |V_kg|={2:.6e}'.format(
                state.t, state.V_wa.l2_norm(), state.V_kg.l2_norm()))
        if record_diagnostics and (i % config.diagnostic_stride == 0 or i == n_steps):
            traj.add_diagnostics(state.t, diagnostics(state, sobolev_index))
        logger.debug('step {0} t={1!r}'.format(i, state.t))
    return traj


def solve_to(state, t_end, dt, coupling=1.0, dealias=True):
    """Final state only, without trajectory bookkeeping."""
    for _ in range(step_count(state.t, t_end, dt)):
        state = step(state, dt, coupling=coupling, dealias=dealias)
    return state
