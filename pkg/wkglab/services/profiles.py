"""
Physical states, normalized solutions and profiles, and the vector fields
acting on them.

The zero frequency of u is not recoverable from U^wa since |D| vanishes
there: recover() sets u_hat(0) = 0 and the zero mode of U^wa carries the
mean of u_t alone.
"""
import itertools

import numpy as np

from ..lib.errors import ConfigurationError
from ..models.field import SpectralField, reflect_array
from ..models.state import (PhysicalState, NormalizedState, ProfileState,
                            VectorFieldSpec, GENERATORS)
from .spectral import (forward_array, inverse_array, symbol_on_grid, propagator,
                       xi_derivative)
from ..models.grid import WA_PLUS, KG_PLUS

KINDS = {'wa': WA_PLUS, 'kg': KG_PLUS}


def _symbol(grid, family):
    return symbol_on_grid(grid, KINDS[family])


def normalize(state):
    grid = state.grid
    U = {}
    for family, f, f_t in (('wa', state.u, state.u_t),
                           ('kg', state.v, state.v_t)):
        U[family] = SpectralField(
            grid,
            forward_array(grid, f_t) -
            1j * _symbol(grid, family) * forward_array(grid, f),
            tag=family)
    return NormalizedState(U['wa'], U['kg'], t=state.t)


def _split(grid, values, family):
    """(FT f_t, FT f) from FT(f_t - i Lambda f) with f, f_t real."""
    minus = np.conj(reflect_array(values))
    ft_hat = 0.5 * (values + minus)
    lam = _symbol(grid, family)
    with np.errstate(divide='ignore', invalid='ignore'):
        f_hat = np.where(lam > 0, (values - minus) / (-2j * lam), 0.0)
    return ft_hat, f_hat


def recover(state):
    """
    Inverse of normalize() up to the zero mode of u, which is set to 0.
    A mean of u_t survives in U^wa(0); the mean of u, and with it the
    linear-in-time growth a mean of u_t produces, does not.
    """
    grid = state.grid
    ut_hat, u_hat = _split(grid, state.U_wa.values, 'wa')
    vt_hat, v_hat = _split(grid, state.U_kg.values, 'kg')
    return PhysicalState(grid,
                         inverse_array(grid, u_hat).real,
                         inverse_array(grid, ut_hat).real,
                         inverse_array(grid, v_hat).real,
                         inverse_array(grid, vt_hat).real,
                         t=state.t)


def to_profile(state):
    grid, t = state.grid, state.t
    return ProfileState(
        state.U_wa.with_values(state.U_wa.values * propagator(grid, WA_PLUS, t)),
        state.U_kg.with_values(state.U_kg.values * propagator(grid, KG_PLUS, t)),
        t=t)


def from_profile(state):
    grid, t = state.grid, state.t
    return NormalizedState(
        state.V_wa.with_values(state.V_wa.values * propagator(grid, WA_PLUS, -t)),
        state.V_kg.with_values(state.V_kg.values * propagator(grid, KG_PLUS, -t)),
        t=t)


def profile_to_physical(state):
    return recover(from_profile(state))


def physical_to_profile(state):
    return to_profile(normalize(state))


def evolve_linear(state, t):
    """Free evolution of a physical state to time t (exact in frequency)."""
    profiles = physical_to_profile(state)
    return profile_to_physical(profiles.at_time(t))


def spectral_derivative(grid, f, axis):
    return inverse_array(grid, 1j * grid.xi[axis] * forward_array(grid, f)).real


def laplacian(grid, f):
    return inverse_array(grid, -grid.xi_norm**2 * forward_array(grid, f)).real


def nonlinearities(state):
    """
    Right-hand sides of the coupled system:
    wave forcing v_t^2 + |grad v|^2 + v^2 and Klein-Gordon forcing u * Lap v.
    """
    grid = state.grid
    grad_sq = sum(spectral_derivative(grid, state.v, i)**2 for i in range(3))
    wave = state.v_t**2 + grad_sq + state.v**2
    kg = state.u * laplacian(grid, state.v)
    return wave, kg


def second_time_derivatives(state, nonlinear=True):
    grid = state.grid
    u_tt = laplacian(grid, state.u)
    v_tt = laplacian(grid, state.v) - state.v
    if nonlinear:
        wave, kg = nonlinearities(state)
        u_tt = u_tt + wave
        v_tt = v_tt + kg
    return u_tt, v_tt


def _apply_letter(grid, letter, jet, t):
    """
    One generator on a time jet [g, g_t, g_tt, ...]. Gamma and d0 shorten
    the jet by one level.
    """
    if letter == 'd0':
        return jet[1:]
    if letter.startswith('d'):
        axis = int(letter[1]) - 1
        return [spectral_derivative(grid, g, axis) for g in jet]
    if letter.startswith('Omega'):
        a, b = int(letter[5]) - 1, int(letter[6]) - 1
        return [grid.x[a] * spectral_derivative(grid, g, b) -
                grid.x[b] * spectral_derivative(grid, g, a) for g in jet]
    axis = int(letter[5]) - 1
    out = []
    for k in range(len(jet) - 1):
        value = grid.x[axis] * jet[k + 1] + t * spectral_derivative(grid, jet[k], axis)
        if k > 0:
            value = value + k * spectral_derivative(grid, jet[k - 1], axis)
        out.append(value)
    return out


def time_jet(state, target, nonlinear=True):
    u_tt, v_tt = second_time_derivatives(state, nonlinear=nonlinear)
    if target == 'u':
        return [state.u, state.u_t, u_tt]
    if target == 'v':
        return [state.v, state.v_t, v_tt]
    raise ConfigurationError(name=target, message="Target must be u or v")


def apply_vector_field_jet(state, spec, target, nonlinear=True):
    """The word applied to the target's time jet; returns [Lf, d_t Lf, ...]."""
    if not isinstance(spec, VectorFieldSpec):
        spec = VectorFieldSpec(spec, max_order=len(tuple(spec)))
    jet = time_jet(state, target, nonlinear=nonlinear)
    for letter in reversed(spec.word):
        jet = _apply_letter(state.grid, letter, jet, state.t)
    return jet


def apply_vector_field(state, spec, target, nonlinear=True):
    return apply_vector_field_jet(state, spec, target, nonlinear=nonlinear)[0]


def vector_field_state(state, spec, nonlinear=False):
    """The physical state (Lu, d_t Lu, Lv, d_t Lv)."""
    ju = apply_vector_field_jet(state, spec, 'u', nonlinear=nonlinear)
    jv = apply_vector_field_jet(state, spec, 'v', nonlinear=nonlinear)
    return PhysicalState(state.grid, ju[0], ju[1], jv[0], jv[1], t=state.t)


def commutation_defect(state, spec, t):
    """
    Relative sup distance between L applied after the free flow to time t
    and the free flow of L applied at state.t.

    u is compared modulo constants since the flow drops its zero mode; u_t
    has to be mean-free or Gamma picks up the lost linear growth.
    """
    evolved = vector_field_state(evolve_linear(state, t), spec)
    transported = evolve_linear(vector_field_state(state, spec), t)
    du = evolved.u - transported.u
    dv = evolved.v - transported.v
    defect = max(float(np.max(np.abs(du - np.mean(du)))), float(np.max(np.abs(dv))))
    scale = max(float(np.max(np.abs(transported.u))), float(np.max(np.abs(transported.v))))
    return defect / scale if scale > 0 else defect


def apply_profile_vector_field(field, word, family):
    """
    Frequency-side action on a profile of the given family:
    Gamma_j -> d_xi_j (Lambda f), Omega_ab -> xi_a d_b f - xi_b d_a f,
    d_j -> i xi_j f, d0 -> -i Lambda f.
    """
    grid = field.grid
    lam = _symbol(grid, family)
    out = field
    for letter in reversed(tuple(word)):
        if letter == 'd0':
            out = out.with_values(-1j * lam * out.values)
        elif letter.startswith('d'):
            axis = int(letter[1]) - 1
            out = out.with_values(1j * grid.xi[axis] * out.values)
        elif letter.startswith('Omega'):
            a, b = int(letter[5]) - 1, int(letter[6]) - 1
            out = out.with_values(
                grid.xi[a] * xi_derivative(out, b).values -
                grid.xi[b] * xi_derivative(out, a).values)
        else:
            axis = int(letter[5]) - 1
            out = xi_derivative(out.with_values(lam * out.values), axis)
    return out


def enumerate_words(order):
    """All words of exactly the given length over the ten generators."""
    return [tuple(w) for w in itertools.product(GENERATORS, repeat=order)]


def is_even(field, tol=1e-12):
    return field.parity_defect() <= tol


def parity_defect(field):
    return field.parity_defect()


def imaginary_residue(state):
    """
    Largest imaginary part of the recovered physical fields, counting the
    imaginary part of U^wa(0) that recover() discards.
    """
    grid = state.grid
    worst = 0.0
    for values, family in ((state.U_wa.values, 'wa'), (state.U_kg.values, 'kg')):
        for part in _split(grid, values, family):
            worst = max(worst, float(np.max(np.abs(inverse_array(grid, part).imag))))
    lost = np.zeros(grid.shape, dtype=np.complex128)
    lost[0, 0, 0] = 1j * state.U_wa.values[0, 0, 0].imag
    return max(worst, float(np.max(np.abs(inverse_array(grid, lost)))))
