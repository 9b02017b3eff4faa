"""
Bilinear Duhamel integrands

    I_wa[F, G](t, xi) = 1/4 (2 pi)^(-3/2) int exp(i t Phi_wa) a(xi, eta) F(xi - eta) G(eta) d eta
    I_kg[F, G](t, xi) = 1/4 (2 pi)^(-3/2) int exp(i t Phi_kg) b(xi, eta) F(xi - eta) G(eta) d eta

evaluated by splitting the phase into three propagators and the symbol
into separated products m1(xi - eta) m2(eta), so that each term is a
pointwise product in physical space.
"""
import numpy as np

from ..lib.errors import ShapeError, CostGuardError, ConfigurationError
from ..lib.utils import get_logger
from ..models.field import SpectralField
from ..models.state import ProfileState
from .spectral import (forward_array, inverse_array, symbol_on_grid,
                       propagator, NORMALIZATION)
from ..models.grid import DispersionKind, WA_PLUS, KG_PLUS

ORACLE_MAX_N = 12
PREFACTOR = 0.25

INPUT_FAMILIES = {'wa': ('kg', 'kg'), 'kg': ('kg', 'wa')}
OUTPUT_KINDS = {'wa': WA_PLUS, 'kg': KG_PLUS}


class BilinearJob(object):

    def __init__(self, kind, iota1, iota2, F, G, t=0.0):
        if kind not in INPUT_FAMILIES:
            raise ConfigurationError(name=kind, message="Unknown bilinear kind")
        if iota1 not in (1, -1) or iota2 not in (1, -1):
            raise ConfigurationError(name=(iota1, iota2),
                                     message="Signs must be +1 or -1")
        if F.grid != G.grid:
            raise ShapeError(name='{0!r} vs {1!r}'.format(F.grid, G.grid),
                             message="Inputs live on different grids")
        self.kind = kind
        self.iota1 = iota1
        self.iota2 = iota2
        self.F = F
        self.G = G
        self.t = float(t)

    @property
    def grid(self):
        return self.F.grid

    def __repr__(self):
        return '<BilinearJob {0}{1}{2} t={3!r}>'.format(
            self.kind, '+' if self.iota1 > 0 else '-',
            '+' if self.iota2 > 0 else '-', self.t)


def separated_terms(grid, kind):
    """
    (coefficient, m1, m2, weighted, odd) per separated term. Weighted terms
    carry iota1 iota2; odd marks symbols with m(-xi) = -m(xi).
    """
    bracket = grid.xi_bracket
    if kind == 'wa':
        terms = [(1.0, 1.0, 1.0, False, False)]
        for i in range(3):
            m = grid.xi[i] / bracket
            terms.append((1.0, m, m, True, True))
        terms.append((-1.0, 1.0 / bracket, 1.0 / bracket, True, False))
        return terms
    r = grid.xi_norm
    with np.errstate(divide='ignore'):
        inv_r = np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0), 0.0)
    return [(1.0, r**2 / bracket, inv_r, True, False)]


def _input_kind(family, sign):
    return DispersionKind(family, sign)


def _free_solution(grid, values, family, sign, t):
    """exp(-i t sign Lambda) applied to a profile, i.e. its normalized solution."""
    return values * propagator(grid, _input_kind(family, sign), -t)


def _finish(grid, kind, product, t, dealias):
    out = forward_array(grid, product)
    if dealias:
        out = np.where(grid.dealias_mask, out, 0.0)
    return PREFACTOR * propagator(grid, OUTPUT_KINDS[kind], t) * out


def eval_bilinear(job, dealias=True):
    grid, kind, t = job.grid, job.kind, job.t
    fam_f, fam_g = INPUT_FAMILIES[kind]
    uf = _free_solution(grid, job.F.values, fam_f, job.iota1, t)
    ug = _free_solution(grid, job.G.values, fam_g, job.iota2, t)
    if dealias:
        uf = np.where(grid.dealias_mask, uf, 0.0)
        ug = np.where(grid.dealias_mask, ug, 0.0)

    product = np.zeros(grid.shape, dtype=np.complex128)
    for coeff, m1, m2, weighted, _ in separated_terms(grid, kind):
        if weighted:
            coeff = coeff * job.iota1 * job.iota2
        product += coeff * inverse_array(grid, m1 * uf) * inverse_array(grid, m2 * ug)
    return SpectralField(grid, _finish(grid, kind, product, t, dealias), tag=kind)


def _signed_sum(grid, m, u_plus, weighted, odd):
    """
    sum over iota of w_iota * inverse(m U^iota), where U^- is the
    conjugate reflection of U^+ and w_iota is 1 or iota.
    """
    z = inverse_array(grid, m * u_plus)
    c = (-1.0 if weighted else 1.0) * (-1.0 if odd else 1.0)
    return z + c * np.conj(z)


def duhamel_sum(kind, F, G, t, dealias=True):
    """
    Sum over the four sign pairs of I_kind[F^iota1, G^iota2], with F and G
    given as plus objects and the minus objects built by conjugate
    reflection.
    """
    if F.grid != G.grid:
        raise ShapeError(name='{0!r} vs {1!r}'.format(F.grid, G.grid),
                         message="Inputs live on different grids")
    grid = F.grid
    fam_f, fam_g = INPUT_FAMILIES[kind]
    uf = _free_solution(grid, F.values, fam_f, 1, t)
    ug = _free_solution(grid, G.values, fam_g, 1, t)
    if dealias:
        uf = np.where(grid.dealias_mask, uf, 0.0)
        ug = np.where(grid.dealias_mask, ug, 0.0)

    product = np.zeros(grid.shape, dtype=np.complex128)
    for coeff, m1, m2, weighted, odd in separated_terms(grid, kind):
        product += coeff * _signed_sum(grid, m1, uf, weighted, odd) * \
            _signed_sum(grid, m2, ug, weighted, odd)
    return SpectralField(grid, _finish(grid, kind, product, t, dealias), tag=kind)


def rhs_profiles(state, coupling=1.0, dealias=True):
    """(d/dt V^wa, d/dt V^kg) of the profile equations."""
    if coupling == 0:
        return (SpectralField.zeros(state.grid, 'wa'),
                SpectralField.zeros(state.grid, 'kg'))
    d_wa = duhamel_sum('wa', state.V_kg, state.V_kg, state.t, dealias=dealias)
    d_kg = duhamel_sum('kg', state.V_kg, state.V_wa, state.t, dealias=dealias)
    if coupling != 1.0:
        d_wa = d_wa * coupling
        d_kg = d_kg * coupling
    return d_wa, d_kg


def rhs_state(state, coupling=1.0, dealias=True):
    d_wa, d_kg = rhs_profiles(state, coupling=coupling, dealias=dealias)
    return ProfileState(d_wa, d_kg, t=state.t)


def _oracle_symbol(kind, iota1, iota2, zeta, eta):
    bz = np.sqrt(1.0 + np.sum(zeta * zeta, axis=-1))
    if kind == 'wa':
        be = np.sqrt(1.0 + np.sum(eta * eta, axis=-1))
        return 1.0 + iota1 * iota2 * (np.sum(zeta * eta, axis=-1) - 1.0) / (bz * be)
    r = np.sqrt(np.sum(eta * eta, axis=-1))
    with np.errstate(divide='ignore', invalid='ignore'):
        value = iota1 * iota2 * np.sum(zeta * zeta, axis=-1) / (bz * r)
    return np.where(r > 0, value, 0.0)


def eval_bilinear_oracle(job):
    """
    Literal double lattice sum with wraparound indexing. Symbols are
    evaluated at the lattice representative of the wrapped difference.
    """
    grid = job.grid
    n = grid.n
    if n > ORACLE_MAX_N:
        raise CostGuardError(name='n={0} > {1}'.format(n, ORACLE_MAX_N))
    get_logger().debug('Brute-force oracle for {0!r}'.format(job))

    fam_f, fam_g = INPUT_FAMILIES[job.kind]
    idx = np.indices(grid.shape).reshape(3, -1).T
    xi = np.stack([grid.xi[i].ravel() for i in range(3)], axis=-1)
    F = job.F.values.ravel()
    G = job.G.values.ravel()
    lam_out = symbol_on_grid(grid, OUTPUT_KINDS[job.kind]).ravel()
    lam_f = symbol_on_grid(grid, _input_kind(fam_f, job.iota1)).ravel()
    lam_g = symbol_on_grid(grid, _input_kind(fam_g, job.iota2)).ravel()

    out = np.zeros(n**3, dtype=np.complex128)
    for p in range(n**3):
        zeta_idx = (idx[p] - idx) % n
        q = np.ravel_multi_index(zeta_idx.T, grid.shape)
        phase = lam_out[p] - lam_f[q] - lam_g
        m = _oracle_symbol(job.kind, job.iota1, job.iota2, xi[q], xi)
        out[p] = np.sum(np.exp(1j * job.t * phase) * m * F[q] * G)

    out *= PREFACTOR * NORMALIZATION * grid.frequency_volume
    return SpectralField(grid, out.reshape(grid.shape), tag=job.kind)
