"""
Quadratic phases, the multipliers of the two Duhamel integrands, the
resonance table and the numerical checks built on them.

Frequency arguments are arrays whose last axis has length 3, so every
function evaluates on one point or on a batch.
"""
import math

import numpy as np
from numpy.random import Generator, PCG64
from scipy.integrate import simpson

from ..lib.errors import UnsupportedPhaseError, AccuracyError, ConfigurationError
from ..lib.utils import get_logger, fit_power_law, bracket
from ..models.check import CheckResult
from ..models.grid import DispersionKind
from .littlewood_paley import bump
from .spectral import dispersion_symbol

CASES = [(kind, i1, i2) for kind in ('wa', 'kg') for i1 in (1, -1) for i2 in (1, -1)]


class PhaseSpec(object):
    """Phase Lambda_sigma(xi) - Lambda_mu(xi - eta) - Lambda_nu(eta)."""

    def __init__(self, output, first, second):
        for kind in (output, first, second):
            if not isinstance(kind, DispersionKind):
                raise ConfigurationError(name=kind,
                                         message="Expected a DispersionKind")
        self.output = output
        self.first = first
        self.second = second

    @classmethod
    def from_signs(cls, kind, iota1, iota2):
        """The phase of the wave (kg, kg inputs) or kg (kg, wa inputs) equation."""
        if kind == 'wa':
            return cls(DispersionKind('wa', 1), DispersionKind('kg', iota1),
                       DispersionKind('kg', iota2))
        if kind == 'kg':
            return cls(DispersionKind('kg', 1), DispersionKind('kg', iota1),
                       DispersionKind('wa', iota2))
        raise UnsupportedPhaseError(name=kind)

    def flipped(self):
        return PhaseSpec(self.output.flipped(), self.first.flipped(),
                         self.second.flipped())

    @property
    def case(self):
        """(kind, iota1, iota2) when the spec is one of the tabulated cases."""
        if self.output.sign != 1:
            return None
        if (self.output.family, self.first.family, self.second.family) == ('wa', 'kg', 'kg'):
            return ('wa', self.first.sign, self.second.sign)
        if (self.output.family, self.first.family, self.second.family) == ('kg', 'kg', 'wa'):
            return ('kg', self.first.sign, self.second.sign)
        return None

    def __repr__(self):
        return '<PhaseSpec {0!r} {1!r} {2!r}>'.format(self.output, self.first,
                                                     self.second)


class ResonanceReport(object):

    def __init__(self, time_resonant, space_resonant, spacetime):
        self.time_resonant = time_resonant
        self.space_resonant = space_resonant
        self.spacetime = spacetime

    @property
    def stationary(self):
        return self.time_resonant != 'empty'

    def to_dict(self):
        return {
            'time_resonant': self.time_resonant,
            'space_resonant': self.space_resonant,
            'spacetime': self.spacetime,
            'stationary': self.stationary,
        }

    def __repr__(self):
        return '<ResonanceReport T={0} S={1} R={2}>'.format(
            self.time_resonant, self.space_resonant, self.spacetime)


RESONANCE_TABLE = {
    ('wa', 1, 1): ResonanceReport('empty', 'xi=2eta', 'empty'),
    ('wa', -1, -1): ResonanceReport('empty', 'xi=2eta', 'empty'),
    ('wa', 1, -1): ResonanceReport('xi=0', 'xi=0', 'xi=0'),
    ('wa', -1, 1): ResonanceReport('xi=0', 'xi=0', 'xi=0'),
    ('kg', -1, 1): ResonanceReport('empty', 'eta=0', 'empty'),
    ('kg', -1, -1): ResonanceReport('empty', 'eta=0', 'empty'),
    ('kg', 1, 1): ResonanceReport('eta=0', 'eta=0', 'eta=0'),
    ('kg', 1, -1): ResonanceReport('eta=0', 'eta=0', 'eta=0'),
}


def _vec(a):
    return np.asarray(a, dtype=float)


def _norm(v):
    return np.sqrt(np.sum(v * v, axis=-1))


def phase(spec, xi, eta):
    xi, eta = _vec(xi), _vec(eta)
    return (dispersion_symbol(spec.output, xi) -
            dispersion_symbol(spec.first, xi - eta) -
            dispersion_symbol(spec.second, eta))


def phase_wa(iota1, iota2, xi, eta):
    return phase(PhaseSpec.from_signs('wa', iota1, iota2), xi, eta)


def phase_kg(iota1, iota2, xi, eta):
    return phase(PhaseSpec.from_signs('kg', iota1, iota2), xi, eta)


def multiplier_a(iota1, iota2, xi, eta):
    xi, eta = _vec(xi), _vec(eta)
    zeta = xi - eta
    dot = np.sum(zeta * eta, axis=-1)
    return 1.0 + iota1 * iota2 * (dot - 1.0) / (bracket(zeta, axis=-1) *
                                                bracket(eta, axis=-1))


def multiplier_b(iota1, iota2, xi, eta):
    """iota1 iota2 |xi - eta|^2 / (<xi - eta> |eta|), zero at eta = 0."""
    xi, eta = _vec(xi), _vec(eta)
    zeta = xi - eta
    r = _norm(eta)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = iota1 * iota2 * np.sum(zeta * zeta, axis=-1) / (bracket(zeta, axis=-1) * r)
    return np.where(r > 0, value, 0.0)


def leading_phase(kind, iota, xi, eta):
    """
    wa-bulk: |xi| + iota xi.eta/<eta>, the small-xi expansion of the wave
    phase with opposite input signs. kg-highlow: xi.eta/<xi> - iota |eta|,
    the small-eta expansion of the kg phase with iota1 = +.
    """
    xi, eta = _vec(xi), _vec(eta)
    dot = np.sum(xi * eta, axis=-1)
    if kind == 'wa-bulk':
        return _norm(xi) + iota * dot / bracket(eta, axis=-1)
    if kind == 'kg-highlow':
        return dot / bracket(xi, axis=-1) - iota * _norm(eta)
    raise UnsupportedPhaseError(name=kind)


def classify_resonances(spec):
    case = spec.case if isinstance(spec, PhaseSpec) else tuple(spec)
    if case not in RESONANCE_TABLE:
        raise UnsupportedPhaseError(name=repr(spec))
    return RESONANCE_TABLE[case]


def check_resonance_table(samples, seed, radius=4.0, tol=1e-12):
    """
    Samples every tabulated case: the phase must vanish on the listed
    time-resonant set and stay away from zero when that set is empty.
    """
    rng = Generator(PCG64(seed))
    measured = {}
    passed = True
    for case in sorted(CASES):
        spec = PhaseSpec.from_signs(*case)
        report = classify_resonances(spec)
        xi = sample_ball(rng, samples, radius)
        eta = sample_ball(rng, samples, radius)
        label = '{0}{1}{2}'.format(case[0], '+' if case[1] > 0 else '-',
                                   '+' if case[2] > 0 else '-')
        if not report.stationary:
            value = float(np.min(np.abs(phase(spec, xi, eta))))
            passed = passed and value > tol
        else:
            if report.time_resonant == 'xi=0':
                xi = np.zeros_like(xi)
            else:
                eta = np.zeros_like(eta)
            value = float(np.max(np.abs(phase(spec, xi, eta))))
            passed = passed and value <= tol
        measured[label] = value
    return CheckResult.judge('phase.resonance_table', passed, measured=measured,
                             threshold=tol)


def check_phase_symmetries(samples, seed, radius=4.0, tol=1e-12):
    """
    Phi of the flipped signs is -Phi, |a| <= 2, and a is unchanged when
    the two inputs trade places (signs swapped, eta -> xi - eta).
    """
    rng = Generator(PCG64(seed))
    xi = sample_ball(rng, samples, radius)
    eta = sample_ball(rng, samples, radius)
    antisymmetry = 0.0
    for case in CASES:
        spec = PhaseSpec.from_signs(*case)
        defect = np.abs(phase(spec.flipped(), xi, eta) + phase(spec, xi, eta))
        antisymmetry = max(antisymmetry, float(np.max(defect)))
    sup_a, exchange = 0.0, 0.0
    for i1 in (1, -1):
        for i2 in (1, -1):
            a = multiplier_a(i1, i2, xi, eta)
            sup_a = max(sup_a, float(np.max(np.abs(a))))
            exchange = max(exchange, float(np.max(np.abs(
                a - multiplier_a(i2, i1, xi, xi - eta)))))
    measured = {'antisymmetry': antisymmetry, 'sup_a': sup_a, 'exchange': exchange}
    passed = antisymmetry <= tol and exchange <= tol and sup_a <= 2.0
    return CheckResult.judge('phase.symmetries', passed, measured=measured,
                             threshold={'defects': tol, 'sup_a': 2.0})


def sample_ball(rng, count, radius):
    """Uniform samples in the ball of the given radius."""
    direction = rng.standard_normal((count, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = radius * rng.random(count)**(1.0 / 3.0)
    return direction * r[:, None]


def sample_constrained_pairs(rng, count, b):
    """(xi, eta) with |xi|, |eta|, |xi - eta| <= b by rejection."""
    xis, etas = [], []
    have = 0
    while have < count:
        xi = sample_ball(rng, count, b)
        eta = sample_ball(rng, count, b)
        keep = np.linalg.norm(xi - eta, axis=1) <= b
        xis.append(xi[keep])
        etas.append(eta[keep])
        have += int(np.count_nonzero(keep))
    return np.concatenate(xis)[:count], np.concatenate(etas)[:count]


def check_phase_lower_bound(kind, iota1, iota2, b, samples, seed, chunk=200000):
    """
    Minimum of |Phi| 4 b^2 / |xi| (wave) or |Phi| 4 b^2 / |eta| (kg) over
    constrained Monte-Carlo samples.
    """
    if b < 1:
        raise ConfigurationError(name=b, message="b must be at least 1")
    spec = PhaseSpec.from_signs(kind, iota1, iota2)
    rng = Generator(PCG64(seed))
    best, arg = math.inf, None
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        xi, eta = sample_constrained_pairs(rng, n, b)
        denom = _norm(xi) if kind == 'wa' else _norm(eta)
        keep = denom > 1e-12
        ratio = np.abs(phase(spec, xi[keep], eta[keep])) * 4 * b**2 / denom[keep]
        i = int(np.argmin(ratio))
        if ratio[i] < best:
            best = float(ratio[i])
            arg = (xi[keep][i].tolist(), eta[keep][i].tolist())
        done += n
    return {
        'case': '{0}{1}{2}'.format(kind, '+' if iota1 > 0 else '-',
                                   '+' if iota2 > 0 else '-'),
        'b': b,
        'samples': samples,
        'min_ratio': best,
        'argmin': arg,
        'passed': best >= 1.0,
    }


def check_est_phi(samples, seed, radius=4.0, threshold=0.25, chunk=200000):
    """
    Empirical constant of |Phi| >= c |xi1 + xi2| / (1 + |xi1| + |xi2|)^2 for
    Phi = <xi1> +- <xi2> +- |xi1 + xi2|, per sign pair.
    """
    rng = Generator(PCG64(seed))
    constants = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            best = math.inf
            done = 0
            while done < samples:
                n = min(chunk, samples - done)
                x1 = sample_ball(rng, n, radius)
                x2 = sample_ball(rng, n, radius)
                total = _norm(x1 + x2)
                keep = total > 1e-12
                phi = bracket(x1, axis=-1) + s1 * bracket(x2, axis=-1) + s2 * total
                ratio = (np.abs(phi[keep]) * (1 + _norm(x1[keep]) + _norm(x2[keep]))**2 /
                         total[keep])
                best = min(best, float(np.min(ratio)))
                done += n
            constants['{0}{1}'.format('+' if s1 > 0 else '-',
                                      '+' if s2 > 0 else '-')] = best
    get_logger().info('Quadratic phase lower-bound constants {0!r}'.format(constants))
    worst = min(constants.values())
    return CheckResult.judge('phase.est_phi', worst >= threshold,
                             measured=constants, threshold=threshold)


def fit_taylor_remainder(kind, iota, samples, seed, small=0.1, large=2.0):
    """C in |Phi - Phi0| <= C |small variable|^2 over sampled points."""
    rng = Generator(PCG64(seed))
    if kind == 'wa-bulk':
        xi = sample_ball(rng, samples, small)
        eta = sample_ball(rng, samples, large)
        exact = phase_wa(iota, -iota, xi, eta)
        scale = _norm(xi)
    elif kind == 'kg-highlow':
        xi = sample_ball(rng, samples, large)
        eta = sample_ball(rng, samples, small)
        exact = phase_kg(1, iota, xi, eta)
        scale = _norm(eta)
    else:
        raise UnsupportedPhaseError(name=kind)
    keep = scale > 1e-9
    remainder = np.abs(exact - leading_phase(kind, iota, xi, eta))
    return float(np.max(remainder[keep] / scale[keep]**2))


def _probe_axis(half_width, t, points_per_wave):
    top = max(t * half_width, 1.0)
    count = int(math.ceil(2 * half_width * top * points_per_wave / (2 * math.pi)))
    count = max(count, 2001)
    if count % 2 == 0:
        count += 1
    return np.linspace(-half_width, half_width, count)


def _integrate(model, t, points_per_wave):
    x = _probe_axis(model['half_width'], t, points_per_wave)
    if model.get('separable'):
        line = simpson(np.exp(1j * t * model['phase'](x)) * model['amplitude'](x), x=x)
        return line**model['dimension']
    if model['dimension'] == 1:
        return simpson(np.exp(1j * t * model['phase'](x)) * model['amplitude'](x), x=x)
    X, Y, Z = np.meshgrid(x, x, x, indexing='ij')
    values = np.exp(1j * t * model['phase'](X, Y, Z)) * model['amplitude'](X, Y, Z)
    return simpson(simpson(simpson(values, x=x, axis=2), x=x, axis=1), x=x)


PROBE_MODELS = {
    'quadratic-gaussian': {
        'dimension': 3,
        'separable': True,
        'half_width': 10.0,
        'phase': lambda x: 0.5 * x**2,
        'amplitude': lambda x: np.exp(-0.5 * x**2),
        'amplitude_at_critical': 1.0,
        'hessian_det': 1.0,
    },
    'linear-bump': {
        'dimension': 1,
        'separable': False,
        'half_width': 2.0,
        'phase': lambda x: x,
        'amplitude': lambda x: bump(x),
    },
}


def stationary_phase_probe(model, t_list, points_per_wave=64, rtol=1e-4, atol=1e-13):
    """
    Evaluates I(t) = int exp(i t phase) amplitude dx by quadrature for each
    t and fits |I(t)| ~ c t^(-p). A half-resolution rerun bounds the
    quadrature error.
    """
    if isinstance(model, str):
        if model not in PROBE_MODELS:
            raise ConfigurationError(name=model, message="Unknown probe model")
        model = PROBE_MODELS[model]

    scale = abs(_integrate(model, 0.0, points_per_wave))
    values = []
    for t in t_list:
        fine = _integrate(model, t, points_per_wave)
        coarse = _integrate(model, t, points_per_wave / 2.0)
        if abs(fine - coarse) > rtol * abs(fine) + atol * max(scale, 1.0):
            raise AccuracyError(name='t={0!r}'.format(t))
        values.append(fine)

    positive = [t for t in t_list if t > 0]
    magnitudes = [abs(v) for t, v in zip(t_list, values) if t > 0]
    rv = {'values': values, 'integral_at_zero': scale}
    if len(positive) >= 2:
        p, c = fit_power_law(positive, magnitudes)
        rv['exponent'] = -p
        rv['coefficient'] = c
    if 'hessian_det' in model:
        rv['predicted_coefficient'] = ((2 * math.pi)**(model['dimension'] / 2.0) *
                                       model['amplitude_at_critical'] /
                                       math.sqrt(abs(model['hessian_det'])))
    return rv
