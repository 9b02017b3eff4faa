"""
Dyadic localization in frequency, space and time.

The base bump is phi(z) = s(2 - z) / (s(2 - z) + s(z - 1)) with
s(r) = exp(-1/r) for r > 0 and 0 otherwise: it equals 1 on z <= 1 and 0 on
z >= 2, and every cutoff below is a difference of its dilates.
"""
import contextlib
import math

import numpy as np

from ..lib.errors import RangeError, DomainError
from ..lib.utils import get_logger
from ..models.check import CheckResult
from ..models.field import SpectralField
from .spectral import forward_array, inverse_array, xi_derivative


def _sigma(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def smooth_bump(z):
    z = np.abs(np.asarray(z, dtype=float))
    a = _sigma(2.0 - z)
    b = _sigma(z - 1.0)
    return a / (a + b)


_bump = smooth_bump


def bump(z):
    return _bump(z)


@contextlib.contextmanager
def broken_bump():
    """Swap in a bump whose dyadic pieces do not sum to one."""
    global _bump

    def broken(z):
        return 0.9 * smooth_bump(z)

    saved = _bump
    _bump = broken
    try:
        yield
    finally:
        _bump = saved


def phi_leq(z, a):
    return bump(np.asarray(z, dtype=float) / 2.0**a)


def dyadic_cutoff(z, k):
    """phi_k(z) = phi(z / 2^k) - phi(z / 2^(k-1))."""
    return phi_leq(z, k) - phi_leq(z, k - 1)


def phi_j_k(z, j, k, j_max=None):
    """
    Spatial piece phi_j^(k): phi_j for j > -k^-, phi_{<=j} at j = -k^-.
    With j_max given, the piece at j_max absorbs the rest of the box.
    """
    z = np.asarray(z, dtype=float)
    j_lo = max(-k, 0)
    top = None if j_max is None else max(j_max, j_lo)
    if j < j_lo or (top is not None and j > top):
        return np.zeros_like(z)
    upper = np.ones_like(z) if j == top else phi_leq(z, j)
    lower = 0.0 if j == j_lo else phi_leq(z, j - 1)
    return upper - lower


def time_cutoff(t, m):
    """tau_m: tau for m = 0, tau(t/2^m) - tau(t/2^(m-1)) otherwise."""
    if m == 0:
        return phi_leq(t, 0)
    return phi_leq(t, m) - phi_leq(t, m - 1)


def resolvable_window(grid):
    k_min = int(math.ceil(math.log2(grid.spacing) - 1e-12))
    k_max = int(math.floor(math.log2(grid.axis_max) + 1e-12)) + 1
    return k_min, k_max


def band_mask(grid):
    k_min, k_max = resolvable_window(grid)
    r = grid.xi_norm
    return (r >= 2.0**k_min) & (r <= 2.0**k_max)


def spatial_window(grid):
    return int(math.ceil(math.log2(grid.length / 2.0)))


def check_shell(grid, k):
    k_min, k_max = resolvable_window(grid)
    if not k_min <= k <= k_max:
        raise RangeError(name='k={0}, valid [{1}, {2}]'.format(k, k_min, k_max))


def shell_multiplier(grid, k):
    return dyadic_cutoff(grid.xi_norm, k)


def project_P_k(field, k, strict=True):
    grid = field.grid
    k_min, k_max = resolvable_window(grid)
    if not k_min <= k <= k_max:
        if strict:
            check_shell(grid, k)
        get_logger().warning(
            'Shell k={0} outside [{1}, {2}] contributes zero'.format(
                k, k_min, k_max))
        return field.with_values(np.zeros(grid.shape))
    return field.with_values(shell_multiplier(grid, k) * field.values)


def project_band(field, k_lo, k_hi):
    r = field.grid.xi_norm
    return field.with_values(
        (phi_leq(r, k_hi) - phi_leq(r, k_lo - 1)) * field.values)


def check_pair(k, j):
    if j < 0 or j + min(k, 0) < 0:
        raise DomainError(name='(k={0}, j={1})'.format(k, j))


def spatial_piece(grid, j, k):
    return phi_j_k(grid.x_norm, j, k, j_max=spatial_window(grid))


def project_Q_jk(field, j, k):
    check_pair(k, j)
    grid = field.grid
    pk = project_P_k(field, k)
    physical = inverse_array(grid, pk.values) * spatial_piece(grid, j, k)
    return field.with_values(forward_array(grid, physical))


def project_scriptQ_jk(field, j, k):
    return project_band(project_Q_jk(field, j, k), k - 2, k + 2)


def j_range(grid, k):
    return range(max(-k, 0), max(spatial_window(grid), max(-k, 0)) + 1)


def project_Q_leq(field, j, k):
    """Partial sum of Q_j'k over -k^- <= j' <= j."""
    out = SpectralField.zeros(field.grid, field.tag)
    for jj in range(max(-k, 0), j + 1):
        out = out + project_Q_jk(field, jj, k)
    return out


def project_scriptQ_leq(field, j, k):
    return project_band(project_Q_leq(field, j, k), k - 2, k + 2)


def ak_bk(field, k):
    """
    A_k = |P_k f| + sum_l |phi_k d_xi_l f| and
    B_k = (sum_j 4^j |Q_jk f|^2)^(1/2).
    """
    grid = field.grid
    a = project_P_k(field, k).l2_norm()
    mult = shell_multiplier(grid, k)
    for axis in range(3):
        a += field.with_values(mult * xi_derivative(field, axis).values).l2_norm()
    b = math.sqrt(sum(4.0**j * project_Q_jk(field, j, k).l2_norm()**2
                      for j in j_range(grid, k)))
    return a, b


def random_field(grid, seed, tag='scalar'):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralField(grid, values, tag=tag)


def smooth_random_field(grid, seed, bumps=3, tag='scalar'):
    """Sum of a few randomly placed Gaussians, transformed."""
    rng = np.random.default_rng(seed)
    physical = np.zeros(grid.shape)
    for _ in range(bumps):
        centre = rng.uniform(-0.1, 0.1, size=3) * grid.length
        width = rng.uniform(0.08, 0.15) * grid.length
        r2 = sum((grid.x[i] - centre[i])**2 for i in range(3))
        physical = physical + rng.uniform(0.5, 1.5) * np.exp(-r2 / (2 * width**2))
    return SpectralField(grid, forward_array(grid, physical), tag=tag)


def check_partition_identities(grid, seed=0, tol_p=1e-12, tol_q=1e-10):
    f = random_field(grid, seed)
    mask = band_mask(grid)
    k_min, k_max = resolvable_window(grid)

    total = SpectralField.zeros(grid)
    for k in range(k_min, k_max + 1):
        total = total + project_P_k(f, k)
    reference = np.where(mask, f.values, 0.0)
    scale = np.linalg.norm(reference)
    err_p = float(np.linalg.norm(np.where(mask, total.values, 0.0) - reference) / scale)

    err_q = 0.0
    err_sq = 0.0
    for k in range(k_min, k_max + 1):
        pk = project_P_k(f, k)
        q_sum = SpectralField.zeros(grid)
        sq_sum = SpectralField.zeros(grid)
        for j in j_range(grid, k):
            q_sum = q_sum + project_Q_jk(f, j, k)
            sq_sum = sq_sum + project_scriptQ_jk(f, j, k)
        norm = max(pk.l2_norm(), np.finfo(float).tiny)
        err_q = max(err_q, (q_sum - pk).l2_norm() / norm)
        err_sq = max(err_sq, (sq_sum - pk).l2_norm() / norm)

    measured = {'sum_P_k': err_p, 'sum_Q_jk': err_q, 'sum_scriptQ_jk': err_sq}
    return CheckResult.judge(
        'lp.partition', err_p <= tol_p and err_q <= tol_p and err_sq <= tol_q,
        measured=measured, threshold={'P': tol_p, 'scriptQ': tol_q})


def check_q_vs_scriptq(grid, seeds=(0, 1, 2), ceiling=1e4):
    """
    Fits C in |Q_jk f - scriptQ_jk f|_sup <= C 2^(3j/2) 2^(-4(j+k)) |P_k f|
    over sampled (j, k, f). This is a trend check on a finite box.
    """
    k_min, k_max = resolvable_window(grid)
    worst = 0.0
    for seed in seeds:
        f = random_field(grid, seed)
        for k in range(k_min, k_max + 1):
            pk_norm = project_P_k(f, k).l2_norm()
            # pieces touching the box boundary are not smooth there
            for j in j_range(grid, k):
                if 2.0**(j + 1) > grid.length / 2.0:
                    continue
                q = project_Q_jk(f, j, k)
                sq = project_band(q, k - 2, k + 2)
                diff = float(np.max(np.abs(q.values - sq.values)))
                bound = 2.0**(1.5 * j) * 2.0**(-4.0 * (j + k)) * pk_norm
                if bound > 0:
                    worst = max(worst, diff / bound)
    get_logger().info('Q vs scriptQ fitted constant {0!r}'.format(worst))
    return CheckResult.judge('lp.q_vs_scriptq', worst <= ceiling,
                             measured={'constant': worst}, threshold=ceiling,
                             note='trend')


def check_bony_support(grid, k1, k2, seed=0, tol=1e-12):
    f = project_P_k(random_field(grid, seed), k1)
    g = project_P_k(random_field(grid, seed + 1), k2)
    product = SpectralField(
        grid,
        forward_array(grid,
                      inverse_array(grid, f.values) * inverse_array(grid, g.values)))
    scale = max(product.l2_norm(), np.finfo(float).tiny)
    k_min, k_max = resolvable_window(grid)
    leak = 0.0
    nonzero = []
    for k in range(k_min, k_max + 1):
        share = project_P_k(product, k).l2_norm() / scale
        if abs(k - k2) > 2:
            leak = max(leak, share)
        elif share > tol:
            nonzero.append(k)
    return CheckResult.judge('lp.bony', leak <= tol,
                             measured={'leak': leak, 'active_shells': nonzero},
                             threshold=tol)


def _neighbour_sum(values, k, k_min, k_max, width=4):
    return sum(values[kk] for kk in range(max(k - width, k_min),
                                          min(k + width, k_max) + 1))


def check_ak_bk(grid, seeds=(0, 1, 2), stability=4.0):
    """
    Constants C with A_k <= C sum_{|k'-k|<=4} B_k' and the reverse bound,
    per seed. Passes when the constants agree across seeds within the
    stability factor.
    """
    k_min, k_max = resolvable_window(grid)
    constants = []
    for seed in seeds:
        f = smooth_random_field(grid, seed)
        A, B = {}, {}
        for k in range(k_min, k_max + 1):
            A[k], B[k] = ak_bk(f, k)
        c = 0.0
        for k in range(k_min, k_max + 1):
            if A[k] > 0:
                c = max(c, A[k] / _neighbour_sum(B, k, k_min, k_max))
            if B[k] > 0:
                if k >= 0:
                    reverse = _neighbour_sum(A, k, k_min, k_max)
                else:
                    reverse = sum(A[kk] * 2.0**(-abs(k - kk) / 2.0)
                                  for kk in range(k_min, k_max + 1))
                c = max(c, B[k] / reverse)
        constants.append(c)
    get_logger().info('A_k ~ B_k constants per seed {0!r}'.format(constants))
    spread = max(constants) / min(constants) if min(constants) > 0 else float('inf')
    return CheckResult.judge('lp.ak_bk', spread <= stability,
                             measured={'constants': constants, 'spread': spread},
                             threshold=stability)
