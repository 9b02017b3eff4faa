import math

import numpy as np
import pytest

from wkglab.lib.errors import ConfigurationError, InputError, ShapeError
from wkglab.models.check import PASS
from wkglab.models.field import SpectralField
from wkglab.models.grid import make_grid
from wkglab.models.scattering import (ScatteringData, ResonantCache, CacheConfig,
                                      CACHE_QUANTITIES)
from wkglab.services.asymptotics import (cache_times, sub_grid, build_cache,
                                         leading_kg_interaction, phase_corrected_data,
                                         resonant_profile, compute_phase_correction,
                                         export_cache, load_cache, low_cutoff)
from wkglab.services.data import make_data, PRESETS
from wkglab.services.verification import (asymptotics_suite, b_decay_exponent, d_growth_ratio,
                                          refinement_shift, horizon_shift)


def small_cache_config(**overrides):
    kwargs = {'t_max': 4.0, 'max_step': 1.0, 'extra_times': (), 'slow_dt': 0.25,
              'fine_dt': 0.25}
    kwargs.update(overrides)
    return CacheConfig(**kwargs)


@pytest.fixture(scope='module')
def data():
    return make_data(make_grid(8, 4 * math.pi), 'gaussian-both', eps=0.05, width=0.4)


@pytest.fixture(scope='module')
def cache(data):
    return build_cache(data, small_cache_config())


class TestUnitCacheNodes(object):
    def test_default_horizon(self):
        times = cache_times(200.0)
        assert times[0] == 0.0
        assert times[-1] == 200.0
        assert all(b > a for a, b in zip(times, times[1:]))
        assert max(b - a for a, b in zip(times, times[1:])) <= 4.0 + 1e-12
        for t in (1.0, 2.0, 10.0, 40.0, 128.0):
            assert any(abs(s - t) < 1e-12 for s in times)

    def test_extra_times_outside_horizon_ignored(self):
        times = cache_times(8.0, extra_times=(10.0, 40.0))
        assert times[-1] == 8.0
        assert 10.0 not in times

    def test_sub_grid_is_even(self):
        for a, b, dt in ((0.0, 1.0, 0.3), (1.0, 1.1, 0.5), (0.0, 4.0, 0.05)):
            s = sub_grid(a, b, dt)
            assert (len(s) - 1) % 2 == 0
            assert s[0] == a and s[-1] == b
            assert np.max(np.diff(s)) <= dt + 1e-12

    def test_cache_rejects_bad_nodes(self, grid):
        with pytest.raises(ConfigurationError):
            ResonantCache(grid, [0.0, 2.0, 1.0, 3.0], 3.0)
        with pytest.raises(ConfigurationError):
            ResonantCache(grid, [0.5, 1.0], 1.0)

    def test_cache_config_validation(self):
        with pytest.raises(ConfigurationError):
            small_cache_config(rule='gauss')
        with pytest.raises(ConfigurationError):
            small_cache_config(t_max=0.0)


class TestUnitZeroData(object):
    def test_everything_vanishes(self, grid):
        cache = build_cache(ScatteringData.zeros(grid), small_cache_config())
        for name in CACHE_QUANTITIES:
            assert all(f.sup_norm() == 0.0 for f in cache.series(name))
        assert cache.tails == {'B_tail': 0.0, 'D_tail': 0.0}


class TestUnitResonantCache(object):
    def test_initial_values(self, cache):
        assert cache.at('Hcal', 0.0).sup_norm() == 0.0
        assert cache.at('D', 0.0).sup_norm() == 0.0

    def test_b_vanishes_at_horizon(self, cache):
        assert cache.at('B', 4.0).sup_norm() == 0.0
        assert cache.series('B')[0].sup_norm() > 0.0

    def test_phase_correction_is_real_and_vanishes_at_origin(self, cache):
        for C in cache.series('C'):
            assert np.all(C.values.imag == 0.0)
            assert C.values[0, 0, 0] == 0.0
        assert np.any(cache.at('C', 1.0).values)

    def test_wave_bulk_is_localized(self, data, cache):
        grid = data.grid
        H = cache.at('H', 2.0)
        outside = low_cutoff(grid, 2.0) == 0
        assert not np.any(H.values[outside])

    def test_leading_interaction_matches_phase_correction(self, data, cache):
        for t in (1.0, 2.0):
            C = cache.at('C', t).values.real
            expected = 1j * C * phase_corrected_data(data, cache.at('D', t)).values
            got = leading_kg_interaction(data, cache, t).values
            scale = max(np.max(np.abs(expected)), 1e-300)
            assert np.max(np.abs(got - expected)) <= 1e-10 * scale

    def test_interpolation(self, cache):
        D1 = cache.at('D', 1.0)
        assert np.allclose(cache.interpolate('D', 0.5).values, 0.5 * D1.values,
                           rtol=0, atol=1e-15)
        C, D = compute_phase_correction(cache, 1.0)
        assert np.array_equal(D.values, D1.values)

    def test_h_only_at_nodes(self, cache):
        with pytest.raises(InputError):
            cache.interpolate('h', 0.5)
        with pytest.raises(InputError):
            cache.at('C', 0.3)
        with pytest.raises(InputError):
            cache.interpolate('D', 5.0)
        with pytest.raises(InputError):
            cache.series('E')

    def test_resonant_profile(self, data, cache):
        state = resonant_profile(data, cache, 0.0)
        assert np.array_equal(state.V_wa.values, data.V_wa.values)
        without = resonant_profile(data, cache, 0.0, include_B=False)
        B = cache.at('B', 0.0).values
        assert np.allclose((state.V_kg - without.V_kg).values, B, rtol=0,
                           atol=1e-14 * np.max(np.abs(without.V_kg.values)))

    def test_wrong_grid(self, cache):
        other = make_data(make_grid(8, 2 * math.pi), 'gaussian-kg')
        with pytest.raises(ConfigurationError):
            resonant_profile(other, cache, 0.0)

    def test_export_and_load(self, cache, tmp_path):
        directory = export_cache(cache, str(tmp_path / 'cache'))
        loaded = load_cache(directory)
        assert loaded.times == cache.times
        assert loaded.t_max == cache.t_max
        assert loaded.grid == cache.grid
        for name in CACHE_QUANTITIES:
            for a, b in zip(loaded.series(name), cache.series(name)):
                assert np.array_equal(a.values, b.values)

    def test_load_missing_manifest(self, tmp_path):
        with pytest.raises(InputError):
            load_cache(str(tmp_path))


class TestUnitScatteringData(object):
    @pytest.mark.parametrize('preset', PRESETS)
    def test_presets_are_real(self, grid, preset):
        d = make_data(grid, preset, eps=0.1, seed=3)
        assert d.V_kg.symmetry_defect() < 1e-12
        assert d.recipe['preset'] == preset
        assert d.V_kg.sup_norm() > 0

    def test_wave_component(self, grid):
        assert make_data(grid, 'gaussian-kg').V_wa.sup_norm() == 0.0
        assert make_data(grid, 'gaussian-both').V_wa.sup_norm() > 0.0

    def test_seed_is_reproducible(self, grid):
        a = make_data(grid, 'gaussian-kg', seed=7)
        b = make_data(grid, 'gaussian-kg', seed=7)
        assert np.array_equal(a.V_kg.values, b.V_kg.values)
        assert a.recipe['centre'] != make_data(grid, 'gaussian-kg').recipe['centre']

    def test_zero_amplitude(self, grid):
        assert make_data(grid, 'gaussian-kg', eps=0.0).is_zero()

    def test_bad_recipes(self, grid):
        with pytest.raises(ConfigurationError):
            make_data(grid, 'soliton')
        with pytest.raises(ConfigurationError):
            make_data(grid, eps=-1.0)
        with pytest.raises(ConfigurationError):
            make_data(grid, width=0.0)

    def test_mixed_grids(self, grid):
        other = make_data(make_grid(8, 4 * math.pi))
        with pytest.raises(ShapeError):
            ScatteringData(make_data(grid).V_wa, other.V_kg)


def synthetic_cache(grid, times, **series):
    return ResonantCache(grid, times, times[-1], dict(
        (name, [SpectralField(grid, make(t), 'kg') for t in times])
        for name, make in series.items()))


class TestUnitEnvelopes(object):
    TIMES = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]

    def test_b_decay_exponent(self, grid):
        shape = np.exp(-grid.xi_norm**2)
        fast = synthetic_cache(grid, self.TIMES, b=lambda t: shape * (1 + t)**-1.2)
        slow = synthetic_cache(grid, self.TIMES, b=lambda t: shape * (1 + t)**-0.5)
        assert b_decay_exponent(fast) <= -0.9
        assert b_decay_exponent(slow) > -0.9

    def test_b_decay_needs_three_samples(self, grid):
        times = [0.0, 1.0, 2.0, 3.0]
        cache = synthetic_cache(grid, times, b=lambda t: np.ones(grid.shape))
        assert b_decay_exponent(cache) is None
        assert b_decay_exponent(synthetic_cache(grid, self.TIMES)) is None

    def test_d_growth_ratio(self, grid):
        cache = synthetic_cache(grid, self.TIMES, D=lambda t: 0.5 * grid.xi_norm *
                                math.log(math.sqrt(1 + t * t))**2)
        assert d_growth_ratio(cache) == pytest.approx(0.5, rel=1e-12)
        # nodes before t = 2 are not weighed
        early = synthetic_cache(grid, self.TIMES, D=lambda t: (1.0 if t < 2 else 0.0) *
                                grid.xi_norm)
        assert d_growth_ratio(early) == 0.0


class TestUnitRefinement(object):
    def test_halving_the_slow_step(self, data):
        config = CacheConfig(t_max=10.0, max_step=1.0, extra_times=(), slow_dt=0.0125)
        fine = refinement_shift(data, config, t=10.0)
        assert fine['t'] == 10.0
        assert 0.0 < fine['Hcal'] <= 1e-6
        coarse = refinement_shift(data, CacheConfig(t_max=10.0, max_step=1.0,
                                                    extra_times=(), slow_dt=0.05), t=10.0)
        assert coarse['Hcal'] > fine['Hcal']

    def test_horizon_doubling_adds_the_tail(self, data, cache):
        doubled = build_cache(data, small_cache_config().with_horizon(8.0))
        below = [t for t in doubled.times if t <= 4.0]
        assert below == cache.times
        tail = np.abs(doubled.at('B', 4.0).values)
        assert np.max(tail) > 0
        for t in cache.times:
            gap = np.abs(doubled.at('B', t).values - cache.at('B', t).values)
            assert np.allclose(gap, tail, rtol=1e-9, atol=1e-12 * np.max(tail))

    def test_horizon_shift(self, data, cache):
        shift = horizon_shift(data, cache, small_cache_config(), 2.0)
        doubled = build_cache(data, small_cache_config().with_horizon(8.0))
        expected = doubled.at('B', 4.0).l2_norm() / doubled.at('B', 2.0).l2_norm()
        assert shift['t'] == 2.0
        assert shift['rel_shift'] == pytest.approx(expected, rel=1e-6)


class TestUnitAsymptoticsSuite(object):
    CONFIG = {
        'GRID_N': 8, 'GRID_L': 4 * math.pi, 'THREADS': 1,
        'DATA_PRESET': 'gaussian-both', 'EPS': 0.05, 'DATA_WIDTH': 0.4,
        'T_MAX': 4.0, 'CACHE_MAX_STEP': 1.0, 'CACHE_EXTRA_TIMES': [],
        'SLOW_QUADRATURE_DT': 0.0125, 'QUADRATURE_DT': 0.25,
        'VERIFY_HORIZON_DOUBLING': True,
    }

    def test_checks(self):
        results = dict((r.name, r) for r in asymptotics_suite(self.CONFIG))
        assert results['asymptotics.D_growth'].status == PASS
        assert results['asymptotics.leading_interaction'].status == PASS
        refinement = results['asymptotics.quadrature_refinement']
        assert refinement.status == PASS
        assert refinement.measured['t'] == 4.0

        horizon = results['asymptotics.horizon_doubling']
        assert horizon.measured['t'] == 2.0
        shift = horizon.measured['rel_shift']
        assert (horizon.status == PASS) == (shift <= 0.05)
        assert results['asymptotics.data_norms'].status == PASS

    def test_horizon_doubling_can_be_switched_off(self):
        config = dict(self.CONFIG, VERIFY_HORIZON_DOUBLING=False, SLOW_QUADRATURE_DT=0.25,
                      VERIFY_REFINEMENT_TOL=1.0)
        names = [r.name for r in asymptotics_suite(config)]
        assert 'asymptotics.horizon_doubling' not in names
        assert 'asymptotics.quadrature_refinement' in names
