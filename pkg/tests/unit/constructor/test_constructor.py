import math
import os

import numpy as np
import pytest

from wkglab.lib.errors import NonContractionError, ConfigurationError
from wkglab.lib.utils import read_csv
from wkglab.models.check import PASS
from wkglab.models.grid import make_grid
from wkglab.models.scattering import (ScatteringData, CacheConfig, BuilderConfig,
                                      PerturbationPair)
from wkglab.services.asymptotics import build_cache
from wkglab.services.constructor import (WaveOperatorBuilder, verify_scattering,
                                         consistency_check, forward_backward_check,
                                         first_contraction_ratio, CONTRACTION_LOG)
from wkglab.services.data import make_data
from wkglab.services.profiles import is_even
from wkglab.services.verification import envelope_check, eps_scaling_check

SMALL_CONFIG = {
    'GRID_N': 8, 'GRID_L': 4 * math.pi, 'THREADS': 1, 'EPS': 0.001,
    'T_MAX': 4.0, 'CACHE_MAX_STEP': 1.0, 'CACHE_EXTRA_TIMES': [],
    'SLOW_QUADRATURE_DT': 0.25, 'QUADRATURE_DT': 0.25,
    'FIXED_POINT_TOL': 1e-12, 'FIXED_POINT_MAX_ITER': 8,
}

CACHE = {'t_max': 4.0, 'max_step': 1.0, 'extra_times': (), 'slow_dt': 0.25,
         'fine_dt': 0.25}


def make_builder(data, **overrides):
    kwargs = {'fine_dt': 0.25}
    kwargs.update(overrides)
    cache = build_cache(data, CacheConfig(**CACHE))
    return WaveOperatorBuilder(data, cache, BuilderConfig(**kwargs))


@pytest.fixture(scope='module')
def small_data():
    return make_data(make_grid(8, 4 * math.pi), 'gaussian-kg', eps=0.001, width=0.4)


@pytest.fixture(scope='module')
def converged(small_data):
    builder = make_builder(small_data, tol=1e-12, max_iter=8)
    G, log = builder.iterate_to_fixed_point()
    return builder, G, log


class TestUnitBuilderConfig(object):
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            BuilderConfig(tol=0.0)
        with pytest.raises(ConfigurationError):
            BuilderConfig(max_iter=0)
        with pytest.raises(ConfigurationError):
            BuilderConfig(rule='gauss')


class TestUnitZeroData(object):
    def test_zero_is_fixed_point(self, small_grid):
        builder = make_builder(ScatteringData.zeros(small_grid))
        G, log = builder.iterate_to_fixed_point()
        assert len(log) == 1
        assert log.final_distance == 0.0
        assert G.sup_l2() == 0.0

    def test_zero_residuals(self, small_grid):
        data = ScatteringData.zeros(small_grid)
        builder = make_builder(data)
        G, _ = builder.iterate_to_fixed_point()
        report = verify_scattering(builder.reconstruct_solution(G), data, builder.cache)
        assert report.r_wa == [0.0] * len(builder.times)
        assert report.r_kg == [0.0] * len(builder.times)
        assert report.envelope_constant == 0.0
        assert report.decreasing is None


class TestUnitFixedPointMap(object):
    def test_final_data_are_zero(self, small_data):
        builder = make_builder(small_data)
        G = builder.apply_T(PerturbationPair.zeros(small_data.grid, builder.times))
        assert G.final_data_defect() == 0.0
        assert G.sup_l2() > 0.0

    def test_node_mismatch(self, small_data):
        builder = make_builder(small_data)
        with pytest.raises(ConfigurationError):
            builder.apply_T(PerturbationPair.zeros(small_data.grid, [0.0, 4.0]))

    def test_non_contraction_writes_log(self, small_data, tmp_path):
        builder = make_builder(small_data, tol=1e-300, max_iter=1,
                               log_dir=str(tmp_path))
        with pytest.raises(NonContractionError) as e:
            builder.iterate_to_fixed_point()
        assert e.value.exit_code == 4
        assert e.value.log_path == os.path.join(str(tmp_path), CONTRACTION_LOG)
        rows = read_csv(e.value.log_path)
        assert rows[0] == ['iteration', 'distance', 'ratio']
        assert len(rows) == 2


class TestUnitConvergence(object):
    def test_contracts(self, converged):
        _, G, log = converged
        assert log.final_distance <= 1e-12
        assert len(log) <= 8
        assert all(r < 0.5 for r in log.ratios)
        assert G.final_data_defect() == 0.0

    def test_is_fixed_point(self, converged):
        builder, G, _ = converged
        assert builder.apply_T(G).distance(G) <= 1e-12

    def test_reconstruction_matches_asymptotics_at_horizon(self, small_data, converged):
        builder, G, _ = converged
        profiles = builder.reconstruct_solution(G)
        assert [p.t for p in profiles] == builder.times
        report = verify_scattering(profiles, small_data, builder.cache)
        assert report.r_wa[-1] == 0.0
        assert report.r_kg[-1] == 0.0
        assert report.envelope_constant > 0.0

    def test_consistency_order(self, converged):
        builder, G, _ = converged
        rv = consistency_check(builder, G)
        assert rv['t'] == 0.5
        assert 1.7 <= rv['order'] <= 2.3

    def test_forward_backward_needs_nodes(self, converged):
        builder, G, _ = converged
        with pytest.raises(ConfigurationError):
            forward_backward_check(builder, G, t0=0.3, t1=4.0)

    def test_forward_backward_agrees(self, converged):
        builder, G, _ = converged
        rv = forward_backward_check(builder, G, t0=2.0, t1=4.0, dt=0.05)
        assert rv['discrepancy'] <= 5e-3 * builder.data.eps

    def test_derivative_series(self, converged):
        builder, G, _ = converged
        series = builder.time_derivative_series(G)
        assert len(series) == len(builder.times)
        assert all(np.all(np.isfinite(s.V_kg.values)) for s in series)

    def test_even_data_stay_even(self, small_data, converged):
        _, G, _ = converged
        assert is_even(small_data.V_kg, tol=1e-14)
        for f in G.G_wa + G.G_kg:
            assert is_even(f, tol=1e-10)


class TestUnitConstructionChecks(object):
    def test_first_ratio_halves_with_eps(self, small_grid):
        ratios = []
        for eps in (0.002, 0.001):
            data = make_data(small_grid, 'gaussian-kg', eps=eps, width=0.4)
            ratios.append(first_contraction_ratio(make_builder(data)))
        assert 0 < ratios[1] < ratios[0]
        assert ratios[0] / ratios[1] >= 2.0 / 1.5

    def test_first_ratio_of_zero_data(self, small_grid):
        builder = make_builder(ScatteringData.zeros(small_grid))
        assert first_contraction_ratio(builder) == 0.0

    def test_first_ratio_matches_picard_log(self, converged):
        builder, _, log = converged
        assert first_contraction_ratio(builder) == pytest.approx(log.ratios[0], rel=1e-12)

    def test_eps_scaling_check(self):
        result = eps_scaling_check(SMALL_CONFIG)
        assert result.name == 'construction.eps_scaling'
        assert result.status == PASS, result.measured
        assert len(result.measured['ratios']) == 2
        assert result.measured['gain'] >= 2.0 / 1.5

    def test_envelope_constant_is_stable_across_seeds(self):
        result = envelope_check(SMALL_CONFIG)
        constants = result.measured['constants']
        assert result.status == PASS, result.measured
        assert len(constants) == 3
        assert all(c > 0 for c in constants)
        assert len(set(constants)) == 3
        assert result.measured['spread'] <= 0.5
