import pytest

from wkglab.lib.errors import ConfigurationError, InputError
from wkglab.models.field import SpectralField
from wkglab.models.norm import NormParams, NormSnapshot
from wkglab.services.littlewood_paley import random_field
from wkglab.services.norms import norm_Y, norm_timeweighted, norm_X, sobolev_term
from tests.conftest import single_mode_field


@pytest.fixture
def params():
    return NormParams(n1=1, order=0)


class TestUnitNormParams(object):
    def test_exponent_tables(self):
        params = NormParams()
        assert params.N(0) == 40
        assert params.N(-3) == 70
        assert params.H(1) == 600
        assert params.H2(0) == params.H(1)
        assert params.N2(1) == 25

    def test_order_cap(self):
        with pytest.raises(ConfigurationError):
            NormParams(order=3)

    def test_from_config(self):
        params = NormParams.from_config({'NORM_N1': 2, 'VECTOR_FIELD_ORDER': 0})
        assert params.n1 == 2
        assert params.order == 0
        assert params.to_dict()['n0'] == 40


class TestUnitNormSnapshot(object):
    def test_max_and_sum(self):
        snap = NormSnapshot('S1', breakdown={'a': 1.0, 'b': 3.0})
        assert snap.value == 3.0
        snap.combine = 'sum'
        assert snap.value == 4.0
        assert NormSnapshot('T1').value == 0.0

    def test_record_keeps_supremum(self):
        snap = NormSnapshot('T2')
        snap.record('a', 2.0)
        snap.record('a', 1.0)
        assert snap.breakdown['a'] == 2.0

    def test_unknown_combine_rule(self):
        with pytest.raises(ConfigurationError):
            NormSnapshot('Y1', combine='mean')

    def test_combine_rules_per_family(self, grid, params):
        f = random_field(grid, 7, tag='wa')
        Y = norm_Y(f, 'Y1', params)
        S = norm_timeweighted([(0.0, f)], 'S1', params)
        X = norm_X([(0.0, f)], [(0.0, f)], 'X1', params)
        assert (Y.combine, S.combine, X.combine) == ('sum', 'max', 'sum')
        assert S.value == max(S.breakdown.values())
        # every summand of Y and X is itself a supremum over its detail
        for part in ('sobolev', 'weighted'):
            entries = [v for k, v in Y.detail.items() if k.startswith(part + '/')]
            assert Y.breakdown[part] == max(entries)
        for family, value in X.breakdown.items():
            entries = [v for k, v in X.detail.items() if k.startswith(family + '/')]
            assert value == max(entries)
            assert X.value >= value


class TestUnitDataNorms(object):
    def test_zero_field(self, grid, params):
        snap = norm_Y(SpectralField.zeros(grid, 'kg'), 'Y2', params)
        assert snap.value == 0.0

    def test_skipped_orders(self, grid, params):
        snap = norm_Y(random_field(grid, 0), 'Y1', params)
        assert snap.order_cap == 0
        assert snap.skipped_orders == [1, 2, 3]
        assert snap.value == snap.breakdown['sobolev'] + snap.breakdown['weighted']

    def test_single_mode_sobolev_entry(self, grid, params):
        f = single_mode_field(grid, (1.0, 0.0, 0.0), amplitude=0.5, tag='kg')
        snap = norm_Y(f, 'Y2', params)
        # <xi0>^N(-3) |a| dxi^(3/2) with <xi0> = sqrt(2)
        assert snap.detail['sobolev/n=0/id'] == pytest.approx(2.0**35 * 0.5, rel=1e-12)

    def test_wave_weight(self, grid):
        f = single_mode_field(grid, (2.0, 0.0, 0.0), amplitude=1.0, tag='wa')
        assert sobolev_term(f, 0, wave=True) == pytest.approx(2.0**-0.5, rel=1e-12)
        assert sobolev_term(f, 1, wave=False) == pytest.approx(5.0**0.5, rel=1e-12)

    def test_unknown_norm(self, grid, params):
        with pytest.raises(ConfigurationError):
            norm_Y(random_field(grid, 1), 'Y3', params)


class TestUnitTimeWeightedNorms(object):
    def test_single_time_sobolev(self, grid, params):
        f = single_mode_field(grid, (1.0, 0.0, 0.0), amplitude=0.5, tag='kg')
        snap = norm_timeweighted([(0.0, f)], 'S2', params)
        assert snap.value == pytest.approx(2.0**20 * 0.5, rel=1e-12)
        assert snap.skipped_orders == [1]

    def test_primed_needs_derivative(self, grid, params):
        with pytest.raises(InputError):
            norm_timeweighted([(0.0, random_field(grid, 2))], "S'1", params)

    def test_unknown_family(self, grid, params):
        with pytest.raises(ConfigurationError):
            norm_timeweighted([(0.0, random_field(grid, 3))], 'U1', params)

    def test_times_must_increase(self, grid, params):
        f = random_field(grid, 4)
        with pytest.raises(InputError):
            norm_timeweighted([(1.0, f), (0.5, f)], 'T1', params)

    def test_working_norm_is_sum(self, grid, params):
        f = random_field(grid, 5, tag='wa')
        g = random_field(grid, 6, tag='wa')
        series = [(0.0, f), (1.0, f)]
        derivative = [(0.0, g), (1.0, g)]
        snap = norm_X(series, derivative, 'X1', params)
        assert set(snap.breakdown) == {'S1', 'T1', "S'1", "T'1"}
        assert snap.value == pytest.approx(sum(snap.breakdown.values()))
        assert snap.skipped_orders == [1]

    def test_unknown_working_norm(self, grid, params):
        with pytest.raises(ConfigurationError):
            norm_X([], [], 'X3', params)
