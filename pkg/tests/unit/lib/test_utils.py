import json
import math

import numpy as np
import pytest

from wkglab.lib.errors import (InputError, ConfigurationError, BlowUpError,
                               NonContractionError, VerifyFailure, MissingArtifact)
from wkglab.lib.schema import (CheckResultSchema, ContractionLogSchema,
                               NormSnapshotSchema, CacheManifestSchema)
from wkglab.lib.utils import (fit_power_law, observed_order, linear_slope, pretty_json,
                              csv_text, write_csv, read_csv, read_json, bracket)
from wkglab.models.check import CheckResult
from wkglab.models.norm import NormSnapshot
from wkglab.models.scattering import ContractionLog, ResonantCache


class TestUnitFits(object):
    def test_power_law(self):
        t = [1.0, 2.0, 4.0, 8.0]
        p, c = fit_power_law(t, [3.0 * s**-1.5 for s in t])
        assert p == pytest.approx(-1.5)
        assert c == pytest.approx(3.0)

    def test_power_law_drops_non_positive(self):
        p, _ = fit_power_law([0.0, 1.0, 2.0, 4.0], [5.0, 1.0, 0.5, 0.25])
        assert p == pytest.approx(-1.0)

    def test_power_law_needs_two_samples(self):
        with pytest.raises(InputError):
            fit_power_law([1.0, 2.0], [1.0, 0.0])

    def test_observed_order(self):
        steps = [0.1, 0.05, 0.025]
        assert observed_order(steps, [s**4 for s in steps]) == pytest.approx(4.0)

    def test_slope(self):
        assert linear_slope([0, 1, 2], [1.0, 0.5, 0.0]) == pytest.approx(-0.5)

    def test_bracket(self):
        assert bracket(np.array([0.0, 1.0]))[1] == pytest.approx(math.sqrt(2.0))

    def test_bracket_of_vectors(self):
        rows = np.array([[3.0, 4.0, 0.0], [0.0, 0.0, 0.0]])
        assert np.allclose(bracket(rows, axis=-1), [math.sqrt(26.0), 1.0])


class TestUnitSerialization(object):
    def test_json_is_deterministic(self):
        a = pretty_json({'b': np.float64(0.1), 'a': [np.int64(1), np.bool_(True)]})
        b = pretty_json({'a': [1, True], 'b': 0.1})
        assert a == b
        assert json.loads(a) == {'a': [1, True], 'b': 0.1}

    def test_non_finite_values(self):
        assert json.loads(pretty_json({'x': float('inf')})) == {'x': 'inf'}

    def test_csv_floats_round_trip(self, tmp_path):
        path = write_csv(str(tmp_path / 'a' / 'x.csv'), ('t', 'v'), [(0.1, 1 / 3.0)])
        rows = read_csv(path)
        assert rows[0] == ['t', 'v']
        assert float(rows[1][1]) == 1 / 3.0
        assert csv_text(None, [(1, 'a')]) == '1,a\n'

    def test_missing_files(self, tmp_path):
        with pytest.raises(InputError):
            read_csv(str(tmp_path / 'none.csv'))
        with pytest.raises(InputError):
            read_json(str(tmp_path / 'none.json'))


class TestUnitSchemas(object):
    def test_check_result(self):
        result = CheckResult.judge('lp.partition', True, measured={'x': 1e-15},
                                   threshold=1e-12)
        dumped = CheckResultSchema().dump(result)
        assert dumped == {'name': 'lp.partition', 'status': 'PASS',
                          'measured': {'x': 1e-15}, 'threshold': 1e-12, 'note': ''}

    def test_contraction_log(self):
        log = ContractionLog()
        log.add(1e-3)
        log.add(1e-5)
        dumped = ContractionLogSchema().dump(log)
        assert dumped['final_distance'] == 1e-5
        assert dumped['entries'][0]['ratio'] is None
        assert dumped['entries'][1]['ratio'] == pytest.approx(1e-2)
        assert dumped['entries'][1]['iteration'] == 2

    def test_norm_snapshot(self):
        snap = NormSnapshot('X1', breakdown={'S1': 1.0, 'T1': 2.0}, combine='sum',
                            order_cap=1, skipped_orders=[2])
        dumped = NormSnapshotSchema().dump(snap)
        assert dumped['value'] == 3.0
        assert dumped['skipped_orders'] == [2]

    def test_cache_manifest(self, grid):
        cache = ResonantCache(grid, [0.0, 1.0], 1.0)
        dumped = CacheManifestSchema().dump(cache)
        assert dumped['grid'] == {'n': 8, 'length': grid.length}
        assert dumped['times'] == [0.0, 1.0]
        assert dumped['quantities'] == ['h', 'Hcal', 'H', 'C', 'D', 'b', 'B']


class TestUnitErrors(object):
    def test_exit_codes(self):
        assert ConfigurationError().exit_code == 2
        assert MissingArtifact().exit_code == 2
        assert BlowUpError().exit_code == 3
        assert NonContractionError().exit_code == 4
        assert VerifyFailure().exit_code == 5

    def test_message(self):
        e = InputError(name='x.json', message="File not found")
        assert str(e) == 'File not found: x.json'
        assert e.to_dict() == {'msg': 'File not found: x.json', 'exit_code': 2}

    def test_non_contraction_carries_log(self):
        e = NonContractionError(name='ratio 1.2', log_path='/tmp/c.csv')
        assert e.to_dict()['log_path'] == '/tmp/c.csv'
