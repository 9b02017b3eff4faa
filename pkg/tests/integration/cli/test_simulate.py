import json
import os

from wkglab.lib.utils import read_csv, read_json


class TestIntegrationSimulate(object):
    def test_zero_amplitude(self, runner, tmp_path):
        out = str(tmp_path / 'run')
        result = runner.invoke(args=['simulate', '--eps', '0', '--output', out])
        assert result.exit_code == 0, result.output
        rows = read_csv(os.path.join(out, 'diagnostics.csv'))
        assert rows[0] == ['t', 'name', 'value']
        assert all(float(value) == 0.0 for _, _, value in rows[1:])
        assert os.path.exists(os.path.join(out, 'snapshots', 'step_20_kg.wkgs'))

        manifest = read_json(os.path.join(out, 'manifest.json'))
        assert manifest['command'] == 'simulate'
        assert manifest['exit_code'] == 0
        assert manifest['grid'] == {'n': 8, 'length': manifest['config']['grid']['L']}
        assert 'diagnostics.csv' in manifest['outputs']

    def test_same_seed_same_output(self, runner, tmp_path):
        texts = []
        for name in ('a', 'b'):
            out = str(tmp_path / name)
            result = runner.invoke(args=['simulate', '--seed', '5', '--output', out,
                                         '--t-end', '0.5'])
            assert result.exit_code == 0, result.output
            with open(os.path.join(out, 'diagnostics.csv')) as f:
                texts.append(f.read())
        assert texts[0] == texts[1]

    def test_odd_grid(self, runner, tmp_path):
        result = runner.invoke(args=['simulate', '--n', '7', '--output', str(tmp_path)])
        assert result.exit_code == 2
        assert not os.path.exists(os.path.join(str(tmp_path), 'diagnostics.csv'))

    def test_unknown_document_key(self, runner, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'grid': {'n': 8}, 'colour': 'red'}))
        result = runner.invoke(args=['simulate', '--config', str(path),
                                     '--output', str(tmp_path / 'out')])
        assert result.exit_code == 2
        assert 'colour' in result.output

    def test_time_step_too_large(self, runner, tmp_path):
        result = runner.invoke(args=['simulate', '--dt', '0.5',
                                     '--output', str(tmp_path)])
        assert result.exit_code == 2

    def test_blowup(self, runner, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'solver': {'blowup_threshold': 1e-30}}))
        out = str(tmp_path / 'out')
        result = runner.invoke(args=['simulate', '--config', str(path), '--output', out])
        assert result.exit_code == 3
        assert 'last_good_time: 0.0' in result.output
        assert os.listdir(os.path.join(out, 'dump'))
