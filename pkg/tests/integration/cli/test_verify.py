import json
import os

from wkglab.lib.utils import read_json
from wkglab.services.littlewood_paley import broken_bump


def _statuses(path):
    return dict((r['name'], r['status']) for r in read_json(path)['results'])


class TestIntegrationVerify(object):
    def test_selected_sections(self, runner, tmp_path):
        out = str(tmp_path)
        result = runner.invoke(args=['verify', '--section', 'oracle', '--section', 'linear',
                                     '--output', out])
        assert result.exit_code == 0, result.output
        statuses = _statuses(os.path.join(out, 'verify.json'))
        assert statuses['oracle.equivalence'] == 'PASS'
        assert statuses['linear.profile_constancy'] == 'PASS'
        assert statuses['lp'] == 'SKIP'
        assert read_json(os.path.join(out, 'verify.json'))['passed'] is True

    def test_sections_from_document(self, runner, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'verify': {'sections': ['linear']}}))
        out = str(tmp_path / 'out')
        result = runner.invoke(args=['verify', '--config', str(path), '--output', out])
        assert result.exit_code == 0, result.output
        statuses = _statuses(os.path.join(out, 'verify.json'))
        assert statuses['oracle'] == 'SKIP'
        assert statuses['linear.profile_constancy'] == 'PASS'

    def test_broken_partition_fails(self, runner, tmp_path):
        out = str(tmp_path)
        with broken_bump():
            result = runner.invoke(args=['verify', '--section', 'lp', '--output', out])
        assert result.exit_code == 5
        report = read_json(os.path.join(out, 'verify.json'))
        assert report['passed'] is False
        assert 'lp.partition' in report['failed']
        assert 'lp.partition' in result.output

    def test_oracle_skipped_on_large_grid(self, runner, tmp_path):
        out = str(tmp_path)
        result = runner.invoke(args=['verify', '--section', 'oracle', '--n', '16',
                                     '--output', out])
        assert result.exit_code == 0, result.output
        assert _statuses(os.path.join(out, 'verify.json'))['oracle.equivalence'] == 'SKIP'

    def test_oracle_command(self, runner, tmp_path):
        out = str(tmp_path)
        result = runner.invoke(args=['oracle', '--n', '16', '--output', out])
        assert result.exit_code == 0, result.output
        statuses = _statuses(os.path.join(out, 'oracle.json'))
        assert statuses == {'oracle.equivalence': 'PASS', 'oracle.fused_sum': 'PASS'}
        assert read_json(os.path.join(out, 'manifest.json'))['command'] == 'oracle'
