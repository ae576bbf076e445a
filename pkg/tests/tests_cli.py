import json

import pytest

from weak_ot import __version__
from weak_ot.catalog import ResultRow
from weak_ot.cli import CSV, HEADER, JSONL, emit_report, run_cli


def run(tmp_path, *args, name='report.out'):
    out = tmp_path / name
    status = run_cli(list(args) + ['--out', str(out)])
    return status, out.read_bytes() if out.exists() else None


# Reports
# =======

def test_emit_csv():
    data = emit_report([ResultRow('x', 10, 0.5, 0.4, 0.6)], CSV)
    assert data == (
        b'scenario,trials,p_hat,ci_low,ci_high,target,margin,verdict\n'
        b'x,10,0.5000000000,0.4000000000,0.6000000000,,,INFO\n'
    )


def test_emit_jsonl():
    data = emit_report([ResultRow('x', 10, 0.5, 0.4, 0.6, 0.5, 0.0, 'PASS')], JSONL)
    line, = data.decode('utf-8').splitlines()
    event = json.loads(line)
    assert list(event) == ['seq', 'phase', 'actor', 'payload']
    assert event['phase'] == 'outcome'
    assert event['payload']['type'] == 'report-row'
    assert event['payload']['verdict'] == 'PASS'


def test_emit_unknown_format():
    with pytest.raises(ValueError) as e:
        emit_report([], 'xml')
    assert str(e.value) == "Unsupported format 'xml', choose one of csv, jsonl."


# Invocation
# ==========

def test_passing_scenario(tmp_path):
    status, data = run(tmp_path, '--scenario', 'cks-bound-quantities')
    assert status == 0
    lines = data.decode('utf-8').splitlines()
    assert lines[0] == ','.join(HEADER)
    assert len(lines) == 5
    assert all(line.endswith(',PASS') for line in lines[1:])


def test_output_is_reproducible(tmp_path):
    args = ['--scenario', 'cks-basis-attack', '--trials', '300', '--seed', '3']
    _, first = run(tmp_path, *args, name='first.csv')
    _, second = run(tmp_path, *args, '--workers', '3', name='second.csv')
    assert first == second
    assert first.startswith(b'scenario,')


def test_jsonl_format(tmp_path):
    status, data = run(tmp_path, '--scenario', 'cks-bound-quantities', '--format', 'jsonl')
    assert status == 0
    lines = data.decode('utf-8').splitlines()
    assert len(lines) == 4
    assert [json.loads(line)['seq'] for line in lines] == [0, 1, 2, 3]


def test_repeated_scenarios(tmp_path):
    status, data = run(
        tmp_path, '--scenario', 'cks-bound-quantities', '--scenario', 'fuchs-vdg', '--trials', '20',
    )
    assert status == 0
    assert len(data.decode('utf-8').splitlines()) == 6


def test_config_document(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'scenario': 'cks-bound-quantities', 'format': 'jsonl'}))
    status, data = run(tmp_path, '--config', str(config))
    assert status == 0
    assert data.startswith(b'{"seq":0,')


def test_custom_with_n(tmp_path):
    status, data = run(
        tmp_path, '--scenario', 'custom', '--n', '6', '--alice', 'basis-attack', '--trials', '20',
    )
    assert status == 0
    assert data.decode('utf-8').splitlines()[1].startswith('custom:alice,20,')


# Usage errors
# ============

def test_unknown_scenario(tmp_path):
    status, data = run(tmp_path, '--scenario', 'bogus')
    assert status == 2
    assert data is None


def test_missing_scenario(tmp_path):
    status, _ = run(tmp_path)
    assert status == 2


def test_n_should_be_multiple_of_three(tmp_path):
    status, _ = run(tmp_path, '--scenario', 'custom', '--n', '4')
    assert status == 2


def test_trials_should_be_positive(tmp_path):
    status, _ = run(tmp_path, '--scenario', 'fuchs-vdg', '--trials', '0')
    assert status == 2


def test_unknown_strategy(tmp_path):
    status, _ = run(tmp_path, '--scenario', 'custom', '--alice', 'eve')
    assert status == 2


def test_strategy_flags_need_custom(tmp_path):
    status, data = run(tmp_path, '--scenario', 'cks-basis-attack', '--alice', 'honest', '--trials', '20')
    assert status == 2
    assert data is None


def test_unknown_config_key(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'scenario': 'custom', 'colour': 'blue'}))
    status, _ = run(tmp_path, '--config', str(config))
    assert status == 2


def test_missing_config(tmp_path):
    status, _ = run(tmp_path, '--config', str(tmp_path / 'missing.json'))
    assert status == 2


def test_unwritable_output(tmp_path):
    status = run_cli(['--scenario', 'cks-bound-quantities', '--out', str(tmp_path / 'no' / 'such.csv')])
    assert status == 2


def test_version(capsys):
    assert run_cli(['--version']) == 0
    assert capsys.readouterr().out.strip() == __version__
