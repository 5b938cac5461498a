import json
import os

import pytest

import prevision_cli
import settings
from prevision_cli import EXIT_CAP, EXIT_INPUT, EXIT_NO, EXIT_YES, run

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')
COIN_LEVELS = [os.path.join(FIXTURES, f'coin_level{n}.json') for n in (1, 2, 3)]


def fixture(name):
    return os.path.join(FIXTURES, name)


def run_json(capsys, argv):
    code = run(argv + ['--json'])
    return code, json.loads(capsys.readouterr().out)


def test_two_items_incur_sure_loss(capsys):
    code, report = run_json(capsys, ['check-asl', fixture('two_items.json')])
    assert code == EXIT_NO
    assert report['command'] == 'check-asl'
    assert report['verdict'] is False
    assert report['certificate']['multipliers'] == ['1', '1']
    assert 'elapsed_ms' in report['timing']


def test_human_report(capsys):
    assert run(['check-asl', fixture('two_items.json')]) == EXIT_NO
    out = capsys.readouterr().out
    assert 'AVOIDING SURE LOSS' in out
    assert '❌ verdict: no' in out
    assert 'completed in' in out


def test_natex_under_sure_loss(capsys):
    code, report = run_json(capsys, ['natex', fixture('two_items.json'), '--gamble', '0=1'])
    assert code == EXIT_NO
    assert report['certificate']['multipliers'] == ['1', '1']


def test_ene_under_sure_loss(capsys):
    code, report = run_json(capsys, ['ene', fixture('two_items.json'), '--gamble', '0=1'])
    assert code == EXIT_NO
    assert report['verdict'] is False


def test_credal_file_is_coherent(capsys):
    code, report = run_json(capsys, ['check-coherence', fixture('one_of_each.json')])
    assert code == EXIT_YES
    assert report['verdict'] is True


def test_one_of_each_base_does_not_extend(capsys):
    code, report = run_json(capsys, ['extend', fixture('one_of_each.json'), '--to', '3'])
    assert code == EXIT_NO
    certificate = report['certificate']
    assert certificate['separating_gamble'] == {'default': '0', 'values': {'0:1,1:1': '1'}}
    assert certificate['base_value'] == '1'
    assert certificate['marginal_sup'] == '2/3'


def test_binomial_base_extends(capsys):
    argv = ['extend', COIN_LEVELS[1], '--to', '3', '--eval', '0:0,1:3=1', '--require-reproduction']
    code, report = run_json(capsys, argv)
    assert code == EXIT_YES
    assert report['certificate']['reproduces_base'] is True
    assert report['values']['smallest_extension'] == '0'


def test_vacuous_exchangeable(capsys):
    code, report = run_json(capsys, ['vacuous', fixture('binary3.json'), '--gamble', '1,0,1=1'])
    assert code == EXIT_YES
    assert report['verdict'] is None
    assert report['values'] == {'vacuous': '0'}
    code, report = run_json(capsys, ['vacuous', fixture('binary3.json'), '--gamble', '1,0,1=0;default=1'])
    assert report['values'] == {'vacuous': '2/3'}


def test_malformed_file_names_the_entry(capsys, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'labels': ['0', '1'], 'arity': 1, 'mode': 'tuple',
                                'items': [{'gamble': {'values': {'1': '1'}}, 'lower': 0.5}]}))
    code, report = run_json(capsys, ['check-asl', str(path)])
    assert code == EXIT_INPUT
    assert report['error']['type'] == 'AssessmentFileError'
    assert report['error']['key'] == 'items[0].lower'

    assert run(['check-asl', str(path)]) == EXIT_INPUT
    assert 'items[0].lower' in capsys.readouterr().out


def test_enumeration_cap(capsys, monkeypatch):
    monkeypatch.setattr(settings, 'ENUMERATION_CAP', 2)
    code, report = run_json(capsys, ['vacuous', fixture('binary3.json'), '--gamble', '1,0,1=1'])
    assert code == EXIT_CAP
    assert report['error']['type'] == 'CapExceeded'


def test_coin_family_is_time_consistent(capsys):
    code, report = run_json(capsys, ['time-consistent'] + COIN_LEVELS)
    assert code == EXIT_YES
    rows = report['certificate']['matrix']
    assert [(row['n'], row['k']) for row in rows] == [('1', '1'), ('1', '2'), ('2', '1')]
    assert all(row['consistent'] for row in rows)


def test_represent(capsys):
    code, report = run_json(capsys, ['represent', '--labels', '0,1', '--theta', '1/3,2/3', '--poly', '1:2=1'])
    assert code == EXIT_YES
    assert report['values'] == {'lower': '4/9', 'upper': '4/9'}

    argv = ['represent', '--labels', '0,1', '--theta', '1/4,3/4', '--theta', '3/4,1/4', '--poly', '1:2=1']
    code, report = run_json(capsys, argv)
    assert report['values'] == {'lower': '1/16', 'upper': '9/16'}

    code, report = run_json(capsys, ['represent'] + COIN_LEVELS + ['--poly', '1:2=1', '--moments', '2'])
    assert report['values'] == {'lower': '1/4', 'upper': '1/4', 'moments': ['1', '1/2', '1/4']}


def test_represent_vacuous_backing(capsys):
    argv = ['represent', '--labels', '0,1', '--vacuous', '--poly', '0:1,1:1=1', '--degree', '4']
    code, report = run_json(capsys, argv)
    assert code == EXIT_YES
    assert report['values'] == {'lower': '0', 'upper': '1/3'}


def test_represent_needs_one_source(capsys):
    code, report = run_json(capsys, ['represent', '--poly', '1:2=1'])
    assert code == EXIT_INPUT
    assert report['error']['key'] == '--theta'


def test_frequency_convergence(capsys):
    argv = ['converge', '--labels', '0,1', '--theta', '1/2,1/2', '--poly', '1:2=1', '--levels', '1..4']
    code, report = run_json(capsys, argv)
    assert code == EXIT_YES
    assert report['values']['limit'] == '1/4'
    assert [row['value'] for row in report['values']['levels']] == ['1/2', '3/8', '1/3', '5/16']


def test_mean_square_bound(capsys):
    argv = ['meansq', '--labels', '0,1', '--theta', '1/2,1/2', '--f', '0,1', '--n', '1', '--p', '1']
    code, report = run_json(capsys, argv)
    assert code == EXIT_YES
    assert report['verdict'] is True
    assert report['values'] == {'value': '1/8', 'bound': '1'}


def test_bernstein_actions(capsys):
    code, report = run_json(capsys, ['bernstein', 'enclose', '--labels', '0,1', '--poly', '0:1,1:1=1',
                                     '--degrees', '2,4,8,16'])
    assert code == EXIT_YES
    assert [row['upper'] for row in report['values']['convergence']] == ['1/2', '1/3', '2/7', '4/15']
    assert (report['values']['lower'], report['values']['upper']) == ('0', '1/2')

    code, report = run_json(capsys, ['bernstein', 'eval', '--labels', '0,1', '--poly', '1:1=1',
                                     '--theta', '1/3,2/3'])
    assert report['values'] == {'value': '2/3'}

    code, report = run_json(capsys, ['bernstein', 'decompose', '--labels', '0,1', '--poly', '1:2=1'])
    assert report['values']['coefficients'] == {'default': '0', 'values': {'0:0,1:2': '1'}}

    code, report = run_json(capsys, ['bernstein', 'elevate', '--labels', '0,1', '--poly', '1:1=1'])
    assert report['values']['coefficients'] == {'default': '0', 'values': {'0:1,1:1': '1/2', '0:0,1:2': '1'}}


def test_bernstein_eval_needs_a_point(capsys):
    code, report = run_json(capsys, ['bernstein', 'eval', '--labels', '0,1', '--poly', '1:1=1'])
    assert code == EXIT_INPUT
    assert report['error']['key'] == '--theta'


def test_out_of_range_options_exit_on_input(capsys):
    code, report = run_json(capsys, ['bernstein', 'elevate', '--labels', '0,1', '--poly', '1:1=1', '--by', '-1'])
    assert code == EXIT_INPUT
    assert report['error']['type'] == 'BadParameter'
    assert report['error']['key'] == '--by'

    base = ['meansq', '--labels', '0,1', '--theta', '1/2,1/2', '--f', '0,1']
    code, report = run_json(capsys, base + ['--n', '0', '--p', '1'])
    assert code == EXIT_INPUT
    assert report['error']['key'] == '--n'
    code, report = run_json(capsys, base + ['--n', '1', '--p', '-2'])
    assert report['error']['key'] == '--p'

    code, report = run_json(capsys, ['time-consistent'] + COIN_LEVELS + ['--combinations', '-1'])
    assert code == EXIT_INPUT
    assert report['error']['key'] == '--combinations'


def test_unexpected_errors_keep_the_report_shape(capsys, monkeypatch):
    def broken(args):
        raise RuntimeError('solver state lost')

    monkeypatch.setitem(prevision_cli.COMMANDS, 'check-asl', broken)
    code, report = run_json(capsys, ['check-asl', fixture('two_items.json')])
    assert code == EXIT_INPUT
    assert report == {'command': 'check-asl',
                      'error': {'type': 'RuntimeError', 'key': None, 'message': 'solver state lost'}}


def test_every_json_number_is_a_string(capsys):
    code, report = run_json(capsys, ['meansq', '--labels', '0,1', '--theta', '1/2,1/2', '--f', '0,1',
                                     '--n', '2', '--p', '1'])
    assert report['certificate'] == {'n': '2', 'p': '1'}
    assert isinstance(report['timing']['elapsed_ms'], str)


def test_missing_command():
    with pytest.raises(SystemExit):
        run([])
