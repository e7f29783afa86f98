# File: tests/test_cli.py
# Description: Command-line tests: subcommand output, exit statuses and experiment files

import pytest

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from click.testing import CliRunner

from app import EXIT_FAILURE, EXIT_OK, EXIT_THRESHOLD, EXIT_USAGE, cli, cli_dispatch
from app.models import ResultStore

print("\n\033[94mPytest for the command line\033[0m")


@pytest.fixture
def runner():
    return CliRunner()


def test_no_arguments_is_usage(capsys):
    assert cli_dispatch([]) == EXIT_USAGE
    assert 'Usage' in capsys.readouterr().out


def test_unknown_flag_is_usage():
    assert cli_dispatch(['run', '--no-such-flag']) == EXIT_USAGE
    assert cli_dispatch(['frobnicate']) == EXIT_USAGE


def test_advise_example(runner):
    result = runner.invoke(cli, ['advise', '--eps', '0.5', '--p0', '0.5', '--delta-prime', '1'])
    assert result.exit_code == EXIT_OK
    assert 'k_min=32' in result.output
    assert 'gamma0=0.03125' in result.output


def test_advise_needs_inputs():
    assert cli_dispatch(['advise', '--eps', '0.5']) == EXIT_USAGE


def test_bound_example(runner):
    result = runner.invoke(cli, ['bound', '--m', '1', '--lambda', '10', '--s', '1', '--p0', '1',
                                 '--delta', '1', '--gamma0', '0.25'])
    assert result.exit_code == EXIT_OK
    assert 'bound=18826.9' in result.output
    assert 'c=0.00260417' in result.output


def test_bound_rejects_bad_parameters():
    assert cli_dispatch(['bound', '--m', '1', '--lambda', '10', '--s', '1', '--p0', '1',
                         '--delta', '1', '--gamma0', '1.5']) == EXIT_FAILURE


def test_check_prop1(runner):
    result = runner.invoke(cli, ['check', '--prop1', '1', '--n', '10'])
    assert result.exit_code == EXIT_OK
    assert 'bound=0.0367879' in result.output
    assert 'worst_exact=0.038742' in result.output
    assert 'PASS' in result.output


def test_check_writes_report(runner, tmp_path):
    out = str(tmp_path / 'report.json')
    result = runner.invoke(cli, ['check', '--problem', 'toy', '--instance', 'toy3', '--partition', 'general',
                                 '--k', '4', '--out', out])
    assert result.exit_code == EXIT_OK, result.output
    assert 'L2' in result.output
    report = ResultStore.load_report(out)
    assert report['parameters']['partition'] == 'general'


def test_run_writes_tables(runner, tmp_path):
    out = str(tmp_path / 'run.csv')
    result = runner.invoke(cli, ['run', '--problem', 'onemax', '--sizes', '8,12', '--trials', '2',
                                 '--cap', '200000', '--out', out])
    assert result.exit_code == EXIT_OK, result.output
    assert ResultStore.load_results(out)['n'].tolist() == [8, 12]
    assert os.path.exists(ResultStore.trials_path(out))


def test_run_runtime_failure():
    assert cli_dispatch(['run', '--problem', 'vcp', '--sizes', '10']) == EXIT_FAILURE


def test_run_bad_sizes_is_usage():
    assert cli_dispatch(['run', '--sizes', '8,x']) == EXIT_USAGE


def test_scale_slope_threshold(runner):
    result = runner.invoke(cli, ['scale', '--problem', 'onemax', '--sizes', '8,16,32', '--trials', '3',
                                 '--cap', '1000000', '--assert-slope', '0'])
    assert result.exit_code == EXIT_THRESHOLD
    assert 'slope=' in result.output


def test_scale_needs_three_sizes():
    assert cli_dispatch(['scale', '--problem', 'onemax', '--sizes', '8,16', '--trials', '2']) == EXIT_FAILURE


def test_experiment_file_drives_run(runner, tmp_path):
    experiment_path = tmp_path / 'onemax.env'
    out = tmp_path / 'from_file.csv'
    experiment_path.write_text(f"PROBLEM=onemax\nSIZES=8\nTRIALS=2\nCAP=200000\nOUT={out}\n")
    result = runner.invoke(cli, ['--experiment', str(experiment_path), 'run', '--trials', '3'])
    assert result.exit_code == EXIT_OK, result.output
    assert ResultStore.load_results(str(out))['trials'].tolist() == [3]


def test_localsearch(runner):
    result = runner.invoke(cli, ['localsearch', '--problem', 'royalroad', '--n', '8', '--starts', '3'])
    assert result.exit_code == EXIT_OK, result.output
    assert 'moves' in result.output
    assert '11111111' in result.output


def test_certify(runner):
    result = runner.invoke(cli, ['certify', '--problem', 'toy', '--instance', 'toy3', '--trials', '10'])
    assert result.exit_code == EXIT_OK, result.output
    assert 'hits=10/10' in result.output
    assert 'optimum=4' in result.output
