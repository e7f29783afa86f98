# File: tests/test_results_store.py
# Description: Unit tests for result tables, condition reports and experiment files

import pytest

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json

import pandas as pd

from app.models import ExperimentFile, ResultStore
from settings.constants import CSV_COLUMNS, TRIAL_COLUMNS
from ga_tools.exceptions import ConfigurationError
from ga_tools.experiment_runner import ExperimentSpec, run_experiment

print("\n\033[94mPytest for the results store\033[0m")


@pytest.fixture(scope='module')
def small_result():
    return run_experiment(ExperimentSpec('onemax', (8, 12), trials=3, seed=2, cap=200_000))


def test_csv_round_trip(small_result, tmp_path):
    path = str(tmp_path / 'out' / 'onemax.csv')
    table, companion = ResultStore.emit_results(small_result.summary, small_result.trials, path)
    assert companion.endswith('onemax_trials.csv')
    loaded = ResultStore.load_results(table)
    assert list(loaded.columns) == CSV_COLUMNS
    assert loaded['n'].tolist() == [8, 12]
    assert loaded['mean_T'].tolist() == pytest.approx(small_result.summary['mean_T'].tolist())
    trials = ResultStore.load_trials(table)
    assert list(trials.columns) == TRIAL_COLUMNS
    assert len(trials) == 6
    assert (trials['error'] == '').all()


def test_json_results(small_result, tmp_path):
    path = str(tmp_path / 'onemax.json')
    ResultStore.emit_results(small_result.summary, small_result.trials, path, fmt='json',
                             extra={'notes': ['demo']})
    with open(path, encoding='utf-8') as handle:
        document = json.load(handle)
    assert document['notes'] == ['demo']
    assert len(document['results']) == 2
    loaded = ResultStore.load_results(path)
    assert loaded['trials'].tolist() == [3, 3]


def test_unknown_format_rejected(small_result, tmp_path):
    with pytest.raises(ConfigurationError):
        ResultStore.emit_results(small_result.summary, small_result.trials, str(tmp_path / 'x.xml'), fmt='xml')


def test_empty_results_keep_header(tmp_path):
    path = str(tmp_path / 'empty.csv')
    ResultStore.emit_results(pd.DataFrame(columns=CSV_COLUMNS), None, path)
    with open(path, encoding='utf-8') as handle:
        assert handle.readline().strip() == ','.join(CSV_COLUMNS)


def test_report_round_trip(tmp_path):
    report = {
        'parameters': {'n': 8},
        'conditions': {'C1': {'passed': True, 'method': 'exact', 'value': 0.5, 'ci': None, 'samples': None}},
        'measurements': {'s': [0.5, float('nan')]},
        'notes': [],
    }
    path = ResultStore.emit_report(report, str(tmp_path / 'report.json'))
    loaded = ResultStore.load_report(path)
    assert loaded['conditions']['C1']['passed'] is True
    assert loaded['measurements']['s'] == [0.5, None]


def test_report_structure_validation(tmp_path):
    with pytest.raises(ValueError):
        ResultStore.emit_report({'parameters': {}, 'conditions': {}}, str(tmp_path / 'bad.json'))
    bad_mc = {'parameters': {}, 'measurements': {}, 'notes': [],
              'conditions': {'L3': {'passed': True, 'method': 'montecarlo', 'samples': None}}}
    with pytest.raises(ValueError):
        ResultStore.emit_report(bad_mc, str(tmp_path / 'bad_mc.json'))


def test_experiment_file_load(tmp_path):
    path = tmp_path / 'rr.env'
    path.write_text("# Royal Road study\nPROBLEM=royalroad\nSIZES=8,12,16\nTRIALS=5\nLAMBDA=9\n")
    values = ExperimentFile.load(str(path))
    assert values == {'problem': 'royalroad', 'sizes': '8,12,16', 'trials': '5', 'lam': '9'}


def test_experiment_file_unknown_key(tmp_path):
    path = tmp_path / 'bad.env'
    path.write_text("PROBLEM=onemax\nPOPULATION=12\n")
    with pytest.raises(ConfigurationError):
        ExperimentFile.load(str(path))


def test_experiment_file_dump_and_load(tmp_path):
    path = str(tmp_path / 'dump.env')
    ExperimentFile.dump({'problem': 'vcp', 'sizes': (12, 24), 'trials': 4, 'k': None}, path)
    assert ExperimentFile.load(path) == {'problem': 'vcp', 'sizes': '12,24', 'trials': '4'}
