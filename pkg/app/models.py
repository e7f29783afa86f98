import json
import logging
import math
import os
from typing import Any, Dict

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from settings.constants import ALLOWED_FORMATS, CSV_COLUMNS, EXPERIMENT_FILE_KEYS, TRIAL_COLUMNS
from ga_tools.exceptions import ConfigurationError
from ga_tools.utils import validate_report_structure, validate_results_frame

logger = logging.getLogger(__name__)


def _json_default(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return None if math.isnan(value) else float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    return str(value)


def _clean_nan(value):
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    if isinstance(value, dict):
        return {str(k): _clean_nan(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean_nan(v) for v in value]
    return value


class ResultStore:
    """Reads and writes experiment tables and condition reports"""

    @staticmethod
    def trials_path(path):
        """Companion file holding the raw per-trial values"""
        stem, _ = os.path.splitext(path)
        return f"{stem}_trials.csv"

    @staticmethod
    def _ensure_parent(path):
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)

    @staticmethod
    def emit_results(summary, trials, path, fmt='csv', extra=None):
        """
        Write the per-size table and its per-trial companion file

        Args:
            summary: DataFrame with CSV_COLUMNS (may be empty)
            trials: DataFrame with TRIAL_COLUMNS (may be empty)
            path: Output path of the table
            fmt: 'csv' or 'json'
            extra: Additional top-level entries for the json document

        Returns:
            (table path, trials path)
        """
        if fmt not in ALLOWED_FORMATS:
            raise ConfigurationError(f"Unknown format '{fmt}', expected one of {sorted(ALLOWED_FORMATS)}")
        summary = summary if summary is not None else pd.DataFrame(columns=CSV_COLUMNS)
        trials = trials if trials is not None else pd.DataFrame(columns=TRIAL_COLUMNS)
        validate_results_frame(summary)
        ResultStore._ensure_parent(path)
        if fmt == 'csv':
            summary[CSV_COLUMNS].to_csv(path, index=False)
        else:
            document = dict(extra or {})
            document['results'] = summary[CSV_COLUMNS].to_dict(orient='records')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump(_clean_nan(document), handle, indent=2, sort_keys=True, default=_json_default)
        companion = ResultStore.trials_path(path)
        trials[TRIAL_COLUMNS].to_csv(companion, index=False)
        logger.info("wrote %s and %s", path, companion)
        return path, companion

    @staticmethod
    def load_results(path):
        """Parse a table written by emit_results back into a DataFrame"""
        if path.endswith('.json'):
            with open(path, encoding='utf-8') as handle:
                document = json.load(handle)
            frame = pd.DataFrame(document.get('results', []), columns=CSV_COLUMNS)
        else:
            frame = pd.read_csv(path)
        validate_results_frame(frame)
        return frame

    @staticmethod
    def load_trials(path):
        companion = path if path.endswith('_trials.csv') else ResultStore.trials_path(path)
        frame = pd.read_csv(companion, keep_default_na=False, na_values=[''])
        frame['error'] = frame['error'].fillna('')
        return frame

    @staticmethod
    def emit_report(report: Dict[str, Any], path):
        """Write a condition report document after validating its sections"""
        validate_report_structure(report)
        ResultStore._ensure_parent(path)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(_clean_nan(report), handle, indent=2, sort_keys=True, default=_json_default)
        return path

    @staticmethod
    def load_report(path):
        with open(path, encoding='utf-8') as handle:
            report = json.load(handle)
        validate_report_structure(report)
        return report


class ExperimentFile:
    """KEY=VALUE experiment files in .env syntax"""

    @staticmethod
    def load(path):
        """
        Map file keys to CLI option names

        Raises:
            ConfigurationError: On keys outside EXPERIMENT_FILE_KEYS
        """
        raw = dotenv_values(path)
        unknown = sorted(key for key in raw if key.upper() not in EXPERIMENT_FILE_KEYS)
        if unknown:
            raise ConfigurationError(f"Unknown experiment keys in {path}: {unknown}")
        values = {EXPERIMENT_FILE_KEYS[key.upper()]: value for key, value in raw.items() if value is not None}
        logger.debug("experiment file %s: %s", path, values)
        return values

    @staticmethod
    def dump(values: Dict[str, Any], path):
        reverse = {option: key for key, option in EXPERIMENT_FILE_KEYS.items()}
        lines = []
        for option, value in values.items():
            if option not in reverse or value is None:
                continue
            if isinstance(value, (list, tuple)):
                value = ','.join(str(v) for v in value)
            lines.append(f"{reverse[option]}={value}")
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write('\n'.join(lines) + '\n')
        return path
