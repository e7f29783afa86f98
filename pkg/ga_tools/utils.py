"""
Common utility functions for statistics, regression and validation
"""

import math
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from settings.constants import CONFIDENCE_LEVEL, CSV_COLUMNS, REPORT_SECTIONS
from .exceptions import ParameterError


class StatisticsUtils:
    """Interval estimates and goodness-of-fit helpers"""

    @staticmethod
    def wilson_interval(successes: int, trials: int,
                        confidence: float = CONFIDENCE_LEVEL) -> Tuple[float, float]:
        """
        Wilson score interval for a binomial proportion

        Args:
            successes: Number of successful trials
            trials: Number of trials (>= 1)
            confidence: Confidence level

        Returns:
            (low, high) bounds
        """
        if trials < 1:
            raise ParameterError("Wilson interval needs at least one trial")
        ci = stats.binomtest(int(successes), int(trials)).proportion_ci(
            confidence_level=confidence, method='wilson')
        return float(ci.low), float(ci.high)

    @staticmethod
    def t_interval(values: Sequence[float],
                   confidence: float = CONFIDENCE_LEVEL) -> Tuple[float, float, bool]:
        """
        Student-t confidence interval for the mean

        Returns:
            (low, high, degenerate); degenerate is True when fewer than two
            values are available and the interval collapses to the mean
        """
        data = np.asarray(values, dtype=float)
        if len(data) == 0:
            return math.nan, math.nan, True
        mean = float(data.mean())
        if len(data) < 2:
            return mean, mean, True
        sem = float(stats.sem(data))
        if sem == 0:
            return mean, mean, False
        low, high = stats.t.interval(confidence, df=len(data) - 1, loc=mean, scale=sem)
        return float(low), float(high), False

    @staticmethod
    def mean_upper_bound(values: Sequence[float], confidence: float = CONFIDENCE_LEVEL) -> float:
        """One-sided upper confidence bound on the mean"""
        data = np.asarray(values, dtype=float)
        if len(data) < 2:
            return float(data.mean()) if len(data) else math.nan
        sem = float(stats.sem(data))
        return float(data.mean() + stats.t.ppf(confidence, df=len(data) - 1) * sem)

    @staticmethod
    def chi_square_pvalue(observed: Sequence[int], probabilities: Sequence[float],
                          min_expected: float = 5.0) -> float:
        """
        Chi-square goodness-of-fit p-value of counts against probabilities

        Adjacent cells are pooled until each pooled cell expects at least
        min_expected counts.
        """
        observed = np.asarray(observed, dtype=float)
        expected = np.asarray(probabilities, dtype=float) * observed.sum()
        keep_obs: List[float] = []
        keep_exp: List[float] = []
        acc_obs = acc_exp = 0.0
        for o, e in zip(observed, expected):
            acc_obs += o
            acc_exp += e
            if acc_exp >= min_expected:
                keep_obs.append(acc_obs)
                keep_exp.append(acc_exp)
                acc_obs = acc_exp = 0.0
        if acc_obs > 0 or acc_exp > 0:
            if keep_exp:
                keep_obs[-1] += acc_obs
                keep_exp[-1] += acc_exp
            else:
                keep_obs.append(acc_obs)
                keep_exp.append(acc_exp)
        keep_exp_arr = np.asarray(keep_exp)
        keep_exp_arr *= sum(keep_obs) / keep_exp_arr.sum()
        return float(stats.chisquare(keep_obs, keep_exp_arr).pvalue)

    @staticmethod
    def median_or_nan(values: Sequence[float]) -> float:
        data = np.asarray(values, dtype=float)
        return float(np.median(data)) if len(data) else math.nan


class RegressionUtils:
    """Scaling regressions over problem sizes"""

    @staticmethod
    def loglog_fit(sizes: Sequence[float], values: Sequence[float]) -> Dict[str, float]:
        """
        Ordinary least squares of ln(values) on ln(sizes)

        Returns:
            Dictionary with slope, slope_stderr, intercept, r_squared
        """
        x = np.log(np.asarray(sizes, dtype=float))
        y = np.log(np.asarray(values, dtype=float))
        fit = stats.linregress(x, y)
        return {
            'slope': float(fit.slope),
            'slope_stderr': float(fit.stderr),
            'intercept': float(fit.intercept),
            'r_squared': float(fit.rvalue ** 2),
        }

    @staticmethod
    def fit_constant(values: Sequence[float], shape: Sequence[float]) -> float:
        """Least-squares constant C in values ~ C * shape (fit through the origin)"""
        v = np.asarray(values, dtype=float)
        g = np.asarray(shape, dtype=float)
        return float(np.dot(v, g) / np.dot(g, g))


class ValidationUtils:
    """Parameter validation utility functions"""

    @staticmethod
    def validate_probability(name: str, value: float, low_open: bool = False,
                             high_open: bool = False) -> float:
        value = float(value)
        low_ok = value > 0 if low_open else value >= 0
        high_ok = value < 1 if high_open else value <= 1
        if not (low_ok and high_ok) or math.isnan(value):
            low = '(' if low_open else '['
            high = ')' if high_open else ']'
            raise ParameterError(f"{name} must lie in {low}0,1{high}, got {value}")
        return value

    @staticmethod
    def validate_positive(name: str, value: float) -> float:
        if not value > 0:
            raise ParameterError(f"{name} must be positive, got {value}")
        return value

    @staticmethod
    def validate_sizes(sizes: Sequence[int]) -> List[int]:
        sizes = [int(s) for s in sizes]
        if not sizes:
            raise ParameterError("At least one problem size is required")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ParameterError(f"Sizes must be strictly increasing, got {sizes}")
        return sizes


class ReportValidationUtils:
    """Structure validation for emitted reports"""

    @staticmethod
    def validate_report_structure(report: Dict) -> bool:
        """
        Validate a condition report document

        Raises:
            ValueError: If a section is missing or a condition entry is malformed
        """
        if not isinstance(report, dict):
            raise ValueError("Report must be a dictionary")
        for section in REPORT_SECTIONS:
            if section not in report:
                raise ValueError(f"Missing required report section: {section}")
        for name, entry in report['conditions'].items():
            for field in ('passed', 'method'):
                if field not in entry:
                    raise ValueError(f"Condition '{name}' missing field: {field}")
            if entry['method'] == 'exact' and entry.get('ci') is not None:
                raise ValueError(f"Exact condition '{name}' must not carry a confidence interval")
            if entry['method'] == 'montecarlo' and not entry.get('samples'):
                raise ValueError(f"Monte Carlo condition '{name}' must report its sample count")
        return True

    @staticmethod
    def validate_results_frame(frame: pd.DataFrame) -> bool:
        missing = [col for col in CSV_COLUMNS if col not in frame.columns]
        if missing:
            raise ValueError(f"Missing required columns: {missing}")
        return True


def log_binomial_point(p: float, distance, n: int):
    """ln(p^D (1-p)^(n-D)) for a scalar or an array of distances; -inf where the probability is zero"""
    d = np.asarray(distance, dtype=float)
    if p == 0:
        return np.where(d == 0, 0.0, -np.inf)
    if p == 1:
        return np.where(d == n, 0.0, -np.inf)
    return d * math.log(p) + (n - d) * math.log1p(-p)


def binomial_point(p: float, distance, n: int):
    """p^D (1-p)^(n-D) accumulated in log space"""
    value = np.exp(log_binomial_point(float(p), distance, n))
    return float(value) if np.ndim(value) == 0 else value


# Convenience function exports
wilson_interval = StatisticsUtils.wilson_interval
t_interval = StatisticsUtils.t_interval
mean_upper_bound = StatisticsUtils.mean_upper_bound
chi_square_pvalue = StatisticsUtils.chi_square_pvalue
median_or_nan = StatisticsUtils.median_or_nan
loglog_fit = RegressionUtils.loglog_fit
fit_constant = RegressionUtils.fit_constant
validate_probability = ValidationUtils.validate_probability
validate_positive = ValidationUtils.validate_positive
validate_sizes = ValidationUtils.validate_sizes

# Report validation exports
validate_report_structure = ReportValidationUtils.validate_report_structure
validate_results_frame = ReportValidationUtils.validate_results_frame
