"""
Experiment orchestration: repeated GA trials over problem sizes, per-size
statistics and log-log scaling regressions
"""

import concurrent.futures
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import plotly.graph_objects as go

from settings.constants import (CSV_COLUMNS, DEFAULT_DELTA, LAMBDA_B, MASTER_SEED, MAX_EVALUATIONS,
                                PARTITION_KINDS, PROBLEM_FAMILIES, SELECTION_KINDS, TRIAL_COLUMNS)
from .core import BitString, ProblemInstance, RandomStream
from .engine import GAConfig, run_ga, run_ga_prime
from .exceptions import ConfigurationError, ParameterError, ScalingAbort, TrialError
from .levels import LevelPartition, NeighborhoodSpec, build_partition
from .operators import Bitwise, OperatorSuite, RepairWrapped, SinglePoint, build_selection
from .problems import build_problem
from .theory import approximation_certify, corollary_selection_thresholds
from .utils import fit_constant, loglog_fit, median_or_nan, t_interval, validate_sizes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One experiment: a problem family over increasing sizes

    Parameters left as None are derived per size: lambda = ceil(b ln n),
    p_m = chi / n (chi = 1 by default) and the selection parameter from the
    advisor thresholds for (chi, p_c, delta).
    """

    family: str
    sizes: Tuple[int, ...]
    trials: int = 30
    seed: int = MASTER_SEED
    selection: str = 'tournament'
    k: Optional[int] = None
    mu: Optional[int] = None
    eta: Optional[float] = None
    pm: Optional[float] = None
    chi: Optional[float] = None
    pc: float = 0.0
    lam: Optional[int] = None
    lambda_b: float = LAMBDA_B
    partition: str = 'canonical'
    cap: int = int(MAX_EVALUATIONS)
    delta: float = DEFAULT_DELTA
    r: int = 2
    instance: str = 'toy3'
    repair: bool = False
    prime: bool = False

    def validate(self) -> 'ExperimentSpec':
        if self.family not in PROBLEM_FAMILIES:
            raise ConfigurationError(f"Unknown problem family '{self.family}'")
        if self.selection not in SELECTION_KINDS:
            raise ConfigurationError(f"Unknown selection '{self.selection}'")
        if self.partition not in PARTITION_KINDS:
            raise ConfigurationError(f"Unknown partition '{self.partition}'")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        validate_sizes(self.sizes)
        if self.family == 'vcp' and any(n % 3 for n in self.sizes):
            raise ParameterError(f"vcp sizes must be multiples of 3, got {list(self.sizes)}")
        if self.family == 'royalroad' and any(n % self.r for n in self.sizes):
            raise ParameterError(f"royalroad sizes must be multiples of r = {self.r}, got {list(self.sizes)}")
        if self.pm is not None and not 0 <= self.pm <= 1:
            raise ParameterError(f"p_m must lie in [0,1], got {self.pm}")
        if not 0 <= self.pc < 1:
            raise ParameterError(f"p_c must lie in [0,1), got {self.pc}")
        return self

    def problem_for(self, n: int) -> ProblemInstance:
        return build_problem(self.family, n, self.r, self.instance)

    def lambda_for(self, n: int) -> int:
        if self.lam is not None:
            return self.lam
        return max(2, math.ceil(self.lambda_b * math.log(n)))

    def p_m_for(self, n: int) -> float:
        if self.pm is not None:
            return self.pm
        return (self.chi if self.chi is not None else 1.0) / n

    def selection_parameter(self, n: int):
        lam = self.lambda_for(n)
        explicit = {'tournament': self.k, 'mulambda': self.mu, 'exprank': self.eta}[self.selection]
        if explicit is not None:
            return explicit
        advice = corollary_selection_thresholds(self.p_m_for(n) * n, self.pc, self.delta)
        if self.selection == 'tournament':
            return advice.k_min
        if self.selection == 'mulambda':
            return max(1, math.floor(lam / advice.mu_ratio_min))
        return advice.eta_min

    def operators_for(self, n: int) -> OperatorSuite:
        parameter = self.selection_parameter(n)
        selection = build_selection(self.selection, k=parameter, mu=parameter, eta=parameter)
        mutation = Bitwise(self.p_m_for(n))
        if self.repair:
            mutation = RepairWrapped(mutation)
        return OperatorSuite(selection, SinglePoint(self.pc), mutation)

    def config_for(self, n: int) -> GAConfig:
        ops = self.operators_for(n)
        return GAConfig(self.lambda_for(n), ops.selection, ops.crossover, ops.mutation,
                        self.cap, self.seed, self.prime)

    def as_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out['sizes'] = list(self.sizes)
        return out


@lru_cache(maxsize=32)
def _setup(spec: ExperimentSpec, n: int) -> Tuple[ProblemInstance, LevelPartition, GAConfig]:
    problem = spec.problem_for(n)
    partition = build_partition(spec.partition, problem, NeighborhoodSpec.hamming(problem.default_radius))
    return problem, partition, spec.config_for(problem.n)


def run_trial(spec: ExperimentSpec, size_index: int, trial: int) -> Dict[str, Any]:
    """One GA run on stream (seed, size_index, trial); failures are recorded on the row"""
    n = spec.sizes[size_index]
    row = {'family': spec.family, 'n': n, 'size_index': size_index, 'trial': trial,
           'T': None, 'censored': False, 'generations': 0, 'evaluations': 0, 'error': ''}
    try:
        problem, partition, config = _setup(spec, n)
        row['n'] = problem.n
        rng = RandomStream(spec.seed, (size_index, trial))
        runner = run_ga_prime if spec.prime else run_ga
        result = runner(problem, partition, config, rng)
    except Exception as exc:
        logger.debug("trial %d at n=%d failed: %s", trial, n, exc)
        row['error'] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(T=result.hitting_time, censored=result.censored,
               generations=result.generations, evaluations=result.evaluations)
    return row


def _run_size(spec: ExperimentSpec, size_index: int, workers: int) -> List[Dict[str, Any]]:
    if workers <= 1:
        return [run_trial(spec, size_index, trial) for trial in range(spec.trials)]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(run_trial, spec, size_index, trial) for trial in range(spec.trials)]
        rows = [future.result() for future in concurrent.futures.as_completed(futures)]
    return sorted(rows, key=lambda row: row['trial'])


def summarize_trials(spec: ExperimentSpec, trials: pd.DataFrame) -> pd.DataFrame:
    """Per-size statistics over uncensored trials, one row per size in CSV column order"""
    rows = []
    for size_index, n in enumerate(spec.sizes):
        group = trials[trials['size_index'] == size_index]
        uncensored = group.loc[~group['censored'].astype(bool), 'T'].dropna().astype(float)
        low, high, degenerate = t_interval(uncensored.to_numpy())
        if degenerate:
            logger.warning("n=%d: confidence interval degenerate (%d uncensored trials)", n, len(uncensored))
        dimension = int(group['n'].iloc[0]) if len(group) else n
        rows.append({
            'family': spec.family,
            'n': dimension,
            'lambda': spec.lambda_for(dimension),
            'k_or_mu_or_eta': spec.selection_parameter(dimension),
            'p_m': spec.p_m_for(dimension),
            'p_c': spec.pc,
            'trials': int(len(group)),
            'censored': float(group['censored'].astype(bool).mean()) if len(group) else 0.0,
            'mean_T': float(uncensored.mean()) if len(uncensored) else math.nan,
            'median_T': median_or_nan(uncensored.to_numpy()),
            'ci_lo': low,
            'ci_hi': high,
        })
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    summary: pd.DataFrame
    trials: pd.DataFrame
    notes: List[str] = field(default_factory=list)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """
    Execute every (size, trial) run and aggregate per size

    Args:
        spec: Validated experiment spec
        workers: Process count; results are gathered in (size, trial) order

    Returns:
        ExperimentResult with the summary table and the per-trial table

    Raises:
        TrialError: After the first size with failed trials finishes
    """
    spec.validate()
    rows: List[Dict[str, Any]] = []
    for size_index, n in enumerate(spec.sizes):
        size_rows = _run_size(spec, size_index, workers)
        rows.extend(size_rows)
        failed = [row for row in size_rows if row['error']]
        if failed:
            raise TrialError(f"{len(failed)} of {spec.trials} trials failed at n={n}: {failed[0]['error']}",
                             rows)
        censored = sum(bool(row['censored']) for row in size_rows)
        logger.info("n=%d: %d trials, %d censored", n, len(size_rows), censored)
    trials = pd.DataFrame(rows, columns=TRIAL_COLUMNS)
    summary = summarize_trials(spec, trials)
    notes = []
    if spec.trials == 1:
        notes.append("trials = 1: confidence intervals are degenerate")
    if (summary['censored'] > 0).any():
        notes.append("censored trials are excluded from mean_T, median_T and the interval")
    return ExperimentResult(spec, summary, trials, notes)


# ---------------------------------------------------------------- scaling

def scaling_shape(family: str, sizes, r: int = 2) -> Tuple[Optional[str], Optional[np.ndarray]]:
    """Reference growth curve per family: n^(r+1) for royalroad, n ln n ln ln n for vcp"""
    n = np.asarray(sizes, dtype=float)
    if family == 'royalroad':
        return f"n^{r + 1}", n ** (r + 1)
    if family == 'vcp':
        return "n ln n ln ln n", n * np.log(n) * np.log(np.log(n))
    return None, None


@dataclass
class ScalingReport:
    family: str
    summary: pd.DataFrame
    slope: float
    slope_stderr: float
    intercept: float
    r_squared: float
    shape: Optional[str] = None
    fitted_constant: Optional[float] = None
    response: str = 'mean_T'
    values: List[float] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'sizes': self.summary['n'].tolist(),
            'response': self.response,
            'values': list(self.values),
            'slope': self.slope,
            'slope_stderr': self.slope_stderr,
            'intercept': self.intercept,
            'r_squared': self.r_squared,
            'shape': self.shape,
            'fitted_constant': self.fitted_constant,
            'notes': list(self.notes),
        }


def mean_evaluations(trials: pd.DataFrame, sizes: int) -> np.ndarray:
    """Mean total evaluations (generations + 1) * lambda over the uncensored trials of each size"""
    means = np.full(sizes, math.nan)
    uncensored = trials[~trials['censored'].astype(bool)]
    for size_index, group in uncensored.groupby('size_index'):
        means[int(size_index)] = group['evaluations'].astype(float).mean()
    return means


def analyze_scaling(summary: pd.DataFrame, family: str, r: int = 2,
                    evaluations: Optional[Sequence[float]] = None) -> ScalingReport:
    """
    Log-log least squares against n, plus the constant against the
    family's reference curve

    The response is mean T unless per-size mean total evaluations are
    given. Total evaluations include the initial population, so a run
    that hits in P0 still costs lambda evaluations instead of zero.

    Raises:
        ScalingAbort: Fewer than 3 sizes, a fully censored size, or a
            non-positive response
    """
    diagnostics = {int(n): float(c) for n, c in zip(summary['n'], summary['censored'])}
    if len(summary) < 3:
        raise ScalingAbort(f"Scaling regression needs at least 3 sizes, got {len(summary)}", diagnostics)
    fully_censored = summary.loc[summary['censored'] >= 1.0, 'n'].tolist()
    if fully_censored:
        raise ScalingAbort(f"Every trial was censored at n = {fully_censored}", diagnostics)
    response = 'mean_T' if evaluations is None else 'mean_evaluations'
    values = summary['mean_T'].to_numpy(dtype=float) if evaluations is None else np.asarray(evaluations, dtype=float)
    if len(values) != len(summary):
        raise ScalingAbort(f"Expected {len(summary)} response values, got {len(values)}", diagnostics)
    if not (values > 0).all():
        bad = summary['n'][~(values > 0)].tolist()
        raise ScalingAbort(f"{response} is not positive at n = {bad}", diagnostics)
    fit = loglog_fit(summary['n'], values)
    shape_name, shape = scaling_shape(family, summary['n'], r)
    constant = fit_constant(values, shape) if shape is not None else None
    notes = [f"regression on {response} of uncensored trials; t intervals assume approximate normality"]
    return ScalingReport(family, summary, fit['slope'], fit['slope_stderr'], fit['intercept'],
                         fit['r_squared'], shape_name, constant, response, [float(v) for v in values], notes)


def scaling_study(spec: ExperimentSpec, workers: int = 1) -> Tuple[ScalingReport, ExperimentResult]:
    """Run every size and regress mean total evaluations on n"""
    result = run_experiment(spec, workers)
    report = analyze_scaling(result.summary, spec.family, spec.r,
                             evaluations=mean_evaluations(result.trials, len(spec.sizes)))
    report.notes.extend(result.notes)
    logger.info("%s scaling slope %.3f +/- %.3f", spec.family, report.slope, report.slope_stderr)
    return report, result


def plot_scaling(report: ScalingReport, path: str) -> str:
    """Write an HTML log-log chart of the regressed response against n with the fitted line"""
    n = report.summary['n'].to_numpy(dtype=float)
    fitted = np.exp(report.intercept) * n ** report.slope
    fig = go.Figure()
    if report.response == 'mean_T':
        fig.add_trace(go.Scatter(x=n, y=report.summary['mean_T'], mode='markers', name='mean T',
                                 error_y=dict(type='data', symmetric=False,
                                              array=report.summary['ci_hi'] - report.summary['mean_T'],
                                              arrayminus=report.summary['mean_T'] - report.summary['ci_lo'])))
    else:
        fig.add_trace(go.Scatter(x=n, y=report.values, mode='markers', name='mean evaluations'))
    fig.add_trace(go.Scatter(x=n, y=fitted, mode='lines', name=f"slope {report.slope:.3f}"))
    fig.update_layout(title=f"{report.family}: {report.response.replace('_', ' ')}", xaxis_type='log',
                      yaxis_type='log', xaxis_title='n', yaxis_title='evaluations')
    fig.write_html(path)
    return path


def with_overrides(spec: ExperimentSpec, **changes) -> ExperimentSpec:
    """Copy of spec with the non-None changes applied"""
    return replace(spec, **{key: value for key, value in changes.items() if value is not None})


# ---------------------------------------------------------------- approximation certificates

CERTIFY_COLUMNS = ['trial', 'hit', 'T', 'local_optimum', 'value', 'optimum', 'ratio']


def certify_trials(spec: ExperimentSpec) -> pd.DataFrame:
    """
    Run repair-wrapped GA trials under the infeasible-first partition and
    certify the approximation ratio of each hit

    The first target member of the hitting population is a local optimum by
    construction of the partition; censored trials carry NaN values.
    """
    spec = replace(spec, partition='general', repair=True, prime=False).validate()
    n = spec.sizes[0]
    problem, partition, config = _setup(spec, n)
    rows = []
    for trial in range(spec.trials):
        result = run_ga(problem, partition, config, RandomStream(spec.seed, (0, trial)))
        row = {'trial': trial, 'hit': not result.censored, 'T': result.hitting_time,
               'local_optimum': '', 'value': math.nan, 'optimum': math.nan, 'ratio': math.nan}
        if not result.censored:
            pop = result.final_population
            index = pop.first_index_at_level(partition.target_level)
            report = approximation_certify(problem, partition.nbhd, BitString(pop.genotypes[index]))
            row.update(local_optimum=report.local_optimum, value=report.value,
                       optimum=report.optimum, ratio=report.ratio)
        rows.append(row)
    frame = pd.DataFrame(rows, columns=CERTIFY_COLUMNS)
    logger.info("%s: %d of %d trials certified", problem.instance_id, int(frame['hit'].sum()), spec.trials)
    return frame
