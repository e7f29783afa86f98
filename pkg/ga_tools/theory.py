"""
Runtime bounds, selection thresholds and condition verification

Bounds and thresholds are closed-form evaluations. Condition checks work
either exactly (exhaustive over {0,1}^n for small n, enumerated level
compositions for small lambda) or by Monte Carlo with Wilson intervals.
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from settings.constants import (BRUTE_FORCE_MAX_N, DEFAULT_DELTA, EXACT_COMPOSITION_MAX_LAMBDA,
                                EXACT_ENUMERATION_MAX_N, EXACT_PAIR_MAX_N, GAMMA_GRID_POINTS,
                                MAX_COMPOSITIONS, MONTE_CARLO_SAMPLES, POPULATION_SAMPLES)
from .core import BitString, Population, ProblemInstance, RandomStream, all_genotypes, genotype_codes
from .exceptions import ContractError, ParameterError
from .levels import LevelPartition, NeighborhoodSpec, is_local_optimum
from .operators import (Bitwise, ExpRanking, MuLambda, OperatorSuite, SelectionOp, Tournament,
                        exact_eps0, estimate_eps0)
from .utils import binomial_point, wilson_interval

logger = logging.getLogger(__name__)

_TOLERANCE = 1e-12

# alternating series for e^-1 cut after a positive term, so it overshoots by less than 1/21!
EXP_NEG_ONE_UPPER = sum(Fraction((-1) ** k, math.factorial(k)) for k in range(21))


# ---------------------------------------------------------------- bounds

@dataclass
class TheoremParams:
    """
    Parameters of the level-based runtime bound

    Attributes:
        m: number of non-target levels
        lam: population size
        s_list: upgrade probabilities s_1..s_m
        p0: probability of not leaving the current level by mutation
        eps: crossover parameter
        delta: slack delta > 0
        gamma0: selective-pressure constant in (0,1)
        s_star: lower bound on every s_j (defaults to min s_list)
    """

    m: int
    lam: int
    s_list: Sequence[float]
    p0: float
    eps: float
    delta: float
    gamma0: float
    s_star: Optional[float] = None

    def __post_init__(self):
        self.s_list = [float(s) for s in self.s_list]
        if self.m < 1 or len(self.s_list) != self.m:
            raise ParameterError(f"Expected {self.m} upgrade probabilities, got {len(self.s_list)}")
        if self.s_star is None:
            self.s_star = min(self.s_list)
        for name, value in [('p0', self.p0), ('eps', self.eps), ('s_star', self.s_star)] + \
                [(f's_{j + 1}', s) for j, s in enumerate(self.s_list)]:
            if not 0 < value <= 1:
                raise ParameterError(f"{name} must lie in (0,1], got {value}")
        if self.s_star > min(self.s_list) + _TOLERANCE:
            raise ParameterError(f"s_star = {self.s_star} exceeds min s_j = {min(self.s_list)}")
        if not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")
        if not 0 < self.gamma0 < 1:
            raise ParameterError(f"gamma0 must lie in (0,1), got {self.gamma0}")
        if self.lam < 1:
            raise ParameterError(f"lambda must be positive, got {self.lam}")

    @property
    def a(self) -> float:
        return self.delta ** 2 * self.gamma0 / (2 * (1 + self.delta))

    @property
    def psi(self) -> float:
        return min(self.delta / 2, 0.5)

    @property
    def c(self) -> float:
        return self.psi ** 4 / 24

    def as_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out.update(a=self.a, psi=self.psi, c=self.c)
        return out


def theorem1_bound(params: TheoremParams) -> float:
    """Upper bound on the expected number of evaluations until the target level is hit"""
    c, psi = params.c, params.psi
    generational = params.m * params.lam * (1 + math.log1p(c * params.lam))
    upgrades = params.p0 / ((1 + params.delta) * params.gamma0) * sum(1 / s for s in params.s_list)
    return 2 / (c * psi) * (generational + upgrades)


class LambdaBound(NamedTuple):
    value: float
    trivial: bool


def lambda_lower_bound(params: TheoremParams) -> LambdaBound:
    """Smallest population size admitted by the population-size condition"""
    argument = 32 * params.m * params.p0 / (
        (params.delta * params.gamma0) ** 2 * params.c * params.s_star * params.psi)
    if argument <= 1:
        logger.warning("lambda bound is trivial (log argument %.3g <= 1)", argument)
        return LambdaBound(1.0, True)
    return LambdaBound(2 / params.a * math.log(argument), False)


def local_optimum_runtime_shape(m: int, lam: int, sigma: float) -> float:
    """m * lambda * ln(lambda) + m / sigma, the shape fitted against local-optimum hitting times"""
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    return m * lam * math.log(lam) + m / sigma


# ---------------------------------------------------------------- selection thresholds

def _ceil(value: float) -> int:
    return math.ceil(round(value, 9))


@dataclass
class AdvisorResult:
    """Minimal selection parameters for the selective-pressure condition"""

    k_min: int
    mu_ratio_min: float
    eta_min: float
    gamma0: float
    delta_adopted: float
    eps: float
    p0: float

    def gamma0_for(self, selection: SelectionOp, lam: int) -> float:
        """gamma0 used with a concrete selection operator (mu/lambda for (mu,lambda))"""
        if isinstance(selection, MuLambda):
            return selection.mu / lam
        return self.gamma0

    def admits(self, selection: SelectionOp, lam: int) -> bool:
        if isinstance(selection, Tournament):
            return selection.k >= self.k_min
        if isinstance(selection, MuLambda):
            return lam / selection.mu >= self.mu_ratio_min - _TOLERANCE
        if isinstance(selection, ExpRanking):
            return selection.eta >= self.eta_min - _TOLERANCE
        return False


def lemma1_advisor(eps: float, p0: float, delta_prime: float) -> AdvisorResult:
    """
    Selection thresholds with eps' = eps * p0

    Returns:
        k_min = ceil(4(1+delta')/eps'), mu_ratio_min = (1+delta')/eps',
        eta_min = 4(1+delta')/eps', gamma0 = eps'/(4(1+delta'))
    """
    if not 0 < eps <= 1:
        raise ParameterError(f"eps must lie in (0,1], got {eps}")
    if not 0 < p0 <= 1:
        raise ParameterError(f"p0 must lie in (0,1], got {p0}")
    if not delta_prime > 0:
        raise ParameterError(f"delta' must be positive, got {delta_prime}")
    eps_prime = eps * p0
    scale = 1 + delta_prime
    return AdvisorResult(
        k_min=_ceil(4 * scale / eps_prime),
        mu_ratio_min=scale / eps_prime,
        eta_min=4 * scale / eps_prime,
        gamma0=eps_prime / (4 * scale),
        delta_adopted=delta_prime,
        eps=eps,
        p0=p0,
    )


def corollary_selection_thresholds(chi: float, p_c: float, delta: float = DEFAULT_DELTA) -> AdvisorResult:
    """
    Thresholds for bitwise mutation p_m = chi/n with single-point crossover

    p0 = e^-chi / (1 + delta/2), eps = (1 - p_c)/2 and
    delta' = (1 + delta)/(1 + delta/2) - 1, so that k_min equals
    ceil(8 (1 + delta) e^chi / (1 - p_c)).
    """
    if not 0 <= p_c < 1:
        raise ParameterError(f"p_c must lie in [0,1), got {p_c}")
    if not chi > 0:
        raise ParameterError(f"chi must be positive, got {chi}")
    p0 = math.exp(-chi) / (1 + delta / 2)
    eps = (1 - p_c) / 2
    delta_prime = (1 + delta) / (1 + delta / 2) - 1
    return lemma1_advisor(eps, p0, delta_prime)


# ---------------------------------------------------------------- neighbor-reaching bound

class Prop1Result(NamedTuple):
    bound: float
    worst_exact: float
    passed: bool


def appendix_inequality(K: int, n: int) -> bool:
    """(1 - K/n)^(n-K) >= e^-K, decided in exact rational arithmetic"""
    if K < 1 or K >= n:
        raise ParameterError(f"Inequality requires 1 <= K < n, got K={K}, n={n}")
    return (1 - Fraction(K, n)) ** (n - K) >= EXP_NEG_ONE_UPPER ** K


def prop1_check(K: int, n: int, problem: Optional[ProblemInstance] = None,
                nbhd: Optional[NeighborhoodSpec] = None) -> Prop1Result:
    """
    Compare the worst neighbor-reaching probability of bitwise mutation with
    p_m = K/n against K^K / (e n)^K

    Without a problem the worst case is taken over Hamming distances 1..K;
    with one (n <= EXACT_ENUMERATION_MAX_N) over every feasible x and y in N(x).
    """
    if K < 1 or K > n / 2:
        raise ParameterError(f"Neighbor-reaching bound requires 1 <= K <= n/2, got K={K}, n={n}")
    p = Fraction(K, n)
    bound = K ** K / (math.e * n) ** K
    if problem is None:
        worst = min(p ** d * (1 - p) ** (n - d) for d in range(1, K + 1))
    else:
        if problem.n != n:
            raise ParameterError(f"Problem dimension {problem.n} differs from n = {n}")
        if n > EXACT_ENUMERATION_MAX_N:
            raise ContractError(f"Exhaustive neighbor scan limited to n <= {EXACT_ENUMERATION_MAX_N}")
        nbhd = nbhd or NeighborhoodSpec.hamming(K)
        if nbhd.bound(problem) > K:
            raise ParameterError(f"Neighborhood bound {nbhd.bound(problem)} exceeds K = {K}")
        space = all_genotypes(n)
        distances = set()
        for row in space[problem.feasible_batch(space)]:
            neighbors = nbhd.neighbor_array(problem, BitString(row))
            distances.update((neighbors != row).sum(axis=1).tolist())
        if not distances:
            return Prop1Result(bound, 1.0, True)
        worst = min(p ** d * (1 - p) ** (n - d) for d in distances)
    # p^K e^-K <= p^K EXP_NEG_ONE_UPPER^K, so clearing the rational ceiling clears the bound
    return Prop1Result(bound, float(worst), worst >= (p * EXP_NEG_ONE_UPPER) ** K)


# ---------------------------------------------------------------- approximation

@dataclass
class ApproxReport:
    instance_id: str
    local_optimum: str
    value: int
    optimum: int
    ratio: float
    optimum_method: str

    def as_dict(self):
        return asdict(self)


def brute_force_optimum(problem: ProblemInstance) -> int:
    """Largest objective over feasible strings of {0,1}^n"""
    if problem.n > BRUTE_FORCE_MAX_N:
        raise ContractError(f"Brute-force optimum limited to n <= {BRUTE_FORCE_MAX_N}")
    best = None
    chunk = 1 << min(problem.n, 16)
    for start in range(0, 1 << problem.n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << problem.n), dtype=np.int64)
        shifts = np.arange(problem.n - 1, -1, -1)
        rows = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        feasible = problem.feasible_batch(rows)
        if feasible.any():
            value = int(problem.objective_batch(rows[feasible]).max())
            best = value if best is None else max(best, value)
    if best is None:
        raise ContractError(f"{problem.instance_id} has no feasible solution")
    return best


def approximation_certify(problem: ProblemInstance, nbhd: NeighborhoodSpec,
                          x_localopt: BitString) -> ApproxReport:
    """Approximation ratio OPT / F(x) of a local optimum"""
    if not is_local_optimum(problem, nbhd, x_localopt):
        raise ContractError(f"{x_localopt.to_string()} is not a local optimum of {problem.instance_id}")
    value = problem.objective(x_localopt)
    optimum = problem.optimum_value()
    method = 'analytic'
    if optimum is None:
        optimum = brute_force_optimum(problem)
        method = 'brute_force'
    ratio = math.inf if value == 0 else optimum / value
    return ApproxReport(problem.instance_id, x_localopt.to_string(), value, optimum, ratio, method)


# ---------------------------------------------------------------- condition checking

@dataclass
class ConditionReport:
    """Outcome of a condition check; serializes to the four report sections"""

    parameters: Dict[str, Any] = field(default_factory=dict)
    conditions: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    measurements: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(entry['passed'] for entry in self.conditions.values())

    def failed(self) -> List[str]:
        return [name for name, entry in self.conditions.items() if not entry['passed']]

    def to_dict(self) -> Dict[str, Any]:
        return {'parameters': self.parameters, 'conditions': self.conditions,
                'measurements': self.measurements, 'notes': list(self.notes)}


def _exact_entry(passed: bool, value, threshold=None, witness=None) -> Dict[str, Any]:
    return {'passed': bool(passed), 'method': 'exact', 'value': value, 'threshold': threshold,
            'witness': witness, 'ci': None, 'samples': None}


def _mc_entry(passed: bool, value, samples: int, ci=None, threshold=None, witness=None) -> Dict[str, Any]:
    return {'passed': bool(passed), 'method': 'montecarlo', 'value': value, 'threshold': threshold,
            'witness': witness, 'ci': ci, 'samples': int(samples)}


def _gamma_grid(gamma0: float) -> np.ndarray:
    return gamma0 * np.arange(1, GAMMA_GRID_POINTS + 1) / GAMMA_GRID_POINTS


def _beta_on_grid(selection: SelectionOp, pop: Population, gammas: np.ndarray) -> np.ndarray:
    """beta(gamma, P) for every gamma of the grid; pop sorted by level"""
    lam = pop.lam
    ranks = np.maximum(1, np.ceil(np.round(gammas * lam, 9)).astype(np.int64))
    cumulative = np.cumsum(selection.probabilities(pop))
    levels_at_rank = pop.levels[ranks - 1]
    # members with level >= L occupy a prefix of the sorted population
    last = np.searchsorted(-pop.levels, -levels_at_rank, side='right') - 1
    return np.minimum(1.0, cumulative[last])


class ConditionChecker:
    """
    Measures the quantities behind each runtime condition for one
    (problem, partition, operators, lambda) configuration
    """

    def __init__(self, problem: ProblemInstance, partition: LevelPartition, ops: OperatorSuite,
                 lam: int, mode: str = 'exact', samples: int = MONTE_CARLO_SAMPLES,
                 delta: float = DEFAULT_DELTA, eps: Optional[float] = None,
                 p0: Optional[float] = None, gamma0: Optional[float] = None,
                 rng: Optional[RandomStream] = None):
        if mode not in ('exact', 'montecarlo'):
            raise ParameterError(f"mode must be 'exact' or 'montecarlo', got {mode}")
        if mode == 'exact' and problem.n > EXACT_ENUMERATION_MAX_N and not self._analytic(problem, ops):
            raise ContractError(
                f"Exact mode needs n <= {EXACT_ENUMERATION_MAX_N} or analytic upgrade bounds, got n = {problem.n}")
        ops.selection.validate(lam)
        self.problem = problem
        self.partition = partition
        self.ops = ops
        self.lam = lam
        self.mode = mode
        self.samples = samples
        self.delta = delta
        self.eps_given = eps
        self.p0_given = p0
        self.gamma0_given = gamma0
        self.rng = rng or RandomStream(0)
        self.m = partition.m
        self.report = ConditionReport()

    @staticmethod
    def _analytic(problem: ProblemInstance, ops: OperatorSuite) -> bool:
        return isinstance(ops.mutation, Bitwise) and \
            problem.analytic_upgrade_bound(float(ops.mutation.p_m)) is not None

    # -- mutation side

    def _exact_mutation(self):
        """s_j, both p0 variants, sigma (L1, L2) by exhaustive summation"""
        space, _, levels = self.partition.enumerate()
        m = self.m
        feasible = self.problem.feasible_batch(space)
        codes = genotype_codes(space)
        s = np.ones(m + 2)
        s_witness: Dict[int, str] = {}
        p0_level, p0_level_witness = 1.0, None
        p0_self, p0_self_witness = 1.0, None
        sigma_l1, l1_witness = 1.0, None
        sigma_l2, l2_witness = 1.0, None
        nbhd = self.partition.nbhd or NeighborhoodSpec.hamming(self.problem.default_radius)
        for row, level, code, ok in zip(space, levels, codes, feasible):
            x = BitString(row)
            vector = self.ops.mutation.transition_vector(self.problem, x)
            mass = np.bincount(levels, weights=vector, minlength=m + 2)
            if level <= m:
                upgrade = mass[level + 1:].sum()
                if upgrade < s[level]:
                    s[level], s_witness[int(level)] = upgrade, x.to_string()
            if level >= 2:
                stay = mass[level:].sum()
                if stay < p0_level:
                    p0_level, p0_level_witness = stay, x.to_string()
            if vector[code] < p0_self:
                p0_self, p0_self_witness = vector[code], x.to_string()
            if ok:
                neighbors = nbhd.neighbor_array(self.problem, x)
                if len(neighbors):
                    reach = vector[genotype_codes(neighbors)].min()
                    if reach < sigma_l1:
                        sigma_l1, l1_witness = reach, x.to_string()
            else:
                into_sol = vector[feasible].sum()
                if into_sol < sigma_l2:
                    sigma_l2, l2_witness = into_sol, x.to_string()
        empty = [j for j in range(1, m + 1) if not np.any(levels == j)]
        if empty:
            self.report.notes.append(f"levels {empty} are empty; their upgrade condition is vacuous")
        return {
            's': [float(v) for v in s[1:m + 1]], 's_witness': s_witness,
            'p0_level': float(p0_level), 'p0_level_witness': p0_level_witness,
            'p0_self': float(p0_self), 'p0_self_witness': p0_self_witness,
            'sigma_l1': float(sigma_l1), 'l1_witness': l1_witness,
            'sigma_l2': float(sigma_l2), 'l2_witness': l2_witness,
            'has_infeasible': bool((~feasible).any()),
        }

    def _analytic_mutation(self):
        p_m = float(self.ops.mutation.p_m)
        n = self.problem.n
        s_value = self.problem.analytic_upgrade_bound(p_m)
        radius = self.partition.nbhd.radius if self.partition.nbhd is not None else self.problem.default_radius
        reach = min(binomial_point(p_m, d, n) for d in range(1, radius + 1))
        stay = binomial_point(p_m, 0, n)
        self.report.notes.append("upgrade probabilities taken from the problem's closed-form bound")
        return {
            's': [float(s_value)] * self.m, 's_witness': {},
            'p0_level': stay, 'p0_level_witness': None,
            'p0_self': stay, 'p0_self_witness': None,
            'sigma_l1': float(reach), 'l1_witness': None,
            'sigma_l2': 1.0, 'l2_witness': None,
            'has_infeasible': False,
        }

    def _sampled_mutation(self):
        m, n = self.m, self.problem.n
        rng = self.rng.child(1)
        xs = rng.bits((self.samples, n))
        ys = self.ops.mutation.mutate_batch(self.problem, xs, rng)
        lx = self.partition.levels_of(xs)
        ly = self.partition.levels_of(ys)
        s, s_ci, missing = [], [], []
        for j in range(1, m + 1):
            at_level = lx == j
            trials = int(at_level.sum())
            if trials == 0:
                missing.append(j)
                continue
            hits = int((ly[at_level] >= j + 1).sum())
            s.append(hits / trials)
            s_ci.append(wilson_interval(hits, trials))
        if missing:
            self.report.notes.append(f"no sampled genotype fell into levels {missing}")
        stay_trials = lx >= 2
        p0_level = float((ly[stay_trials] >= lx[stay_trials]).mean()) if stay_trials.any() else 1.0
        p0_self = float(np.all(xs == ys, axis=1).mean())
        feasible = self.problem.feasible_batch(xs)
        infeasible = ~feasible
        sigma_l2 = float(self.problem.feasible_batch(ys[infeasible]).mean()) if infeasible.any() else 1.0
        self.report.notes.append("Monte Carlo mutation rates average over uniformly sampled genotypes")
        return {
            's': s, 's_ci': s_ci, 's_witness': {},
            'p0_level': p0_level, 'p0_level_witness': None,
            'p0_self': p0_self, 'p0_self_witness': None,
            'sigma_l1': None, 'l1_witness': None,
            'sigma_l2': sigma_l2, 'l2_witness': None,
            'has_infeasible': bool(infeasible.any()),
        }

    # -- crossover side

    def _crossover_exact(self):
        """Worst case over parent pairs, measured on the single offspring the engine produces"""
        space, _, levels = self.partition.enumerate()
        m = self.m
        level_by_code = np.empty(1 << self.problem.n, dtype=np.int64)
        level_by_code[genotype_codes(space)] = levels
        eps = np.ones(m + 1)
        witness: Dict[int, str] = {}
        strings = [BitString(row) for row in space]
        xor = self.ops.crossover
        for u, lu in zip(strings, levels):
            for v, lv in zip(strings, levels):
                top = min(int(lu), int(lv) - 1, m)
                if top < 1:
                    continue
                dist = xor.offspring_distribution(u, v)
                children = list(dist)
                child_levels = level_by_code[genotype_codes(np.stack([c.bits for c in children]))]
                probs = np.array([dist[c] for c in children])
                for j in range(1, top + 1):
                    value = probs[child_levels >= j + 1].sum()
                    if value < eps[j]:
                        eps[j], witness[j] = value, f"{u.to_string()} x {v.to_string()}"
        return [float(e) for e in eps[1:]], witness

    def _crossover_sampled(self):
        m, n = self.m, self.problem.n
        rng = self.rng.child(2)
        us = rng.bits((self.samples, n))
        vs = rng.bits((self.samples, n))
        xor = self.ops.crossover
        children = xor.apply_batch(us, vs, rng)
        lu = self.partition.levels_of(us)
        lv = self.partition.levels_of(vs)
        lc = self.partition.levels_of(children)
        eps, cis, trials_list = [], [], []
        for j in range(1, m + 1):
            scope = (lu >= j) & (lv >= j + 1)
            trials = int(scope.sum())
            if trials == 0:
                eps.append(None)
                cis.append(None)
                trials_list.append(0)
                continue
            hits = int((lc[scope] >= j + 1).sum())
            eps.append(hits / trials)
            cis.append(list(wilson_interval(hits, trials)))
            trials_list.append(trials)
        self.report.notes.append("Monte Carlo crossover rates average over uniformly sampled parent pairs")
        return eps, cis, trials_list

    # -- selection side

    def _compositions(self, include_target: bool):
        top = self.m + 1 if include_target else self.m
        choices = list(range(1, top + 1))
        count = math.comb(self.lam + len(choices) - 1, len(choices) - 1)
        if self.lam <= EXACT_COMPOSITION_MAX_LAMBDA and count <= MAX_COMPOSITIONS:
            return 'exact', itertools.combinations_with_replacement(choices, self.lam), count
        rng = self.rng.child(3, int(include_target))
        sampled = [tuple(rng.integers(1, top + 1, size=self.lam)) for _ in range(POPULATION_SAMPLES)]
        sampled.extend(tuple([level] * self.lam) for level in choices)
        return 'montecarlo', sampled, len(sampled)

    def _level_fitness(self) -> Dict[int, int]:
        """Representative fitness per level: least fitness seen in the level, else the level index"""
        fitness = {level: level for level in range(1, self.m + 2)}
        if self.problem.n <= EXACT_ENUMERATION_MAX_N:
            _, values, levels = self.partition.enumerate()
            for level in range(1, self.m + 2):
                members = values[levels == level]
                if len(members):
                    fitness[level] = int(members.min())
        return fitness

    def _selective_pressure(self, p0: float, eps: float, gamma0: float, include_target: bool):
        factor = math.sqrt((1 + self.delta) / (p0 * eps * gamma0))
        gammas = _gamma_grid(gamma0)
        method, universe, count = self._compositions(include_target)
        fitness = self._level_fitness()
        worst_margin, witness = math.inf, None
        for composition in universe:
            levels = np.array(composition, dtype=np.int64)
            pop = Population.synthetic([fitness[int(level)] for level in levels], levels)
            beta = _beta_on_grid(self.ops.selection, pop, gammas)
            margin = beta - gammas * factor
            i = int(np.argmin(margin))
            if margin[i] < worst_margin:
                worst_margin = float(margin[i])
                witness = {'levels': sorted((int(v) for v in levels), reverse=True),
                           'gamma': float(gammas[i]), 'beta': float(beta[i])}
        passed = worst_margin >= -_TOLERANCE
        return method, count, passed, worst_margin, witness, factor

    # -- driver

    def _entry(self, method: str, passed: bool, value, threshold=None, witness=None, ci=None,
               samples: Optional[int] = None) -> Dict[str, Any]:
        if method == 'exact':
            return _exact_entry(passed, value, threshold, witness)
        return _mc_entry(passed, value, samples or self.samples, ci=ci, threshold=threshold, witness=witness)

    def _measure_mutation(self):
        if self.mode == 'montecarlo':
            return self._sampled_mutation(), 'montecarlo'
        if self.problem.n <= EXACT_ENUMERATION_MAX_N:
            return self._exact_mutation(), 'exact'
        return self._analytic_mutation(), 'exact'

    def _measure_crossover(self):
        if self.mode == 'exact' and self.problem.n <= EXACT_PAIR_MAX_N:
            eps_list, witness = self._crossover_exact()
            return eps_list, None, witness, 'exact'
        if self.mode == 'exact':
            logger.warning("crossover conditions sampled: exact pair enumeration limited to n <= %d",
                           EXACT_PAIR_MAX_N)
            self.report.notes.append(f"crossover conditions sampled (exact pairs limited to n <= {EXACT_PAIR_MAX_N})")
        eps_list, cis, _ = self._crossover_sampled()
        return eps_list, cis, None, 'montecarlo'

    def run(self) -> ConditionReport:
        report = self.report
        problem, m = self.problem, self.m
        mutation, method = self._measure_mutation()

        s_list = mutation['s']
        s_star = min(s_list) if s_list else 0.0
        report.conditions['C1'] = self._entry(method, len(s_list) == m and s_star > 0, s_star, 0.0,
                                              mutation['s_witness'] or None)

        p0_self, p0_level = mutation['p0_self'], mutation['p0_level']
        if self.p0_given is not None:
            p0 = self.p0_given
        else:
            p0 = p0_self if p0_self > 0 else p0_level
        report.conditions['C2'] = self._entry(method, p0_level >= p0 - _TOLERANCE and p0_level > 0, p0_level,
                                              p0, mutation['p0_level_witness'])
        report.conditions['C2prime'] = self._entry(method, p0_self >= p0 - _TOLERANCE and p0_self > 0, p0_self,
                                                   p0, mutation['p0_self_witness'])

        eps_list, eps_ci, eps_witness, xor_method = self._measure_crossover()
        measured = [e for e in eps_list if e is not None]
        eps_all = min(measured) if measured else 0.0
        # the relaxed crossover condition only covers levels 1..m-1
        eps_lower = min((e for e in eps_list[:m - 1] if e is not None), default=1.0)
        eps = self.eps_given if self.eps_given is not None else eps_all
        eps_relaxed = self.eps_given if self.eps_given is not None else eps_lower
        report.conditions['C3'] = self._entry(xor_method, eps_all >= eps - _TOLERANCE and eps_all > 0,
                                              eps_all, eps, eps_witness)
        report.conditions['C3prime'] = self._entry(xor_method, eps_lower >= eps_relaxed - _TOLERANCE and eps_lower > 0,
                                                   eps_lower, eps_relaxed, eps_witness)

        gamma0 = self.gamma0_given
        if gamma0 is None and 0 < p0 <= 1 and 0 < eps_relaxed <= 1:
            gamma0 = lemma1_advisor(eps_relaxed, p0, self.delta).gamma0_for(self.ops.selection, self.lam)
        for name, include_target, eps_used in (('C4', True, eps), ('C4prime', False, eps_relaxed)):
            if gamma0 is None or not 0 < gamma0 < 1 or not p0 > 0 or not eps_used > 0:
                report.notes.append(f"{name} not checked: p0, eps or gamma0 is zero or undefined")
                report.conditions[name] = _exact_entry(False, None)
                continue
            pressure_method, count, passed, margin, witness, factor = self._selective_pressure(
                p0, eps_used, gamma0, include_target)
            if pressure_method == 'montecarlo':
                report.notes.append(f"{name}: sampled {count} level compositions")
            report.conditions[name] = self._entry(pressure_method, passed, margin, 0.0, witness, samples=count)
            report.measurements[f'{name}_factor'] = factor

        params = None
        if len(s_list) == m and s_star > 0 and gamma0 is not None and 0 < gamma0 < 1 \
                and 0 < p0 <= 1 and 0 < eps_relaxed <= 1:
            params = TheoremParams(m, self.lam, s_list, p0, eps_relaxed, self.delta, gamma0, s_star)
            bound = lambda_lower_bound(params)
            report.conditions['C5'] = _exact_entry(self.lam >= bound.value, self.lam, bound.value)
            if bound.trivial:
                report.notes.append("population-size bound is trivial (log argument <= 1)")
            report.measurements['theorem_bound'] = theorem1_bound(params)
        else:
            report.conditions['C5'] = _exact_entry(False, self.lam, None)

        sigma_l1 = mutation['sigma_l1']
        if sigma_l1 is None:
            report.conditions['L1'] = _mc_entry(False, None, self.samples)
            report.notes.append("L1 needs an exhaustive neighbor scan; not available in Monte Carlo mode")
        else:
            report.conditions['L1'] = self._entry(method, sigma_l1 > 0, sigma_l1, 0.0, mutation['l1_witness'])
        if mutation['has_infeasible']:
            report.conditions['L2'] = self._entry(method, mutation['sigma_l2'] > 0, mutation['sigma_l2'], 0.0,
                                                  mutation['l2_witness'])
        else:
            report.conditions['L2'] = _exact_entry(True, 1.0, 0.0)
            report.notes.append("L2 vacuous: every sampled or enumerated string is feasible")
        report.conditions['L3'] = self._l3()

        report.parameters = {
            'problem': problem.instance_id, 'n': problem.n, 'partition': self.partition.kind, 'm': m,
            'lambda': self.lam, 'mode': self.mode, 'delta': self.delta, 'gamma0': gamma0,
            'p0': p0, 'eps': eps_relaxed, 'operators': self.ops.describe(),
        }
        sigma_values = [sigma_l1] if sigma_l1 is not None else []
        if mutation['has_infeasible']:
            sigma_values.append(mutation['sigma_l2'])
        report.measurements.update({
            's': s_list, 's_star': s_star, 'p0_level': p0_level, 'p0_self': p0_self,
            'eps_per_level': eps_list, 'eps_ci': eps_ci,
            'sigma': min(sigma_values) if sigma_values else None,
        })
        if 's_ci' in mutation:
            report.measurements['s_ci'] = [list(ci) for ci in mutation['s_ci']]
        if params is not None:
            report.measurements['theorem_params'] = params.as_dict()
        logger.info("condition check on %s: failed %s", problem.instance_id, report.failed() or 'none')
        return report

    def _l3(self) -> Dict[str, Any]:
        if self.mode == 'exact' and self.problem.n <= EXACT_PAIR_MAX_N:
            estimate = exact_eps0(self.ops.crossover, self.problem)
            return _exact_entry(estimate.estimate > 0, estimate.estimate, 0.0)
        estimate = estimate_eps0(self.ops.crossover, self.problem, trials=self.samples, rng=self.rng.child(4))
        return _mc_entry(estimate.ci_low > 0, estimate.estimate, estimate.trials,
                         ci=[estimate.ci_low, estimate.ci_high], threshold=0.0)


def check_conditions(problem: ProblemInstance, partition: LevelPartition, ops: OperatorSuite,
                     lam: int, mode: str = 'exact', samples: int = MONTE_CARLO_SAMPLES,
                     delta: float = DEFAULT_DELTA, eps: Optional[float] = None,
                     p0: Optional[float] = None, gamma0: Optional[float] = None,
                     rng: Optional[RandomStream] = None) -> ConditionReport:
    """
    Verify the runtime conditions on a concrete configuration

    Args:
        problem: Problem instance
        partition: Level partition (its neighborhood defines local optima)
        ops: Selection, crossover and mutation
        lam: Population size
        mode: 'exact' (exhaustive, n <= 12 or analytic bounds) or 'montecarlo'
        samples: Monte Carlo sample count
        delta: Slack delta, also adopted as delta' for the selection thresholds
        eps, p0, gamma0: Fixed values; measured or derived when omitted

    Returns:
        ConditionReport
    """
    return ConditionChecker(problem, partition, ops, lam, mode, samples, delta, eps, p0, gamma0, rng).run()
