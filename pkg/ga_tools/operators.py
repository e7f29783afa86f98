"""
Selection, crossover and mutation operators

Every operator has a sampler working on single individuals, a batch
sampler used by the engine, and an exact evaluator of its transition
probabilities (p_sel, p_xor, p_mut).
"""

import logging
import math
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from settings.constants import EXACT_ENUMERATION_MAX_N, EXACT_PAIR_MAX_N
from .core import (BitString, Population, ProblemInstance, RandomStream, all_genotypes, gamma_rank,
                   genotype_codes, sort_population)
from .exceptions import ConfigurationError, ContractError, DimensionError, ParameterError
from .levels import NeighborhoodSpec
from .utils import binomial_point, validate_positive, validate_probability, wilson_interval

logger = logging.getLogger(__name__)

Probability = Union[float, Fraction]


# ---------------------------------------------------------------- selection

class SelectionOp(ABC):
    """Selection over a sorted population, returning 0-based member indices"""

    name = 'selection'

    def validate(self, lam: int):
        """Raise ConfigurationError when the operator cannot act on lambda members"""

    @abstractmethod
    def probabilities(self, pop: Population) -> np.ndarray:
        """Exact p_sel(i|P) for every index"""

    @abstractmethod
    def select_batch(self, pop: Population, rng: RandomStream, count: int) -> np.ndarray:
        """count independent selections"""

    def select(self, pop: Population, rng: RandomStream) -> int:
        return int(self.select_batch(pop, rng, 1)[0])

    def parameter(self):
        return None


class Tournament(SelectionOp):
    """
    k-tournament: k uniform draws with replacement, the fittest draw wins

    Fitness ties go to the lowest rank index, so member i wins exactly when
    every draw lies in W_i plus i itself, W_i being the members i beats.
    """

    name = 'tournament'

    def __init__(self, k: int):
        if int(k) != k or k < 1:
            raise ParameterError(f"Tournament size must be a positive integer, got {k}")
        self.k = int(k)

    def parameter(self):
        return self.k

    @staticmethod
    def _strength_order(pop: Population) -> np.ndarray:
        """Position of each member when ordered best-first by (-fitness, index)"""
        order = np.lexsort((np.arange(pop.lam), -pop.fitness))
        positions = np.empty(pop.lam, dtype=np.int64)
        positions[order] = np.arange(pop.lam)
        return positions

    def probabilities(self, pop):
        pop.require_sorted()
        lam = pop.lam
        beaten = lam - 1 - self._strength_order(pop)
        return ((beaten + 1) / lam) ** self.k - (beaten / lam) ** self.k

    def select_batch(self, pop, rng, count):
        pop.require_sorted()
        positions = self._strength_order(pop)
        draws = rng.integers(0, pop.lam, size=(count, self.k))
        best = np.argmin(positions[draws], axis=1)
        return draws[np.arange(count), best]

    def __repr__(self):
        return f"Tournament(k={self.k})"


class MuLambda(SelectionOp):
    """(mu, lambda)-selection: uniform over the fittest mu ranks"""

    name = 'mulambda'

    def __init__(self, mu: int):
        if int(mu) != mu or mu < 1:
            raise ParameterError(f"mu must be a positive integer, got {mu}")
        self.mu = int(mu)

    def parameter(self):
        return self.mu

    def validate(self, lam):
        if self.mu > lam:
            raise ConfigurationError(f"mu = {self.mu} exceeds lambda = {lam}")

    def probabilities(self, pop):
        pop.require_sorted()
        self.validate(pop.lam)
        probs = np.zeros(pop.lam)
        probs[:self.mu] = 1.0 / self.mu
        return probs

    def select_batch(self, pop, rng, count):
        pop.require_sorted()
        self.validate(pop.lam)
        return rng.integers(0, self.mu, size=count)

    def __repr__(self):
        return f"MuLambda(mu={self.mu})"


class ExpRanking(SelectionOp):
    """
    Exponential ranking with alpha(g) = eta * e^{eta (1-g)} / (e^eta - 1)

    Rank i receives the integral of alpha over ((i-1)/lambda, i/lambda].
    """

    name = 'exprank'

    def __init__(self, eta: float):
        self.eta = validate_positive('eta', float(eta))

    def parameter(self):
        return self.eta

    def rank_probabilities(self, lam: int) -> np.ndarray:
        edges = np.arange(lam + 1) / lam
        # e^{-eta a} - e^{-eta b} over 1 - e^{-eta}, written with expm1
        upper = -np.expm1(-self.eta * edges[1:])
        lower = -np.expm1(-self.eta * edges[:-1])
        return (upper - lower) / -math.expm1(-self.eta)

    def probabilities(self, pop):
        pop.require_sorted()
        return self.rank_probabilities(pop.lam)

    def select_batch(self, pop, rng, count):
        pop.require_sorted()
        cumulative = np.cumsum(self.rank_probabilities(pop.lam))
        picks = np.searchsorted(cumulative, rng.random(count), side='right')
        return np.minimum(picks, pop.lam - 1)

    def __repr__(self):
        return f"ExpRanking(eta={self.eta})"


class TargetFirstSelection(SelectionOp):
    """
    Sel': the inner mechanism, except that once the population holds a
    target member the first such member is always returned

    Inner draws are consumed in every case so the random stream advances
    exactly as it does for the inner operator.
    """

    def __init__(self, inner: SelectionOp, target_level: int):
        self.inner = inner
        self.target_level = target_level
        self.name = inner.name

    def parameter(self):
        return self.inner.parameter()

    def validate(self, lam):
        self.inner.validate(lam)

    def _target_index(self, pop: Population) -> Optional[int]:
        return pop.first_index_at_level(self.target_level) if pop.levels is not None else None

    def probabilities(self, pop):
        target = self._target_index(pop)
        if target is None:
            return self.inner.probabilities(pop)
        probs = np.zeros(pop.lam)
        probs[target] = 1.0
        return probs

    def select_batch(self, pop, rng, count):
        picks = self.inner.select_batch(pop, rng, count)
        target = self._target_index(pop)
        if target is not None:
            picks = np.full(count, target, dtype=picks.dtype)
        return picks

    def __repr__(self):
        return f"TargetFirstSelection({self.inner!r})"


def select(sel: SelectionOp, pop: Population, rng: RandomStream) -> int:
    return sel.select(pop, rng)


def selection_prob(sel: SelectionOp, pop: Population, i: int) -> float:
    """Exact probability of selecting the member at 0-based index i"""
    return float(sel.probabilities(pop)[i])


def cumulative_beta(sel: SelectionOp, pop: Population, partition, gamma: float) -> float:
    """
    beta(gamma, P): probability of selecting a member in the level of the
    gamma-ranked individual or higher
    """
    if not 0 < gamma < 1:
        raise ParameterError(f"gamma must lie in (0,1), got {gamma}")
    if pop.levels is None:
        pop = sort_population(pop, partition)
    pop.require_sorted()
    level = pop.levels[gamma_rank(pop.lam, gamma) - 1]
    probs = sel.probabilities(pop)
    return float(min(1.0, probs[pop.levels >= level].sum()))


# ---------------------------------------------------------------- mutation

def mutation_prob(p_m: Probability, x: BitString, y: BitString) -> Probability:
    """p_m^D (1-p_m)^(n-D); exact when p_m is a Fraction, log-space otherwise"""
    if x.n != y.n:
        raise DimensionError(f"Length mismatch: {x.n} vs {y.n}")
    distance = x.hamming_distance(y)
    if isinstance(p_m, Fraction):
        return p_m ** distance * (1 - p_m) ** (x.n - distance)
    return binomial_point(p_m, distance, x.n)


class MutationOp(ABC):
    """Mutation of single genotypes and of whole offspring batches"""

    name = 'mutation'

    @abstractmethod
    def mutate_batch(self, problem: ProblemInstance, genotypes: np.ndarray,
                     rng: RandomStream) -> np.ndarray:
        """Mutate every row"""

    def mutate(self, problem: ProblemInstance, x: BitString, rng: RandomStream) -> BitString:
        if x.n != problem.n:
            raise DimensionError(f"Expected length {problem.n}, got {x.n}")
        return BitString(self.mutate_batch(problem, x.bits[None, :], rng)[0])

    @abstractmethod
    def transition_vector(self, problem: ProblemInstance, x: BitString) -> np.ndarray:
        """p_mut(y|x) for every y of {0,1}^n in genotype-code order"""

    def transition_prob(self, problem: ProblemInstance, x: BitString, y: BitString) -> float:
        code = int(genotype_codes(y.bits[None, :])[0])
        return float(self.transition_vector(problem, x)[code])

    @staticmethod
    def _check_enumerable(problem: ProblemInstance):
        if problem.n > EXACT_ENUMERATION_MAX_N:
            raise ContractError(f"Exact transition vectors limited to n <= {EXACT_ENUMERATION_MAX_N}")


class Bitwise(MutationOp):
    """Mut*: every bit flips independently with probability p_m"""

    name = 'bitwise'

    def __init__(self, p_m: Probability):
        validate_probability('p_m', float(p_m))
        self.p_m = p_m

    def mutate_batch(self, problem, genotypes, rng):
        flips = rng.random(genotypes.shape) < float(self.p_m)
        return np.bitwise_xor(genotypes, flips.astype(np.uint8))

    def transition_vector(self, problem, x):
        self._check_enumerable(problem)
        distances = (all_genotypes(problem.n) != x.bits).sum(axis=1)
        return binomial_point(float(self.p_m), distances, problem.n)

    def transition_prob(self, problem, x, y):
        return float(mutation_prob(self.p_m, x, y))

    def __repr__(self):
        return f"Bitwise(p_m={self.p_m})"


class NeighborhoodUniform(MutationOp):
    """
    Uniform choice over N(x); the fallback feasible solution y_I is
    returned when N(x) is empty or x is infeasible
    """

    name = 'neighborhood'

    def __init__(self, nbhd: Optional[NeighborhoodSpec] = None):
        self.nbhd = nbhd or NeighborhoodSpec.native()

    def _fallback(self, problem: ProblemInstance) -> np.ndarray:
        if problem.fallback_feasible is None:
            raise ConfigurationError(f"{problem.instance_id} defines no fallback feasible solution")
        return problem.fallback_feasible.bits

    def mutate_batch(self, problem, genotypes, rng):
        out = np.array(genotypes, dtype=np.uint8, copy=True)
        feasible = problem.feasible_batch(genotypes)
        for i, row in enumerate(genotypes):
            neighbors = self.nbhd.neighbor_array(problem, BitString(row)) if feasible[i] else None
            if neighbors is None or len(neighbors) == 0:
                out[i] = self._fallback(problem)
                logger.debug("neighborhood mutation fell back to y_I for %s", BitString(row).to_string())
            else:
                out[i] = neighbors[rng.integers(0, len(neighbors))]
        return out

    def transition_vector(self, problem, x):
        self._check_enumerable(problem)
        vector = np.zeros(1 << problem.n)
        neighbors = self.nbhd.neighbor_array(problem, x) if problem.is_feasible(x) else None
        if neighbors is None or len(neighbors) == 0:
            vector[genotype_codes(self._fallback(problem)[None, :])[0]] = 1.0
        else:
            np.add.at(vector, genotype_codes(neighbors), 1.0 / len(neighbors))
        return vector

    def __repr__(self):
        return f"NeighborhoodUniform({self.nbhd})"


class RepairWrapped(MutationOp):
    """Inner mutation whose infeasible outputs are replaced by y_I"""

    name = 'repair'

    def __init__(self, inner: MutationOp):
        self.inner = inner

    @property
    def p_m(self):
        return getattr(self.inner, 'p_m', None)

    def mutate_batch(self, problem, genotypes, rng):
        out = self.inner.mutate_batch(problem, genotypes, rng)
        infeasible = ~problem.feasible_batch(out)
        if infeasible.any():
            if problem.fallback_feasible is None:
                raise ConfigurationError(f"{problem.instance_id} defines no fallback feasible solution")
            out[infeasible] = problem.fallback_feasible.bits
            logger.debug("repaired %d infeasible offspring", int(infeasible.sum()))
        return out

    def transition_vector(self, problem, x):
        vector = self.inner.transition_vector(problem, x).copy()
        infeasible = ~problem.feasible_batch(all_genotypes(problem.n))
        mass = vector[infeasible].sum()
        if mass > 0:
            if problem.fallback_feasible is None:
                raise ConfigurationError(f"{problem.instance_id} defines no fallback feasible solution")
            vector[infeasible] = 0.0
            vector[genotype_codes(problem.fallback_feasible.bits[None, :])[0]] += mass
        return vector

    def __repr__(self):
        return f"RepairWrapped({self.inner!r})"


def mutate(mut: MutationOp, problem: ProblemInstance, x: BitString, rng: RandomStream) -> BitString:
    return mut.mutate(problem, x, rng)


# ---------------------------------------------------------------- crossover

class CrossoverOp(ABC):
    """Single-offspring crossover as used by the engine"""

    name = 'crossover'
    p_c: float = 0.0

    @abstractmethod
    def apply_batch(self, xs: np.ndarray, ys: np.ndarray, rng: RandomStream) -> np.ndarray:
        """One offspring per parent row pair"""

    def apply(self, x: BitString, y: BitString, rng: RandomStream) -> BitString:
        if x.n != y.n:
            raise DimensionError(f"Parent length mismatch: {x.n} vs {y.n}")
        return BitString(self.apply_batch(x.bits[None, :], y.bits[None, :], rng)[0])

    @abstractmethod
    def offspring_distribution(self, x: BitString, y: BitString) -> Dict[BitString, float]:
        """Exact p_xor(. | x, y)"""


class TwoOffspringOp(ABC):
    """Crossover producing an offspring pair (x', y')"""

    @abstractmethod
    def offspring_pair_batch(self, xs: np.ndarray, ys: np.ndarray,
                             rng: RandomStream) -> Tuple[np.ndarray, np.ndarray]:
        """Offspring pairs for every parent row pair"""

    def offspring_pair(self, x: BitString, y: BitString, rng: RandomStream) -> Tuple[BitString, BitString]:
        us, vs = self.offspring_pair_batch(x.bits[None, :], y.bits[None, :], rng)
        return BitString(us[0]), BitString(vs[0])

    @abstractmethod
    def pair_distribution(self, x: BitString, y: BitString) -> Dict[Tuple[BitString, BitString], float]:
        """Exact distribution of the offspring pair"""


def _choose_rows(us: np.ndarray, vs: np.ndarray, pick: np.ndarray) -> np.ndarray:
    return np.where(pick[:, None] == 0, us, vs).astype(np.uint8)


class SinglePoint(CrossoverOp, TwoOffspringOp):
    """
    Single-point crossover Cross*

    With probability p_c the parents are spliced at a cut point Z uniform
    on 1..n-1, otherwise both are copied. The single-offspring form returns
    one of the two children uniformly.
    """

    name = 'singlepoint'

    def __init__(self, p_c: float):
        self.p_c = validate_probability('p_c', p_c, high_open=True)

    @staticmethod
    def splice(x: np.ndarray, y: np.ndarray, cut: int) -> Tuple[np.ndarray, np.ndarray]:
        return (np.concatenate([x[:cut], y[cut:]]).astype(np.uint8),
                np.concatenate([y[:cut], x[cut:]]).astype(np.uint8))

    def offspring_pair_batch(self, xs, ys, rng):
        count, n = xs.shape
        if n < 2:
            raise DimensionError(f"Single-point crossover needs n >= 2, got {n}")
        crossing = rng.random(count) < self.p_c
        cuts = rng.integers(1, n, size=count)
        prefix = (np.arange(n)[None, :] < cuts[:, None]) | ~crossing[:, None]
        us = np.where(prefix, xs, ys).astype(np.uint8)
        vs = np.where(prefix, ys, xs).astype(np.uint8)
        return us, vs

    def apply_batch(self, xs, ys, rng):
        us, vs = self.offspring_pair_batch(xs, ys, rng)
        return _choose_rows(us, vs, rng.integers(0, 2, size=len(xs)))

    def pair_distribution(self, x, y):
        if x.n < 2:
            raise DimensionError(f"Single-point crossover needs n >= 2, got {x.n}")
        dist: Dict[Tuple[BitString, BitString], float] = defaultdict(float)
        dist[(x, y)] += 1 - self.p_c
        for cut in range(1, x.n):
            u, v = self.splice(x.bits, y.bits, cut)
            dist[(BitString(u), BitString(v))] += self.p_c / (x.n - 1)
        return dict(dist)

    def offspring_distribution(self, x, y):
        return _halve_pairs(self.pair_distribution(x, y))

    def __repr__(self):
        return f"SinglePoint(p_c={self.p_c})"


def _halve_pairs(pairs: Dict[Tuple[BitString, BitString], float]) -> Dict[BitString, float]:
    dist: Dict[BitString, float] = defaultdict(float)
    for (u, v), p in pairs.items():
        dist[u] += p / 2
        dist[v] += p / 2
    return dict(dist)


class TwoToOneAdapter(CrossoverOp):
    """x' ~ unif({u, v}) over the pair produced by a two-offspring operator"""

    name = 'twotoone'

    def __init__(self, inner: TwoOffspringOp):
        self.inner = inner
        self.p_c = getattr(inner, 'p_c', 0.0)

    def apply_batch(self, xs, ys, rng):
        us, vs = self.inner.offspring_pair_batch(xs, ys, rng)
        return _choose_rows(us, vs, rng.integers(0, 2, size=len(xs)))

    def offspring_distribution(self, x, y):
        return _halve_pairs(self.inner.pair_distribution(x, y))

    def __repr__(self):
        return f"TwoToOneAdapter({self.inner!r})"


class PassThrough(CrossoverOp):
    """With probability 1 - p_c one parent is returned uniformly, else the inner operator acts"""

    name = 'passthrough'

    def __init__(self, p_c: float, inner: CrossoverOp):
        self.p_c = validate_probability('p_c', p_c, high_open=True)
        self.inner = inner

    def apply_batch(self, xs, ys, rng):
        crossing = rng.random(len(xs)) < self.p_c
        pick = rng.integers(0, 2, size=len(xs))
        out = _choose_rows(xs, ys, pick)
        inner_out = self.inner.apply_batch(xs, ys, rng)
        out[crossing] = inner_out[crossing]
        return out

    def offspring_distribution(self, x, y):
        dist: Dict[BitString, float] = defaultdict(float)
        dist[x] += (1 - self.p_c) / 2
        dist[y] += (1 - self.p_c) / 2
        for child, p in self.inner.offspring_distribution(x, y).items():
            dist[child] += self.p_c * p
        return dict(dist)

    def __repr__(self):
        return f"PassThrough(p_c={self.p_c}, {self.inner!r})"


class TargetCopyCrossover(CrossoverOp):
    """
    Cross': a target parent is copied to the output unchanged, otherwise
    the inner operator acts; inner draws are always consumed
    """

    def __init__(self, inner: CrossoverOp):
        self.inner = inner
        self.p_c = inner.p_c
        self.name = inner.name

    def apply_batch(self, xs, ys, rng, x_target: Optional[np.ndarray] = None,
                    y_target: Optional[np.ndarray] = None):
        out = self.inner.apply_batch(xs, ys, rng)
        if x_target is not None:
            out[x_target] = xs[x_target]
        if y_target is not None:
            only_y = y_target if x_target is None else y_target & ~x_target
            out[only_y] = ys[only_y]
        return out

    def offspring_distribution(self, x, y):
        return self.inner.offspring_distribution(x, y)

    def __repr__(self):
        return f"TargetCopyCrossover({self.inner!r})"


def crossover(xor: CrossoverOp, x: BitString, y: BitString, rng: RandomStream) -> BitString:
    return xor.apply(x, y, rng)


@dataclass
class OperatorSuite:
    selection: SelectionOp
    crossover: CrossoverOp
    mutation: MutationOp

    def describe(self) -> Dict[str, str]:
        return {'selection': repr(self.selection), 'crossover': repr(self.crossover),
                'mutation': repr(self.mutation)}


# ---------------------------------------------------------------- crossover quality

@dataclass
class EpsEstimate:
    """Crossover success rate with a Wilson interval (Monte Carlo) or a worst case (exact)"""

    estimate: float
    ci_low: Optional[float]
    ci_high: Optional[float]
    trials: int
    successes: int
    method: str

    def as_dict(self):
        return {'estimate': self.estimate, 'ci': None if self.ci_low is None else [self.ci_low, self.ci_high],
                'trials': self.trials, 'successes': self.successes, 'method': self.method}


ParentSampler = Callable[[RandomStream], Tuple[BitString, BitString]]


def uniform_pair_sampler(problem: ProblemInstance) -> ParentSampler:
    """Independent uniform parents from {0,1}^n"""
    def sample(rng: RandomStream) -> Tuple[BitString, BitString]:
        bits = rng.bits((2, problem.n))
        return BitString(bits[0]), BitString(bits[1])
    return sample


def _eps0_event(problem: ProblemInstance, x: BitString, y: BitString, children) -> bool:
    best_parent = max(problem.fitness_batch(np.stack([x.bits, y.bits])))
    child_values = problem.fitness_batch(np.stack([c.bits for c in children]))
    return bool(child_values.max() >= best_parent)


def _eps1_event(problem: ProblemInstance, x: BitString, y: BitString, child: BitString) -> bool:
    fx, fy, fc = problem.fitness_batch(np.stack([x.bits, y.bits, child.bits]))
    if fx == fy:
        return bool(fc == fx)
    return bool(fc > min(fx, fy))


def _monte_carlo(event, sampler: ParentSampler, trials: int, rng: RandomStream) -> EpsEstimate:
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    successes = 0
    for _ in range(trials):
        x, y = sampler(rng)
        successes += event(x, y)
    low, high = wilson_interval(successes, trials)
    return EpsEstimate(successes / trials, low, high, trials, successes, 'montecarlo')


def _children(xor, x, y, rng, two_offspring: bool):
    if two_offspring and isinstance(xor, TwoOffspringOp):
        return xor.offspring_pair(x, y, rng)
    return (xor.apply(x, y, rng),)


def estimate_eps0(xor: CrossoverOp, problem: ProblemInstance, sampler: Optional[ParentSampler] = None,
                  trials: int = 10000, rng: Optional[RandomStream] = None,
                  two_offspring: bool = False) -> EpsEstimate:
    """
    Fraction of trials whose offspring is at least as fit as the better parent

    Args:
        xor: Crossover operator
        problem: Problem supplying fitness
        sampler: Parent pair sampler (uniform random pairs by default)
        trials: Number of Monte Carlo trials
        rng: Random stream (a fresh default stream when omitted)
        two_offspring: Judge max{f(x'), f(y')} over both children of a two-offspring operator

    Returns:
        EpsEstimate with a Wilson interval
    """
    sampler = sampler or uniform_pair_sampler(problem)
    rng = rng or RandomStream(0)
    return _monte_carlo(lambda x, y: _eps0_event(problem, x, y, _children(xor, x, y, rng, two_offspring)),
                        sampler, trials, rng)


def _fitter_first(problem: ProblemInstance, x: BitString, y: BitString) -> Tuple[BitString, BitString]:
    fx, fy = problem.fitness_batch(np.stack([x.bits, y.bits]))
    return (y, x) if fy > fx else (x, y)


def estimate_eps1(xor: CrossoverOp, problem: ProblemInstance, sampler: Optional[ParentSampler] = None,
                  trials: int = 10000, rng: Optional[RandomStream] = None,
                  first_child: bool = False) -> EpsEstimate:
    """
    Fraction of trials satisfying: f(x') = f(x) for equal-fitness parents,
    else f(x') > min{f(x), f(y)}

    x' is the single offspring the engine uses. With first_child a
    two-offspring operator is judged on its first child instead, and the
    fitter parent is always passed first.
    """
    sampler = sampler or uniform_pair_sampler(problem)
    rng = rng or RandomStream(0)
    if first_child and isinstance(xor, TwoOffspringOp):
        def event(x, y):
            x, y = _fitter_first(problem, x, y)
            return _eps1_event(problem, x, y, xor.offspring_pair(x, y, rng)[0])
    else:
        def event(x, y):
            return _eps1_event(problem, x, y, xor.apply(x, y, rng))
    return _monte_carlo(event, sampler, trials, rng)


def _exact_worst_case(problem: ProblemInstance, pair_probability) -> EpsEstimate:
    if problem.n > EXACT_PAIR_MAX_N:
        raise ContractError(f"Exact crossover enumeration limited to n <= {EXACT_PAIR_MAX_N}")
    space = [BitString(row) for row in all_genotypes(problem.n)]
    worst = 1.0
    for x in space:
        for y in space:
            worst = min(worst, pair_probability(x, y))
    pairs = len(space) ** 2
    return EpsEstimate(worst, None, None, pairs, pairs, 'exact')


def exact_eps0(xor: CrossoverOp, problem: ProblemInstance) -> EpsEstimate:
    """Worst case over all parent pairs of Pr(f(x') >= max{f(x), f(y)}) for the single offspring"""
    def probability(x, y):
        best_parent = max(problem.fitness_batch(np.stack([x.bits, y.bits])))
        dist = xor.offspring_distribution(x, y)
        children = list(dist)
        values = problem.fitness_batch(np.stack([c.bits for c in children]))
        return sum(dist[c] for c, v in zip(children, values) if v >= best_parent)
    return _exact_worst_case(problem, probability)


def exact_eps1(xor: CrossoverOp, problem: ProblemInstance, first_child: bool = False) -> EpsEstimate:
    """Worst case over all parent pairs of the two-case event; first_child as in estimate_eps1"""
    def probability(x, y):
        if first_child and isinstance(xor, TwoOffspringOp):
            x, y = _fitter_first(problem, x, y)
            dist: Dict[BitString, float] = defaultdict(float)
            for (u, _), p in xor.pair_distribution(x, y).items():
                dist[u] += p
        else:
            dist = xor.offspring_distribution(x, y)
        return sum(p for child, p in dist.items() if _eps1_event(problem, x, y, child))
    return _exact_worst_case(problem, probability)


def build_selection(kind: str, k: Optional[int] = None, mu: Optional[int] = None,
                    eta: Optional[float] = None) -> SelectionOp:
    """Selection operator from its CLI name and parameter"""
    if kind == Tournament.name:
        if k is None:
            raise ConfigurationError("tournament selection requires k")
        return Tournament(k)
    if kind == MuLambda.name:
        if mu is None:
            raise ConfigurationError("(mu,lambda) selection requires mu")
        return MuLambda(mu)
    if kind == ExpRanking.name:
        if eta is None:
            raise ConfigurationError("exponential ranking requires eta")
        return ExpRanking(eta)
    raise ParameterError(f"Unknown selection '{kind}'")
