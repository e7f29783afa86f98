"""
Level partitions of {0,1}^n, local-optimum detection, neighborhood
enumeration and first-improvement local search
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from settings.constants import EXACT_ENUMERATION_MAX_N, PARTITION_ENUMERATION_MAX_N
from .core import BitString, ProblemInstance, all_genotypes, hamming_candidates
from .exceptions import ConfigurationError, ContractError, DimensionError, ParameterError

logger = logging.getLogger(__name__)

CANONICAL = 'canonical'
MERGED_LO = 'merged'
INFEASIBLE_FIRST = 'general'

_LO_CACHE_LIMIT = 1 << 16


@dataclass(frozen=True)
class NeighborhoodSpec:
    """HammingRadius(r) or the problem's native neighborhood"""

    kind: str = 'hamming'
    radius: Optional[int] = 1

    @classmethod
    def hamming(cls, r: int) -> 'NeighborhoodSpec':
        if r < 1:
            raise ParameterError(f"Hamming radius must be positive, got {r}")
        return cls('hamming', int(r))

    @classmethod
    def native(cls) -> 'NeighborhoodSpec':
        return cls('native', None)

    def bound(self, problem: ProblemInstance) -> int:
        """K such that every neighbor lies within Hamming distance K"""
        return self.radius if self.kind == 'hamming' else problem.neighborhood_bound

    def neighbor_array(self, problem: ProblemInstance, x: BitString) -> np.ndarray:
        """Feasible neighbors of x as rows, in deterministic scan order"""
        if self.kind == 'native':
            neighbors = problem.neighborhood(x)
            if not neighbors:
                return np.zeros((0, problem.n), dtype=np.uint8)
            return np.stack([y.bits for y in neighbors])
        candidates = hamming_candidates(x.bits, min(self.radius, problem.n))
        return candidates[problem.feasible_batch(candidates)]

    def neighbors(self, problem: ProblemInstance, x: BitString) -> List[BitString]:
        return [BitString(row) for row in self.neighbor_array(problem, x)]


def hamming_neighborhood(x: BitString, r: int,
                         problem: Optional[ProblemInstance] = None) -> Iterator[BitString]:
    """
    Strings y != x with D(x, y) <= r, by increasing distance

    Candidates are filtered by feasibility when a problem is given.
    """
    if r > x.n:
        raise ParameterError(f"Radius {r} exceeds length {x.n}")
    candidates = hamming_candidates(x.bits, r)
    if problem is not None:
        candidates = candidates[problem.feasible_batch(candidates)]
    for row in candidates:
        yield BitString(row)


def is_local_optimum(problem: ProblemInstance, nbhd: NeighborhoodSpec, x: BitString) -> bool:
    """True iff F(y) <= F(x) for every neighbor y (checked by enumeration)"""
    if x.n != problem.n:
        raise DimensionError(f"Expected length {problem.n}, got {x.n}")
    if not problem.is_feasible(x):
        raise ContractError(f"Local optimality is defined for feasible strings only: {x.to_string()}")
    neighbors = nbhd.neighbor_array(problem, x)
    if len(neighbors) == 0:
        return True
    value = problem.objective(x)
    return bool(np.all(problem.objective_batch(neighbors) <= value))


class LevelPartition:
    """
    Ordered partition (A_1, ..., A_{m+1}) with target level A_{m+1}

    Attributes:
        kind: canonical | merged | general
        m: number of non-target levels
        values: fitness values labelling the stratified levels
            canonical: all m+1 values; merged: f_1..f_m; general: f_2..f_m
        nbhd: neighborhood defining local optima (merged / general)
    """

    def __init__(self, kind: str, problem: ProblemInstance, values: Sequence[int],
                 nbhd: Optional[NeighborhoodSpec] = None):
        values = [int(v) for v in values]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ParameterError(f"Level values must be strictly increasing, got {values}")
        if kind == CANONICAL:
            m = len(values) - 1
        elif kind == MERGED_LO:
            m = len(values)
        elif kind == INFEASIBLE_FIRST:
            m = len(values) + 1
        else:
            raise ParameterError(f"Unknown partition kind '{kind}'")
        if m < 1:
            raise ParameterError(f"{kind} partition of {problem.instance_id} is degenerate (m = {m})")
        if kind != CANONICAL and nbhd is None:
            raise ConfigurationError(f"{kind} partition requires a neighborhood")
        self.kind = kind
        self.problem = problem
        self.values = np.asarray(values, dtype=np.int64)
        self.m = m
        self.nbhd = nbhd
        self._lo_cache: Dict[bytes, bool] = {}

    @property
    def target_level(self) -> int:
        return self.m + 1

    def _value_levels(self, fitness_values: np.ndarray, offset: int) -> np.ndarray:
        positions = np.searchsorted(self.values, fitness_values)
        clipped = np.minimum(positions, len(self.values) - 1)
        unknown = (positions >= len(self.values)) | (self.values[clipped] != fitness_values)
        if np.any(unknown):
            missing = sorted(set(np.asarray(fitness_values)[unknown].tolist()))
            raise ContractError(f"Fitness values {missing} are not covered by the {self.kind} partition")
        return positions + offset

    def local_optimum_mask(self, genotypes: np.ndarray) -> np.ndarray:
        """LO membership of each (feasible) row; analytic hint or cached enumeration"""
        if self.nbhd.kind == 'hamming':
            hint = self.problem.local_optimum_mask(genotypes, self.nbhd.radius)
            if hint is not None:
                return np.asarray(hint, dtype=bool)
        mask = np.zeros(len(genotypes), dtype=bool)
        for i, row in enumerate(genotypes):
            key = row.tobytes()
            cached = self._lo_cache.get(key)
            if cached is None:
                cached = is_local_optimum(self.problem, self.nbhd, BitString(row))
                if len(self._lo_cache) >= _LO_CACHE_LIMIT:
                    self._lo_cache.clear()
                self._lo_cache[key] = cached
            mask[i] = cached
        return mask

    def levels_of(self, genotypes: np.ndarray, fitness_values: Optional[np.ndarray] = None) -> np.ndarray:
        """Level index (1..m+1) of every row"""
        genotypes = self.problem.check_batch(genotypes)
        if fitness_values is None:
            fitness_values = self.problem.fitness_batch(genotypes)
        fitness_values = np.asarray(fitness_values, dtype=np.int64)
        if self.kind == CANONICAL:
            return self._value_levels(fitness_values, 1)
        levels = np.empty(len(genotypes), dtype=np.int64)
        if self.kind == MERGED_LO:
            feasible = np.ones(len(genotypes), dtype=bool)
            offset = 1
        else:
            feasible = self.problem.feasible_batch(genotypes)
            levels[~feasible] = 1
            offset = 2
        if feasible.any():
            lo = self.local_optimum_mask(genotypes[feasible])
            sub = np.full(int(feasible.sum()), self.target_level, dtype=np.int64)
            if (~lo).any():
                sub[~lo] = self._value_levels(fitness_values[feasible][~lo], offset)
            levels[feasible] = sub
        return levels

    def level_of(self, x: BitString) -> int:
        return int(self.levels_of(x.bits[None, :])[0])

    def enumerate(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(space, fitness, levels) over all of {0,1}^n, n <= EXACT_ENUMERATION_MAX_N"""
        if self.problem.n > EXACT_ENUMERATION_MAX_N:
            raise ContractError(f"Exhaustive enumeration limited to n <= {EXACT_ENUMERATION_MAX_N}")
        space = all_genotypes(self.problem.n)
        values = self.problem.fitness_batch(space)
        return space, values, self.levels_of(space, values)

    def __repr__(self):
        return f"LevelPartition(kind={self.kind}, m={self.m}, problem={self.problem.instance_id})"


def _enumerable(problem: ProblemInstance, limit: int) -> bool:
    return problem.n <= limit


def _universally_feasible(problem: ProblemInstance) -> bool:
    if _enumerable(problem, PARTITION_ENUMERATION_MAX_N):
        return bool(problem.feasible_batch(all_genotypes(problem.n)).all())
    return type(problem).feasible_batch is ProblemInstance.feasible_batch


def attained_fitness_values(problem: ProblemInstance) -> List[int]:
    """All fitness values attained on {0,1}^n (analytic for benchmarks, else enumerated)"""
    hint = problem.non_lo_fitness_values(problem.default_radius)
    optimum = problem.optimum_value()
    if hint is not None and optimum is not None:
        return sorted(set(hint) | {optimum})
    if not _enumerable(problem, PARTITION_ENUMERATION_MAX_N):
        raise ContractError(f"Cannot enumerate fitness values of {problem.instance_id}")
    return sorted(set(problem.fitness_batch(all_genotypes(problem.n)).tolist()))


def _non_lo_feasible_values(problem: ProblemInstance, nbhd: NeighborhoodSpec) -> List[int]:
    if nbhd.kind == 'hamming':
        hint = problem.non_lo_fitness_values(nbhd.radius)
        if hint is not None:
            return list(hint)
    if not _enumerable(problem, EXACT_ENUMERATION_MAX_N):
        raise ContractError(f"Cannot enumerate local optima of {problem.instance_id}")
    scratch = LevelPartition(CANONICAL, problem, [0, 1])
    scratch.nbhd = nbhd
    space = all_genotypes(problem.n)
    space = space[problem.feasible_batch(space)]
    lo = scratch.local_optimum_mask(space)
    return sorted(set(problem.objective_batch(space[~lo]).tolist()))


def canonical_partition(problem: ProblemInstance,
                        fitness_values: Optional[Sequence[int]] = None) -> LevelPartition:
    """A_j = {x : f(x) = j-th value}; the top value is the target"""
    if fitness_values is None:
        fitness_values = attained_fitness_values(problem)
    values = list(fitness_values)
    if len(set(values)) != len(values) or values != sorted(values):
        raise ParameterError(f"Fitness values must be strictly increasing, got {values}")
    return LevelPartition(CANONICAL, problem, values)


def merged_lo_partition(problem: ProblemInstance, nbhd: NeighborhoodSpec) -> LevelPartition:
    """A_j = {f = f_j} minus LO for non-LO values f_1 < ... < f_m; A_{m+1} = LO"""
    if not _universally_feasible(problem):
        raise ConfigurationError(f"{problem.instance_id} has infeasible strings; use general_partition")
    return LevelPartition(MERGED_LO, problem, _non_lo_feasible_values(problem, nbhd), nbhd)


def general_partition(problem: ProblemInstance, nbhd: NeighborhoodSpec) -> LevelPartition:
    """A_1 = infeasible strings, A_2..A_m by feasible non-LO values, A_{m+1} = LO"""
    if _enumerable(problem, PARTITION_ENUMERATION_MAX_N):
        if not problem.feasible_batch(all_genotypes(problem.n)).any():
            raise ConfigurationError(f"{problem.instance_id} has no feasible solution")
    return LevelPartition(INFEASIBLE_FIRST, problem, _non_lo_feasible_values(problem, nbhd), nbhd)


def build_partition(kind: str, problem: ProblemInstance,
                    nbhd: Optional[NeighborhoodSpec] = None) -> LevelPartition:
    nbhd = nbhd or NeighborhoodSpec.hamming(problem.default_radius)
    if kind == CANONICAL:
        return canonical_partition(problem)
    if kind == MERGED_LO:
        return merged_lo_partition(problem, nbhd)
    if kind == INFEASIBLE_FIRST:
        return general_partition(problem, nbhd)
    raise ParameterError(f"Unknown partition kind '{kind}'")


@dataclass
class LocalSearchResult:
    start: BitString
    optimum: BitString
    moves: int
    trajectory: List[int] = field(default_factory=list)


def local_search(problem: ProblemInstance, nbhd: NeighborhoodSpec, x0: BitString) -> LocalSearchResult:
    """First-improvement local search in deterministic scan order"""
    if not problem.is_feasible(x0):
        raise ContractError(f"Local search must start from a feasible string: {x0.to_string()}")
    current = x0
    value = problem.objective(current)
    trajectory = [value]
    moves = 0
    while True:
        neighbors = nbhd.neighbor_array(problem, current)
        if len(neighbors) == 0:
            break
        better = np.flatnonzero(problem.objective_batch(neighbors) > value)
        if len(better) == 0:
            break
        current = BitString(neighbors[better[0]])
        value = problem.objective(current)
        trajectory.append(value)
        moves += 1
    logger.debug("local search from %s: %d moves to value %d", x0.to_string(), moves, value)
    return LocalSearchResult(x0, current, moves, trajectory)
