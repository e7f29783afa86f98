"""
Domain types shared by all modules: genotypes, populations, the problem
interface, penalised fitness and deterministic random streams
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import ContractError, DimensionError, ParameterError

logger = logging.getLogger(__name__)

# Fitness of every infeasible genotype; objectives are positive integers
PENALTY_FITNESS = 0

FitnessValue = int

_SEED_MASK = (1 << 64) - 1


class BitString:
    """Immutable genotype in {0,1}^n backed by a read-only uint8 array"""

    __slots__ = ('_bits', '_key')

    def __init__(self, bits: Union[Sequence[int], np.ndarray]):
        arr = np.array(bits, dtype=np.int64).ravel()
        if arr.size == 0:
            raise DimensionError("BitString must have positive length")
        if np.any((arr != 0) & (arr != 1)):
            raise ValueError(f"BitString elements must be 0 or 1, got {arr.tolist()}")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        self._bits = arr
        self._key = arr.tobytes()

    @classmethod
    def from_string(cls, text: str) -> 'BitString':
        """Parse a string such as '0110'"""
        text = text.strip()
        if not text or any(ch not in '01' for ch in text):
            raise ValueError(f"Invalid bit string: {text!r}")
        return cls([int(ch) for ch in text])

    @classmethod
    def zeros(cls, n: int) -> 'BitString':
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> 'BitString':
        return cls(np.ones(n, dtype=np.uint8))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def n(self) -> int:
        return int(self._bits.size)

    def to_string(self) -> str:
        return ''.join('1' if b else '0' for b in self._bits)

    def ones_count(self) -> int:
        return int(self._bits.sum())

    def hamming_distance(self, other: 'BitString') -> int:
        if other.n != self.n:
            raise DimensionError(f"Length mismatch: {self.n} vs {other.n}")
        return int(np.count_nonzero(self._bits != other._bits))

    def complement(self) -> 'BitString':
        return BitString(1 - self._bits)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __getitem__(self, index):
        return int(self._bits[index])

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other: 'BitString'):
        return self.to_string() < other.to_string()

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"BitString('{self.to_string()}')"


@dataclass(frozen=True)
class Individual:
    genotype: BitString
    fitness: FitnessValue
    level: Optional[int] = None


class ProblemInstance(ABC):
    """
    Maximisation problem over {0,1}^n

    Subclasses implement objective_batch (rows assumed feasible) and may
    override feasible_batch, neighborhood and the analytic hints used by
    partitions and condition checks.
    """

    name = 'problem'
    default_radius = 1

    def __init__(self, n: int, fallback_feasible: Optional[BitString] = None):
        if n < 1:
            raise DimensionError(f"Problem dimension must be positive, got {n}")
        self.n = int(n)
        self.fallback_feasible = fallback_feasible

    @property
    def instance_id(self) -> str:
        return f"{self.name}(n={self.n})"

    @abstractmethod
    def objective_batch(self, genotypes: np.ndarray) -> np.ndarray:
        """Objective values (positive integers) for feasible rows"""

    def feasible_batch(self, genotypes: np.ndarray) -> np.ndarray:
        return np.ones(len(genotypes), dtype=bool)

    def fitness_batch(self, genotypes: np.ndarray) -> np.ndarray:
        """Penalised fitness of each row: F(x) if feasible, PENALTY_FITNESS otherwise"""
        genotypes = self.check_batch(genotypes)
        feasible = self.feasible_batch(genotypes)
        values = np.full(len(genotypes), PENALTY_FITNESS, dtype=np.int64)
        if feasible.any():
            values[feasible] = self.objective_batch(genotypes[feasible])
        return values

    def check_batch(self, genotypes: np.ndarray) -> np.ndarray:
        genotypes = np.asarray(genotypes, dtype=np.uint8)
        if genotypes.ndim == 1:
            genotypes = genotypes[None, :]
        if genotypes.shape[1] != self.n:
            raise DimensionError(f"{self.instance_id}: expected length {self.n}, got {genotypes.shape[1]}")
        return genotypes

    def is_feasible(self, x: BitString) -> bool:
        return bool(self.feasible_batch(self.check_batch(x.bits))[0])

    def objective(self, x: BitString) -> int:
        if not self.is_feasible(x):
            raise ContractError(f"{self.instance_id}: objective undefined for infeasible {x.to_string()}")
        return int(self.objective_batch(self.check_batch(x.bits))[0])

    def neighborhood(self, x: BitString) -> List[BitString]:
        """Native neighborhood: feasible strings within Hamming distance default_radius"""
        candidates = hamming_candidates(x.bits, self.default_radius)
        feasible = self.feasible_batch(candidates) if len(candidates) else np.zeros(0, dtype=bool)
        return [BitString(row) for row in candidates[feasible]]

    @property
    def neighborhood_bound(self) -> int:
        return self.default_radius

    # Analytic hints, None when unknown

    def local_optimum_mask(self, genotypes: np.ndarray, radius: int) -> Optional[np.ndarray]:
        return None

    def non_lo_fitness_values(self, radius: int) -> Optional[List[int]]:
        return None

    def optimum_value(self) -> Optional[int]:
        return None

    def analytic_upgrade_bound(self, p_m: float) -> Optional[float]:
        return None


@lru_cache(maxsize=64)
def flip_patterns(n: int, r: int) -> np.ndarray:
    """
    All flip masks with 1..r ones, ordered by weight then lexicographically
    by flipped positions

    Returns:
        Read-only array of shape (sum_{d<=r} C(n,d), n)
    """
    r = min(r, n)
    count = sum(math.comb(n, d) for d in range(1, r + 1))
    masks = np.zeros((count, n), dtype=np.uint8)
    row = 0
    for d in range(1, r + 1):
        for positions in combinations(range(n), d):
            masks[row, list(positions)] = 1
            row += 1
    masks.flags.writeable = False
    return masks


def hamming_candidates(bits: np.ndarray, r: int) -> np.ndarray:
    """Every string at Hamming distance 1..r from bits, in flip_patterns order"""
    return np.bitwise_xor(flip_patterns(len(bits), r), np.asarray(bits, dtype=np.uint8))


def all_genotypes(n: int) -> np.ndarray:
    """Full search space as a (2^n, n) array; row i is i written MSB-first"""
    codes = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def genotype_codes(genotypes: np.ndarray) -> np.ndarray:
    """Inverse of all_genotypes: integer code of each row (n <= 62)"""
    genotypes = np.asarray(genotypes, dtype=np.int64)
    n = genotypes.shape[1]
    weights = np.left_shift(np.int64(1), np.arange(n - 1, -1, -1, dtype=np.int64))
    return genotypes @ weights


def fitness(problem: ProblemInstance, x: BitString) -> FitnessValue:
    """F(x) for feasible x, PENALTY_FITNESS for infeasible x"""
    if x.n != problem.n:
        raise DimensionError(f"{problem.instance_id}: expected length {problem.n}, got {x.n}")
    return int(problem.fitness_batch(x.bits)[0])


class Population:
    """
    Ordered vector of lambda individuals stored column-wise

    Attributes:
        genotypes: read-only (lambda, n) uint8 array
        fitness: read-only int64 array
        levels: read-only int64 array or None when not leveled
        insertion: original insertion index of each member
        is_sorted: True once ordered by sort_population
    """

    def __init__(self, genotypes: np.ndarray, fitness_values: np.ndarray,
                 levels: Optional[np.ndarray] = None,
                 insertion: Optional[np.ndarray] = None,
                 is_sorted: bool = False):
        genotypes = np.array(genotypes, dtype=np.uint8, ndmin=2)
        fitness_values = np.array(fitness_values, dtype=np.int64).ravel()
        if len(genotypes) == 0:
            raise ContractError("Population must contain at least one individual")
        if len(fitness_values) != len(genotypes):
            raise ContractError("Fitness vector length differs from population size")
        if levels is not None:
            levels = np.array(levels, dtype=np.int64).ravel()
            if len(levels) != len(genotypes):
                raise ContractError("Level vector length differs from population size")
            levels.flags.writeable = False
        if insertion is None:
            insertion = np.arange(len(genotypes), dtype=np.int64)
        insertion = np.array(insertion, dtype=np.int64).ravel()
        for arr in (genotypes, fitness_values, insertion):
            arr.flags.writeable = False
        self.genotypes = genotypes
        self.fitness = fitness_values
        self.levels = levels
        self.insertion = insertion
        self.is_sorted = is_sorted

    @classmethod
    def from_genotypes(cls, problem: ProblemInstance, genotypes: np.ndarray,
                       partition=None) -> 'Population':
        """Evaluate, level (when a partition is given) and sort"""
        genotypes = problem.check_batch(genotypes)
        values = problem.fitness_batch(genotypes)
        levels = partition.levels_of(genotypes, values) if partition is not None else None
        return sort_population(cls(genotypes, values, levels))

    @classmethod
    def synthetic(cls, fitness_values: Sequence[int], levels: Optional[Sequence[int]] = None) -> 'Population':
        """
        Sorted population with distinct placeholder genotypes, used where
        only fitness and level composition matter (selective pressure)
        """
        lam = len(fitness_values)
        width = max(1, math.ceil(math.log2(lam))) if lam > 1 else 1
        shifts = np.arange(width - 1, -1, -1)
        genotypes = ((np.arange(lam)[:, None] >> shifts) & 1).astype(np.uint8)
        return sort_population(cls(genotypes, fitness_values, levels))

    @property
    def lam(self) -> int:
        return len(self.fitness)

    @property
    def n(self) -> int:
        return self.genotypes.shape[1]

    @property
    def members(self) -> List[Individual]:
        return [self[i] for i in range(self.lam)]

    def __len__(self):
        return self.lam

    def __getitem__(self, index: int) -> Individual:
        level = int(self.levels[index]) if self.levels is not None else None
        return Individual(BitString(self.genotypes[index]), int(self.fitness[index]), level)

    def require_sorted(self):
        if not self.is_sorted:
            raise ContractError("Operation requires a population sorted by sort_population")

    def require_levels(self):
        if self.levels is None:
            raise ContractError("Operation requires a leveled population")

    def best_level(self) -> Optional[int]:
        return int(self.levels.max()) if self.levels is not None else None

    def first_index_at_level(self, level: int) -> Optional[int]:
        """Index of the first member at the given level or higher, None if absent"""
        self.require_levels()
        hits = np.flatnonzero(self.levels >= level)
        return int(hits[0]) if len(hits) else None

    def __repr__(self):
        return f"Population(lam={self.lam}, n={self.n}, sorted={self.is_sorted})"


def sort_population(pop: Population, partition=None) -> Population:
    """
    Order members non-increasingly under the level-aligned order

    Sort key: level (descending, when known), fitness (descending), genotype
    lexicographic (ascending), insertion index (ascending).
    """
    if pop.lam == 0:
        raise ContractError("Cannot sort an empty population")
    levels = pop.levels
    if levels is None and partition is not None:
        levels = partition.levels_of(pop.genotypes, pop.fitness)
    keys: List[np.ndarray] = [pop.insertion]
    keys.extend(pop.genotypes[:, c] for c in reversed(range(pop.n)))
    keys.append(-pop.fitness)
    if levels is not None:
        keys.append(-np.asarray(levels))
    order = np.lexsort(keys)
    return Population(pop.genotypes[order], pop.fitness[order],
                      None if levels is None else np.asarray(levels)[order],
                      pop.insertion[order], is_sorted=True)


def gamma_rank(lam: int, gamma: float) -> int:
    """1-based rank ceil(gamma * lam), robust to float noise such as 0.3 * 10"""
    if not 0 < gamma < 1:
        raise ParameterError(f"gamma must lie in (0,1), got {gamma}")
    return max(1, math.ceil(round(gamma * lam, 9)))


def gamma_ranked(pop: Population, gamma: float) -> Individual:
    """The gamma-ranked individual x^{ceil(gamma*lambda)}"""
    pop.require_sorted()
    return pop[gamma_rank(pop.lam, gamma) - 1]


class RandomStream:
    """
    Deterministic random stream for one trial

    The stream is keyed by (master_seed, stream path) through numpy's
    SeedSequence spawn keys and drives a counter-based Philox generator, so
    streams with distinct paths are independent and never share state.
    """

    def __init__(self, master_seed: int, stream_id: Union[int, Tuple[int, ...]] = 0):
        self.master_seed = int(master_seed) & _SEED_MASK
        self.path = tuple(stream_id) if isinstance(stream_id, tuple) else (int(stream_id),)
        seed_sequence = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.path)
        self.generator = np.random.Generator(np.random.Philox(seed_sequence))

    @property
    def stream_id(self) -> Tuple[int, ...]:
        return self.path

    def child(self, *path: int) -> 'RandomStream':
        return RandomStream(self.master_seed, self.path + tuple(int(p) for p in path))

    def random(self, size=None):
        return self.generator.random(size)

    def integers(self, low: int, high: int, size=None) -> Union[int, np.ndarray]:
        """Uniform integers in [low, high)"""
        return self.generator.integers(low, high, size=size)

    def bits(self, shape) -> np.ndarray:
        return self.generator.integers(0, 2, size=shape, dtype=np.uint8)

    def __repr__(self):
        return f"RandomStream(master_seed={self.master_seed}, stream_id={self.path})"
