"""
Benchmark problem instances: Royal Road, triangle vertex cover, OneMax,
LeadingOnes and small tabulated NP optimisation problems (ToyNPO)
"""

import logging
import os
from typing import Dict, FrozenSet, List, Optional, Sequence

import numpy as np

from settings.constants import EXACT_ENUMERATION_MAX_N
from .core import BitString, ProblemInstance, all_genotypes, genotype_codes
from .exceptions import ConfigurationError, DimensionError, ParameterError
from .utils import binomial_point

logger = logging.getLogger(__name__)


class RoyalRoad(ProblemInstance):
    """RR_{n,r}: number of consecutive length-r blocks that are all ones"""

    name = 'royalroad'

    def __init__(self, n: int, r: int):
        if r < 1 or n % r != 0:
            raise ParameterError(f"Royal Road block length r={r} must divide n={n}")
        super().__init__(n)
        self.r = int(r)
        self.blocks = n // r
        self.default_radius = self.r

    @property
    def instance_id(self) -> str:
        return f"royalroad(n={self.n},r={self.r})"

    def objective_batch(self, genotypes: np.ndarray) -> np.ndarray:
        blocks = np.asarray(genotypes).reshape(len(genotypes), self.blocks, self.r)
        return blocks.all(axis=2).sum(axis=1).astype(np.int64)

    def local_optimum_mask(self, genotypes, radius):
        # Any zero sits in a block fixable with at most r flips
        if radius < self.r:
            return None
        return np.asarray(genotypes).all(axis=1)

    def non_lo_fitness_values(self, radius):
        return list(range(self.blocks)) if radius >= self.r else None

    def optimum_value(self):
        return self.blocks

    def analytic_upgrade_bound(self, p_m):
        return binomial_point(p_m, self.r, self.n)


class TriangleVCP(ProblemInstance):
    """
    Vertex cover on kappa disjoint triangles, edge-to-endpoint encoding

    Triangle t has vertices (3t, 3t+1, 3t+2) and edges e_{3t}=(v_{3t}, v_{3t+1}),
    e_{3t+1}=(v_{3t+1}, v_{3t+2}), e_{3t+2}=(v_{3t+2}, v_{3t}). Bit 0 selects the
    first listed endpoint, bit 1 the second. Fitness is |V| - |C(x)|.
    """

    name = 'vcp'

    def __init__(self, kappa: int):
        if kappa < 1:
            raise ParameterError(f"kappa must be positive, got {kappa}")
        super().__init__(3 * kappa)
        self.kappa = int(kappa)

    @property
    def instance_id(self) -> str:
        return f"vcp(kappa={self.kappa})"

    def edge_endpoints(self, edge: int):
        t, k = divmod(edge, 3)
        base = 3 * t
        return base + k, base + (k + 1) % 3

    def objective_batch(self, genotypes: np.ndarray) -> np.ndarray:
        # A triangle is covered by two vertices unless its three bits agree
        triangles = np.asarray(genotypes).reshape(len(genotypes), self.kappa, 3)
        return (triangles.min(axis=2) != triangles.max(axis=2)).sum(axis=1).astype(np.int64)

    def local_optimum_mask(self, genotypes, radius):
        if radius < 1:
            return None
        return self.objective_batch(genotypes) == self.kappa

    def non_lo_fitness_values(self, radius):
        return list(range(self.kappa)) if radius >= 1 else None

    def optimum_value(self):
        return self.kappa

    def analytic_upgrade_bound(self, p_m):
        return binomial_point(p_m, 1, self.n)


class OneMax(ProblemInstance):
    name = 'onemax'

    def objective_batch(self, genotypes):
        return np.asarray(genotypes).sum(axis=1).astype(np.int64)

    def local_optimum_mask(self, genotypes, radius):
        return np.asarray(genotypes).all(axis=1) if radius >= 1 else None

    def non_lo_fitness_values(self, radius):
        return list(range(self.n)) if radius >= 1 else None

    def optimum_value(self):
        return self.n

    def analytic_upgrade_bound(self, p_m):
        return binomial_point(p_m, 1, self.n)


class LeadingOnes(ProblemInstance):
    name = 'leadingones'

    def objective_batch(self, genotypes):
        return np.cumprod(np.asarray(genotypes, dtype=np.int64), axis=1).sum(axis=1)

    def local_optimum_mask(self, genotypes, radius):
        return np.asarray(genotypes).all(axis=1) if radius >= 1 else None

    def non_lo_fitness_values(self, radius):
        return list(range(self.n)) if radius >= 1 else None

    def optimum_value(self):
        return self.n

    def analytic_upgrade_bound(self, p_m):
        return binomial_point(p_m, 1, self.n)


class ToyNPO(ProblemInstance):
    """
    Desk-scale NP optimisation problem given by explicit tables

    Row i of each table describes the string whose MSB-first integer code
    is i. Objectives are positive on feasible strings.
    """

    name = 'toy'

    def __init__(self, n: int, feasible: Sequence[bool], objective: Sequence[int],
                 fallback_feasible: Optional[BitString] = None, label: str = 'toy'):
        if not 1 <= n <= EXACT_ENUMERATION_MAX_N:
            raise DimensionError(f"ToyNPO supports 1 <= n <= {EXACT_ENUMERATION_MAX_N}, got {n}")
        feasible = np.asarray(feasible, dtype=bool)
        objective = np.asarray(objective, dtype=np.int64)
        if len(feasible) != 1 << n or len(objective) != 1 << n:
            raise DimensionError(f"ToyNPO tables must have 2^{n} rows")
        if not feasible.any():
            raise ConfigurationError("ToyNPO needs at least one feasible string")
        if np.any(objective[feasible] < 1):
            raise ParameterError("ToyNPO objectives must be positive on feasible strings")
        if fallback_feasible is None:
            fallback_feasible = BitString(all_genotypes(n)[int(np.flatnonzero(feasible)[0])])
        super().__init__(n, fallback_feasible)
        self.feasible_table = feasible
        self.objective_table = np.where(feasible, objective, 0)
        self.label = label
        if not self.is_feasible(fallback_feasible):
            raise ConfigurationError(f"Fallback {fallback_feasible.to_string()} is infeasible")

    @property
    def instance_id(self) -> str:
        return f"toy:{self.label}(n={self.n})"

    def feasible_batch(self, genotypes):
        return self.feasible_table[genotype_codes(genotypes)]

    def objective_batch(self, genotypes):
        return self.objective_table[genotype_codes(genotypes)]

    def optimum_value(self):
        return int(self.objective_table[self.feasible_table].max())

    @classmethod
    def from_text(cls, text: str, label: str = 'toy') -> 'ToyNPO':
        """
        Parse the instance grammar

        Lines: '#' comments and blank lines are ignored; the first data line
        holds n; then one line per string '<bits> <feasible 0|1> <objective|->';
        an optional 'fallback <bits>' line names y_I.
        """
        n = None
        fallback = None
        rows: Dict[int, tuple] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if n is None:
                    n = int(parts[0])
                    continue
                if parts[0] == 'fallback':
                    fallback = BitString.from_string(parts[1])
                    continue
                bits = BitString.from_string(parts[0])
                feasible = parts[1] == '1'
                value = int(parts[2]) if feasible else 0
            except (IndexError, ValueError) as e:
                raise ValueError(f"Line {lineno}: cannot parse {raw!r}: {e}")
            if bits.n != n:
                raise DimensionError(f"Line {lineno}: expected {n} bits, got {bits.n}")
            code = int(bits.to_string(), 2)
            if code in rows:
                raise ValueError(f"Line {lineno}: duplicate string {bits.to_string()}")
            rows[code] = (feasible, value)
        if n is None:
            raise ValueError("Instance text has no dimension line")
        if len(rows) != 1 << n:
            raise ValueError(f"Instance lists {len(rows)} strings, expected {1 << n}")
        feasible = [rows[i][0] for i in range(1 << n)]
        objective = [rows[i][1] for i in range(1 << n)]
        return cls(n, feasible, objective, fallback, label)

    @classmethod
    def from_file(cls, path: str) -> 'ToyNPO':
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
        label = os.path.splitext(os.path.basename(path))[0]
        return cls.from_text(text, label)

    @classmethod
    def knapsack(cls, values: Sequence[int], weights: Sequence[int], capacity: int,
                 label: str = 'knapsack') -> 'ToyNPO':
        """0/1 knapsack; objective 1 + packed value, feasible iff weight <= capacity"""
        space = all_genotypes(len(values))
        feasible = space @ np.asarray(weights, dtype=np.int64) <= capacity
        objective = 1 + space @ np.asarray(values, dtype=np.int64)
        return cls(len(values), feasible, objective, BitString.zeros(len(values)), label)

    @classmethod
    def parity(cls, n: int) -> 'ToyNPO':
        """Even-weight strings are feasible; every feasible radius-1 neighborhood is empty"""
        space = all_genotypes(n)
        weight = space.sum(axis=1)
        return cls(n, weight % 2 == 0, 1 + weight, BitString.zeros(n), f"parity{n}")

    @classmethod
    def toy3(cls) -> 'ToyNPO':
        """Three bits, infeasible 011 and 110, strict local optimum 010 (value 3 < 4)"""
        feasible = [True, True, True, False, True, True, False, True]
        objective = [1, 2, 3, 0, 2, 4, 0, 3]
        return cls(3, feasible, objective, BitString.zeros(3), 'toy3')

    @classmethod
    def knapsack10(cls) -> 'ToyNPO':
        return cls.knapsack([6, 5, 8, 9, 6, 7, 3, 4, 5, 2],
                            [2, 3, 6, 7, 5, 9, 4, 1, 3, 2], 15, 'knapsack10')


def rr_fitness(x: BitString, n: int, r: int) -> int:
    if x.n != n:
        raise DimensionError(f"Expected length {n}, got {x.n}")
    return int(RoyalRoad(n, r).objective_batch(x.bits[None, :])[0])


def vcp_cover(x: BitString, kappa: int) -> FrozenSet[int]:
    """Vertex set C(x) chosen by the edge-to-endpoint encoding"""
    problem = TriangleVCP(kappa)
    if x.n != problem.n:
        raise DimensionError(f"Expected length {problem.n}, got {x.n}")
    return frozenset(problem.edge_endpoints(e)[bit] for e, bit in enumerate(x))


def vcp_fitness(x: BitString, kappa: int) -> int:
    return 3 * kappa - len(vcp_cover(x, kappa))


def count_optima_vcp(kappa: int) -> Dict[str, int]:
    """
    Count optimal solutions of G(kappa) by exhaustive enumeration

    Returns:
        {'strings': optimal bitstrings, 'covers': distinct optimal vertex covers}
    """
    if not 1 <= kappa <= 6:
        raise ParameterError(f"Exhaustive count supports 1 <= kappa <= 6, got {kappa}")
    problem = TriangleVCP(kappa)
    space = all_genotypes(problem.n)
    optimal = space[problem.objective_batch(space) == kappa]
    triangles = optimal.reshape(len(optimal), kappa, 3).astype(np.int64)
    # Vertex picked by each edge, local to its triangle
    picked = np.stack([triangles[:, :, 0],
                       1 + triangles[:, :, 1],
                       (2 + triangles[:, :, 2]) % 3], axis=2)
    presence = np.zeros((len(optimal), kappa, 3), dtype=np.uint8)
    for k in range(3):
        np.put_along_axis(presence, picked[:, :, k:k + 1], 1, axis=2)
    covers = np.unique(presence.reshape(len(optimal), -1), axis=0)
    return {'strings': int(len(optimal)), 'covers': int(len(covers))}


def onemax(x: BitString) -> int:
    return x.ones_count()


def leadingones(x: BitString) -> int:
    return int(np.cumprod(x.bits.astype(np.int64)).sum())


def builtin_toy(name: str) -> ToyNPO:
    builders = {'toy3': ToyNPO.toy3, 'knapsack10': ToyNPO.knapsack10, 'parity4': lambda: ToyNPO.parity(4)}
    if name in builders:
        return builders[name]()
    if os.path.exists(name):
        return ToyNPO.from_file(name)
    raise ConfigurationError(f"Unknown toy instance '{name}' (builtin: {sorted(builders)})")


def build_problem(family: str, n: int, r: int = 2, instance: str = 'toy3') -> ProblemInstance:
    """
    Build a problem of the named family at dimension n

    Args:
        family: royalroad | vcp | onemax | leadingones | toy
        n: dimension (vcp requires a multiple of 3; ignored for toy)
        r: Royal Road block length
        instance: builtin toy name or instance file path
    """
    if family == 'royalroad':
        return RoyalRoad(n, r)
    if family == 'vcp':
        if n % 3 != 0:
            raise ParameterError(f"vcp dimension must be a multiple of 3, got {n}")
        return TriangleVCP(n // 3)
    if family == 'onemax':
        return OneMax(n)
    if family == 'leadingones':
        return LeadingOnes(n)
    if family == 'toy':
        return builtin_toy(instance)
    raise ConfigurationError(f"Unknown problem family '{family}'")


def problem_families() -> List[str]:
    return ['royalroad', 'vcp', 'onemax', 'leadingones', 'toy']
