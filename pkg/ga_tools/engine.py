"""
Non-elitist generational genetic algorithm with hitting-time measurement
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from settings.constants import MASTER_SEED, MAX_EVALUATIONS
from .core import Population, ProblemInstance, RandomStream
from .exceptions import ConfigurationError
from .levels import LevelPartition
from .operators import (CrossoverOp, MutationOp, SelectionOp, TargetCopyCrossover,
                        TargetFirstSelection)

logger = logging.getLogger(__name__)


@dataclass
class GAConfig:
    """
    Parameters of one GA run

    Attributes:
        lam: population size lambda (>= 2)
        selection: selection operator
        crossover: single-offspring crossover
        mutation: mutation operator
        max_evaluations: censoring cap in fitness evaluations
        seed: master seed of the run's RandomStream
        prime_mode: run GA' (Sel' and Cross') instead of GA
        record_populations: keep every generation's genotypes on the result
    """

    lam: int
    selection: SelectionOp
    crossover: CrossoverOp
    mutation: MutationOp
    max_evaluations: int = int(MAX_EVALUATIONS)
    seed: int = MASTER_SEED
    prime_mode: bool = False
    record_populations: bool = False

    def validate(self):
        if self.lam < 2:
            raise ConfigurationError(f"lambda must be at least 2, got {self.lam}")
        if self.max_evaluations < self.lam:
            raise ConfigurationError(
                f"max_evaluations ({self.max_evaluations}) is smaller than lambda ({self.lam})")
        self.selection.validate(self.lam)


@dataclass
class RunResult:
    """
    Outcome of one run

    hitting_time is t * lambda for the first generation t holding a target
    member (0 when P_0 does) and None for censored runs.
    """

    hitting_time: Optional[int]
    generations: int
    censored: bool
    lam: int
    best_level_trace: List[int] = field(default_factory=list)
    best_fitness_trace: List[int] = field(default_factory=list)
    populations: Optional[List[np.ndarray]] = None
    final_population: Optional[Population] = None

    @property
    def evaluations(self) -> int:
        return (self.generations + 1) * self.lam


def init_population(problem: ProblemInstance, lam: int, rng: RandomStream,
                    partition: Optional[LevelPartition] = None) -> Population:
    """lambda genotypes with independent uniform bits, evaluated and sorted"""
    if lam < 2:
        raise ConfigurationError(f"lambda must be at least 2, got {lam}")
    return Population.from_genotypes(problem, rng.bits((lam, problem.n)), partition)


class GeneticAlgorithm:
    """One GA (or GA') instance bound to a problem, partition and stream"""

    def __init__(self, problem: ProblemInstance, partition: LevelPartition,
                 config: GAConfig, rng: Optional[RandomStream] = None):
        config.validate()
        if partition.problem is not problem and partition.problem.n != problem.n:
            raise ConfigurationError("Partition was built for a different problem dimension")
        self.problem = problem
        self.partition = partition
        self.config = config
        self.rng = rng or RandomStream(config.seed)
        self.target_level = partition.target_level
        if config.prime_mode:
            self.selection = TargetFirstSelection(config.selection, self.target_level)
            self.crossover = TargetCopyCrossover(config.crossover)
        else:
            self.selection = config.selection
            self.crossover = config.crossover
        self.mutation = config.mutation

    def initial_population(self) -> Population:
        return init_population(self.problem, self.config.lam, self.rng, self.partition)

    def has_hit(self, pop: Population) -> bool:
        return pop.best_level() >= self.target_level

    def step(self, pop: Population) -> Population:
        """
        Produce the next generation

        All first-parent selections are drawn, then all second-parent
        selections, then crossover and mutation of the whole batch.
        """
        lam = self.config.lam
        first = self.selection.select_batch(pop, self.rng, lam)
        second = self.selection.select_batch(pop, self.rng, lam)
        xs = pop.genotypes[first]
        ys = pop.genotypes[second]
        if self.config.prime_mode:
            on_target = pop.levels >= self.target_level
            children = self.crossover.apply_batch(xs, ys, self.rng, on_target[first], on_target[second])
        else:
            children = self.crossover.apply_batch(xs, ys, self.rng)
        offspring = self.mutation.mutate_batch(self.problem, children, self.rng)
        return Population.from_genotypes(self.problem, offspring, self.partition)

    def run(self) -> RunResult:
        lam = self.config.lam
        cap = self.config.max_evaluations
        pop = self.initial_population()
        result = RunResult(None, 0, False, lam,
                           populations=[] if self.config.record_populations else None)
        self._record(result, pop)
        while not self.has_hit(pop):
            if result.generations * lam >= cap:
                result.censored = True
                result.final_population = pop
                logger.debug("run censored after %d generations (cap %d)", result.generations, cap)
                return result
            pop = self.step(pop)
            result.generations += 1
            self._record(result, pop)
        result.hitting_time = result.generations * lam
        result.final_population = pop
        logger.debug("target hit at generation %d, T = %d", result.generations, result.hitting_time)
        return result

    @staticmethod
    def _record(result: RunResult, pop: Population):
        result.best_level_trace.append(pop.best_level())
        result.best_fitness_trace.append(int(pop.fitness.max()))
        if result.populations is not None:
            result.populations.append(pop.genotypes.copy())


def run_ga(problem: ProblemInstance, partition: LevelPartition, config: GAConfig,
           rng: Optional[RandomStream] = None) -> RunResult:
    return GeneticAlgorithm(problem, partition, config, rng).run()


def run_ga_prime(problem: ProblemInstance, partition: LevelPartition, config: GAConfig,
                 rng: Optional[RandomStream] = None) -> RunResult:
    """GA' run: Sel' returns the first target member, Cross' copies target parents"""
    prime = GAConfig(config.lam, config.selection, config.crossover, config.mutation,
                     config.max_evaluations, config.seed, True, config.record_populations)
    return GeneticAlgorithm(problem, partition, prime, rng).run()
