# File: tests/test_engine.py
# Description: Unit tests for the non-elitist GA engine and the GA / GA' coupling

import pytest

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from ga_tools.core import Population, RandomStream
from ga_tools.engine import GAConfig, GeneticAlgorithm, init_population, run_ga, run_ga_prime
from ga_tools.exceptions import ConfigurationError
from ga_tools.levels import NeighborhoodSpec, canonical_partition, merged_lo_partition
from ga_tools.operators import Bitwise, MuLambda, SinglePoint, Tournament
from ga_tools.problems import OneMax, RoyalRoad, TriangleVCP

print("\n\033[94mPytest for the GA engine\033[0m")


def make_config(n, lam=10, k=24, p_c=0.0, cap=100_000, record=False):
    return GAConfig(lam, Tournament(k), SinglePoint(p_c), Bitwise(1 / n), cap, 0, False, record)


def test_init_population(onemax8, rng):
    pop = init_population(onemax8, 6, rng)
    assert pop.lam == 6 and pop.n == 8
    assert pop.is_sorted
    with pytest.raises(ConfigurationError):
        init_population(onemax8, 1, rng)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        GAConfig(1, Tournament(2), SinglePoint(0.0), Bitwise(0.1)).validate()
    with pytest.raises(ConfigurationError):
        GAConfig(4, MuLambda(5), SinglePoint(0.0), Bitwise(0.1)).validate()
    with pytest.raises(ConfigurationError):
        GAConfig(10, Tournament(2), SinglePoint(0.0), Bitwise(0.1), max_evaluations=5).validate()


def test_run_hits_onemax_optimum(onemax8):
    partition = canonical_partition(onemax8)
    result = run_ga(onemax8, partition, make_config(8), RandomStream(1))
    assert not result.censored
    assert result.hitting_time == result.generations * 10
    assert result.best_level_trace[-1] == partition.target_level
    assert result.final_population.fitness.max() == 8
    assert result.evaluations == (result.generations + 1) * 10


def test_runs_are_reproducible(rr8):
    partition = canonical_partition(rr8)
    a = run_ga(rr8, partition, make_config(8, record=True), RandomStream(5, (0, 3)))
    b = run_ga(rr8, partition, make_config(8, record=True), RandomStream(5, (0, 3)))
    assert a.hitting_time == b.hitting_time
    assert len(a.populations) == len(b.populations)
    assert all(np.array_equal(p, q) for p, q in zip(a.populations, b.populations))


def test_step_keeps_population_size(rr8, rng):
    partition = canonical_partition(rr8)
    ga = GeneticAlgorithm(rr8, partition, make_config(8, lam=7, p_c=0.5), rng)
    pop = ga.initial_population()
    nxt = ga.step(pop)
    assert nxt.lam == 7
    assert nxt.levels is not None
    assert nxt.is_sorted


def test_censoring():
    problem = RoyalRoad(24, 2)
    partition = canonical_partition(problem)
    result = run_ga(problem, partition, make_config(24, lam=10, cap=10), RandomStream(0))
    assert result.censored
    assert result.hitting_time is None
    assert result.generations == 1


def test_initial_hit_gives_zero_time():
    problem = OneMax(2)
    partition = canonical_partition(problem)
    config = GAConfig(64, Tournament(2), SinglePoint(0.0), Bitwise(0.5), 1000)
    result = run_ga(problem, partition, config, RandomStream(0))
    assert result.hitting_time == 0
    assert result.generations == 0


def test_partition_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        GeneticAlgorithm(OneMax(8), canonical_partition(OneMax(6)), make_config(8))


def test_best_parent_can_be_lost():
    # flipping every bit sends each copied parent to its complement, so 111110 cannot survive
    problem = OneMax(6)
    partition = canonical_partition(problem)
    config = GAConfig(4, Tournament(2), SinglePoint(0.0), Bitwise(1.0), 1000)
    ga = GeneticAlgorithm(problem, partition, config, RandomStream(8))
    genotypes = np.array([[1, 1, 1, 1, 1, 0], [1, 1, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0]],
                         dtype=np.uint8)
    pop = Population.from_genotypes(problem, genotypes, partition)
    nxt = ga.step(pop)
    assert int(nxt.fitness.max()) < int(pop.fitness.max())
    assert not any(row.tolist() == [1, 1, 1, 1, 1, 0] for row in nxt.genotypes)
    assert nxt.best_level() < pop.best_level()


@pytest.mark.slow
@pytest.mark.parametrize("problem", [RoyalRoad(8, 2), TriangleVCP(4)], ids=['rr8', 'vcp4'])
def test_ga_and_ga_prime_hit_together(problem):
    partition = merged_lo_partition(problem, NeighborhoodSpec.hamming(problem.default_radius))
    config = make_config(problem.n, lam=7, p_c=0.2, cap=1_000_000, record=True)
    for trial in range(200):
        plain = run_ga(problem, partition, config, RandomStream(31, (0, trial)))
        prime = run_ga_prime(problem, partition, config, RandomStream(31, (0, trial)))
        assert plain.hitting_time == prime.hitting_time
        assert plain.hitting_time is not None
        # identical populations up to and including the hitting generation
        assert len(plain.populations) == len(prime.populations) == plain.generations + 1
        assert all(np.array_equal(p, q) for p, q in zip(plain.populations, prime.populations))
