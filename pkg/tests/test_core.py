# File: tests/test_core.py
# Description: Unit tests for bitstrings, penalised fitness, population ordering and random streams

import pytest

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from ga_tools.core import (BitString, Population, PENALTY_FITNESS, RandomStream, all_genotypes, fitness,
                           gamma_rank, gamma_ranked, genotype_codes, hamming_candidates, sort_population)
from ga_tools.exceptions import ContractError, DimensionError, ParameterError

print("\n\033[94mPytest for core domain types\033[0m")


def test_bitstring_text_round_trip():
    x = BitString.from_string('10110')
    assert x.n == 5
    assert x.to_string() == '10110'
    assert x.ones_count() == 3
    assert x.complement().to_string() == '01001'


def test_bitstring_rejects_non_binary_text():
    with pytest.raises(ValueError):
        BitString.from_string('10a1')


def test_bitstring_equality_and_hash():
    a = BitString([1, 0, 1])
    b = BitString.from_string('101')
    assert a == b
    assert hash(a) == hash(b)
    assert len({a, b, BitString.zeros(3)}) == 2


def test_hamming_distance():
    assert BitString.zeros(6).hamming_distance(BitString.ones(6)) == 6
    assert BitString.from_string('1100').hamming_distance(BitString.from_string('1010')) == 2
    with pytest.raises(DimensionError):
        BitString.zeros(3).hamming_distance(BitString.zeros(4))


def test_fitness_penalises_infeasible(toy3):
    assert fitness(toy3, BitString.from_string('011')) == PENALTY_FITNESS
    assert fitness(toy3, BitString.from_string('101')) == 4


def test_fitness_dimension_mismatch(rr8):
    with pytest.raises(DimensionError):
        fitness(rr8, BitString.zeros(6))


def test_objective_undefined_for_infeasible(toy3):
    with pytest.raises(ContractError):
        toy3.objective(BitString.from_string('110'))


def test_genotype_codes_invert_enumeration():
    space = all_genotypes(5)
    assert space.shape == (32, 5)
    assert np.array_equal(genotype_codes(space), np.arange(32))
    assert space[6].tolist() == [0, 0, 1, 1, 0]


def test_hamming_candidates_order():
    candidates = hamming_candidates(np.zeros(4, dtype=np.uint8), 2)
    assert len(candidates) == 4 + 6
    # weight-1 flips first, by position
    assert candidates[0].tolist() == [1, 0, 0, 0]
    assert candidates[3].tolist() == [0, 0, 0, 1]
    assert candidates[4].tolist() == [1, 1, 0, 0]


def test_sort_population_key_order():
    genotypes = np.array([[0, 1], [1, 1], [1, 0], [0, 0]], dtype=np.uint8)
    fitness_values = [2, 2, 5, 2]
    levels = [1, 1, 2, 1]
    pop = sort_population(Population(genotypes, fitness_values, levels))
    assert pop.is_sorted
    assert pop.levels.tolist() == [2, 1, 1, 1]
    # equal level and fitness: genotype lexicographic ascending
    assert [row.tolist() for row in pop.genotypes[1:]] == [[0, 0], [0, 1], [1, 1]]
    assert pop.insertion.tolist() == [2, 3, 0, 1]


def test_sort_population_is_stable_on_duplicates():
    genotypes = np.array([[1, 0], [1, 0], [1, 0]], dtype=np.uint8)
    pop = sort_population(Population(genotypes, [1, 1, 1]))
    assert pop.insertion.tolist() == [0, 1, 2]


def test_population_from_genotypes_is_evaluated_and_sorted(onemax8, rng):
    pop = Population.from_genotypes(onemax8, rng.bits((10, 8)))
    assert pop.lam == 10
    assert np.all(np.diff(pop.fitness) <= 0)
    assert np.array_equal(pop.fitness, pop.genotypes.sum(axis=1))


def test_population_arrays_are_read_only(onemax8, rng):
    pop = Population.from_genotypes(onemax8, rng.bits((4, 8)))
    with pytest.raises(ValueError):
        pop.fitness[0] = 99


def test_empty_population_rejected():
    with pytest.raises(ContractError):
        Population(np.zeros((0, 3), dtype=np.uint8), [])


def test_gamma_rank():
    assert gamma_rank(10, 0.3) == 3
    assert gamma_rank(10, 0.01) == 1
    assert gamma_rank(7, 0.5) == 4
    with pytest.raises(ParameterError):
        gamma_rank(10, 1.0)


def test_gamma_ranked_requires_sorted():
    pop = Population(np.eye(3, dtype=np.uint8), [1, 2, 3])
    with pytest.raises(ContractError):
        gamma_ranked(pop, 0.5)
    ranked = gamma_ranked(sort_population(pop), 0.5)
    assert ranked.fitness == 2


def test_random_stream_is_deterministic():
    a = RandomStream(7, (1, 2)).bits((3, 16))
    b = RandomStream(7, (1, 2)).bits((3, 16))
    assert np.array_equal(a, b)


def test_random_stream_paths_are_independent():
    a = RandomStream(7, (0, 1)).random(50)
    b = RandomStream(7, (0, 2)).random(50)
    c = RandomStream(8, (0, 1)).random(50)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_random_stream_child_matches_path():
    parent = RandomStream(3, 4)
    assert parent.child(5).stream_id == (4, 5)
    assert np.array_equal(parent.child(5).random(5), RandomStream(3, (4, 5)).random(5))
