# File: tests/test_operators.py
# Description: Unit tests for selection, mutation and crossover operators and their exact distributions

import pytest

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fractions import Fraction

import numpy as np
from scipy import stats

from ga_tools.core import BitString, Population, RandomStream, all_genotypes, gamma_rank
from ga_tools.exceptions import ConfigurationError, DimensionError, ParameterError
from ga_tools.levels import NeighborhoodSpec
from ga_tools.operators import (Bitwise, ExpRanking, MuLambda, NeighborhoodUniform, PassThrough, RepairWrapped,
                                SinglePoint, TargetCopyCrossover, TargetFirstSelection, Tournament,
                                TwoToOneAdapter, build_selection, cumulative_beta, estimate_eps0, estimate_eps1,
                                exact_eps0, exact_eps1, mutation_prob, selection_prob)
from ga_tools.problems import OneMax, ToyNPO
from ga_tools.utils import binomial_point, chi_square_pvalue, log_binomial_point

print("\n\033[94mPytest for GA operators\033[0m")

SIGNIFICANCE = 1e-3


@pytest.fixture
def ranked_pop():
    """Five members with distinct fitness and levels, sorted"""
    return Population.synthetic([5, 4, 3, 2, 1], [5, 4, 3, 2, 1])


# ---------------------------------------------------------------- selection

@pytest.mark.parametrize("sel", [Tournament(1), Tournament(3), MuLambda(2), ExpRanking(2.5)],
                         ids=['k1', 'k3', 'mu2', 'eta2.5'])
def test_selection_probabilities_sum_to_one(sel, ranked_pop):
    probs = sel.probabilities(ranked_pop)
    assert probs.sum() == pytest.approx(1.0)
    assert np.all(np.diff(probs) <= 1e-15)


def test_tournament_closed_form(ranked_pop):
    sel = Tournament(2)
    assert selection_prob(sel, ranked_pop, 0) == pytest.approx(1 - (4 / 5) ** 2)
    assert selection_prob(sel, ranked_pop, 4) == pytest.approx((1 / 5) ** 2)


def test_tournament_ties_go_to_lower_index():
    pop = Population.synthetic([3, 3, 1])
    probs = Tournament(2).probabilities(pop)
    assert probs[0] > probs[1] > probs[2]
    assert probs.sum() == pytest.approx(1.0)


def test_mu_lambda_validation(ranked_pop):
    with pytest.raises(ConfigurationError):
        MuLambda(6).validate(5)
    with pytest.raises(ParameterError):
        MuLambda(0)
    assert MuLambda(2).probabilities(ranked_pop).tolist() == [0.5, 0.5, 0.0, 0.0, 0.0]


def test_build_selection():
    assert isinstance(build_selection('tournament', k=4), Tournament)
    assert isinstance(build_selection('exprank', eta=3.0), ExpRanking)
    with pytest.raises(ConfigurationError):
        build_selection('mulambda')
    with pytest.raises(ParameterError):
        build_selection('roulette', k=2)


def test_cumulative_beta(ranked_pop):
    # gamma-ranked member is rank ceil(0.4 * 5) = 2; levels >= its level are ranks 1..2
    sel = Tournament(2)
    probs = sel.probabilities(ranked_pop)
    assert cumulative_beta(sel, ranked_pop, None, 0.4) == pytest.approx(probs[:2].sum())
    with pytest.raises(ParameterError):
        cumulative_beta(sel, ranked_pop, None, 0.0)


def test_target_first_selection_consumes_inner_draws(ranked_pop):
    inner = Tournament(3)
    wrapped = TargetFirstSelection(inner, target_level=5)
    a, b = RandomStream(1), RandomStream(1)
    picks = wrapped.select_batch(ranked_pop, a, 20)
    inner.select_batch(ranked_pop, b, 20)
    assert picks.tolist() == [0] * 20
    assert a.random() == b.random()


def test_target_first_selection_without_target(ranked_pop):
    inner = ExpRanking(2.0)
    wrapped = TargetFirstSelection(inner, target_level=6)
    picks = wrapped.select_batch(ranked_pop, RandomStream(2), 50)
    assert np.array_equal(picks, inner.select_batch(ranked_pop, RandomStream(2), 50))


@pytest.mark.parametrize("sel", [Tournament(3), MuLambda(4), ExpRanking(3.0)], ids=['tournament', 'mulambda', 'exprank'])
def test_beta_monte_carlo_consistency(sel):
    draws = 100_000
    gamma = 0.3
    population_rng = np.random.default_rng(99)
    for index in range(20):
        lam = 10
        levels = population_rng.integers(1, 5, size=lam)
        fitness_values = 10 * levels + population_rng.integers(0, 3, size=lam)
        pop = Population.synthetic(fitness_values.tolist(), levels.tolist())
        exact = cumulative_beta(sel, pop, None, gamma)
        picks = sel.select_batch(pop, RandomStream(5, index), draws)
        threshold = pop.levels[gamma_rank(lam, gamma) - 1]
        estimate = float((pop.levels[picks] >= threshold).mean())
        sigma = np.sqrt(exact * (1 - exact) / draws)
        assert abs(estimate - exact) <= 4 * sigma + 1e-12


# ---------------------------------------------------------------- mutation

def test_mutation_prob_is_exact_with_fractions():
    p = Fraction(1, 8)
    x = BitString.zeros(8)
    y = BitString.from_string('10000000')
    assert mutation_prob(p, x, y) == Fraction(1, 8) * Fraction(7, 8) ** 7
    assert mutation_prob(p, x, x) == Fraction(7, 8) ** 8


def test_mutation_prob_float_uses_log_space():
    x = BitString.zeros(10)
    assert mutation_prob(0.1, x, x) == pytest.approx(0.9 ** 10, rel=1e-12)
    assert mutation_prob(0.5, x, BitString.ones(10)) == pytest.approx(0.5 ** 10, rel=1e-12)
    # far below the smallest double, the log value stays finite
    assert log_binomial_point(0.5, 3000, 3000) == pytest.approx(3000 * np.log(0.5))
    assert binomial_point(0.0, 0, 5) == 1.0
    assert binomial_point(1.0, 4, 5) == 0.0


def test_bitwise_distance_histogram_matches_binomial():
    n, trials = 8, 100_000
    problem = OneMax(n)
    x = np.zeros((trials, n), dtype=np.uint8)
    y = Bitwise(1 / 8).mutate_batch(problem, x, RandomStream(2024))
    observed = np.bincount(y.sum(axis=1), minlength=n + 1)
    expected = stats.binom.pmf(np.arange(n + 1), n, 1 / 8)
    assert chi_square_pvalue(observed, expected) > SIGNIFICANCE


def test_bitwise_transition_vector(onemax8):
    vector = Bitwise(1 / 8).transition_vector(onemax8, BitString.zeros(8))
    assert vector.sum() == pytest.approx(1.0)
    assert vector[0] == pytest.approx((7 / 8) ** 8)


def test_repair_wrapped_moves_infeasible_mass_to_fallback(toy3):
    op = RepairWrapped(Bitwise(0.5))
    vector = op.transition_vector(toy3, BitString.from_string('010'))
    infeasible = ~toy3.feasible_batch(all_genotypes(3))
    assert vector.sum() == pytest.approx(1.0)
    assert np.all(vector[infeasible] == 0)
    # 000 is the fallback: own mass 1/8 plus 2/8 from 011 and 110
    assert vector[0] == pytest.approx(3 / 8)
    out = op.mutate_batch(toy3, np.tile([0, 1, 0], (200, 1)).astype(np.uint8), RandomStream(3))
    assert toy3.feasible_batch(out).all()


def test_neighborhood_uniform_falls_back_without_neighbors():
    problem = ToyNPO.parity(4)
    op = NeighborhoodUniform(NeighborhoodSpec.hamming(1))
    out = op.mutate_batch(problem, np.ones((5, 4), dtype=np.uint8), RandomStream(4))
    assert np.all(out == 0)
    assert op.transition_vector(problem, BitString.ones(4))[0] == 1.0


def test_neighborhood_uniform_distribution(toy3):
    op = NeighborhoodUniform(NeighborhoodSpec.hamming(1))
    vector = op.transition_vector(toy3, BitString.from_string('101'))
    # neighbors of 101: 001, 111, 100
    assert vector[0b001] == pytest.approx(1 / 3)
    assert vector[0b111] == pytest.approx(1 / 3)
    assert vector[0b100] == pytest.approx(1 / 3)


# ---------------------------------------------------------------- crossover

def test_single_point_cut_histogram_is_uniform():
    n, trials = 8, 100_000
    xs = np.zeros((trials, n), dtype=np.uint8)
    ys = np.ones((trials, n), dtype=np.uint8)
    us, _ = SinglePoint(0.999).offspring_pair_batch(xs, ys, RandomStream(11))
    cuts = n - us.sum(axis=1)
    cuts = cuts[cuts < n]
    observed = np.bincount(cuts, minlength=n)[1:n]
    assert chi_square_pvalue(observed, np.full(n - 1, 1 / (n - 1))) > SIGNIFICANCE


def test_single_point_conserves_onemax_totals():
    n, trials = 16, 100_000
    rng = RandomStream(8)
    xs, ys = rng.bits((trials, n)), rng.bits((trials, n))
    us, vs = SinglePoint(0.7).offspring_pair_batch(xs, ys, rng)
    assert np.array_equal(us.sum(axis=1) + vs.sum(axis=1), xs.sum(axis=1) + ys.sum(axis=1))


def test_single_point_without_crossing_copies_parents():
    x, y = BitString.zeros(6), BitString.ones(6)
    dist = SinglePoint(0.0).pair_distribution(x, y)
    assert dist[(x, y)] == 1.0
    assert sum(p for pair, p in dist.items() if pair != (x, y)) == 0
    child = SinglePoint(0.0).apply(x, y, RandomStream(0))
    assert child in (x, y)


def test_single_point_distribution_sums_to_one():
    x, y = BitString.from_string('1100'), BitString.from_string('0011')
    op = SinglePoint(0.6)
    assert sum(op.pair_distribution(x, y).values()) == pytest.approx(1.0)
    assert sum(op.offspring_distribution(x, y).values()) == pytest.approx(1.0)


def test_single_point_needs_two_bits():
    with pytest.raises(DimensionError):
        SinglePoint(0.5).offspring_pair(BitString([1]), BitString([0]), RandomStream(0))
    with pytest.raises(ParameterError):
        SinglePoint(1.0)


def test_pass_through_and_adapter_distributions():
    x, y = BitString.from_string('110'), BitString.from_string('001')
    adapter = TwoToOneAdapter(SinglePoint(0.5))
    assert sum(adapter.offspring_distribution(x, y).values()) == pytest.approx(1.0)
    wrapped = PassThrough(0.25, adapter)
    dist = wrapped.offspring_distribution(x, y)
    assert sum(dist.values()) == pytest.approx(1.0)
    assert dist[x] >= 0.75 / 2


def test_pass_through_keeps_quarter_success():
    # p_c = 0.5 returns the fitter parent with probability at least (1 - 0.5) / 2
    op = PassThrough(0.5, TwoToOneAdapter(SinglePoint(0.5)))
    assert exact_eps0(op, OneMax(4)).estimate >= 0.25 - 1e-12
    sampled = estimate_eps0(op, OneMax(8), trials=10000, rng=RandomStream(12))
    assert sampled.estimate >= 0.25
    assert sampled.ci_high >= 0.25


def test_target_copy_crossover_keeps_target_parent():
    xs = np.zeros((4, 5), dtype=np.uint8)
    ys = np.ones((4, 5), dtype=np.uint8)
    op = TargetCopyCrossover(SinglePoint(0.9))
    out = op.apply_batch(xs, ys, RandomStream(6), np.array([True, False, False, False]),
                         np.array([False, True, False, False]))
    assert out[0].tolist() == [0] * 5
    assert out[1].tolist() == [1] * 5


def test_exact_eps0_single_point_onemax():
    # the better parent is copied with probability (1 - p_c) / 2 and 0000 x 1111 allows nothing else
    estimate = exact_eps0(SinglePoint(0.5), OneMax(4))
    assert estimate.method == 'exact'
    assert estimate.estimate == pytest.approx(0.25)


def test_exact_eps1_single_point_onemax():
    # the single offspring copies the fitter parent with probability (1 - p_c) / 2;
    # 0011 x 1100 keeps equal fitness only when no cut happens
    estimate = exact_eps1(SinglePoint(0.5), OneMax(4))
    assert estimate.method == 'exact'
    assert estimate.estimate >= 0.25
    assert estimate.estimate == pytest.approx(0.5)


def test_exact_eps1_first_child_reaches_one_minus_pc():
    for p_c in (0.0, 0.5, 0.75):
        estimate = exact_eps1(SinglePoint(p_c), OneMax(4), first_child=True)
        assert estimate.estimate >= 1 - p_c - 1e-12


def test_exact_and_sampled_eps1_agree_on_first_child():
    problem = OneMax(4)
    exact = exact_eps1(SinglePoint(0.0), problem, first_child=True)
    sampled = estimate_eps1(SinglePoint(0.0), problem, trials=2000, rng=RandomStream(1), first_child=True)
    assert exact.estimate == 1.0
    assert sampled.estimate == 1.0
    assert sampled.ci_low <= 1.0 <= sampled.ci_high


def test_estimate_eps1_equal_parents_without_crossing():
    problem = OneMax(6)

    def twins(rng):
        x = BitString(rng.bits((1, 6))[0])
        return x, x

    estimate = estimate_eps1(SinglePoint(0.0), problem, twins, trials=500, rng=RandomStream(3))
    assert estimate.estimate == 1.0


def test_estimate_eps0_interval():
    estimate = estimate_eps0(SinglePoint(0.3), OneMax(8), trials=4000, rng=RandomStream(2))
    assert estimate.ci_low <= estimate.estimate <= estimate.ci_high
    assert estimate.estimate >= 0.35 - 0.05
