"""
First-improvement local search from random feasible starts
"""

import click
import pandas as pd

from app import cli, handle_failures
from app.commands import echo_table, problem_options
from ga_tools.core import BitString, RandomStream
from ga_tools.exceptions import ContractError
from ga_tools.levels import NeighborhoodSpec, local_search
from ga_tools.problems import build_problem

MAX_START_DRAWS = 10000


def feasible_start(problem, rng):
    """Uniform string conditioned on feasibility, by rejection"""
    for _ in range(MAX_START_DRAWS):
        x = BitString(rng.bits(problem.n))
        if problem.is_feasible(x):
            return x
    if problem.fallback_feasible is not None:
        return problem.fallback_feasible
    raise ContractError(f"No feasible start found for {problem.instance_id} in {MAX_START_DRAWS} draws")


@cli.command('localsearch')
@problem_options
@click.option('--n', 'n', type=int, default=8, show_default=True, help='Problem dimension.')
@click.option('--starts', type=int, default=5, show_default=True, help='Number of random starts.')
@click.option('--radius', type=int, help='Hamming radius (problem default when omitted).')
@click.option('--seed', type=int, default=0, show_default=True)
@handle_failures
def localsearch_command(problem, r, instance, partition, n, starts, radius, seed):
    """Climb to local optima and print the move count and values."""
    target = build_problem(problem, n, r, instance)
    nbhd = NeighborhoodSpec.hamming(radius if radius is not None else target.default_radius)
    rng = RandomStream(seed)
    rows = []
    for _ in range(starts):
        result = local_search(target, nbhd, feasible_start(target, rng))
        rows.append({'start': result.start.to_string(), 'optimum': result.optimum.to_string(),
                     'moves': result.moves, 'start_value': result.trajectory[0],
                     'value': result.trajectory[-1]})
    echo_table(pd.DataFrame(rows))
    return 0
