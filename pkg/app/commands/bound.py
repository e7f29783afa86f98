"""
Expected-runtime bound and minimal population size
"""

import click

from app import cli, handle_failures
from ga_tools.theory import TheoremParams, lambda_lower_bound, theorem1_bound


def parse_floats(ctx, param, value):
    try:
        return [float(v) for v in str(value).split(',') if v]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'")


@cli.command('bound')
@click.option('--m', 'm', type=int, required=True, help='Number of non-target levels.')
@click.option('--lambda', 'lam', type=int, required=True, help='Population size.')
@click.option('--s', 's_list', callback=parse_floats, required=True,
              help='Upgrade probabilities s_1..s_m (comma-separated; one value is repeated m times).')
@click.option('--s-star', type=float, help='Lower bound on every s_j (min s_j when omitted).')
@click.option('--p0', type=float, required=True)
@click.option('--eps', type=float, default=1.0, show_default=True)
@click.option('--delta', type=float, required=True)
@click.option('--gamma0', type=float, required=True)
@handle_failures
def bound_command(m, lam, s_list, s_star, p0, eps, delta, gamma0):
    """Evaluate the expected-evaluation bound and the population-size condition."""
    if len(s_list) == 1:
        s_list = s_list * m
    params = TheoremParams(m, lam, s_list, p0, eps, delta, gamma0, s_star)
    lam_bound = lambda_lower_bound(params)
    click.echo(f"a={params.a:g} psi={params.psi:g} c={params.c:g}")
    click.echo(f"bound={theorem1_bound(params):.6g}")
    suffix = ' (trivial)' if lam_bound.trivial else ''
    click.echo(f"lambda_min={lam_bound.value:.6g}{suffix}")
    return 0
