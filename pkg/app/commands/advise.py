"""
Selection thresholds for the selective-pressure condition
"""

import click

from app import cli, handle_failures
from ga_tools.theory import corollary_selection_thresholds, lemma1_advisor


@cli.command('advise')
@click.option('--eps', type=float, help='Crossover parameter epsilon.')
@click.option('--p0', type=float, help='Mutation no-downgrade probability p0.')
@click.option('--delta-prime', type=float, default=1.0, show_default=True)
@click.option('--chi', type=float, help='Derive eps, p0, delta\' from p_m = chi/n and --pc instead.')
@click.option('--pc', type=float, default=0.0, show_default=True)
@click.option('--delta', type=float, default=0.1, show_default=True, help='delta used with --chi.')
@handle_failures
def advise_command(eps, p0, delta_prime, chi, pc, delta):
    """Print minimal tournament size, (mu,lambda) ratio, ranking eta and gamma0."""
    if chi is not None:
        advice = corollary_selection_thresholds(chi, pc, delta)
    elif eps is None or p0 is None:
        raise click.UsageError('advise needs --eps and --p0, or --chi')
    else:
        advice = lemma1_advisor(eps, p0, delta_prime)
    click.echo(f"k_min={advice.k_min}")
    click.echo(f"mu_ratio_min={advice.mu_ratio_min:g}")
    click.echo(f"eta_min={advice.eta_min:g}")
    click.echo(f"gamma0={advice.gamma0:g}")
    click.echo(f"delta_adopted={advice.delta_adopted:g}")
    if chi is not None:
        click.echo(f"eps={advice.eps:g} p0={advice.p0:g}")
    return 0
