"""
Approximation certificates for GA hits under the infeasible-first partition
"""

import click

from app import cli, handle_failures
from app.commands import build_spec, echo_table, operator_options, problem_options
from ga_tools.experiment_runner import certify_trials
from ga_tools.utils import median_or_nan


@cli.command('certify')
@problem_options
@operator_options
@click.option('--n', 'n', type=int, default=8, show_default=True, help='Problem dimension.')
@click.option('--trials', type=int, default=100, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--cap', type=int, default=1_000_000, show_default=True,
              help='Censoring cap in fitness evaluations.')
@click.option('--show-trials', is_flag=True, help='Print every trial row.')
@handle_failures
def certify_command(n, show_trials, **options):
    """Run repair-wrapped GA trials and report OPT / F(x) of each local optimum hit."""
    spec = build_spec(options, sizes=(n,))
    frame = certify_trials(spec)
    if show_trials:
        echo_table(frame)
    hits = frame[frame['hit']]
    click.echo(f"hits={len(hits)}/{len(frame)}")
    if len(hits):
        ratios = hits['ratio'].to_numpy(dtype=float)
        click.echo(f"ratio_max={ratios.max():.6g} ratio_median={median_or_nan(ratios):.6g} "
                   f"optimum={int(hits['optimum'].iloc[0])}")
    return 0
