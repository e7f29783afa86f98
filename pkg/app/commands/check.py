"""
Condition verification on a concrete configuration
"""

import click

from app import cli, handle_failures
from app.commands import build_spec, operator_options, problem_options
from app.models import ResultStore
from ga_tools.core import RandomStream
from ga_tools.levels import NeighborhoodSpec, build_partition
from ga_tools.theory import appendix_inequality, check_conditions, prop1_check


def echo_conditions(report):
    for name, entry in report.conditions.items():
        status = 'PASS' if entry['passed'] else 'FAIL'
        value = entry['value']
        shown = f"{value:.6g}" if isinstance(value, float) else value
        click.echo(f"{name:8s} {status}  value={shown} ({entry['method']})")
    for note in report.notes:
        click.echo(f"note: {note}")


@cli.command('check')
@problem_options
@operator_options
@click.option('--n', 'n', type=int, default=8, show_default=True, help='Problem dimension.')
@click.option('--mode', type=click.Choice(['exact', 'montecarlo']), default='exact', show_default=True)
@click.option('--samples', type=int, default=10000, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--eps', 'eps_fixed', type=float, help='Use this crossover parameter instead of the measured one.')
@click.option('--p0', 'p0_fixed', type=float, help='Use this p0 instead of the measured one.')
@click.option('--gamma0', type=float, help='Use this gamma0 instead of the advisor value.')
@click.option('--prop1', 'prop1_k', type=int, help='Check the neighbor-reaching bound for this K instead.')
@click.option('--out', type=click.Path(dir_okay=False), help='Write the report as a JSON document.')
@handle_failures
def check_command(n, mode, samples, seed, eps_fixed, p0_fixed, gamma0, prop1_k, out, **options):
    """Verify the runtime conditions (C1-C5, relaxed variants, L1-L3)."""
    if prop1_k is not None:
        result = prop1_check(prop1_k, n)
        click.echo(f"bound={result.bound:.6g} worst_exact={result.worst_exact:.6g} "
                   f"{'PASS' if result.passed else 'FAIL'}")
        click.echo(f"appendix_inequality={'PASS' if appendix_inequality(prop1_k, n) else 'FAIL'}")
        return 0
    spec = build_spec(options, sizes=(n,))
    problem = spec.problem_for(n)
    partition = build_partition(spec.partition, problem, NeighborhoodSpec.hamming(problem.default_radius))
    ops = spec.operators_for(problem.n)
    report = check_conditions(problem, partition, ops, spec.lambda_for(problem.n), mode=mode, samples=samples,
                              delta=spec.delta, eps=eps_fixed, p0=p0_fixed, gamma0=gamma0,
                              rng=RandomStream(seed))
    echo_conditions(report)
    if out:
        ResultStore.emit_report(report.to_dict(), out)
        click.echo(f"wrote {out}")
    return 0
