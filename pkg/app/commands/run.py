"""
Single experiment: repeated GA trials over the given sizes
"""

import click

from app import cli, handle_failures
from app.commands import build_spec, echo_table, experiment_options, operator_options, problem_options
from app.models import ResultStore
from ga_tools.experiment_runner import run_experiment


@cli.command('run')
@problem_options
@operator_options
@experiment_options
@handle_failures
def run_command(**options):
    """Run GA trials and report per-size hitting-time statistics."""
    spec = build_spec(options)
    result = run_experiment(spec, workers=options['workers'])
    echo_table(result.summary)
    for note in result.notes:
        click.echo(f"note: {note}")
    if options['out']:
        table, companion = ResultStore.emit_results(result.summary, result.trials, options['out'], options['fmt'],
                                                    extra={'experiment': spec.as_dict(), 'notes': result.notes})
        click.echo(f"wrote {table} and {companion}")
    return 0
