"""
Scaling study: log-log regression of mean total evaluations against n
"""

import click

from app import EXIT_THRESHOLD, cli, handle_failures
from app.commands import build_spec, echo_table, experiment_options, operator_options, problem_options
from app.models import ResultStore
from ga_tools.experiment_runner import plot_scaling, scaling_study


@cli.command('scale')
@problem_options
@operator_options
@experiment_options
@click.option('--plot', 'plot_path', type=click.Path(dir_okay=False), help='Write an HTML log-log chart.')
@click.option('--assert-slope', type=float, help='Exit 3 when the fitted slope exceeds this value.')
@click.pass_context
@handle_failures
def scale_command(ctx, plot_path, assert_slope, **options):
    """Fit the growth exponent of mean total evaluations over at least 3 sizes."""
    spec = build_spec(options)
    report, result = scaling_study(spec, workers=options['workers'])
    echo_table(report.summary)
    click.echo(f"slope={report.slope:.4f} stderr={report.slope_stderr:.4f} r2={report.r_squared:.4f}")
    if report.fitted_constant is not None:
        click.echo(f"constant={report.fitted_constant:.6g} against {report.shape}")
    if options['out']:
        ResultStore.emit_results(report.summary, result.trials, options['out'], options['fmt'],
                                 extra={'experiment': spec.as_dict(), 'scaling': report.as_dict()})
    if plot_path:
        plot_scaling(report, plot_path)
        click.echo(f"wrote {plot_path}")
    if assert_slope is not None and report.slope > assert_slope:
        click.echo(f"slope {report.slope:.4f} exceeds threshold {assert_slope}", err=True)
        ctx.exit(EXIT_THRESHOLD)
    return 0
