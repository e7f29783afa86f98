import functools
import logging
import sys

import click

from settings.config import Config
from ga_tools.exceptions import WorkbenchError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_THRESHOLD = 3

logger = logging.getLogger('app')


class RuntimeFailure(click.ClickException):
    exit_code = EXIT_FAILURE


def configure_logging(verbose=0):
    """Root handler on stderr; -v lowers the level to INFO, -vv to DEBUG"""
    level = Config.LOG_LEVEL.upper()
    if verbose == 1:
        level = 'INFO'
    elif verbose >= 2:
        level = 'DEBUG'
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=Config.LOG_FORMAT,
                        stream=sys.stderr, force=True)


def handle_failures(func):
    """Report workbench errors as runtime failures (exit 2) instead of tracebacks"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (WorkbenchError, OSError) as exc:
            logger.debug("command failed", exc_info=True)
            raise RuntimeFailure(str(exc)) from exc
    return wrapper


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.option('--experiment', 'experiment_file', type=click.Path(exists=True, dir_okay=False),
              help='KEY=VALUE experiment file; explicit flags override its values.')
@click.option('-v', '--verbose', count=True, help='Repeat for more log output.')
@click.pass_context
def cli(ctx, experiment_file, verbose):
    """Level-based runtime analysis workbench for non-elitist genetic algorithms."""
    configure_logging(verbose)
    if experiment_file:
        from app.models import ExperimentFile

        values = ExperimentFile.load(experiment_file)
        ctx.default_map = {name: dict(values) for name in ctx.command.commands}


def cli_dispatch(argv=None):
    """Run the CLI and map the outcome to an exit status"""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        click.echo(cli.get_help(click.Context(cli, info_name='levelga')))
        return EXIT_USAGE
    try:
        rv = cli.main(args=argv, prog_name='levelga', standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo('Aborted!', err=True)
        return EXIT_USAGE
    except Exception as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_FAILURE
    return rv if isinstance(rv, int) else EXIT_OK


# Import commands after group initialization to avoid circular imports
from app.commands import run, scale, advise, bound, check, localsearch, certify  # noqa: E402,F401
