"""
Subcommand modules and the options they share
"""

import click

from settings.config import Config
from settings.constants import ALLOWED_FORMATS, PARTITION_KINDS, PROBLEM_FAMILIES, SELECTION_KINDS
from ga_tools.experiment_runner import ExperimentSpec


def parse_sizes(ctx, param, value):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    try:
        return tuple(int(v) for v in str(value).replace(' ', '').split(',') if v)
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of integers, got '{value}'")


def problem_options(func):
    options = [
        click.option('--problem', type=click.Choice(sorted(PROBLEM_FAMILIES)), default='royalroad',
                     show_default=True, help='Problem family.'),
        click.option('--r', 'r', type=int, default=2, show_default=True, help='Royal Road block length.'),
        click.option('--instance', default='toy3', show_default=True,
                     help='Toy instance: builtin name or instance file path.'),
        click.option('--partition', type=click.Choice(sorted(PARTITION_KINDS)), default='canonical',
                     show_default=True, help='Level partition.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def operator_options(func):
    options = [
        click.option('--selection', type=click.Choice(sorted(SELECTION_KINDS)), default='tournament',
                     show_default=True),
        click.option('--k', 'k', type=int, help='Tournament size (advisor value when omitted).'),
        click.option('--mu', type=int, help='(mu,lambda) parent count (advisor value when omitted).'),
        click.option('--eta', type=float, help='Exponential ranking parameter (advisor value when omitted).'),
        click.option('--pm', type=float, help='Mutation rate; overrides --chi.'),
        click.option('--chi', type=float, help='Mutation rate chi/n (default chi = 1).'),
        click.option('--pc', type=float, default=0.0, show_default=True, help='Crossover probability.'),
        click.option('--lambda', 'lam', type=int, help='Population size (ceil(b ln n) when omitted).'),
        click.option('--lambda-b', 'lambda_b', type=float, default=Config.LAMBDA_B, show_default=True,
                     help='b in lambda = ceil(b ln n).'),
        click.option('--delta', type=float, default=Config.DELTA, show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def experiment_options(func):
    options = [
        click.option('--sizes', callback=parse_sizes, default='8', show_default=True,
                     help='Comma-separated problem dimensions n.'),
        click.option('--trials', type=int, default=30, show_default=True),
        click.option('--seed', type=int, default=Config.MASTER_SEED, show_default=True),
        click.option('--cap', type=int, default=int(Config.MAX_EVALUATIONS), show_default=True,
                     help='Censoring cap in fitness evaluations.'),
        click.option('--out', type=click.Path(dir_okay=False), help='Result table path.'),
        click.option('--format', 'fmt', type=click.Choice(sorted(ALLOWED_FORMATS)), default='csv',
                     show_default=True),
        click.option('--workers', type=int, default=Config.WORKERS, show_default=True),
        click.option('--repair', is_flag=True, help='Wrap mutation with the repair heuristic.'),
        click.option('--prime', is_flag=True, help="Run GA' instead of GA."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_spec(options, sizes=None):
    """ExperimentSpec from parsed CLI options"""
    return ExperimentSpec(
        family=options['problem'],
        sizes=tuple(sizes if sizes is not None else options['sizes']),
        trials=options.get('trials', 1),
        seed=options.get('seed', Config.MASTER_SEED),
        selection=options['selection'],
        k=options.get('k'),
        mu=options.get('mu'),
        eta=options.get('eta'),
        pm=options.get('pm'),
        chi=options.get('chi'),
        pc=options.get('pc', 0.0),
        lam=options.get('lam'),
        lambda_b=options.get('lambda_b', Config.LAMBDA_B),
        partition=options['partition'],
        cap=options.get('cap', int(Config.MAX_EVALUATIONS)),
        delta=options.get('delta', Config.DELTA),
        r=options.get('r', 2),
        instance=options.get('instance', 'toy3'),
        repair=options.get('repair', False),
        prime=options.get('prime', False),
    ).validate()


def echo_table(frame):
    click.echo(frame.to_string(index=False))
