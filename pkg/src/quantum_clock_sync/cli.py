# -*- coding: utf-8 -*-

"""Command line interface for the quantum clock synchronization simulator."""

import logging
from pathlib import Path

import click
from more_click import verbose_option

from .config import SCENARIOS, parse_config
from .experiments import run_scenario, write_results

__all__ = [
    'main',
]

logger = logging.getLogger(__name__)


@click.group()
def main():
    """Simulate one-qubit quantum clock synchronization."""


@main.command()
@click.option('--scenario', type=click.Choice(sorted(SCENARIOS)), help='The scenario to run')
@click.option('--n', 'n', type=int, help='The number of bits of accuracy')
@click.option('--delta', type=float, help='The tolerated failure probability, in (0, 1/2)')
@click.option('--omega0', type=float, help='The base tick rate in Hz')
@click.option('--t-true', 't_true', type=float, help='The clock offset in seconds. Random per trial if omitted.')
@click.option('--trials', type=int, help='The number of trials')
@click.option('--seed', type=int, help='The experiment seed')
@click.option('--out', type=click.Path(dir_okay=False), help='The CSV file to write')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), help='A key = value file')
@verbose_option
def run(config_path, **options):
    """Run a scenario and write its rows as CSV."""
    try:
        spec = parse_config(options, config_path)
        result = run_scenario(spec)
    except ValueError as e:
        raise click.UsageError(str(e))

    path = spec.get_output_path()
    try:
        write_results(result, spec, path)
    except OSError as e:
        raise click.FileError(str(path), hint=str(e))
    logger.info('wrote %d rows to %s', len(result.frame.index), Path(path).resolve())
    click.echo(result.summary)


@main.command()
def scenarios():
    """List the available scenarios."""
    for name, description in SCENARIOS.items():
        click.echo(f'{name}\t{description}')


if __name__ == '__main__':
    main()
