# -*- coding: utf-8 -*-

"""Experiment configuration.

Values are resolved with the following precedence, highest first:

1. command line flags
2. a ``key = value`` configuration file passed with ``--config``
3. the :mod:`pystow` configuration of ``quantum_clock_sync``, i.e., the
   ``QUANTUM_CLOCK_SYNC_OMEGA0`` and ``QUANTUM_CLOCK_SYNC_TRIALS`` environment variables or
   ``~/.config/quantum_clock_sync.ini`` (only for ``omega0`` and ``trials``)
4. built-in defaults
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Union

import pystow

from .constants import DEFAULT_OMEGA0, DEFAULT_SEED, DEFAULT_TRIALS, MODULE_NAME
from .protocol import ProtocolConfig

__all__ = [
    'SCENARIOS',
    'CONFIG_KEYS',
    'ExperimentSpec',
    'read_config_file',
    'parse_config',
]

logger = logging.getLogger(__name__)

#: Scenario names and what they reproduce
SCENARIOS: Dict[str, str] = {
    'sync': 'Seeded protocol runs through the physical handshake, one row per trial.',
    'sweep-phi': 'Exact success and photon probabilities over a fine phase grid.',
    'boost': 'Worst-case success of the enlarged register against the 1 - delta target.',
    'tradeoff': 'Queries needed for n bits at each frequency range F = 1, 2, ..., 2^n.',
    'lemma1': 'The single-rate state check and the error scaling of the classical estimator.',
    'reduction': 'Handshake, rate reduction, and black box identities for rates up to 64.',
}

#: Configuration keys and how their textual values are parsed
CONFIG_KEYS: Dict[str, Callable[[str], Any]] = {
    'scenario': str,
    'n': int,
    'delta': float,
    'omega0': float,
    't_true': float,
    'trials': int,
    'seed': int,
    'out': Path,
}


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce a scenario run."""

    scenario: str
    n_bits: int
    delta: Optional[float] = None
    #: The base tick rate, in Hz
    omega0: float = DEFAULT_OMEGA0
    #: The clock offset in seconds. If not given, every trial draws its own uniformly random phase.
    t_true: Optional[float] = None
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    output_path: Optional[Path] = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f'unknown scenario: {self.scenario}')
        if self.n_bits < 1:
            raise ValueError(f'n must be positive, got {self.n_bits}')
        if self.trials < 1:
            raise ValueError(f'trials must be positive, got {self.trials}')
        if not 0 <= self.seed < 1 << 64:
            raise ValueError(f'seed must be a 64-bit non-negative integer, got {self.seed}')
        if not math.isfinite(self.omega0) or self.omega0 <= 0:
            raise ValueError(f'omega0 must be positive, got {self.omega0}')
        if self.t_true is not None and not math.isfinite(self.t_true):
            raise ValueError(f't_true must be finite, got {self.t_true}')
        if self.delta is not None:
            if self.scenario == 'tradeoff':
                raise ValueError('delta cannot be combined with the tradeoff scenario')
            if not 0 < self.delta < 0.5:
                raise ValueError(f'delta must be strictly between 0 and 1/2, got {self.delta}')

    @property
    def protocol(self) -> ProtocolConfig:
        """The protocol configuration of the sync, sweep, and boost scenarios."""
        return ProtocolConfig(n_bits=self.n_bits, delta=self.delta)

    @property
    def n_prime(self) -> int:
        """The register size used by the protocol."""
        return self.protocol.effective_register

    def echo(self) -> Dict[str, Any]:
        """Get the configuration columns carried by every result row."""
        return {
            'scenario': self.scenario,
            'n_bits': self.n_bits,
            'n_prime': self.n_prime,
            'delta': self.delta,
            'omega0': self.omega0,
            'seed': self.seed,
        }

    def get_output_path(self) -> Path:
        """Get the output path, defaulting to a file in the ``quantum_clock_sync`` results directory."""
        if self.output_path is not None:
            return Path(self.output_path)
        directory = pystow.join(MODULE_NAME, 'results')
        return directory / f'{self.scenario}-n{self.n_bits}-seed{self.seed}.csv'


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace('-', '_')


def _convert(key: str, value: Any) -> Any:
    if value is None or not isinstance(value, str):
        return value
    try:
        return CONFIG_KEYS[key](value.strip())
    except ValueError:
        raise ValueError(f'invalid value for {key}: {value!r}') from None


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a UTF-8 file of ``key = value`` lines.

    Blank lines and anything after a ``#`` are ignored, and dashes in keys are read as underscores.

    :raises ValueError: if a line has no ``=``, a key is unknown, or a value does not parse
    """
    rv = {}
    with open(path, encoding='utf-8') as file:
        for line_number, line in enumerate(file, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f'{path}:{line_number} is not a key = value pair: {line!r}')
            key, value = line.split('=', 1)
            key = _normalize_key(key)
            if key not in CONFIG_KEYS:
                raise ValueError(f'{path}:{line_number} has an unknown key: {key}')
            rv[key] = _convert(key, value)
    logger.debug('read %d settings from %s', len(rv), path)
    return rv


def parse_config(
    options: Mapping[str, Any],
    config_path: Union[None, str, Path] = None,
) -> ExperimentSpec:
    """Build an experiment specification.

    :param options: Values given on the command line, keyed like the configuration file. Missing
        or ``None`` values fall through to the configuration file, then to :mod:`pystow`, then
        to the defaults.
    :param config_path: An optional configuration file
    :raises ValueError: if a key is unknown, a value is malformed or invalid, or the scenario
        or ``n`` is missing
    """
    values = read_config_file(config_path) if config_path is not None else {}
    for key, value in options.items():
        key = _normalize_key(key)
        if key not in CONFIG_KEYS:
            raise ValueError(f'unknown option: {key}')
        if value is not None:
            values[key] = _convert(key, value)

    for key in ('scenario', 'n'):
        if values.get(key) is None:
            raise ValueError(f'missing required setting: {key}')

    return ExperimentSpec(
        scenario=values['scenario'],
        n_bits=values['n'],
        delta=values.get('delta'),
        omega0=pystow.get_config(
            MODULE_NAME, 'omega0', passthrough=values.get('omega0'), dtype=float, default=DEFAULT_OMEGA0,
        ),
        t_true=values.get('t_true'),
        trials=pystow.get_config(
            MODULE_NAME, 'trials', passthrough=values.get('trials'), dtype=int, default=DEFAULT_TRIALS,
        ),
        seed=values.get('seed', DEFAULT_SEED),
        output_path=values.get('out'),
    )
