# -*- coding: utf-8 -*-

"""Utilities."""

import os
from subprocess import CalledProcessError, check_output  # noqa: S404
from typing import Optional, Union

import numpy as np

__all__ = [
    'VERSION',
    'get_version',
    'get_git_hash',
    'make_rng',
    'circular_distance',
]

VERSION = '0.1.0-dev'

_MAX_SEED = 1 << 64


def get_version(with_git_hash: bool = False) -> str:
    """Get the artifact version, optionally suffixed with the short git hash of the checkout."""
    if with_git_hash:
        git_hash = get_git_hash()
        if git_hash:
            return f'{VERSION}-{git_hash}'
    return VERSION


def get_git_hash() -> Optional[str]:
    """Get the git hash.

    :return: The first six characters of the hash of ``HEAD``, or None if the code is not
        installed from a git checkout.
    """
    rv = _git('rev-parse', 'HEAD')
    if rv:
        return rv[:6]
    return None


def _git(*args: str) -> Optional[str]:
    with open(os.devnull, 'w') as devnull:
        try:
            ret = check_output(  # noqa: S603,S607
                ['git', *args],
                cwd=os.path.dirname(__file__),
                stderr=devnull,
            )
        except (CalledProcessError, OSError):
            return None
        else:
            return ret.strip().decode('utf-8')


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Get a counter-based Philox stream derived from an experiment seed.

    Child streams are addressed by a spawn key, such as ``(stream, trial)``, so any trial can be
    regenerated on its own and independently of the order in which trials are executed.

    :param seed: A 64-bit non-negative experiment seed
    :param key: Non-negative integers naming the child stream
    :raises ValueError: if the seed is not a 64-bit non-negative integer
    """
    if not 0 <= seed < _MAX_SEED:
        raise ValueError(f'seed must be a 64-bit non-negative integer, got {seed}')
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(part) for part in key))
    return np.random.Generator(np.random.Philox(sequence))


def circular_distance(left: Union[float, np.ndarray], right: Union[float, np.ndarray]):
    """Get the distance between phases on the unit circle, measured in turns."""
    difference = np.mod(np.asarray(left, dtype=float) - np.asarray(right, dtype=float), 1.0)
    distance = np.minimum(difference, 1.0 - difference)
    if np.ndim(distance) == 0:
        return float(distance)
    return distance
