# -*- coding: utf-8 -*-

"""Test experiment configuration."""

import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from quantum_clock_sync.config import ExperimentSpec, parse_config, read_config_file
from quantum_clock_sync.constants import DEFAULT_OMEGA0, DEFAULT_SEED, DEFAULT_TRIALS


class TestExperimentSpec(unittest.TestCase):
    """Test the validation of experiment specifications."""

    def test_defaults(self):
        """Test that omitted settings fall back to the defaults."""
        spec = parse_config({'scenario': 'sync', 'n': 4, 'seed': 7})
        self.assertEqual(ExperimentSpec(scenario='sync', n_bits=4, seed=7), spec)
        self.assertEqual(DEFAULT_TRIALS, spec.trials)
        self.assertEqual(DEFAULT_OMEGA0, spec.omega0)
        self.assertIsNone(spec.t_true)
        self.assertEqual(4, spec.n_prime)

    def test_invalid(self):
        """Test that out-of-range settings are rejected."""
        for kwargs in [
            dict(scenario='nope', n_bits=3),
            dict(scenario='sync', n_bits=0),
            dict(scenario='sync', n_bits=3, trials=0),
            dict(scenario='sync', n_bits=3, delta=0.6),
            dict(scenario='sync', n_bits=3, omega0=0.0),
            dict(scenario='sync', n_bits=3, seed=-1),
            dict(scenario='tradeoff', n_bits=3, delta=0.1),
        ]:
            with self.subTest(**kwargs), self.assertRaises(ValueError):
                ExperimentSpec(**kwargs)

    def test_echo(self):
        """Test the configuration columns."""
        spec = ExperimentSpec(scenario='boost', n_bits=4, delta=0.1, seed=3)
        self.assertEqual(
            dict(scenario='boost', n_bits=4, n_prime=7, delta=0.1, omega0=DEFAULT_OMEGA0, seed=3),
            spec.echo(),
        )

    def test_output_path(self):
        """Test that an explicit output path is kept."""
        spec = ExperimentSpec(scenario='sync', n_bits=3, output_path=Path('here.csv'))
        self.assertEqual(Path('here.csv'), spec.get_output_path())


class TestParseConfig(unittest.TestCase):
    """Test merging the configuration file with command line values."""

    def setUp(self) -> None:
        """Prepare a temporary directory."""
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, 'experiment.cfg')

    def tearDown(self) -> None:
        """Remove the temporary directory."""
        self.directory.cleanup()

    def _write(self, text: str) -> None:
        with open(self.path, 'w', encoding='utf-8') as file:
            file.write(text)

    def test_read(self):
        """Test comments, blank lines, and dashed keys."""
        self._write('# an experiment\nscenario = sync\n\nn = 3  # bits\nt-true = 0.625\nout = results.csv\n')
        self.assertEqual(
            dict(scenario='sync', n=3, t_true=0.625, out=Path('results.csv')),
            read_config_file(self.path),
        )

    def test_flags_win(self):
        """Test that command line values override the file."""
        self._write('scenario = sync\nn = 3\ntrials = 1000\n')
        spec = parse_config({'trials': 10, 'seed': None}, self.path)
        self.assertEqual(10, spec.trials)
        self.assertEqual(DEFAULT_SEED, spec.seed)
        spec = parse_config({'trials': None}, self.path)
        self.assertEqual(1000, spec.trials)

    def test_unknown_key(self):
        """Test that unknown keys are named in the error."""
        self._write('scenario = sync\ncolour = blue\n')
        with self.assertRaisesRegex(ValueError, 'colour'):
            read_config_file(self.path)

    def test_malformed(self):
        """Test that malformed lines and numbers are named in the error."""
        self._write('scenario = sync\nn = three\n')
        with self.assertRaisesRegex(ValueError, 'n'):
            read_config_file(self.path)
        self._write('scenario sync\n')
        with self.assertRaisesRegex(ValueError, 'key = value'):
            read_config_file(self.path)

    def test_missing(self):
        """Test that the scenario and the number of bits are required."""
        with self.assertRaisesRegex(ValueError, 'scenario'):
            parse_config({'n': 3})
        with self.assertRaisesRegex(ValueError, 'n'):
            parse_config({'scenario': 'sync'})

    def test_environment(self):
        """Test that the environment supplies the trial count when neither flag nor file does."""
        with mock.patch.dict(os.environ, {'QUANTUM_CLOCK_SYNC_TRIALS': '17'}):
            self.assertEqual(17, parse_config({'scenario': 'sync', 'n': 3}).trials)
            self.assertEqual(5, parse_config({'scenario': 'sync', 'n': 3, 'trials': 5}).trials)
