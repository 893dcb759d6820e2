# -*- coding: utf-8 -*-

"""Test the clock model, the handshake, and query accounting."""

import unittest
from fractions import Fraction

import numpy as np

from quantum_clock_sync.channel import (
    ClockModel, ResourceLedger, TransitRecord, TransitSampler, fixed_rate_query, handshake_oracle, handshake_simulate,
    make_world, tqh_oracle,
)
from quantum_clock_sync.protocol import ProtocolConfig, run_sync
from quantum_clock_sync.qsim import StateVector, basis_state, max_deviation, random_state
from quantum_clock_sync.utils import make_rng

TOLERANCE = 1e-12
PLUS = StateVector(np.array([1, 1]) / np.sqrt(2))


def _transit(clock: ClockModel, t_tr: float, t_a: float = 0.0) -> TransitRecord:
    return TransitRecord(t_a=t_a, t_b=t_a + t_tr + clock.offset, t_tr=t_tr)


class TestClockModel(unittest.TestCase):
    """Test the hidden truth of a world."""

    def test_phase(self):
        """Test that only the fractional part of the scaled offset is observable."""
        self.assertAlmostEqual(0.25, ClockModel(offset=2.5, omega0=0.5).phase)
        self.assertAlmostEqual(0.625, ClockModel.from_phase(0.625, omega0=4.0).phase)
        self.assertAlmostEqual(0.0, ClockModel(offset=3.0, omega0=1.0).phase)

    def test_invalid(self):
        """Test that nonpositive or non-finite rates and offsets are rejected."""
        for offset, omega0 in [(0.0, 0.0), (0.0, -1.0), (np.inf, 1.0), (0.0, np.nan)]:
            with self.subTest(offset=offset, omega0=omega0), self.assertRaises(ValueError):
                ClockModel(offset=offset, omega0=omega0)


class TestOracle(unittest.TestCase):
    """Test the ticking qubit handshake black box."""

    def test_zero_offset(self):
        """Test that a zero offset leaves any state unchanged."""
        state = random_state(4, make_rng(0))
        rv = tqh_oracle(ClockModel.from_phase(0.0), state, [0, 1, 2], 3)
        self.assertLessEqual(max_deviation(state, rv), TOLERANCE)

    def test_zero_rate(self):
        """Test that a register holding zero leaves the photon alone."""
        state = basis_state(2, 0).tensor(PLUS)
        rv = tqh_oracle(ClockModel.from_phase(0.37), state, [0, 1], 2)
        self.assertLessEqual(max_deviation(state, rv), TOLERANCE)

    def test_unit_rate(self):
        """Test the photon phases for a register holding one."""
        state = basis_state(1, 1).tensor(PLUS)
        rv = tqh_oracle(ClockModel.from_phase(5 / 8), state, [0], 1)
        expected = np.array([0, np.exp(5j * np.pi / 4), 0, np.exp(-5j * np.pi / 4)]) / np.sqrt(2)
        np.testing.assert_allclose(expected, rv.amps, atol=TOLERANCE)

    def test_ledger(self):
        """Test that one call is one query with every rate the register can hold."""
        ledger = ResourceLedger()
        tqh_oracle(ClockModel.from_phase(0.1), random_state(4, make_rng(1)), [0, 1, 2], 3, ledger)
        self.assertEqual(ResourceLedger(queries=1, max_rate_index=7), ledger)
        fixed_rate_query(ClockModel.from_phase(0.1), PLUS, 0, 12, ledger)
        self.assertEqual(ResourceLedger(queries=2, max_rate_index=12), ledger)

    def test_merge(self):
        """Test that merged ledgers add queries and keep the largest rate."""
        merged = ResourceLedger(queries=3, max_rate_index=4).merge(ResourceLedger(queries=1, max_rate_index=9))
        self.assertEqual(ResourceLedger(queries=4, max_rate_index=9), merged)


class TestHandshake(unittest.TestCase):
    """Test the physical realization of the black box."""

    def test_zero_rate(self):
        """Test that a photon sent at rate zero is unchanged."""
        clock = ClockModel.from_phase(0.3)
        self.assertLessEqual(max_deviation(PLUS, handshake_simulate(clock, 0, PLUS, _transit(clock, 4.2))), TOLERANCE)

    def test_transit_independence(self):
        """Test that the transit duration drops out of the output state."""
        clock = ClockModel.from_phase(0.25)
        short = handshake_simulate(clock, 1, PLUS, _transit(clock, 0.3))
        long = handshake_simulate(clock, 1, PLUS, _transit(clock, 7.0))
        self.assertLessEqual(max_deviation(short, long), TOLERANCE)

    def test_matches_oracle(self):
        """Test that the handshake equals the black box with its register pinned to a classical rate."""
        clock = ClockModel.from_phase(0.37)
        for k in (1, 2, 3):
            with self.subTest(k=k):
                pinned = tqh_oracle(clock, PLUS.tensor(basis_state(2, k)), [1, 2], 0)
                physical = handshake_simulate(clock, k, PLUS, _transit(clock, 2.5)).tensor(basis_state(2, k))
                self.assertLessEqual(max_deviation(pinned, physical), TOLERANCE)

    def test_random_equivalence(self):
        """Test the handshake against the fixed-rate black box for many rates, offsets, and transits."""
        rng = make_rng(11)
        for trial in range(100):
            clock = ClockModel.from_phase(rng.uniform())
            photon = random_state(1, rng)
            transit = _transit(clock, rng.uniform(0, 10))
            for k in range(65):
                physical = handshake_simulate(clock, k, photon, transit)
                with self.subTest(trial=trial, k=k):
                    self.assertLessEqual(max_deviation(fixed_rate_query(clock, photon, 0, k), physical), TOLERANCE)

    def test_superposed_rates(self):
        """Test that one photon carrying a superposition of rates matches the black box."""
        clock = ClockModel.from_phase(0.8125)
        state = random_state(5, make_rng(2))
        ledger = ResourceLedger()
        physical = handshake_oracle(clock, state, [0, 1, 2, 3], 4, _transit(clock, 6.1, t_a=1.5), ledger)
        self.assertLessEqual(max_deviation(tqh_oracle(clock, state, [0, 1, 2, 3], 4), physical), TOLERANCE)
        self.assertEqual(ResourceLedger(queries=1, max_rate_index=15), ledger)

    def test_inconsistent_record(self):
        """Test that a record from another world is rejected."""
        clock = ClockModel.from_phase(0.2)
        record = TransitRecord(t_a=0.0, t_b=1.0, t_tr=0.5)
        with self.assertRaises(ValueError):
            handshake_simulate(clock, 1, PLUS, record)
        with self.assertRaises(ValueError):
            handshake_simulate(clock, 1, basis_state(2, 0), _transit(clock, 1.0))

    def test_negative_transit(self):
        """Test that a negative transit duration is rejected."""
        with self.assertRaises(ValueError):
            TransitRecord(t_a=0.0, t_b=1.0, t_tr=-0.1)


class TestWorld(unittest.TestCase):
    """Test sampled worlds."""

    def test_zero_offset(self):
        """Test that every handshake is the identity when the clocks agree."""
        clock, sampler = make_world(0.0, 1.0, make_rng(0))
        for _ in range(10):
            state = random_state(1, make_rng(1))
            self.assertLessEqual(max_deviation(state, handshake_simulate(clock, 3, state, sampler())), TOLERANCE)

    def test_records_consistent(self):
        """Test that sampled records always satisfy t_B - t_A - t_tr = T."""
        clock, sampler = make_world(3.7, 2.0, make_rng(4), interval=(1.0, 2.0))
        for _ in range(100):
            record = sampler()
            self.assertTrue(record.is_consistent_with(clock))
            self.assertTrue(1.0 <= record.t_tr <= 2.0)

    def test_invalid_interval(self):
        """Test that a backwards interval is rejected."""
        with self.assertRaises(ValueError):
            TransitSampler(ClockModel.from_phase(0.1), make_rng(0), interval=(2.0, 1.0))

    def test_estimates_ignore_transits(self):
        """Test that different transit streams give different records but identical estimates."""
        config = ProtocolConfig(n_bits=4)
        estimates, durations = [], []
        for seed in (1, 2):
            clock, sampler = make_world(0.3, 1.0, make_rng(seed))
            transit = sampler()
            durations.append(transit.t_tr)
            estimates.append(run_sync(config, clock, make_rng(0), transit=transit))
        self.assertNotEqual(durations[0], durations[1])
        self.assertEqual(estimates[0], estimates[1])


class TestExactTimestamps(unittest.TestCase):
    """Test that sampled transit durations cancel exactly at any tick rate."""

    def test_elapsed_is_offset(self):
        """Test that every sampled record subtracts back to the clock offset without rounding."""
        for omega0 in (1.0, 1e3, 1e9, 5e14):
            clock, sampler = make_world(0.3, omega0, make_rng(7))
            for _ in range(100):
                record = sampler()
                with self.subTest(omega0=omega0):
                    self.assertEqual(Fraction(clock.offset), record.elapsed)

    def test_high_rate_handshake(self):
        """Test the handshake against the fixed-rate black box at fast tick rates."""
        rng = make_rng(12)
        for omega0 in (1.0, 1e3, 1e9, 5e14):
            clock, sampler = make_world(rng.uniform(0, 5), omega0, rng)
            photon = random_state(1, rng)
            transits = [sampler() for _ in range(5)]
            for k in range(65):
                expected = fixed_rate_query(clock, photon, 0, k)
                for transit in transits:
                    physical = handshake_simulate(clock, k, photon, transit)
                    with self.subTest(omega0=omega0, k=k):
                        self.assertLessEqual(max_deviation(expected, physical), TOLERANCE)

    def test_optical_rate_sync(self):
        """Test that a grid phase is recovered through the handshake at an optical tick rate."""
        omega0 = 5e14
        config = ProtocolConfig(n_bits=3)
        for trial in range(100):
            clock, sampler = make_world(0.625 / omega0, omega0, make_rng(3, trial))
            estimate = run_sync(config, clock, make_rng(4, trial), transit=sampler())
            with self.subTest(trial=trial):
                self.assertEqual(0.625, estimate.phase_hat)

    def test_large_offset_phase(self):
        """Test that the observable phase of a large offset is reduced without rounding the product."""
        clock = ClockModel(offset=3.0 + 2 ** -20, omega0=1e9)
        expected = (Fraction(1e9) * Fraction(3.0 + 2 ** -20)) % 1
        self.assertEqual(float(expected), clock.phase)


class TestComposition(unittest.TestCase):
    """Test that repeated rate-one queries compose into a single faster query."""

    def test_repeated_unit_queries(self):
        """Test that j queries with the register holding one equal one query with the register holding j."""
        rng = make_rng(13)
        register_size = 7
        register = list(range(1, register_size + 1))
        for phase in rng.uniform(size=10):
            clock = ClockModel.from_phase(phase)
            photon = random_state(1, rng)
            composed = photon.tensor(basis_state(register_size, 1))
            ledger = ResourceLedger()
            for j in range(1, 65):
                composed = tqh_oracle(clock, composed, register, 0, ledger)
                once = tqh_oracle(clock, photon.tensor(basis_state(register_size, j)), register, 0)
                with self.subTest(phase=phase, j=j):
                    np.testing.assert_allclose(once.amps[2 * j:2 * j + 2], composed.amps[2:4], rtol=0, atol=TOLERANCE)
            self.assertEqual(ResourceLedger(queries=64, max_rate_index=127), ledger)
