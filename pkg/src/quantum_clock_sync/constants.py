# -*- coding: utf-8 -*-

"""Constants for the quantum clock synchronization simulator."""

import math

MODULE_NAME = 'quantum_clock_sync'

#: Tolerance on the squared norm of a statevector after any operation
NORM_TOLERANCE = 1e-9
#: Tolerance on the maximum amplitude deviation for exact unitary identities
UNITARY_TOLERANCE = 1e-12
#: Tolerance used when checking that a transit record is consistent with a clock
TRANSIT_TOLERANCE = 1e-9

#: Largest register the dense simulator accepts
MAX_QUBITS = 20

#: The constant success probability of one-query phase estimation
FOUR_OVER_PI_SQUARED = 4 / math.pi ** 2

#: Default interval (in seconds) from which photon transit durations are drawn
DEFAULT_TRANSIT_INTERVAL = (0.0, 10.0)

#: Default base tick rate (in Hz)
DEFAULT_OMEGA0 = 1.0
#: Default number of trials for a scenario
DEFAULT_TRIALS = 100
#: Default experiment seed
DEFAULT_SEED = 0

#: Required success rate for a tradeoff point to count as having achieved the target accuracy
TRADEOFF_SUCCESS_THRESHOLD = 0.9
#: Largest repetition count tried per window in a tradeoff sweep
TRADEOFF_MAX_REPETITIONS = 4095

#: Number of points in the single-rate state check grid
LEMMA1_GRID_SIZE = 1000
#: Sample sizes used by the classical baseline scaling experiment
CLASSICAL_SAMPLE_SIZES = (100, 1_000, 10_000, 100_000)
#: Phase used by the classical baseline scaling experiment
CLASSICAL_SCALING_PHASE = 1 / 16
#: Largest rate multiplier exercised by the reduction scenario
REDUCTION_MAX_RATE = 64
