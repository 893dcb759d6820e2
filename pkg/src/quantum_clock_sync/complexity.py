# -*- coding: utf-8 -*-

"""Query complexity: single-rate protocols, rate reduction, lower bounds, and range/query tradeoffs.

A protocol limited to one tick rate sees :math:`T` only through the amplitudes
:math:`\\cos(2\\pi\\omega_0 T)` and :math:`\\sin(2\\pi\\omega_0 T)`, which makes synchronization an
amplitude estimation problem. A rate-``k`` query can always be replaced by ``k`` consecutive
rate-1 queries, so a protocol using a frequency range ``F`` and ``Q`` queries can be simulated
with ``F * Q`` single-rate queries.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .channel import ClockModel, ResourceLedger, fixed_rate_query, tqh_oracle
from .constants import TRADEOFF_MAX_REPETITIONS, TRADEOFF_SUCCESS_THRESHOLD
from .protocol import prepare_state
from .qsim import QubitRange, StateVector, basis_state, hadamard, indexed_phase, inverse_qft, z_phase
from .utils import circular_distance

__all__ = [
    'LowerBoundParams',
    'TradeoffPoint',
    'single_rate_state',
    'quadrature_state',
    'single_rate_deviation',
    'classical_estimate',
    'classical_scaling',
    'simulate_rate_k_with_unit_rate',
    'simulate_register_rate_with_unit_rate',
    'nayak_wu_bound',
    'amplitude_instance',
    'window_shifts',
    'repeated_query_distribution',
    'tradeoff_sweep',
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LowerBoundParams:
    """An instance of the amplitude estimation lower bound."""

    #: The size of the input set, :math:`N`
    input_size: int
    #: The number of solutions, :math:`t`
    solutions: int
    #: How closely the amplitude must be approximated, :math:`\Delta`
    closeness: float

    def __post_init__(self):
        if self.input_size < 1:
            raise ValueError(f'input size must be positive, got {self.input_size}')
        if not 0 <= self.solutions <= self.input_size:
            raise ValueError(f'solution count {self.solutions} must lie in [0, {self.input_size}]')
        if not math.isfinite(self.closeness) or self.closeness <= 0:
            raise ValueError(f'closeness must be positive and finite, got {self.closeness!r}')

    @property
    def amplitude(self) -> float:
        """The estimated amplitude, :math:`a = t / N`."""
        return self.solutions / self.input_size


@dataclass(frozen=True)
class TradeoffPoint:
    """The cheapest repetition count found for one frequency range."""

    #: The frequency range granted to the protocol
    frequency_range: int
    #: The total number of queries
    queries: int
    #: The most bits recovered at the success threshold
    n_bits_achieved: int
    #: The fraction of trials recovering the target number of bits
    success_rate: float
    #: The rate register size of the strategy
    register_size: int
    #: How often each window was repeated
    repetitions: int

    @property
    def fq_product(self) -> int:
        """The product of the frequency range and the query count."""
        return self.frequency_range * self.queries


def single_rate_state(clock: ClockModel, ledger: Optional[ResourceLedger] = None) -> StateVector:
    """Send :math:`(|0\\rangle + |1\\rangle)/\\sqrt{2}` once at the base rate and apply a Hadamard.

    The result is :math:`\\cos(2\\pi\\omega_0 T)|0\\rangle + i\\sin(2\\pi\\omega_0 T)|1\\rangle`.
    """
    photon = fixed_rate_query(clock, hadamard(basis_state(1, 0), 0), 0, 1, ledger)
    return hadamard(photon, 0)


def quadrature_state(clock: ClockModel, ledger: Optional[ResourceLedger] = None) -> StateVector:
    """Like :func:`single_rate_state`, with an extra :math:`\\pi/4` Z-phase before the Hadamard.

    Outcome ``0`` then has probability :math:`(1 - \\sin(4\\pi\\omega_0 T)) / 2`.
    """
    photon = fixed_rate_query(clock, hadamard(basis_state(1, 0), 0), 0, 1, ledger)
    return hadamard(z_phase(photon, 0, np.pi / 4), 0)


def single_rate_deviation(grid_size: int) -> float:
    """Get the largest deviation of the single-rate outcome distribution from :math:`(\\cos^2, \\sin^2)`."""
    rv = 0.0
    for phi in np.arange(grid_size) / grid_size:
        probabilities = single_rate_state(ClockModel.from_phase(phi)).probabilities()
        expected = np.array([np.cos(2 * np.pi * phi) ** 2, np.sin(2 * np.pi * phi) ** 2])
        rv = max(rv, float(np.max(np.abs(probabilities - expected))))
    return rv


def _zero_probability(state: StateVector) -> float:
    return min(max(float(state.probabilities()[0]), 0.0), 1.0)


def classical_estimate(
    clock: ClockModel,
    samples: int,
    rng: np.random.Generator,
) -> Tuple[float, ResourceLedger]:
    """Estimate the clock offset by measuring single-rate photons.

    ``samples`` photons are measured after :func:`single_rate_state`, estimating
    :math:`\\cos(4\\pi\\omega_0 T)`, and ``samples`` more after :func:`quadrature_state`, estimating
    :math:`\\sin(4\\pi\\omega_0 T)` and with it the sign the arccosine cannot see. The estimate is
    only valid for :math:`\\omega_0 T \\bmod 1 \\in [0, 1/2)`.

    Each state is prepared once and its exact outcome probability is computed; the ``samples``
    independent measurements are then drawn together as one binomial count per state, which has
    the same distribution as preparing and measuring ``samples`` fresh photons.

    :return: The offset estimate in seconds and the ledger of ``2 * samples`` base-rate queries
    :raises ValueError: if ``samples`` is not positive
    """
    if samples < 1:
        raise ValueError(f'sample count must be positive, got {samples}')
    in_phase = _zero_probability(single_rate_state(clock))
    quadrature = _zero_probability(quadrature_state(clock))
    ledger = ResourceLedger()
    ledger.record(1, queries=2 * samples)

    cosine = 2 * rng.binomial(samples, in_phase) / samples - 1
    sine = 1 - 2 * rng.binomial(samples, quadrature) / samples
    angle = math.acos(min(max(cosine, -1.0), 1.0))
    if sine < 0:
        angle = 2 * math.pi - angle
    phase_hat = (angle / (4 * math.pi)) % 0.5
    return phase_hat / clock.omega0, ledger


def classical_scaling(
    clock: ClockModel,
    sample_sizes: Iterable[int],
    repetitions: int,
    rng: np.random.Generator,
) -> Tuple[pd.DataFrame, float]:
    """Measure how the error of :func:`classical_estimate` shrinks with the sample size.

    :return: A dataframe with one row per sample size (``samples``, ``median_abs_error``,
        ``within_0.01``, ``Q``, ``F``) and the fitted slope of log median error against log samples
    """
    rows = []
    for samples in sample_sizes:
        errors = []
        ledger = ResourceLedger()
        for _ in range(repetitions):
            offset_hat, run_ledger = classical_estimate(clock, samples, rng)
            ledger = ledger.merge(run_ledger)
            errors.append(circular_distance(offset_hat * clock.omega0, clock.phase))
        errors = np.array(errors)
        rows.append((
            samples, float(np.median(errors)), float(np.mean(errors < 0.01)),
            ledger.queries, ledger.max_rate_index,
        ))
        logger.info('S=%d median error %.3g', samples, rows[-1][1])
    df = pd.DataFrame(rows, columns=['samples', 'median_abs_error', 'within_0.01', 'Q', 'F'])
    slope = float(np.polyfit(np.log(df['samples']), np.log(df['median_abs_error']), 1)[0])
    return df, slope


def simulate_rate_k_with_unit_rate(
    clock: ClockModel,
    k: int,
    state: StateVector,
    photon: int,
    ledger: Optional[ResourceLedger] = None,
) -> StateVector:
    """Replace one rate-``k`` query with ``k`` consecutive base-rate queries on the same photon.

    :raises ValueError: if ``k`` is less than one
    """
    if k < 1:
        raise ValueError(f'the reduction needs a rate multiplier of at least 1, got {k}')
    for _ in range(k):
        state = fixed_rate_query(clock, state, photon, 1, ledger)
    return state


def simulate_register_rate_with_unit_rate(
    clock: ClockModel,
    state: StateVector,
    register: QubitRange,
    photon: int,
    ledger: Optional[ResourceLedger] = None,
) -> StateVector:
    """Replace one :func:`tqh_oracle` call with base-rate queries controlled on the rate register.

    The ``j``-th base-rate query acts only on the branches whose register holds at least ``j``, so
    the branch holding ``k`` receives exactly ``k`` of them. The query count is the maximum over
    the branches, :math:`2^r - 1`, and no query uses a rate above one.

    :param clock: The hidden truth
    :param state: The joint state of the rate register and the photon
    :param register: The qubits holding the tick-rate multiplier, least significant first
    :param photon: The photon qubit
    :param ledger: Charged :math:`2^r - 1` queries at rate one
    """
    size = 1 << len(register)
    values = np.arange(size)
    unit_angle = 2 * np.pi * float(clock.rate_turns(1))
    for j in range(1, size):
        state = indexed_phase(state, register, photon, np.where(values >= j, unit_angle, 0.0))
        if ledger is not None:
            ledger.record(1)
    return state


def nayak_wu_bound(params: LowerBoundParams) -> float:
    """Evaluate :math:`\\sqrt{N/\\Delta} + \\sqrt{t(N - t)}/\\Delta`, the query lower bound without its constant."""
    size, solutions, closeness = params.input_size, params.solutions, params.closeness
    return math.sqrt(size / closeness) + math.sqrt(solutions * (size - solutions)) / closeness


def amplitude_instance(n_bits: int, closeness: float) -> LowerBoundParams:
    """Get the instance with :math:`N = 2^n` and amplitude one half."""
    size = 1 << n_bits
    return LowerBoundParams(input_size=size, solutions=size // 2, closeness=closeness)


def window_shifts(n_target: int, register_size: int) -> List[int]:
    """Get the exponents of the rate multipliers of each window, coarsest first.

    Windows of an ``r``-qubit register advance by ``r - 1`` bits so that neighbours overlap by
    one bit. One-qubit windows advance by one bit and rely on quadrature readings instead.
    """
    step = max(register_size - 1, 1)
    top = max(n_target - register_size, 0)
    shifts = [0]
    while shifts[-1] < top:
        shifts.append(min(shifts[-1] + step, top))
    return shifts


def repeated_query_distribution(
    clock: ClockModel,
    register_size: int,
    multiplier: int,
    quadrature: bool = False,
    ledger: Optional[ResourceLedger] = None,
) -> np.ndarray:
    """Get the corrected reading distribution of a windowed phase estimation pass.

    The rate-``k * multiplier`` query is realized by ``multiplier`` consecutive rate-``k`` queries,
    so the pass never uses a rate above :math:`2^r - 1`.

    :param clock: The hidden truth
    :param register_size: The number of register qubits, ``r``
    :param multiplier: The rate multiplier of the window
    :param quadrature: Shift the phase of a one-qubit register by a quarter turn before reading it
    :param ledger: Charged ``multiplier`` queries
    """
    if quadrature and register_size != 1:
        raise ValueError('quadrature readings are only defined for one-qubit registers')
    register = range(register_size)
    state = prepare_state(register_size)
    for _ in range(multiplier):
        state = tqh_oracle(clock, state, register, register_size, ledger)
    if quadrature:
        state = z_phase(state, 0, np.pi / 4)
    joint = inverse_qft(state, register).probabilities().reshape(2, 1 << register_size).T
    if quadrature:
        # the conjugated branch flips the sign of the sine
        return np.array([joint[0, 0] + joint[1, 1], joint[1, 0] + joint[0, 1]])
    size = 1 << register_size
    return joint[:, 0] + joint[(size - np.arange(size)) % size, 1]


def _combine(readings: Sequence[float], shifts: Sequence[int]) -> float:
    """Combine window readings, each an estimate of the fractional part of :math:`2^s \\varphi`, finest first."""
    estimate = readings[-1]
    for index in reversed(range(len(shifts) - 1)):
        gap = shifts[index + 1] - shifts[index]
        candidates = (np.arange(1 << gap) + estimate) / (1 << gap)
        estimate = float(candidates[np.argmin(circular_distance(candidates, readings[index]))])
    return estimate


def _read_window(distributions, register_size: int, repetitions: int, rng: np.random.Generator) -> float:
    if register_size == 1:
        in_phase, quadrature = (min(max(float(window[0]), 0.0), 1.0) for window in distributions)
        cosine = 2 * rng.binomial(repetitions, in_phase) / repetitions - 1
        sine = 2 * rng.binomial(repetitions, quadrature) / repetitions - 1
        return (math.atan2(sine, cosine) / (2 * math.pi)) % 1.0
    probabilities = distributions[0]
    counts = rng.multinomial(repetitions, probabilities / probabilities.sum())
    return int(np.argmax(counts)) / (1 << register_size)


def _check_range(frequency_range: int, n_target: int) -> int:
    exponent = frequency_range.bit_length() - 1
    if frequency_range < 1 or frequency_range != 1 << exponent:
        raise ValueError(f'frequency range must be a power of two, got {frequency_range}')
    if exponent > n_target:
        raise ValueError(f'frequency range {frequency_range} exceeds 2^{n_target}')
    return exponent


def _repetition_schedule(max_repetitions: int) -> List[int]:
    rv = [1]
    while 2 * rv[-1] + 1 <= max_repetitions:
        rv.append(2 * rv[-1] + 1)
    return rv


def _evaluate_range(
    n_target: int,
    frequency_range: int,
    phases: np.ndarray,
    rng: np.random.Generator,
    threshold: float,
    max_repetitions: int,
) -> TradeoffPoint:
    register_size = max(_check_range(frequency_range, n_target), 1)
    shifts = window_shifts(n_target, register_size)
    variants = (False, True) if register_size == 1 else (False,)

    pass_ledger = ResourceLedger()
    trial_distributions = []
    for phi in tqdm(phases, desc=f'F={frequency_range}', leave=False, disable=None):
        clock = ClockModel.from_phase(float(phi))
        trial_distributions.append([
            [
                repeated_query_distribution(clock, register_size, 1 << shift, quadrature, pass_ledger)
                for quadrature in variants
            ]
            for shift in shifts
        ])
    queries_per_pass = pass_ledger.queries // len(phases)

    for repetitions in _repetition_schedule(max_repetitions):
        estimates = np.array([
            _combine(
                [_read_window(window, register_size, repetitions, rng) for window in distributions],
                shifts,
            )
            for distributions in trial_distributions
        ])
        errors = circular_distance(estimates, phases)
        success_rate = float(np.mean(errors < 2.0 ** -n_target))
        logger.debug('F=%d R=%d success %.3f', frequency_range, repetitions, success_rate)
        if success_rate >= threshold:
            break

    n_bits_achieved = max(
        bits
        for bits in range(n_target + 1)
        if np.mean(errors < 2.0 ** -bits) >= threshold
    )
    return TradeoffPoint(
        frequency_range=frequency_range,
        queries=repetitions * queries_per_pass,
        n_bits_achieved=n_bits_achieved,
        success_rate=success_rate,
        register_size=register_size,
        repetitions=repetitions,
    )


def tradeoff_sweep(
    n_target: int,
    frequency_ranges: Iterable[int],
    trials: int,
    rng: np.random.Generator,
    threshold: float = TRADEOFF_SUCCESS_THRESHOLD,
    max_repetitions: int = TRADEOFF_MAX_REPETITIONS,
) -> List[TradeoffPoint]:
    """Find how many queries each frequency range needs to recover ``n_target`` bits.

    Each trial draws an ``n_target``-bit clock phase. For a range :math:`F = 2^m`, an
    :math:`r = \\max(m, 1)`-qubit register reads overlapping bit windows of the phase, window
    :math:`j` using rate multiplier :math:`2^{s_j}` built from consecutive queries. Every window is
    repeated ``R`` times and read by majority vote (one-qubit windows combine in-phase and
    quadrature frequencies instead), and the windows are stitched together from the finest down.
    ``R`` runs through 1, 3, 7, ... until the success rate over the trials reaches the threshold.

    A protocol granted range ``F`` may use any narrower range, so each returned point is the
    cheapest successful strategy among ranges up to ``F``. The query count is therefore
    nonincreasing in ``F``.

    :param n_target: The number of bits to recover
    :param frequency_ranges: Powers of two up to :math:`2^{n}`
    :param trials: The number of independent clock phases per range
    :param rng: The stream for clock phases and measurement outcomes
    :param threshold: The success rate a strategy must reach
    :param max_repetitions: The largest per-window repetition count tried
    :return: One point per frequency range, in increasing order of range
    :raises ValueError: if a range is not a power of two or exceeds :math:`2^n`
    """
    if n_target < 1 or trials < 1:
        raise ValueError(f'need a positive target and trial count, got {n_target} and {trials}')
    frequency_ranges = sorted({int(frequency_range) for frequency_range in frequency_ranges})
    for frequency_range in frequency_ranges:
        _check_range(frequency_range, n_target)
    phases = rng.integers(0, 1 << n_target, size=trials) / (1 << n_target)

    rv = []
    best: Optional[TradeoffPoint] = None
    for frequency_range in frequency_ranges:
        point = _evaluate_range(n_target, frequency_range, phases, rng, threshold, max_repetitions)
        logger.info(
            'F=%d needs Q=%d (R=%d, success %.3f)',
            frequency_range, point.queries, point.repetitions, point.success_rate,
        )
        if point.n_bits_achieved == n_target and (best is None or point.queries <= best.queries):
            best = point
        rv.append(point if best is None else replace(best, frequency_range=frequency_range))
    return rv
