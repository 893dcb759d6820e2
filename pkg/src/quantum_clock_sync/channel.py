# -*- coding: utf-8 -*-

"""The two-clock world, the ticking qubit handshake, and query accounting.

Alice and Bob hold clocks that differ by an unknown offset :math:`T`. Everything the parties can
learn about :math:`T` arrives as a relative phase on a photon, which is modeled by the
black box

.. math::

    \\mathrm{TQH}(|k\\rangle|\\psi\\rangle) = |k\\rangle e^{2\\pi i k \\omega_0 T Z}|\\psi\\rangle

Only :math:`\\omega_0 T \\bmod 1` is observable, so the canonical truth of a clock is its
:attr:`ClockModel.phase`. Handshake timestamps are exact rationals, so the transit duration cancels
exactly and the phase stays correct at optical tick rates.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional, Tuple

import numpy as np

from .constants import DEFAULT_TRANSIT_INTERVAL, TRANSIT_TOLERANCE
from .qsim import QubitRange, StateVector, indexed_phase, z_phase

__all__ = [
    'ClockModel',
    'TransitRecord',
    'ResourceLedger',
    'TransitSampler',
    'tqh_oracle',
    'fixed_rate_query',
    'handshake_simulate',
    'handshake_oracle',
    'make_world',
]


@dataclass(frozen=True)
class ClockModel:
    """The hidden truth of a simulated world."""

    #: The time difference between Bob's and Alice's clocks, in seconds
    offset: float
    #: The known base tick rate, in Hz
    omega0: float

    def __post_init__(self):
        if not math.isfinite(self.omega0) or self.omega0 <= 0:
            raise ValueError(f'base tick rate must be positive and finite, got {self.omega0!r}')
        if not math.isfinite(self.offset):
            raise ValueError(f'clock offset must be finite, got {self.offset!r}')

    @classmethod
    def from_phase(cls, phase: float, omega0: float = 1.0) -> 'ClockModel':
        """Build the canonical clock whose offset lies in ``[0, 1 / omega0)``."""
        return cls(offset=phase / omega0, omega0=omega0)

    @property
    def exact_phase(self) -> Fraction:
        """The observable part of the offset, computed without rounding from the stored floats."""
        return (Fraction(self.omega0) * Fraction(self.offset)) % 1

    @property
    def phase(self) -> float:
        """The observable part of the offset, :math:`\\omega_0 T \\bmod 1`, in turns."""
        rv = float(self.exact_phase)
        # rounding can reach the far end of [0, 1)
        return 0.0 if rv == 1.0 else rv

    def rate_turns(self, k) -> np.ndarray:
        """Get :math:`k \\omega_0 T \\bmod 1` for one or more integer rate multipliers."""
        return np.mod(np.asarray(k, dtype=float) * self.phase, 1.0)


@dataclass(frozen=True)
class TransitRecord:
    """The classical timestamps of one handshake.

    Timestamps are stored as :class:`fractions.Fraction`; floats are converted without rounding.
    """

    #: Alice's clock reading when the photon leaves
    t_a: Real
    #: Bob's clock reading when the photon arrives
    t_b: Real
    #: The time the photon spent in transit
    t_tr: Real

    def __post_init__(self):
        for name in ('t_a', 't_b', 't_tr'):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f'transit timestamp {name} must be finite, got {value!r}')
            object.__setattr__(self, name, Fraction(value))
        if self.t_tr < 0:
            raise ValueError(f'transit duration must be nonnegative, got {float(self.t_tr)!r}')

    @property
    def elapsed(self) -> Fraction:
        """Bob's reading minus Alice's reading minus the transit, which equals the clock offset."""
        return (self.t_b - self.t_a) - self.t_tr

    def is_consistent_with(self, clock: ClockModel) -> bool:
        """Check that the record could have been produced in the world described by the clock."""
        scale = max(1.0, abs(float(self.t_a)), abs(float(self.t_b)))
        return abs(float(self.elapsed - Fraction(clock.offset))) <= TRANSIT_TOLERANCE * scale

    def turns(self, clock: ClockModel, k: int = 1) -> float:
        """Get :math:`k \\omega_0 (t_B - t_A - t_{tr}) \\bmod 1`, reduced before rounding to a float."""
        return float((k * Fraction(clock.omega0) * self.elapsed) % 1)


@dataclass
class ResourceLedger:
    """Counts the oracle queries and the largest tick-rate multiplier a protocol has used."""

    #: The number of oracle invocations, i.e., transmitted photons
    queries: int = 0
    #: The largest integer tick-rate multiplier available to any query so far
    max_rate_index: int = 0

    def record(self, rate_index: int, queries: int = 1) -> None:
        """Account for queries that could use tick rates up to ``rate_index``."""
        if queries < 0 or rate_index < 0:
            raise ValueError(f'cannot record {queries} queries at rate index {rate_index}')
        self.queries += queries
        self.max_rate_index = max(self.max_rate_index, rate_index)

    def merge(self, other: 'ResourceLedger') -> 'ResourceLedger':
        """Combine the private ledgers of two independent runs."""
        return ResourceLedger(
            queries=self.queries + other.queries,
            max_rate_index=max(self.max_rate_index, other.max_rate_index),
        )


def _check_transit(clock: ClockModel, transit: TransitRecord) -> None:
    if not transit.is_consistent_with(clock):
        raise ValueError(
            f'transit record {transit} is inconsistent with a clock offset of {clock.offset!r}'
            f' (t_b - t_a - t_tr = {float(transit.elapsed)!r})',
        )


def tqh_oracle(
    clock: ClockModel,
    state: StateVector,
    register: QubitRange,
    photon: int,
    ledger: Optional[ResourceLedger] = None,
) -> StateVector:
    """Apply the ticking qubit handshake black box once.

    :param clock: The hidden truth
    :param state: The joint state of the rate register and the photon
    :param register: The qubits holding the tick-rate multiplier ``k``, least significant first
    :param photon: The photon qubit
    :param ledger: Charged one query with rates up to ``2 ** len(register) - 1``
    """
    register = tuple(register)
    size = 1 << len(register)
    rv = indexed_phase(state, register, photon, 2 * np.pi * clock.rate_turns(np.arange(size)))
    if ledger is not None:
        ledger.record(size - 1)
    return rv


def fixed_rate_query(
    clock: ClockModel,
    state: StateVector,
    photon: int,
    k: int,
    ledger: Optional[ResourceLedger] = None,
) -> StateVector:
    """Apply the ticking qubit handshake with the tick rate fixed to the classical value ``k``."""
    if k < 0:
        raise ValueError(f'tick rate multiplier must be nonnegative, got {k}')
    rv = z_phase(state, photon, 2 * np.pi * float(clock.rate_turns(k)))
    if ledger is not None:
        ledger.record(k)
    return rv


def handshake_simulate(
    clock: ClockModel,
    k: int,
    photon_state: StateVector,
    transit: TransitRecord,
) -> StateVector:
    """Run one ticking qubit handshake on a single photon.

    Alice sends the photon ticking at rate :math:`-2\\pi k \\omega_0` together with her send time
    :math:`t_A`, so it arrives as :math:`e^{-2\\pi i k \\omega_0 t_{tr} Z}|\\psi\\rangle`. Bob then
    applies :math:`e^{2\\pi i k \\omega_0 (t_B - t_A) Z}`. The transit phase and Bob's correction
    are combined before reduction modulo one turn, which leaves
    :math:`e^{2\\pi i k \\omega_0 (t_B - t_A - t_{tr}) Z}|\\psi\\rangle`.

    :raises ValueError: if the photon state is not a single qubit or the record is inconsistent
        with the clock
    """
    if photon_state.num_qubits != 1:
        raise ValueError(f'a handshake carries one photon, got {photon_state.num_qubits} qubits')
    if k < 0:
        raise ValueError(f'tick rate multiplier must be nonnegative, got {k}')
    _check_transit(clock, transit)
    return z_phase(photon_state, 0, 2 * np.pi * transit.turns(clock, k))


def handshake_oracle(
    clock: ClockModel,
    state: StateVector,
    register: QubitRange,
    photon: int,
    transit: TransitRecord,
    ledger: Optional[ResourceLedger] = None,
) -> StateVector:
    """Realize one :func:`tqh_oracle` call physically, with a photon ticking in a superposition of rates.

    Every rate branch travels on the same photon and shares one transit record.
    """
    _check_transit(clock, transit)
    register = tuple(register)
    size = 1 << len(register)
    turns = np.array([transit.turns(clock, k) for k in range(size)])
    rv = indexed_phase(state, register, photon, 2 * np.pi * turns)
    if ledger is not None:
        ledger.record(size - 1)
    return rv


@dataclass
class TransitSampler:
    """Draws handshake records that are consistent with a clock."""

    clock: ClockModel
    rng: np.random.Generator = field(repr=False)
    #: The interval from which transit durations are drawn uniformly
    interval: Tuple[float, float] = DEFAULT_TRANSIT_INTERVAL
    #: Alice's clock reading at every send
    send_time: float = 0.0

    def __post_init__(self):
        low, high = self.interval
        if not 0 <= low <= high:
            raise ValueError(f'invalid transit interval: {self.interval}')

    def __call__(self) -> TransitRecord:
        """Draw the record of the next handshake, whose timestamps subtract back to the offset exactly."""
        low, high = self.interval
        t_a = Fraction(self.send_time)
        t_tr = Fraction(float(self.rng.uniform(low, high)))
        rv = TransitRecord(t_a=t_a, t_b=t_a + t_tr + Fraction(self.clock.offset), t_tr=t_tr)
        assert rv.elapsed == Fraction(self.clock.offset)
        return rv


def make_world(
    offset: float,
    omega0: float,
    rng: np.random.Generator,
    interval: Tuple[float, float] = DEFAULT_TRANSIT_INTERVAL,
) -> Tuple[ClockModel, TransitSampler]:
    """Build a clock and a sampler of consistent handshake records.

    :raises ValueError: if the base tick rate is not positive
    """
    clock = ClockModel(offset=offset, omega0=omega0)
    return clock, TransitSampler(clock=clock, rng=rng, interval=interval)
