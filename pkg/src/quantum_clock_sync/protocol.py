# -*- coding: utf-8 -*-

"""One-photon clock synchronization by phase estimation.

Alice prepares an :math:`n'`-qubit rate register in the uniform superposition (a Fourier
transform of :math:`|0\\rangle`) and a photon in :math:`(|0\\rangle + |1\\rangle)/\\sqrt{2}`, sends
the photon once through the handshake with the tick rate held in the register, lets Bob measure
the photon, and reads :math:`\\omega_0 T` off her register with an inverse Fourier transform.

A photon outcome of ``1`` leaves the register with conjugated phases, so the register reading is
negated modulo :math:`2^{n'}` before it is rounded to the requested number of bits.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .channel import ClockModel, ResourceLedger, TransitRecord, handshake_oracle, tqh_oracle
from .qsim import StateVector, basis_state, hadamard, inverse_qft, measure, qft
from .utils import circular_distance

__all__ = [
    'ProtocolConfig',
    'SyncEstimate',
    'boosted_register_size',
    'correct_outcome',
    'round_to_bits',
    'prepare_state',
    'final_state',
    'run_sync',
    'sample_estimates',
    'outcome_distribution',
    'estimate_distribution',
    'closed_form_distribution',
    'success_probability_exact',
    'worst_case_success',
]

logger = logging.getLogger(__name__)


def boosted_register_size(n_bits: int, delta: float) -> int:
    """Get the register size that achieves ``n_bits`` of accuracy with failure probability at most ``delta``.

    :return: :math:`n + \\lceil \\log_2(2 + 1/(2\\delta)) \\rceil`
    :raises ValueError: if delta is not strictly between 0 and 1/2
    """
    if not 0 < delta < 0.5:
        raise ValueError(f'failure probability must be strictly between 0 and 1/2, got {delta!r}')
    return n_bits + math.ceil(math.log2(2 + 1 / (2 * delta)))


@dataclass(frozen=True)
class ProtocolConfig:
    """The accuracy target of a synchronization run."""

    #: The number of bits of :math:`\omega_0 T` to recover
    n_bits: int
    #: The tolerated failure probability. Without it, the register has exactly ``n_bits`` qubits.
    delta: Optional[float] = None

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError(f'the number of bits must be positive, got {self.n_bits}')
        if self.delta is not None:
            boosted_register_size(self.n_bits, self.delta)

    @property
    def effective_register(self) -> int:
        """The number of register qubits, :math:`n'`."""
        if self.delta is None:
            return self.n_bits
        return boosted_register_size(self.n_bits, self.delta)


@dataclass(frozen=True)
class SyncEstimate:
    """The outcome of one synchronization run."""

    #: The register reading after the inverse Fourier transform, in :math:`\mathbb{Z}_{2^{n'}}`
    raw_m: int
    #: Bob's photon measurement
    photon_bit: int
    #: The estimate of :math:`\omega_0 T \bmod 1`, an ``n_bits`` binary fraction
    phase_hat: float
    #: The estimated clock offset in seconds
    offset_hat: float


def correct_outcome(raw_m, photon_bit, n_prime: int):
    """Undo the conjugation of the photon-``1`` branch by negating the reading modulo :math:`2^{n'}`."""
    size = 1 << n_prime
    raw_m = np.asarray(raw_m, dtype=np.int64)
    rv = np.where(np.asarray(photon_bit) == 1, (size - raw_m) % size, raw_m)
    return int(rv) if rv.ndim == 0 else rv


def round_to_bits(m, n_prime: int, n_bits: int):
    """Round :math:`m / 2^{n'}` to the nearest ``n_bits`` binary fraction, returned as its numerator.

    Rounding wraps around the circle; an exact midpoint goes to the lower neighbour.
    """
    if not 1 <= n_bits <= n_prime:
        raise ValueError(f'cannot round {n_prime} bits to {n_bits} bits')
    shift = n_prime - n_bits
    m = np.asarray(m, dtype=np.int64)
    if shift:
        remainder = m & ((1 << shift) - 1)
        m = (m >> shift) + (remainder > (1 << (shift - 1)))
    rv = m % (1 << n_bits)
    return int(rv) if rv.ndim == 0 else rv


def prepare_state(n_prime: int) -> StateVector:
    """Prepare the Fourier-transformed register on qubits ``0..n'-1`` and the photon on qubit ``n'``."""
    state = qft(basis_state(n_prime + 1, 0), range(n_prime))
    return hadamard(state, n_prime)


def final_state(n_prime: int, phi: float) -> StateVector:
    """Get the joint state just before Bob and Alice measure, for a clock with phase ``phi``."""
    state = tqh_oracle(ClockModel.from_phase(phi), prepare_state(n_prime), range(n_prime), n_prime)
    return inverse_qft(state, range(n_prime))


def run_sync(
    config: ProtocolConfig,
    clock: ClockModel,
    rng: np.random.Generator,
    ledger: Optional[ResourceLedger] = None,
    transit: Optional[TransitRecord] = None,
) -> SyncEstimate:
    """Synchronize once, sending a single photon.

    :param config: The accuracy target
    :param clock: The hidden truth
    :param rng: The stream both measurements are drawn from
    :param ledger: Charged exactly one query with rates up to :math:`2^{n'} - 1`
    :param transit: If given, the query is realized by a physical handshake with this record
        instead of the black box
    """
    n_prime = config.effective_register
    register = range(n_prime)
    state = prepare_state(n_prime)
    if transit is None:
        state = tqh_oracle(clock, state, register, n_prime, ledger)
    else:
        state = handshake_oracle(clock, state, register, n_prime, transit, ledger)

    photon_bit, state = measure(state, [n_prime], rng)
    state = inverse_qft(state, register)
    raw_m = measure(state, register, rng).value

    numerator = round_to_bits(correct_outcome(raw_m, photon_bit, n_prime), n_prime, config.n_bits)
    phase_hat = numerator / (1 << config.n_bits)
    logger.debug('photon=%d raw_m=%d phase_hat=%s', photon_bit, raw_m, phase_hat)
    return SyncEstimate(
        raw_m=raw_m,
        photon_bit=photon_bit,
        phase_hat=phase_hat,
        offset_hat=phase_hat / clock.omega0,
    )


def outcome_distribution(n_prime: int, phi: float) -> np.ndarray:
    """Get the exact joint distribution of the register reading and the photon bit.

    :return: An array of shape ``(2 ** n_prime, 2)`` indexed by ``[raw_m, photon_bit]``
    """
    _check_phase(phi)
    probabilities = final_state(n_prime, phi).probabilities()
    return probabilities.reshape(2, 1 << n_prime).T


def estimate_distribution(n_prime: int, phi: float) -> np.ndarray:
    """Get the exact distribution of the corrected register reading, pooled over both photon outcomes."""
    joint = outcome_distribution(n_prime, phi)
    size = 1 << n_prime
    return joint[:, 0] + joint[(size - np.arange(size)) % size, 1]


def closed_form_distribution(n_prime: int, phi: float) -> np.ndarray:
    """Get the corrected reading distribution from the Fejér kernel :math:`|\\sin(N\\pi d) / (N \\sin \\pi d)|^2`."""
    _check_phase(phi)
    size = 1 << n_prime
    distance = phi - np.arange(size) / size
    numerator = np.sin(size * np.pi * distance)
    denominator = size * np.sin(np.pi * distance)
    exact = np.abs(denominator) < 1e-15
    ratio = np.divide(numerator, denominator, out=np.ones(size), where=~exact)
    return ratio ** 2


def success_probability_exact(n_prime: int, phi: float, n_bits: int) -> float:
    """Get the probability that a run lands within :math:`2^{-n}` of ``phi``, without sampling.

    The final pre-measurement state is built once and the Born weights of every accepting
    (reading, photon bit) pair are summed.

    :raises ValueError: if ``phi`` is outside ``[0, 1)`` or ``n_bits`` exceeds ``n_prime``
    """
    _check_phase(phi)
    if not 1 <= n_bits <= n_prime:
        raise ValueError(f'cannot recover {n_bits} bits from a {n_prime}-qubit register')
    joint = outcome_distribution(n_prime, phi)
    size = 1 << n_prime
    readings = np.arange(size)
    rv = 0.0
    for photon_bit in (0, 1):
        numerators = round_to_bits(correct_outcome(readings, photon_bit, n_prime), n_prime, n_bits)
        accept = circular_distance(numerators / (1 << n_bits), phi) < 2.0 ** -n_bits
        rv += float(joint[accept, photon_bit].sum())
    return rv


def worst_case_success(n_prime: int, n_bits: int, grid_size: Optional[int] = None) -> Tuple[float, float]:
    """Find the grid phase with the smallest exact success probability.

    :param n_prime: The register size
    :param n_bits: The accuracy target
    :param grid_size: The number of equally spaced phases in ``[0, 1)``, by default :math:`2^{n'+4}`
    :return: The worst phase and its success probability
    """
    if grid_size is None:
        grid_size = 1 << (n_prime + 4)
    phases = np.arange(grid_size) / grid_size
    probabilities = [success_probability_exact(n_prime, phi, n_bits) for phi in phases]
    index = int(np.argmin(probabilities))
    return float(phases[index]), probabilities[index]


def sample_estimates(
    config: ProtocolConfig,
    clock: ClockModel,
    rng: np.random.Generator,
    size: int,
    ledger: Optional[ResourceLedger] = None,
) -> pd.DataFrame:
    """Draw many independent protocol outcomes from one exactly computed final state.

    The draws have the same distribution as repeated :func:`run_sync` calls, and each draw is
    charged one query.

    :return: A dataframe with columns ``photon_bit``, ``raw_m``, ``phase_hat``, and ``offset_hat``
    """
    if size < 1:
        raise ValueError(f'sample size must be positive, got {size}')
    n_prime = config.effective_register
    register_size = 1 << n_prime
    joint = outcome_distribution(n_prime, clock.phase)
    flat = joint.T.reshape(-1)
    draws = rng.choice(flat.shape[0], size=size, p=flat / flat.sum())
    photon_bits, raw_m = np.divmod(draws, register_size)
    numerators = round_to_bits(correct_outcome(raw_m, photon_bits, n_prime), n_prime, config.n_bits)
    phase_hat = numerators / (1 << config.n_bits)
    if ledger is not None:
        ledger.record(register_size - 1, queries=size)
    return pd.DataFrame({
        'photon_bit': photon_bits,
        'raw_m': raw_m,
        'phase_hat': phase_hat,
        'offset_hat': phase_hat / clock.omega0,
    })


def _check_phase(phi: float) -> None:
    if not 0 <= phi < 1:
        raise ValueError(f'phase must lie in [0, 1), got {phi!r}')
