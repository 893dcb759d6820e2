# -*- coding: utf-8 -*-

"""A minimal dense-statevector simulator.

Qubit ``0`` is the least significant bit of a basis index. A register given as the qubit
sequence ``[q_0, q_1, ..., q_{r-1}]`` therefore holds the integer ``sum(bit(q_j) << j)``.

The Fourier transform uses the convention

.. math::

    \\mathrm{QFT}|k\\rangle = \\frac{1}{\\sqrt{2^n}} \\sum_j e^{+2 \\pi i j k / 2^n} |j\\rangle

so that the inverse transform maps :math:`\\frac{1}{\\sqrt{2^n}}\\sum_k e^{2\\pi i k \\varphi}|k\\rangle`
to :math:`|2^n \\varphi\\rangle` whenever :math:`2^n \\varphi` is an integer.
"""

from typing import Callable, NamedTuple, Sequence, Tuple, Union

import numpy as np

from .constants import MAX_QUBITS, NORM_TOLERANCE

__all__ = [
    'QubitRange',
    'StateVector',
    'MeasurementOutcome',
    'basis_state',
    'random_state',
    'hadamard',
    'z_phase',
    'indexed_phase',
    'qft',
    'inverse_qft',
    'measure',
    'max_deviation',
]

QubitRange = Sequence[int]
PhaseMap = Union[Callable[[int], float], Sequence[float], np.ndarray]

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


class StateVector:
    """A normalized vector of ``2 ** num_qubits`` complex amplitudes."""

    __slots__ = ('amps',)

    def __init__(self, amps):
        """Wrap an amplitude array.

        :param amps: A one-dimensional array whose length is a power of two, at least two
        :raises ValueError: if the array has the wrong shape, is not finite, or is not normalized
        """
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.ndim != 1:
            raise ValueError(f'amplitudes must be one-dimensional, got shape {amps.shape}')
        size = amps.shape[0]
        num_qubits = size.bit_length() - 1
        if size < 2 or size != 1 << num_qubits:
            raise ValueError(f'amplitude count must be a power of two of at least 2, got {size}')
        if num_qubits > MAX_QUBITS:
            raise ValueError(f'at most {MAX_QUBITS} qubits are supported, got {num_qubits}')
        if not np.all(np.isfinite(amps)):
            raise ValueError('amplitudes must be finite')
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f'state is not normalized: squared norm is {norm!r}')
        self.amps = amps

    @property
    def num_qubits(self) -> int:
        """The number of qubits."""
        return self.amps.shape[0].bit_length() - 1

    def norm(self) -> float:
        """Get the squared norm, which is one up to rounding."""
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        """Get the Born probabilities of all computational basis states."""
        return np.abs(self.amps) ** 2

    def tensor(self, other: 'StateVector') -> 'StateVector':
        """Build the product state with ``other`` placed on the next, more significant qubits."""
        return StateVector(np.kron(other.amps, self.amps))

    def __repr__(self) -> str:  # noqa: D105
        return f'StateVector(num_qubits={self.num_qubits})'


class MeasurementOutcome(NamedTuple):
    """The result of a projective measurement."""

    #: The measured sub-register value, with the first measured qubit as the least significant bit
    value: int
    #: The post-measurement state over the unmeasured qubits, or over all qubits when everything was measured
    collapsed: StateVector


def basis_state(num_qubits: int, index: int) -> StateVector:
    """Prepare the computational basis state ``|index>``.

    :raises ValueError: if there are no qubits or the index is out of range
    """
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f'number of qubits must be between 1 and {MAX_QUBITS}, got {num_qubits}')
    if not 0 <= index < 1 << num_qubits:
        raise ValueError(f'basis index {index} out of range for {num_qubits} qubits')
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def random_state(num_qubits: int, rng: np.random.Generator) -> StateVector:
    """Draw a Haar-random state from complex Gaussian amplitudes."""
    size = 1 << num_qubits
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    return StateVector(amps / np.linalg.norm(amps))


def max_deviation(left: StateVector, right: StateVector) -> float:
    """Get the largest absolute difference between corresponding amplitudes."""
    if left.num_qubits != right.num_qubits:
        raise ValueError(f'cannot compare {left.num_qubits} qubits with {right.num_qubits} qubits')
    return float(np.max(np.abs(left.amps - right.amps)))


def _check_qubits(state: StateVector, qubits: QubitRange, name: str) -> Tuple[int, ...]:
    qubits = tuple(int(qubit) for qubit in qubits)
    for qubit in qubits:
        if not 0 <= qubit < state.num_qubits:
            raise ValueError(f'{name} qubit {qubit} out of range for {state.num_qubits} qubits')
    if len(set(qubits)) != len(qubits):
        raise ValueError(f'{name} qubits must be distinct: {qubits}')
    return qubits


def _check_target(state: StateVector, target: int, name: str = 'target') -> int:
    return _check_qubits(state, (target,), name)[0]


def _axis(state: StateVector, qubit: int) -> int:
    return state.num_qubits - 1 - qubit


def _bits(state: StateVector, qubit: int) -> np.ndarray:
    return (np.arange(1 << state.num_qubits) >> qubit) & 1


def _register_values(state: StateVector, register: Tuple[int, ...]) -> np.ndarray:
    indices = np.arange(1 << state.num_qubits)
    values = np.zeros_like(indices)
    for position, qubit in enumerate(register):
        values |= ((indices >> qubit) & 1) << position
    return values


def _split(state: StateVector, register: Tuple[int, ...]):
    """Reshape the amplitudes into a ``(2 ** len(register), rest)`` matrix indexed by the register value."""
    tensor = state.amps.reshape((2,) * state.num_qubits)
    front = [_axis(state, qubit) for qubit in reversed(register)]
    permutation = front + [axis for axis in range(state.num_qubits) if axis not in front]
    moved = np.transpose(tensor, permutation)
    return moved.reshape(1 << len(register), -1), moved.shape, permutation


def _merge(matrix: np.ndarray, shape, permutation) -> np.ndarray:
    return np.transpose(matrix.reshape(shape), np.argsort(permutation)).reshape(-1)


def hadamard(state: StateVector, target: int) -> StateVector:
    """Apply the Hadamard gate to the target qubit."""
    target = _check_target(state, target)
    axis = _axis(state, target)
    tensor = state.amps.reshape((2,) * state.num_qubits)
    rotated = np.moveaxis(np.tensordot(_HADAMARD, tensor, axes=([1], [axis])), 0, axis)
    return StateVector(rotated.reshape(-1))


def z_phase(state: StateVector, target: int, theta: float) -> StateVector:
    """Apply :math:`e^{i \\theta Z} = \\mathrm{diag}(e^{i\\theta}, e^{-i\\theta})` to the target qubit."""
    target = _check_target(state, target)
    if not np.isfinite(theta):
        raise ValueError(f'phase must be finite, got {theta!r}')
    factors = np.where(_bits(state, target) == 0, np.exp(1j * theta), np.exp(-1j * theta))
    return StateVector(state.amps * factors)


def indexed_phase(
    state: StateVector,
    register: QubitRange,
    photon: int,
    theta_of_k: PhaseMap,
) -> StateVector:
    """Apply :math:`e^{i \\theta(k) Z}` to the photon, conditioned on the register holding ``k``.

    :param state: The joint state
    :param register: The qubits of the control register, least significant first. An empty
        register always holds ``k = 0``.
    :param photon: The qubit receiving the phase
    :param theta_of_k: Either a function from register value to angle, or a sequence of
        ``2 ** len(register)`` angles
    :raises ValueError: if the register and the photon overlap or any angle is not finite
    """
    register = _check_qubits(state, register, 'register')
    photon = _check_target(state, photon, 'photon')
    if photon in register:
        raise ValueError(f'photon qubit {photon} overlaps the register {register}')
    size = 1 << len(register)
    if callable(theta_of_k):
        thetas = np.array([theta_of_k(k) for k in range(size)], dtype=float)
    else:
        thetas = np.asarray(theta_of_k, dtype=float)
        if thetas.shape != (size,):
            raise ValueError(f'expected {size} angles, got shape {thetas.shape}')
    if not np.all(np.isfinite(thetas)):
        raise ValueError('phases must be finite')
    signs = 1 - 2 * _bits(state, photon)
    phases = np.exp(1j * thetas[_register_values(state, register)] * signs)
    return StateVector(state.amps * phases)


def _fourier(state: StateVector, register: QubitRange, transform) -> StateVector:
    register = _check_qubits(state, register, 'register')
    if not register:
        raise ValueError('cannot transform an empty register')
    matrix, shape, permutation = _split(state, register)
    return StateVector(_merge(transform(matrix, axis=0, norm='ortho'), shape, permutation))


def qft(state: StateVector, register: QubitRange) -> StateVector:
    """Apply the quantum Fourier transform ``|k> -> sum_j e^{+2 pi i j k / N} |j> / sqrt(N)`` to a register."""
    return _fourier(state, register, np.fft.ifft)


def inverse_qft(state: StateVector, register: QubitRange) -> StateVector:
    """Apply the adjoint of :func:`qft` to a register."""
    return _fourier(state, register, np.fft.fft)


def measure(state: StateVector, qubits: QubitRange, rng: np.random.Generator) -> MeasurementOutcome:
    """Measure some qubits in the computational basis.

    :param state: The state to measure
    :param qubits: The measured qubits; the first one becomes the least significant bit of the value
    :param rng: The random stream the outcome is drawn from
    :return: The outcome and the renormalized state of the remaining qubits. When every qubit is
        measured, the collapsed state is the full basis state.
    :raises ValueError: if no qubit is given
    """
    qubits = _check_qubits(state, qubits, 'measured')
    if not qubits:
        raise ValueError('cannot measure an empty set of qubits')
    matrix, shape, permutation = _split(state, qubits)
    probabilities = np.sum(np.abs(matrix) ** 2, axis=1)
    probabilities /= probabilities.sum()
    value = int(rng.choice(probabilities.shape[0], p=probabilities))
    row = matrix[value] / np.linalg.norm(matrix[value])
    if len(qubits) < state.num_qubits:
        return MeasurementOutcome(value, StateVector(row))
    projected = np.zeros_like(matrix)
    projected[value] = row
    return MeasurementOutcome(value, StateVector(_merge(projected, shape, permutation)))
