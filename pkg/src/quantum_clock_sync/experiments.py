# -*- coding: utf-8 -*-

"""Seeded scenario runners and their CSV output.

Every scenario draws its randomness from :func:`quantum_clock_sync.utils.make_rng` streams keyed
by the experiment seed, a stream name, and the trial index, so the rows of a run depend only on
its :class:`quantum_clock_sync.config.ExperimentSpec`.
"""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, NamedTuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from .channel import ClockModel, ResourceLedger, fixed_rate_query, handshake_simulate, make_world, tqh_oracle
from .complexity import (
    classical_scaling, simulate_rate_k_with_unit_rate, simulate_register_rate_with_unit_rate, single_rate_deviation,
    tradeoff_sweep,
)
from .config import ExperimentSpec
from .constants import (
    CLASSICAL_SAMPLE_SIZES, CLASSICAL_SCALING_PHASE, FOUR_OVER_PI_SQUARED, LEMMA1_GRID_SIZE,
    REDUCTION_MAX_RATE, TRADEOFF_SUCCESS_THRESHOLD,
)
from .protocol import (
    closed_form_distribution, outcome_distribution, round_to_bits, run_sync, sample_estimates,
    success_probability_exact,
)
from .qsim import StateVector, basis_state, max_deviation, random_state
from .utils import circular_distance, get_version, make_rng

__all__ = [
    'ScenarioResult',
    'SCENARIO_RUNNERS',
    'run_scenario',
    'write_results',
]

logger = logging.getLogger(__name__)

_PHASE_STREAM = 0
_TRANSIT_STREAM = 1
_MEASUREMENT_STREAM = 2
_SAMPLE_STREAM = 3


class ScenarioResult(NamedTuple):
    """The rows, summary line, and extra metadata of one scenario run."""

    frame: pd.DataFrame
    summary: str
    metadata: Dict[str, str] = {}


def _with_echo(frame: pd.DataFrame, spec: ExperimentSpec) -> pd.DataFrame:
    for key, value in spec.echo().items():
        frame[key] = value
    return frame


def _phase_grid(n_prime: int) -> np.ndarray:
    size = 1 << (n_prime + 4)
    return np.arange(size) / size


def run_sync_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Run the protocol once per trial, each time through a freshly sampled handshake."""
    config = spec.protocol
    rows = []
    for trial in tqdm(range(spec.trials), desc='sync', unit='trial', disable=None):
        if spec.t_true is None:
            offset = make_rng(spec.seed, _PHASE_STREAM, trial).uniform() / spec.omega0
        else:
            offset = spec.t_true
        clock, sampler = make_world(offset, spec.omega0, make_rng(spec.seed, _TRANSIT_STREAM, trial))
        transit = sampler()
        ledger = ResourceLedger()
        estimate = run_sync(config, clock, make_rng(spec.seed, _MEASUREMENT_STREAM, trial), ledger, transit)
        rows.append({
            'trial': trial,
            'phi_true': clock.phase,
            't_true': clock.offset,
            't_tr': float(transit.t_tr),
            'photon_bit': estimate.photon_bit,
            'raw_m': estimate.raw_m,
            'phase_hat': estimate.phase_hat,
            't_hat': estimate.offset_hat,
            'success': int(circular_distance(estimate.phase_hat, clock.phase) < 2.0 ** -spec.n_bits),
            'Q': ledger.queries,
            'F': ledger.max_rate_index,
        })
    frame = pd.DataFrame(rows)
    summary = (
        f'sync: success rate {frame["success"].mean():.4f} over {spec.trials} trials'
        f' (n={spec.n_bits}, n\'={spec.n_prime}, Q={frame["Q"].max()}, F={frame["F"].max()})'
    )
    return ScenarioResult(_with_echo(frame, spec), summary)


def _closed_form_success(n_prime: int, phi: float, n_bits: int) -> float:
    """Sum the closed form reading distribution over the readings that round to within :math:`2^{-n}`."""
    numerators = round_to_bits(np.arange(1 << n_prime), n_prime, n_bits)
    accept = circular_distance(numerators / (1 << n_bits), phi) < 2.0 ** -n_bits
    return float(closed_form_distribution(n_prime, phi)[accept].sum())


def run_sweep_phi_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Tabulate the exact success probability, its closed form, and the photon statistics over a phase grid."""
    n_prime = spec.n_prime
    rows = []
    for phi in tqdm(_phase_grid(n_prime), desc='sweep-phi', disable=None):
        phi = float(phi)
        rows.append({
            'phi': phi,
            'success_probability': success_probability_exact(n_prime, phi, spec.n_bits),
            'closed_form_probability': _closed_form_success(n_prime, phi, spec.n_bits),
            'photon_zero_probability': float(outcome_distribution(n_prime, phi)[:, 0].sum()),
        })
    frame = pd.DataFrame(rows)
    worst = frame['success_probability'].idxmin()
    summary = (
        f'sweep-phi: min success probability {frame["success_probability"][worst]:.6f}'
        f' at phi={frame["phi"][worst]} over {len(frame.index)} grid points (4/pi^2 = {FOUR_OVER_PI_SQUARED:.6f})'
    )
    return ScenarioResult(_with_echo(frame, spec), summary)


def run_boost_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Check the enlarged register against its target and sample the failure rate at the worst phase."""
    if spec.delta is None:
        raise ValueError('the boost scenario needs a failure probability (delta)')
    n_prime = spec.n_prime
    target = 1 - spec.delta
    phases = _phase_grid(n_prime)
    probabilities = [
        success_probability_exact(n_prime, float(phi), spec.n_bits)
        for phi in tqdm(phases, desc='boost', disable=None)
    ]
    frame = pd.DataFrame({'phi': phases, 'success_probability': probabilities, 'target': target})
    worst = int(np.argmin(probabilities))
    clock = ClockModel.from_phase(float(phases[worst]), spec.omega0)
    samples = sample_estimates(spec.protocol, clock, make_rng(spec.seed, _SAMPLE_STREAM), spec.trials)
    errors = circular_distance(samples['phase_hat'].to_numpy(), clock.phase)
    failure_rate = float(np.mean(errors >= 2.0 ** -spec.n_bits))
    summary = (
        f'boost: n\'={n_prime} worst success probability {probabilities[worst]:.6f} (target {target:.6f}),'
        f' sampled failure rate {failure_rate:.4f} over {spec.trials} runs at phi={phases[worst]}'
    )
    return ScenarioResult(_with_echo(frame, spec), summary)


def run_tradeoff_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Find the query count needed at every frequency range from 1 to :math:`2^n`."""
    frequency_ranges = [1 << exponent for exponent in range(spec.n_bits + 1)]
    points = tradeoff_sweep(spec.n_bits, frequency_ranges, spec.trials, make_rng(spec.seed, _SAMPLE_STREAM))
    frame = pd.DataFrame([
        {
            'F': point.frequency_range,
            'Q': point.queries,
            'n_bits_achieved': point.n_bits_achieved,
            'success_rate': point.success_rate,
            'FQ_product': point.fq_product,
            'repetitions': point.repetitions,
            'register_size': point.register_size,
        }
        for point in points
    ])
    slack = max(point.n_bits_achieved - math.log2(point.fq_product) for point in points)
    summary = (
        f'tradeoff: Q={points[0].queries} at F=1 and Q={points[-1].queries} at F={points[-1].frequency_range};'
        f' every point satisfies FQ >= 2^(n_bits_achieved - {slack:.3f})'
    )
    metadata = {'success_threshold': str(TRADEOFF_SUCCESS_THRESHOLD), 'fq_slack': f'{slack:.6f}'}
    return ScenarioResult(_with_echo(frame, spec), summary, metadata)


def run_lemma1_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Check the single-rate state and measure how the classical estimator's error scales."""
    deviation = single_rate_deviation(LEMMA1_GRID_SIZE)
    clock = ClockModel.from_phase(CLASSICAL_SCALING_PHASE, spec.omega0)
    frame, slope = classical_scaling(clock, CLASSICAL_SAMPLE_SIZES, spec.trials, make_rng(spec.seed, _SAMPLE_STREAM))
    summary = (
        f'lemma1: single-rate state deviates by at most {deviation:.3e} over {LEMMA1_GRID_SIZE} phases;'
        f' median error scales with slope {slope:.3f} in samples'
    )
    metadata = {'state_deviation': f'{deviation:.6e}', 'slope': f'{slope:.6f}'}
    return ScenarioResult(_with_echo(frame, spec), summary, metadata)


def _photon_part(state: StateVector, register_value: int) -> StateVector:
    """Get the photon factor of a product state whose register, above the photon, holds a basis value."""
    return StateVector(state.amps[2 * register_value:2 * register_value + 2])


def run_reduction_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Compare the fixed-rate black box with the handshake, the base-rate reductions, and repeated queries."""
    register_size = REDUCTION_MAX_RATE.bit_length()
    register = [qubit + 1 for qubit in range(register_size)]
    rows = []
    for trial in tqdm(range(spec.trials), desc='reduction', unit='trial', disable=None):
        rng = make_rng(spec.seed, _PHASE_STREAM, trial)
        offset = rng.uniform() / spec.omega0
        clock, sampler = make_world(offset, spec.omega0, make_rng(spec.seed, _TRANSIT_STREAM, trial))
        first, second = sampler(), sampler()
        photon = random_state(1, rng)
        joint = random_state(register_size + 1, rng)
        register_reduction_deviation = max_deviation(
            simulate_register_rate_with_unit_rate(clock, joint, register, 0),
            tqh_oracle(clock, joint, register, 0),
        )
        composed = photon.tensor(basis_state(register_size, 1))
        for k in range(1, REDUCTION_MAX_RATE + 1):
            direct = fixed_rate_query(clock, photon, 0, k)
            ledger = ResourceLedger()
            reduced = simulate_rate_k_with_unit_rate(clock, k, photon, 0, ledger)
            pinned = tqh_oracle(clock, photon.tensor(basis_state(register_size, k)), register, 0)
            if k > 1:
                composed = tqh_oracle(clock, composed, register, 0)
            rows.append({
                'trial': trial,
                'k': k,
                'handshake_deviation': max(
                    max_deviation(handshake_simulate(clock, k, photon, transit), direct)
                    for transit in (first, second)
                ),
                'reduction_deviation': max_deviation(reduced, direct),
                'pinned_deviation': max_deviation(pinned, direct.tensor(basis_state(register_size, k))),
                'composition_deviation': max_deviation(_photon_part(composed, 1), _photon_part(pinned, k)),
                'register_reduction_deviation': register_reduction_deviation,
                'Q': ledger.queries,
                'F': ledger.max_rate_index,
            })
    frame = pd.DataFrame(rows)
    summary = (
        f'reduction: max deviation {frame["handshake_deviation"].max():.3e} (handshake),'
        f' {frame["reduction_deviation"].max():.3e} (base-rate reduction),'
        f' {frame["register_reduction_deviation"].max():.3e} (register reduction),'
        f' {frame["composition_deviation"].max():.3e} (repeated queries) for k <= {REDUCTION_MAX_RATE}'
    )
    return ScenarioResult(_with_echo(frame, spec), summary)


#: Scenario names and their runners
SCENARIO_RUNNERS: Dict[str, Callable[[ExperimentSpec], ScenarioResult]] = {
    'sync': run_sync_scenario,
    'sweep-phi': run_sweep_phi_scenario,
    'boost': run_boost_scenario,
    'tradeoff': run_tradeoff_scenario,
    'lemma1': run_lemma1_scenario,
    'reduction': run_reduction_scenario,
}


def run_scenario(spec: ExperimentSpec) -> ScenarioResult:
    """Run the scenario named by an experiment specification."""
    logger.info('running %s with n=%d, %d trials, seed %d', spec.scenario, spec.n_bits, spec.trials, spec.seed)
    return SCENARIO_RUNNERS[spec.scenario](spec)


def write_results(result: ScenarioResult, spec: ExperimentSpec, path: Union[str, Path]) -> None:
    """Write a ``#``-prefixed metadata block followed by the rows as CSV.

    The metadata echoes the configuration (without the output path) and the artifact version, so
    identical specifications produce identical files.
    """
    metadata = {
        'version': get_version(with_git_hash=True),
        **{key: str(value) for key, value in spec.echo().items()},
        't_true': str(spec.t_true),
        'trials': str(spec.trials),
        **result.metadata,
    }
    with open(path, 'w', encoding='utf-8', newline='') as file:
        for key, value in metadata.items():
            file.write(f'# {key}: {value}\n')
        result.frame.to_csv(file, index=False)
