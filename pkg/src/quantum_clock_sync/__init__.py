# -*- coding: utf-8 -*-

"""Simulate one-qubit quantum clock synchronization and its query complexity."""

from .channel import ClockModel, ResourceLedger, TransitRecord, handshake_simulate, make_world, tqh_oracle  # noqa: F401
from .complexity import classical_estimate, nayak_wu_bound, tradeoff_sweep  # noqa: F401
from .config import ExperimentSpec, parse_config  # noqa: F401
from .experiments import run_scenario, write_results  # noqa: F401
from .protocol import ProtocolConfig, run_sync, success_probability_exact  # noqa: F401
