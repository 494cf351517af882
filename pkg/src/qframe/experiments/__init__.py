"""Bell/EPR runs, frame-problem trials and thermal-context drift."""

from .bell import (
    BellReport,
    BellSetup,
    TSIRELSON_A,
    TSIRELSON_B,
    bell_basis_measure,
    born_decoding_error,
    communication_error_rate,
    observer_frames,
    run_bell,
    total_variation,
)
from .qfp import (
    CATALOG,
    AdversarialPair,
    QFPInstance,
    QFPTrial,
    agent_statistics,
    construct_adversarial_pair,
    naive_stat_diff,
    run_qfp_trial,
    statistic_discrepancy,
    verify_pair,
)
from .rng import generator, streams
from .thermo import DriftReport, drift_bound, thermo_context_demo

__all__ = [
    "AdversarialPair", "BellReport", "BellSetup", "CATALOG", "DriftReport", "QFPInstance", "QFPTrial",
    "TSIRELSON_A", "TSIRELSON_B", "agent_statistics", "bell_basis_measure", "born_decoding_error",
    "communication_error_rate", "construct_adversarial_pair", "drift_bound", "generator", "naive_stat_diff",
    "observer_frames", "run_bell", "run_qfp_trial", "statistic_discrepancy", "streams",
    "thermo_context_demo", "total_variation", "verify_pair",
]
