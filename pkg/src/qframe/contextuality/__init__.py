"""Empirical models, no-disturbance, global sections and contextual fraction."""

from .bridge import BridgeResult, empirical_model_from_qrfs, observable_id
from .model import (
    EmpiricalModel,
    MeasurementScenario,
    chsh_scenario,
    deterministic_model,
    mix,
    model_from_global,
    pr_box,
)
from .sections import (
    ContextualityReport,
    DisturbanceReport,
    SectionResult,
    analyze,
    bell_roles,
    certificate_holds_exactly,
    certificate_residual,
    check_no_disturbance,
    chsh_value,
    contextual_fraction,
    correlators,
    has_global_section,
    max_assignments,
    section_problem,
)

__all__ = [
    "BridgeResult", "ContextualityReport", "DisturbanceReport", "EmpiricalModel", "MeasurementScenario",
    "SectionResult", "analyze", "bell_roles", "certificate_holds_exactly", "certificate_residual",
    "check_no_disturbance", "chsh_scenario", "chsh_value", "contextual_fraction", "correlators",
    "deterministic_model", "empirical_model_from_qrfs", "has_global_section", "max_assignments", "mix",
    "model_from_global", "observable_id", "pr_box", "section_problem",
]
