"""Finite-dimensional states, observables, reference frames and entropies."""

from .measure import MeasurementResult, apply_local, apply_unitary, measure
from .operators import (
    K_B,
    LN2,
    PAULI,
    QRF,
    Observable,
    build_interaction_hamiltonian,
    codeployable,
    common_layout,
    commutator_norm,
    embed,
    landauer_cost,
    operator_commutator_norm,
    pauli,
    require_commuting,
    xz_observable,
)
from .states import (
    DensityMatrix,
    PureState,
    SystemLayout,
    bell_state,
    bipartitions,
    entanglement_entropy,
    ghz_state,
    is_separable_pure,
    partial_trace,
    product_state,
    schmidt_coefficients,
    von_neumann_entropy,
)

__all__ = [
    "DensityMatrix", "K_B", "LN2", "MeasurementResult", "Observable", "PAULI", "PureState", "QRF",
    "SystemLayout", "apply_local", "apply_unitary", "bell_state", "bipartitions",
    "build_interaction_hamiltonian", "codeployable", "common_layout", "commutator_norm", "embed",
    "entanglement_entropy", "ghz_state", "is_separable_pure", "landauer_cost", "measure",
    "operator_commutator_norm", "partial_trace", "pauli", "product_state", "require_commuting",
    "schmidt_coefficients", "von_neumann_entropy", "xz_observable",
]
