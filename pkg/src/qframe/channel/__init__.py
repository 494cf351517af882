"""Classifications, infomorphisms, diagrams and cone-cocone diagrams."""

from .cccd import (
    CCCDCandidate,
    CCCDReport,
    build_cccd,
    combine_bases,
    merge_cores,
    trivial_cccd,
    verify_cccd,
)
from .classification import (
    Classification,
    Infomorphism,
    ValidationReport,
    classification,
    compose,
    find_isomorphism,
    identity,
    is_isomorphism,
    is_valid,
    validate_infomorphism,
)
from .diagram import ClassifierDiagram, CommutativityReport, check_commutes, commutes_quiver
from .universal import UniversalCone, colimit, colimit_mediator, limit, limit_mediator

__all__ = [
    "CCCDCandidate", "CCCDReport", "Classification", "ClassifierDiagram", "CommutativityReport",
    "Infomorphism", "UniversalCone", "ValidationReport", "build_cccd", "check_commutes",
    "classification", "colimit", "colimit_mediator", "combine_bases", "commutes_quiver", "compose",
    "find_isomorphism", "identity", "is_isomorphism", "is_valid", "limit", "limit_mediator",
    "merge_cores", "trivial_cccd", "validate_infomorphism", "verify_cccd",
]
