"""Empirical models generated by measuring two reference frames on a state."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NonCodeployableError, StructuralError
from ..quantum import QRF, PureState, measure, operator_commutator_norm
from ..quantum.operators import COMMUTE_TOL, commutator_norm
from .model import EmpiricalModel, MeasurementScenario

OUTCOMES = (1, -1)


def observable_id(q: QRF, i: int) -> str:
    return f"{q.id}:{i}"


@dataclass(frozen=True)
class BridgeResult:
    model: EmpiricalModel
    note: dict


def empirical_model_from_qrfs(
    s: PureState,
    q1: QRF,
    q2: QRF,
    mode: str = "joint",
    marginal_contexts: bool | None = None,
) -> BridgeResult:
    """Born-rule tables for every cross pair (observable of q1, observable of q2).

    ``joint`` requires each cross pair to commute. ``sequential`` measures the
    q1 observable first and updates the state before measuring the q2 one.
    ``marginal_contexts`` (default: on for sequential, off for joint) adds one
    singleton context per observable measured alone, the reference against
    which order effects show up as disturbance.
    """
    if mode not in ("joint", "sequential"):
        raise StructuralError(f"unknown mode {mode!r}")
    if q1.id == q2.id:
        raise StructuralError("the two frames need distinct ids")
    if marginal_contexts is None:
        marginal_contexts = mode == "sequential"

    cnorm = commutator_norm(q1, q2)
    if mode == "joint":
        for i, m in enumerate(q1.observables):
            for j, n in enumerate(q2.observables):
                c = operator_commutator_norm(m, n)
                if c >= COMMUTE_TOL:
                    raise NonCodeployableError(
                        f"joint mode: {observable_id(q1, i)} and {observable_id(q2, j)} do not commute",
                        witness={"pair": [observable_id(q1, i), observable_id(q2, j)], "commutator_norm": c},
                    )

    ids1 = [observable_id(q1, i) for i in range(len(q1.observables))]
    ids2 = [observable_id(q2, j) for j in range(len(q2.observables))]
    contexts = [(x, y) for x in ids1 for y in ids2]
    tables = []
    for i, m in enumerate(q1.observables):
        for j, n in enumerate(q2.observables):
            tables.append(dict(measure(s, [m, n], mode).distribution))
    if marginal_contexts:
        for oid, obs in zip(ids1 + ids2, q1.observables + q2.observables):
            contexts.append((oid,))
            tables.append({(k[0],): p for k, p in measure(s, [obs], "joint").distribution.items()})

    scenario = MeasurementScenario({x: OUTCOMES for x in ids1 + ids2}, tuple(contexts))
    note = {
        "codeployable": cnorm < COMMUTE_TOL,
        "commutator_norm": cnorm,
        "mode": mode,
        "marginal_contexts": marginal_contexts,
    }
    if mode == "sequential":
        note["order"] = [q1.id, q2.id]
    return BridgeResult(EmpiricalModel(scenario, tuple(tables)), note)
