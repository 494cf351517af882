"""Bell/EPR runs with a misaligned second observer, and Bell-basis readout."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from ..contextuality import (
    ContextualityReport,
    EmpiricalModel,
    analyze,
    chsh_value,
    correlators,
    empirical_model_from_qrfs,
)
from ..errors import ConstraintError, StructuralError
from ..quantum import QRF, Observable, PureState, SystemLayout, bell_state, measure, xz_observable
from ..quantum.gates import ry
from .rng import streams

TSIRELSON_A = (0.0, math.pi / 2)
TSIRELSON_B = (math.pi / 4, -math.pi / 4)


@dataclass(frozen=True)
class BellSetup:
    """Two observers measuring spin in the x-z plane.

    The second observer's frame is rotated by ``misalignment`` about the y
    axis, so its nominal angle ``phi`` is physically ``phi + misalignment``.
    ``shots=None`` means exact Born probabilities.
    """

    state: PureState = field(default_factory=bell_state)
    a_settings: tuple[float, float] = TSIRELSON_A
    b_settings: tuple[float, float] = TSIRELSON_B
    misalignment: float = 0.0
    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        angles = tuple(self.a_settings) + tuple(self.b_settings) + (self.misalignment,)
        if len(self.a_settings) != 2 or len(self.b_settings) != 2:
            raise StructuralError("each observer needs exactly two settings")
        if not all(math.isfinite(a) for a in angles):
            raise ConstraintError("finite angles", "settings and misalignment must be finite")
        if not (0.0 <= self.misalignment <= math.pi):
            raise ConstraintError("misalignment in [0, pi]", f"got {self.misalignment!r}")
        if self.state.layout.dims != (2, 2):
            raise StructuralError("Bell runs need a two-qubit state")
        if self.shots is not None and self.shots <= 0:
            raise ConstraintError("shots > 0", f"got {self.shots!r}")


def frame_rotated(obs: Observable, theta: float) -> Observable:
    """U O U^dagger with U = exp(-i theta Y/2)."""
    u = ry(theta)
    return Observable(obs.sector, u @ obs.matrix @ u.conj().T)


def observer_frames(setup: BellSetup) -> tuple[QRF, QRF]:
    a_label, b_label = setup.state.layout.labels
    a_obs = [xz_observable(phi, a_label) for phi in setup.a_settings]
    b_obs = [frame_rotated(xz_observable(phi, b_label), setup.misalignment) for phi in setup.b_settings]
    return QRF.uniform("A1", a_obs), QRF.uniform("A2", b_obs)


def _aggregate(scenario, a_records: list[np.ndarray], b_records: list[np.ndarray], shots: int) -> EmpiricalModel:
    """Join the two observers' outcome records context by context into frequencies.

    Nothing acts on the records in transit; the join only pairs entries by
    shot index.
    """
    tables = []
    for ctx, ra, rb in zip(scenario.contexts, a_records, b_records):
        counts: dict[tuple, int] = {}
        for key, n in zip(*np.unique(np.stack([ra, rb], axis=1), axis=0, return_counts=True)):
            counts[(int(key[0]), int(key[1]))] = int(n)
        tables.append({k: Fraction(n, shots) for k, n in counts.items()})
    return EmpiricalModel(scenario, tuple(tables))


def total_variation(a: EmpiricalModel, b: EmpiricalModel) -> float:
    """Largest per-context total-variation distance."""
    worst = 0.0
    for ta, tb in zip(a.tables, b.tables):
        worst = max(worst, 0.5 * sum(abs(float(ta[k]) - float(tb[k])) for k in ta))
    return worst


@dataclass(frozen=True)
class BellReport:
    setup: BellSetup
    model: EmpiricalModel
    exact_model: EmpiricalModel
    correlators: dict
    chsh: float
    contextuality: ContextualityReport
    tv_distance: float | None = None

    def to_json(self) -> dict[str, Any]:
        a, b = ("a", "a'"), ("b", "b'")
        keys = list(self.correlators)
        names = {}
        for (x, y) in keys:
            names[(x, y)] = f"E({a[int(x.split(':')[1])]},{b[int(y.split(':')[1])]})"
        out = {
            "verdict": self.contextuality.noncontextual,
            "chsh": float(self.chsh),
            "correlators": {names[k]: float(v) for k, v in self.correlators.items()},
            "misalignment": self.setup.misalignment,
            "mode": "exact" if self.setup.shots is None else "shots",
            "contextuality": self.contextuality.to_json(),
        }
        if self.setup.shots is not None:
            out["shots"] = self.setup.shots
            out["seed"] = self.setup.seed
            out["tv_distance"] = self.tv_distance
        return out


def run_bell(setup: BellSetup) -> BellReport:
    q1, q2 = observer_frames(setup)
    exact = empirical_model_from_qrfs(setup.state, q1, q2, mode="joint").model
    model = exact
    tv = None
    if setup.shots is not None:
        rngs = streams(setup.seed, len(exact.scenario.contexts))
        a_rec, b_rec = [], []
        for table, rng in zip(exact.tables, rngs):
            keys = list(table)
            p = np.array([max(float(table[k]), 0.0) for k in keys])
            idx = rng.choice(len(keys), size=setup.shots, p=p / p.sum())
            outcomes = np.array(keys, dtype=np.int64)[idx]
            a_rec.append(outcomes[:, 0])
            b_rec.append(outcomes[:, 1])
        model = _aggregate(exact.scenario, a_rec, b_rec, setup.shots)
        tv = total_variation(model, exact)
    return BellReport(
        setup=setup,
        model=model,
        exact_model=exact,
        correlators=correlators(model),
        chsh=chsh_value(model),
        contextuality=analyze(model),
        tv_distance=tv,
    )


def communication_error_rate(theta: float) -> float:
    """Bit error when a z-encoded bit is decoded along an axis misaligned by theta."""
    if not (0.0 <= theta <= math.pi):
        raise ConstraintError("misalignment in [0, pi]", f"got {theta!r}")
    return math.sin(theta / 2) ** 2


def born_decoding_error(theta: float) -> float:
    """Same quantity computed by simulating encode/decode with the Born rule."""
    layout = SystemLayout.qubits(["channel"])
    errors = []
    for bit in (0, 1):
        sent = PureState.basis(layout, [bit])
        decoder = frame_rotated(xz_observable(0.0, "channel"), theta)
        dist = measure(sent, [decoder]).distribution
        wrong = (-1,) if bit == 0 else (1,)
        errors.append(dist[wrong])
    return 0.5 * (errors[0] + errors[1])


BELL_BASIS = ("phi+", "phi-", "psi+", "psi-")


@dataclass(frozen=True)
class BellBasisResult:
    distribution: dict[str, float]
    annotation: dict

    def to_json(self) -> dict:
        return {"distribution": dict(self.distribution), "annotation": dict(self.annotation)}


def bell_basis_measure(s: PureState) -> BellBasisResult:
    """Born probabilities in {(|00>+-|11>)/sqrt2, (|10>+-|01>)/sqrt2}."""
    if s.layout.dims != (2, 2):
        raise StructuralError(f"Bell-basis measurement needs two qubits, got dims {s.layout.dims}")
    dist = {}
    for name in BELL_BASIS:
        v = bell_state(name, s.layout.labels).amplitudes
        dist[name] = float(abs(np.vdot(v, s.amplitudes)) ** 2)
    annotation = {
        "requires_entangling_measurement": True,
        "subsystems": list(s.layout.labels),
        "note": "the Bell basis has no product-basis factorisation; deploying it needs a joint "
                "entangling operation on both subsystems, so outcome records are not local",
    }
    return BellBasisResult(dist, annotation)
