"""Unmodeled thermal coupling as a seeded random kick between preparation and readout."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConstraintError, StructuralError
from ..quantum import Observable, PureState, measure, pauli
from ..quantum.operators import require_commuting
from .rng import streams


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """GUE-style draw rescaled to spectral norm 1."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    g = (z + z.conj().T) / 2
    return g / np.max(np.abs(np.linalg.eigvalsh(g)))


def kick(g: np.ndarray, epsilon: float) -> np.ndarray:
    w, v = np.linalg.eigh(g)
    return (v * np.exp(-1j * epsilon * w)) @ v.conj().T


@dataclass(frozen=True)
class DriftReport:
    epsilon: float
    seed: int
    trials: int
    drift: float
    per_trial: tuple[float, ...]
    bound: float

    def to_json(self) -> dict:
        return {
            "drift_free": self.drift == 0.0,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "trials": self.trials,
            "drift": self.drift,
            "per_trial": list(self.per_trial),
            "bound": self.bound,
        }


def drift_bound(epsilon: float) -> float:
    """|p' - p| <= trace distance <= ||U - I|| <= epsilon ||G|| with ||G|| = 1."""
    return min(1.0, float(epsilon))


def thermo_context_demo(
    base: PureState,
    epsilon: float,
    seed: int = 0,
    trials: int = 16,
    observables: Sequence[Observable] | None = None,
) -> DriftReport:
    """Largest change of agent-visible outcome probabilities caused by exp(-i eps G).

    Trial t draws G from stream t of ``seed``, so the same seed gives the same
    kicks for every epsilon.
    """
    if not (math.isfinite(epsilon) and epsilon >= 0):
        raise ConstraintError("epsilon >= 0", f"got {epsilon!r}")
    if trials < 1:
        raise ConstraintError("trials >= 1", f"got {trials!r}")
    if observables is None:
        observables = [pauli("Z", [base.layout.labels[0]])]
    observables = list(observables)
    if not observables:
        raise StructuralError("at least one agent observable is needed")
    require_commuting(observables)

    baseline = measure(base, observables, "joint").distribution
    per_trial = []
    for rng in streams(seed, trials):
        g = random_hermitian(base.layout.total_dim, rng)
        if epsilon == 0.0:
            per_trial.append(0.0)
            continue
        kicked = PureState(base.layout, kick(g, epsilon) @ base.amplitudes)
        dist = measure(kicked, observables, "joint").distribution
        per_trial.append(max(abs(dist[k] - baseline[k]) for k in baseline))
    return DriftReport(float(epsilon), int(seed), int(trials), max(per_trial), tuple(per_trial), drift_bound(epsilon))
