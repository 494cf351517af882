"""Born-rule measurement of dichotomic observables, jointly or in sequence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import StructuralError
from .operators import Observable, common_layout, require_commuting
from .states import PureState, SystemLayout


def apply_local(s_amps: np.ndarray, layout: SystemLayout, op: np.ndarray, sector: Sequence[str]) -> np.ndarray:
    """Apply an operator on ``sector`` to a state vector without forming the full matrix."""
    pos = layout.positions(sector)
    k = len(pos)
    t = s_amps.reshape(layout.dims)
    op_t = op.reshape([layout.dims[p] for p in pos] * 2)
    # contract op's input axes with the state's sector axes
    out = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), pos))
    # tensordot puts op's output axes first; move them back into place
    rest = [i for i in range(layout.n) if i not in pos]
    current = pos + rest
    perm = [current.index(i) for i in range(layout.n)]
    return np.transpose(out, perm).reshape(-1)


def apply_unitary(s: PureState, unitary: np.ndarray, targets: Sequence[str]) -> PureState:
    amps = apply_local(s.amplitudes, s.layout, np.asarray(unitary, dtype=np.complex128), [str(t) for t in targets])
    return PureState(s.layout, amps / np.linalg.norm(amps))


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome tuples (entries +-1, in observable order) with probabilities;
    ``post_states`` holds the normalised conditional state of every branch with
    nonzero probability."""

    distribution: dict[tuple[int, ...], float]
    mode: str
    post_states: dict[tuple[int, ...], PureState] = field(default_factory=dict)

    def marginal(self, index: int) -> dict[int, float]:
        out = {1: 0.0, -1: 0.0}
        for k, p in self.distribution.items():
            out[k[index]] += p
        return out


def measure(s: PureState, observables: Sequence[Observable], mode: str = "joint") -> MeasurementResult:
    """Exact outcome distribution over joint +-1 tuples.

    ``joint`` requires pairwise commuting observables (NonCodeployableError
    otherwise). ``sequential`` applies Lueders updates in list order, so the
    probability of a tuple is ||P_k ... P_1 psi||^2.
    """
    if mode not in ("joint", "sequential"):
        raise StructuralError(f"unknown measurement mode {mode!r}")
    observables = list(observables)
    common_layout(observables, s.layout)
    for o in observables:
        if not o.dichotomic:
            raise StructuralError("measure() handles dichotomic observables only")
    if mode == "joint":
        require_commuting(observables)

    projectors = [{o: obs.projector(o) for o in (1, -1)} for obs in observables]
    dist: dict[tuple[int, ...], float] = {}
    post: dict[tuple[int, ...], PureState] = {}
    for outcome in itertools.product((1, -1), repeat=len(observables)):
        v = s.amplitudes
        for obs, proj, o in zip(observables, projectors, outcome):
            v = apply_local(v, s.layout, proj[o], obs.sector)
        p = float(np.real(np.vdot(v, v)))
        dist[outcome] = p
        if p > 1e-15:
            post[outcome] = PureState(s.layout, v / np.sqrt(p))
    return MeasurementResult(dist, mode, post)
