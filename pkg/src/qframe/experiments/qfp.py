"""Frame-problem trials: can an agent's statistics reveal an entropy change?"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import NoAdversarialFamilyError, StructuralError
from ..quantum import QRF, PureState, SystemLayout, apply_unitary, bell_state, entanglement_entropy, ghz_state, measure
from ..quantum.gates import check_unitary
from ..quantum.operators import require_commuting

STAT_TOL = 1e-9
ENTROPY_TOL = 1e-9

Stats = dict[str, dict[tuple, float]]
Strategy = Callable[[Stats, Stats], bool]


def agent_statistics(state: PureState, components: Sequence[tuple[str, QRF]]) -> Stats:
    """Joint outcome distribution of every component's (commuting) observables."""
    out: Stats = {}
    for cid, q in components:
        if not q.observables:
            out[cid] = {(): 1.0}
            continue
        out[cid] = dict(measure(state, list(q.observables), "joint").distribution)
    return out


def statistic_discrepancy(before: Stats, after: Stats) -> float:
    worst = 0.0
    for cid, table in before.items():
        other = after[cid]
        for k in set(table) | set(other):
            worst = max(worst, abs(table.get(k, 0.0) - other.get(k, 0.0)))
    return worst


def naive_stat_diff(before: Stats, after: Stats, tol: float = STAT_TOL) -> bool:
    """Report "changed" iff some agent-visible probability moved by more than tol."""
    return statistic_discrepancy(before, after) > tol


STRATEGIES: dict[str, Strategy] = {"naive-stat-diff": naive_stat_diff}


@dataclass(frozen=True)
class QFPInstance:
    state: PureState
    components: tuple[tuple[str, QRF], ...]
    action: np.ndarray
    targets: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple((str(c), q) for c, q in self.components))
        object.__setattr__(self, "targets", tuple(str(t) for t in self.targets))
        labels = set(self.state.layout.labels)
        for cid, q in self.components:
            outside = [l for l in q.sector if l not in labels]
            if outside:
                raise StructuralError(f"component {cid!r} acts on {outside}, not in the layout")
            require_commuting(list(q.observables))
        missing = [t for t in self.targets if t not in labels]
        if missing:
            raise StructuralError(f"action targets {missing} not in the layout")
        u = np.asarray(self.action, dtype=np.complex128)
        d = math.prod(self.state.layout.dim_of(t) for t in self.targets)
        if u.shape != (d, d):
            raise StructuralError(f"action has shape {u.shape}, targets need {(d, d)}")
        check_unitary(u)
        object.__setattr__(self, "action", u)

    @property
    def layout(self) -> SystemLayout:
        return self.state.layout


@dataclass(frozen=True)
class QFPTrial:
    agent_changed: bool
    truth_changed: bool
    entropy_before: float
    entropy_after: float
    discrepancy: float
    strategy: str

    @property
    def classification(self) -> str:
        if self.agent_changed == self.truth_changed:
            return "correct"
        return "false-negative" if self.truth_changed else "false-positive"

    def to_json(self) -> dict:
        return {
            "verdict": self.classification == "correct",
            "classification": self.classification,
            "agent_verdict": "changed" if self.agent_changed else "unchanged",
            "ground_truth": "changed" if self.truth_changed else "unchanged",
            "entropy_before": self.entropy_before,
            "entropy_after": self.entropy_after,
            "delta_entropy": self.entropy_after - self.entropy_before,
            "statistic_discrepancy": self.discrepancy,
            "strategy": self.strategy,
        }


def run_qfp_trial(instance: QFPInstance, strategy: str | Strategy = "naive-stat-diff") -> QFPTrial:
    name = strategy if isinstance(strategy, str) else getattr(strategy, "__name__", "custom")
    decide = STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    before = instance.state
    after = apply_unitary(before, instance.action, instance.targets)
    s0, _ = entanglement_entropy(before)
    s1, _ = entanglement_entropy(after)
    st0 = agent_statistics(before, instance.components)
    st1 = agent_statistics(after, instance.components)
    return QFPTrial(
        agent_changed=bool(decide(st0, st1)),
        truth_changed=abs(s1 - s0) > ENTROPY_TOL,
        entropy_before=s0,
        entropy_after=s1,
        discrepancy=statistic_discrepancy(st0, st1),
        strategy=name,
    )


# -- adversarial pairs ---------------------------------------------------------

@dataclass(frozen=True)
class AdversarialPair:
    """Two environments the agent cannot tell apart whose entropies differ by >= 1 bit."""

    first: PureState
    second: PureState
    agent: tuple[QRF, ...]
    family: str
    discrepancy: float
    entropy_first: float
    entropy_second: float

    @property
    def delta_entropy(self) -> float:
        return abs(self.entropy_first - self.entropy_second)

    def problems(self) -> list[str]:
        out = []
        if not self.discrepancy <= STAT_TOL:
            out.append(f"statistic discrepancy {self.discrepancy!r} > {STAT_TOL}")
        if not self.delta_entropy >= 1.0 - ENTROPY_TOL:
            out.append(f"entropy gap {self.delta_entropy!r} < 1 bit")
        return out

    def to_json(self) -> dict:
        return {
            "verdict": not self.problems(),
            "family": self.family,
            "discrepancy": self.discrepancy,
            "entropy_first": self.entropy_first,
            "entropy_second": self.entropy_second,
            "delta_entropy": self.delta_entropy,
            "layout": list(self.first.layout.labels),
        }


def _fresh_labels(taken: Sequence[str], k: int) -> list[str]:
    nums = [int(x) for x in taken if x.isdigit()]
    if len(nums) == len(taken):
        start = max(nums, default=0) + 1
        return [str(start + i) for i in range(k)]
    return [f"env{i}" for i in range(k)]


def _sector_state(sector: Sequence[str]) -> PureState | None:
    """Bell pairs on consecutive sector labels (|0> on a leftover one)."""
    if not sector:
        return None
    parts = [bell_state("phi+", sector[i:i + 2]) for i in range(0, len(sector) - 1, 2)]
    if len(sector) % 2:
        parts.append(PureState.basis(SystemLayout.qubits([sector[-1]]), [0]))
    out = parts[0]
    for p in parts[1:]:
        out = out.kron(p)
    return out


def _with_sector(sector_state: PureState | None, env: PureState) -> PureState:
    return env if sector_state is None else sector_state.kron(env)


def _bell_ancilla(sector: Sequence[str], pairs: int) -> tuple[PureState, PureState]:
    env = _fresh_labels(sector, 2 * pairs)
    entangled = None
    product = None
    for i in range(pairs):
        b = bell_state("phi+", env[2 * i:2 * i + 2])
        z = PureState.basis(SystemLayout.qubits(env[2 * i:2 * i + 2]), [0, 0])
        entangled = b if entangled is None else entangled.kron(b)
        product = z if product is None else product.kron(z)
    base = _sector_state(sector)
    return _with_sector(base, entangled), _with_sector(base, product)


def _ghz_vs_bell(sector: Sequence[str]) -> tuple[PureState, PureState]:
    if len(sector) != 1:
        raise NoAdversarialFamilyError("ghz-vs-bell needs a one-qubit agent sector")
    s = sector[0]
    e1, e2 = _fresh_labels(sector, 2)
    first = bell_state("phi+", [s, e1]).kron(PureState.basis(SystemLayout.qubits([e2]), [0]))
    second = ghz_state([s, e1, e2])
    return first, second


CATALOG: dict[str, Callable[[Sequence[str]], tuple[PureState, PureState]]] = {
    "bell-ancilla": lambda sector: _bell_ancilla(sector, 1),
    "double-bell-ancilla": lambda sector: _bell_ancilla(sector, 2),
    # negative control: agent-indistinguishable but equal entropies
    "ghz-vs-bell": _ghz_vs_bell,
}
DEFAULT_ORDER = ("bell-ancilla", "double-bell-ancilla")


def verify_pair(first: PureState, second: PureState, agent: Sequence[QRF], family: str) -> AdversarialPair:
    comps = [(q.id, q) for q in agent]
    d = statistic_discrepancy(agent_statistics(first, comps), agent_statistics(second, comps))
    s1, _ = entanglement_entropy(first)
    s2, _ = entanglement_entropy(second)
    return AdversarialPair(first, second, tuple(agent), family, d, s1, s2)


def construct_adversarial_pair(agent: Sequence[QRF], catalog_key: str | None = None) -> AdversarialPair:
    """Environment pair defeating ``agent``, re-verified by brute force before return."""
    agent = tuple(agent)
    for q in agent:
        require_commuting(list(q.observables))
        if any(d != 2 for d in q.sector_layout().dims):
            raise StructuralError(f"frame {q.id!r}: catalog families assume qubit sectors")
    sector = list(dict.fromkeys(l for q in agent for l in q.sector))
    if catalog_key is not None and catalog_key not in CATALOG:
        raise StructuralError(f"unknown catalog family {catalog_key!r}; known: {sorted(CATALOG)}")
    keys = [catalog_key] if catalog_key else list(DEFAULT_ORDER)
    failures = {}
    for key in keys:
        try:
            first, second = CATALOG[key](sector)
        except NoAdversarialFamilyError as exc:
            failures[key] = [str(exc)]
            continue
        pair = verify_pair(first, second, agent, key)
        probs = pair.problems()
        if not probs:
            return pair
        failures[key] = probs
    raise NoAdversarialFamilyError("no catalog family defeats the given frames", witness=failures)
