"""Measurement scenarios and empirical models."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np

from ..errors import ConstraintError, StructuralError

SUM_TOL = 1e-10

Outcome = int | str
Prob = Fraction | float


@dataclass(frozen=True)
class MeasurementScenario:
    """Observables with ordered finite outcome sets, and a cover by contexts."""

    observables: Mapping[str, tuple[Outcome, ...]]
    contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        obs = {str(k): tuple(v) for k, v in dict(self.observables).items()}
        ctxs = tuple(tuple(str(x) for x in c) for c in self.contexts)
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "contexts", ctxs)
        for k, outs in obs.items():
            if not outs:
                raise StructuralError(f"observable {k!r} has an empty outcome set")
            if len(set(outs)) != len(outs):
                raise StructuralError(f"observable {k!r} has repeated outcomes")
        used = set()
        for i, c in enumerate(ctxs):
            if not c:
                raise StructuralError(f"context {i} is empty")
            if len(set(c)) != len(c):
                raise StructuralError(f"context {i} repeats an observable")
            for x in c:
                if x not in obs:
                    raise StructuralError(f"context {i} names unknown observable {x!r}")
            used.update(c)
        missing = [k for k in obs if k not in used]
        if missing:
            raise StructuralError(f"observables {missing} occur in no context")

    @property
    def observable_ids(self) -> list[str]:
        return list(self.observables)

    def context_tuples(self, i: int) -> list[tuple]:
        """Joint outcome tuples of context ``i`` in product order."""
        return list(itertools.product(*(self.observables[x] for x in self.contexts[i])))

    def assignment_count(self) -> int:
        return math.prod(len(v) for v in self.observables.values())

    def __hash__(self):
        return hash((tuple(self.observables.items()), self.contexts))


def _as_prob(x) -> Prob:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational) and not isinstance(x, bool):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class EmpiricalModel:
    """One outcome distribution per context; missing tuples have probability 0."""

    scenario: MeasurementScenario
    tables: tuple[Mapping[tuple, Prob], ...]

    def __post_init__(self):
        sc = self.scenario
        tables = tuple(self.tables)
        if len(tables) != len(sc.contexts):
            raise StructuralError(f"{len(tables)} tables for {len(sc.contexts)} contexts")
        full = []
        for i, table in enumerate(tables):
            tuples = sc.context_tuples(i)
            allowed = set(tuples)
            for key, p in table.items():
                key = tuple(key)
                if len(key) != len(sc.contexts[i]):
                    raise StructuralError(f"context {i}: tuple {key} has arity {len(key)}, "
                                          f"context has {len(sc.contexts[i])} observables")
                if key not in allowed:
                    raise StructuralError(f"context {i}: tuple {key} uses an unknown outcome")
            t = {k: _as_prob(table.get(k, 0)) for k in tuples}
            exact = all(isinstance(v, Fraction) for v in t.values())
            if not exact:
                t = {k: float(v) for k, v in t.items()}
            neg = [k for k, v in t.items() if v < 0]
            if neg:
                raise ConstraintError("nonnegative probabilities", f"context {i}: negative entry at {neg[0]}",
                                      witness={"context": i})
            total = sum(t.values())
            if abs(float(total) - 1.0) > SUM_TOL:
                raise ConstraintError("normalization", f"context {i}: table sums to {float(total)!r}",
                                      witness={"context": i, "sum": float(total)})
            full.append(t)
        object.__setattr__(self, "tables", tuple(full))

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for t in self.tables for v in t.values())

    def probability_vector(self) -> list[Prob]:
        return [p for i, t in enumerate(self.tables) for p in (t[k] for k in self.scenario.context_tuples(i))]

    def marginal(self, context: int, observables: Sequence[str]) -> dict[tuple, Prob]:
        ctx = self.scenario.contexts[context]
        pos = [ctx.index(x) for x in observables]
        out: dict[tuple, Prob] = {}
        for k, p in self.tables[context].items():
            sub = tuple(k[j] for j in pos)
            out[sub] = out.get(sub, 0) + p
        return out

    def __hash__(self):
        return hash((self.scenario, tuple(tuple(t.items()) for t in self.tables)))


def deterministic_model(scenario: MeasurementScenario, assignment: Mapping[str, Outcome]) -> EmpiricalModel:
    """The model produced by a single global assignment."""
    tables = []
    for ctx in scenario.contexts:
        tables.append({tuple(assignment[x] for x in ctx): Fraction(1)})
    return EmpiricalModel(scenario, tuple(tables))


def model_from_global(scenario: MeasurementScenario, weights: Mapping[tuple, Prob]) -> EmpiricalModel:
    """Marginalise a distribution over global assignments (tuples in observable order)."""
    ids = scenario.observable_ids
    tables = []
    for ctx in scenario.contexts:
        pos = [ids.index(x) for x in ctx]
        t: dict[tuple, Prob] = {}
        for g, w in weights.items():
            k = tuple(g[j] for j in pos)
            t[k] = t.get(k, 0) + w
        tables.append(t)
    return EmpiricalModel(scenario, tuple(tables))


def mix(models: Sequence[EmpiricalModel], weights: Sequence[Prob]) -> EmpiricalModel:
    sc = models[0].scenario
    tables = []
    for i in range(len(sc.contexts)):
        t: dict[tuple, Prob] = {}
        for m, w in zip(models, weights):
            for k, p in m.tables[i].items():
                t[k] = t.get(k, 0) + w * p
        tables.append(t)
    return EmpiricalModel(sc, tuple(tables))


def chsh_scenario(names: Sequence[str] = ("a", "a'", "b", "b'")) -> MeasurementScenario:
    a0, a1, b0, b1 = names
    return MeasurementScenario(
        {n: (1, -1) for n in names},
        ((a0, b0), (a0, b1), (a1, b0), (a1, b1)),
    )


def pr_box(names: Sequence[str] = ("a", "a'", "b", "b'")) -> EmpiricalModel:
    """Perfect correlation in every context except (a', b'), which anticorrelates."""
    sc = chsh_scenario(names)
    half = Fraction(1, 2)
    corr = {(1, 1): half, (-1, -1): half}
    anti = {(1, -1): half, (-1, 1): half}
    return EmpiricalModel(sc, (corr, corr, corr, anti))


def probabilities_close(a: EmpiricalModel, b: EmpiricalModel) -> float:
    """Max absolute difference between corresponding entries."""
    worst = 0.0
    for ta, tb in zip(a.tables, b.tables):
        for k in ta:
            worst = max(worst, abs(float(ta[k]) - float(tb[k])))
    return worst


def as_float_array(values) -> np.ndarray:
    return np.array([float(v) for v in values], dtype=np.float64)
