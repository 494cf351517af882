"""No-disturbance, global sections, contextual fraction and CHSH."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.optimize import linprog

from .. import kernels
from ..errors import ResourceCapError, StructuralError
from .model import EmpiricalModel, MeasurementScenario
from .simplex import maximize_packing, phase_one

DEFAULT_MAX_ASSIGNMENTS = 10**6
FEAS_TOL = 1e-9
ND_TOL = 1e-9


def max_assignments() -> int:
    raw = os.environ.get("QFRAME_MAX_ASSIGNMENTS")
    return int(raw) if raw else DEFAULT_MAX_ASSIGNMENTS


# -- no-disturbance -----------------------------------------------------------

@dataclass(frozen=True)
class DisturbanceReport:
    passes: bool
    max_violation: float
    witness: dict | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.passes, "max_violation": self.max_violation}
        if self.witness:
            out["witness"] = self.witness
        return out


def check_no_disturbance(m: EmpiricalModel, tol: float = ND_TOL) -> DisturbanceReport:
    """Marginals on the observables shared by two contexts must agree."""
    sc = m.scenario
    worst = 0.0
    witness = None
    for i, j in itertools.combinations(range(len(sc.contexts)), 2):
        shared = [x for x in sc.contexts[i] if x in sc.contexts[j]]
        if not shared:
            continue
        mi = m.marginal(i, shared)
        mj = m.marginal(j, shared)
        for k in set(mi) | set(mj):
            gap = abs(float(mi.get(k, 0)) - float(mj.get(k, 0)))
            if gap > worst:
                worst = gap
                witness = {"observables": shared, "contexts": [i, j], "outcome": list(k),
                           "marginals": [float(mi.get(k, 0)), float(mj.get(k, 0))]}
    passes = worst <= tol
    return DisturbanceReport(passes, worst, None if passes else witness)


# -- LP data ------------------------------------------------------------------

@dataclass(frozen=True)
class SectionProblem:
    """Incidence between global assignments (columns) and context rows."""

    rows: np.ndarray  # rows[c, g] = row index of assignment g restricted to context c
    n_rows: int
    n_assign: int
    assignments: list[tuple]

    def dense(self) -> np.ndarray:
        A = np.zeros((self.n_rows, self.n_assign), dtype=np.int8)
        cols = np.arange(self.n_assign)
        for c in range(self.rows.shape[0]):
            A[self.rows[c], cols] = 1
        return A


def section_problem(sc: MeasurementScenario) -> SectionProblem:
    n_assign = sc.assignment_count()
    cap = max_assignments()
    if n_assign > cap:
        raise ResourceCapError(f"{n_assign} global assignments exceed the cap of {cap}",
                               witness={"assignments": n_assign, "cap": cap})
    ids = sc.observable_ids
    radices = np.array([len(sc.observables[x]) for x in ids], dtype=np.int64)
    k_max = max(len(c) for c in sc.contexts)
    ctx_obs = np.full((len(sc.contexts), k_max), -1, dtype=np.int64)
    ctx_len = np.zeros(len(sc.contexts), dtype=np.int64)
    ctx_off = np.zeros(len(sc.contexts), dtype=np.int64)
    off = 0
    for c, ctx in enumerate(sc.contexts):
        ctx_len[c] = len(ctx)
        ctx_off[c] = off
        for j, x in enumerate(ctx):
            ctx_obs[c, j] = ids.index(x)
        off += int(np.prod([radices[ids.index(x)] for x in ctx]))
    rows = kernels.restriction_rows(radices, ctx_obs, ctx_len, ctx_off)
    assignments = list(itertools.product(*(sc.observables[x] for x in ids)))
    return SectionProblem(rows, off, n_assign, assignments)


# -- global section -------------------------------------------------------------

@dataclass(frozen=True)
class SectionResult:
    feasible: bool
    exact: bool
    signaling: bool
    distribution: dict[tuple, Any] | None = None  # global assignment -> weight
    farkas: list | None = None  # dual y: y.A <= 0 on every assignment, y.p > 0
    margin: float | None = None  # y.p for infeasible verdicts
    note: str = ""

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.feasible, "mode": "exact" if self.exact else "float"}
        if self.signaling:
            out["flag"] = "signaling: section question ill-posed"
        if self.distribution is not None:
            out["certificate"] = {
                "kind": "global_distribution",
                "weights": [{"assignment": list(g), "weight": _num(w, self.exact)}
                            for g, w in self.distribution.items()],
            }
        if self.farkas is not None:
            out["certificate"] = {"kind": "farkas", "y": [_num(v, self.exact) for v in self.farkas],
                                  "margin": self.margin}
        return out


def _num(v, exact: bool):
    return str(v) if exact else float(v)


def has_global_section(m: EmpiricalModel, force_float: bool = False) -> SectionResult:
    """Is there a distribution over global assignments marginalising to ``m``?

    Exact rational simplex when every table entry is rational, HiGHS otherwise.
    """
    sc = m.scenario
    prob = section_problem(sc)
    signaling = not check_no_disturbance(m).passes
    p = m.probability_vector()
    exact = m.exact and not force_float
    if exact:
        A = prob.dense()
        rows = [[Fraction(int(v)) for v in A[r]] for r in range(prob.n_rows)]
        rows.append([Fraction(1)] * prob.n_assign)
        rhs = [Fraction(v) for v in p] + [Fraction(1)]
        res = phase_one(rows, rhs)
        if res.objective == 0:
            dist = {prob.assignments[g]: res.x[g] for g in range(prob.n_assign) if res.x[g] != 0}
            return SectionResult(True, True, signaling, distribution=dist)
        y = res.dual
        margin = sum((yi * bi for yi, bi in zip(y, rhs)), Fraction(0))
        return SectionResult(False, True, signaling, farkas=y, margin=float(margin))

    A = prob.dense().astype(np.float64)
    A = np.vstack([A, np.ones((1, prob.n_assign))])
    b = np.concatenate([np.array([float(v) for v in p]), [1.0]])
    n_r = A.shape[0]
    c = np.concatenate([np.zeros(prob.n_assign), np.ones(n_r)])
    res = linprog(c, A_eq=np.hstack([A, np.eye(n_r)]), b_eq=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    if res.fun <= FEAS_TOL:
        lam = np.clip(res.x[: prob.n_assign], 0.0, None)
        lam = lam / lam.sum()
        dist = {prob.assignments[g]: float(lam[g]) for g in range(prob.n_assign) if lam[g] > 0}
        return SectionResult(True, False, signaling, distribution=dist)
    y = np.asarray(res.eqlin.marginals, dtype=np.float64)
    return SectionResult(False, False, signaling, farkas=y.tolist(), margin=float(y @ b))


def certificate_residual(m: EmpiricalModel, result: SectionResult) -> float:
    """How far a certificate is from proving its verdict (0 or negative = proves it).

    Feasible: max |marginal of the global distribution - table entry|.
    Infeasible: max(max_g (y.A)_g, -y.p); must be <= 0 for a strict separation.
    """
    prob = section_problem(m.scenario)
    p = np.array([float(v) for v in m.probability_vector()])
    if result.feasible:
        idx = {g: i for i, g in enumerate(prob.assignments)}
        w = np.zeros(prob.n_assign)
        for g, v in result.distribution.items():
            w[idx[g]] = float(v)
        marg = kernels.marginalize(w, prob.rows, prob.n_rows)
        return float(max(np.max(np.abs(marg - p)), abs(w.sum() - 1.0)))
    y = np.array([float(v) for v in result.farkas])
    A = np.vstack([prob.dense().astype(np.float64), np.ones((1, prob.n_assign))])
    b = np.concatenate([p, [1.0]])
    return float(max(np.max(y @ A), -(y @ b)))


def certificate_holds_exactly(m: EmpiricalModel, result: SectionResult) -> bool:
    """Exact-arithmetic check of a rational certificate."""
    prob = section_problem(m.scenario)
    p = m.probability_vector()
    A = prob.dense()
    if result.feasible:
        idx = {g: i for i, g in enumerate(prob.assignments)}
        w = [Fraction(0)] * prob.n_assign
        for g, v in result.distribution.items():
            w[idx[g]] = Fraction(v)
        if any(v < 0 for v in w) or sum(w) != 1:
            return False
        return all(sum((w[g] for g in range(prob.n_assign) if A[r, g]), Fraction(0)) == p[r]
                   for r in range(prob.n_rows))
    y = [Fraction(v) for v in result.farkas]
    for g in range(prob.n_assign):
        if sum((y[r] for r in range(prob.n_rows) if A[r, g]), Fraction(0)) + y[-1] > 0:
            return False
    return sum((y[r] * p[r] for r in range(prob.n_rows)), Fraction(0)) + y[-1] > 0


# -- contextual fraction --------------------------------------------------------

def contextual_fraction(m: EmpiricalModel, force_float: bool = False) -> float | Fraction:
    """1 - max total weight of a noncontextual sub-model below ``m``."""
    prob = section_problem(m.scenario)
    p = m.probability_vector()
    if m.exact and not force_float:
        A = prob.dense()
        rows = [[Fraction(int(v)) for v in A[r]] for r in range(prob.n_rows)]
        res = maximize_packing(rows, [Fraction(v) for v in p], [Fraction(1)] * prob.n_assign)
        return 1 - res.objective
    A = prob.dense().astype(np.float64)
    b = np.array([float(v) for v in p])
    res = linprog(-np.ones(prob.n_assign), A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return float(min(1.0, max(0.0, 1.0 + res.fun)))


# -- CHSH ---------------------------------------------------------------------

def bell_roles(sc: MeasurementScenario) -> tuple[tuple[str, str], tuple[str, str], dict]:
    """((a, a'), (b, b'), pair -> context index) for a 2x2 Bell scenario.

    Singleton contexts are allowed alongside the four cross pairs.
    """
    pairs = [(i, c) for i, c in enumerate(sc.contexts) if len(c) == 2]
    extra = [c for c in sc.contexts if len(c) not in (1, 2)]
    if len(pairs) != 4 or extra or len(sc.observables) != 4:
        raise StructuralError("not a 2x2 Bell scenario: need 4 observables and 4 two-observable contexts")
    alice = {c[0] for _, c in pairs}
    bob = {c[1] for _, c in pairs}
    if len(alice) != 2 or len(bob) != 2 or alice & bob:
        raise StructuralError("not a 2x2 Bell scenario: contexts must pair each of two "
                              "observables with each of two others")
    order = sc.observable_ids
    a = tuple(sorted(alice, key=order.index))
    b = tuple(sorted(bob, key=order.index))
    where = {c: i for i, c in pairs}
    if set(where) != {(x, y) for x in a for y in b}:
        raise StructuralError("not a 2x2 Bell scenario: missing cross pair")
    for x in a + b:
        if set(sc.observables[x]) != {1, -1}:
            raise StructuralError(f"observable {x!r} must have outcomes +1/-1")
    return a, b, where


def correlators(m: EmpiricalModel) -> dict[tuple[str, str], float]:
    a, b, where = bell_roles(m.scenario)
    out = {}
    for x in a:
        for y in b:
            t = m.tables[where[(x, y)]]
            out[(x, y)] = sum(o1 * o2 * p for (o1, o2), p in t.items())
    return out


def chsh_value(m: EmpiricalModel):
    """E(a,b) + E(a,b') + E(a',b) - E(a',b')."""
    a, b, _ = bell_roles(m.scenario)
    e = correlators(m)
    return e[(a[0], b[0])] + e[(a[0], b[1])] + e[(a[1], b[0])] - e[(a[1], b[1])]


# -- combined report ----------------------------------------------------------------

@dataclass(frozen=True)
class ContextualityReport:
    no_disturbance: DisturbanceReport
    section: SectionResult
    contextual_fraction: Any = None
    extras: dict = field(default_factory=dict)

    @property
    def noncontextual(self) -> bool:
        return self.section.feasible

    def to_json(self) -> dict:
        out = {
            "verdict": self.noncontextual,
            "noncontextual": self.noncontextual,
            "no_disturbance": self.no_disturbance.to_json(),
            "global_section": self.section.to_json(),
        }
        if self.contextual_fraction is not None:
            cf = self.contextual_fraction
            out["contextual_fraction"] = str(cf) if isinstance(cf, Fraction) else float(cf)
        out.update(self.extras)
        return out


def analyze(m: EmpiricalModel, with_fraction: bool = True) -> ContextualityReport:
    nd = check_no_disturbance(m)
    sec = has_global_section(m)
    cf = None
    if with_fraction and nd.passes:
        cf = contextual_fraction(m)
    return ContextualityReport(nd, sec, cf)
