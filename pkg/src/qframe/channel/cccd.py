"""Cone-cocone diagrams: verification, construction and core merging.

The full diagram is drawn with two copies of the base: incoming arrows leave
the lower copy and enter the core, outgoing arrows leave the core and enter the
upper copy. Commutativity is checked on that quiver, so the composite
``f_i ; h_i`` is not required to be an identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NonCodeployableError, StructuralError
from .classification import (
    Classification,
    Infomorphism,
    compose,
    find_isomorphism,
    identity,
    is_isomorphism,
    validate_infomorphism,
)
from .diagram import ClassifierDiagram, check_commutes, commutes_quiver
from .universal import colimit, colimit_mediator, limit, limit_mediator


@dataclass(frozen=True)
class CCCDCandidate:
    base: ClassifierDiagram
    core: Classification
    incoming: tuple[Infomorphism, ...]
    outgoing: tuple[Infomorphism, ...]

    def __post_init__(self):
        object.__setattr__(self, "incoming", tuple(self.incoming))
        object.__setattr__(self, "outgoing", tuple(self.outgoing))

    def structure_problems(self) -> list[str]:
        problems = []
        ids = self.base.node_ids()
        if self.core.id in ids:
            problems.append(f"core id {self.core.id!r} collides with a base node")
        for kind, arrows, end in (("incoming", self.incoming, "source"), ("outgoing", self.outgoing, "target")):
            seen: dict[str, int] = {}
            for a in arrows:
                node = getattr(a, end)
                other = a.target if end == "source" else a.source
                if other != self.core:
                    problems.append(f"{kind} arrow {a.name!r} does not touch the core")
                if node.id not in ids or self.base.node(node.id) != node:
                    problems.append(f"{kind} arrow {a.name!r} has {end} {node.id!r} outside the base")
                    continue
                seen[node.id] = seen.get(node.id, 0) + 1
            for nid in ids:
                if seen.get(nid, 0) != 1:
                    problems.append(f"base node {nid!r} has {seen.get(nid, 0)} {kind} arrows (need exactly 1)")
        for a in self.base.edges + self.incoming + self.outgoing:
            missing = a.structure_problems()
            if missing:
                problems.extend(f"{a.name}: {m}" for m in missing)
            elif not validate_infomorphism(a).ok:
                problems.append(f"{a.name}: fundamental property fails")
        return problems

    def incoming_for(self, node_id: str) -> Infomorphism:
        return next(a for a in self.incoming if a.source.id == node_id)

    def outgoing_for(self, node_id: str) -> Infomorphism:
        return next(a for a in self.outgoing if a.target.id == node_id)


@dataclass(frozen=True)
class CCCDReport:
    structural: tuple[str, ...]
    commutes: bool
    core_is_colimit: bool
    core_is_limit: bool
    witness: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return not self.structural and self.commutes and self.core_is_colimit and self.core_is_limit

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "commutes": self.commutes,
            "core_is_colimit": self.core_is_colimit,
            "core_is_limit": self.core_is_limit,
        }
        if self.structural:
            out["structural"] = list(self.structural)
        if self.witness:
            out["witness"] = self.witness
        return out


def _full_quiver(c: CCCDCandidate):
    nodes = {("in", n.id): n for n in c.base.nodes}
    nodes.update({("out", n.id): n for n in c.base.nodes})
    nodes[("core",)] = c.core
    edges = []
    for e in c.base.edges:
        edges.append((("in", e.source.id), ("in", e.target.id), e))
        edges.append((("out", e.source.id), ("out", e.target.id), e))
    for f in c.incoming:
        edges.append((("in", f.source.id), ("core",), f))
    for h in c.outgoing:
        edges.append((("core",), ("out", h.target.id), h))

    def name(key):
        return c.core.id if key == ("core",) else f"{key[1]}@{key[0]}"

    return nodes, edges, name


def verify_cccd(c: CCCDCandidate) -> CCCDReport:
    problems = c.structure_problems()
    dangling = [p for p in problems if "fundamental property" not in p]
    if dangling:
        # maps cannot even be evaluated
        return CCCDReport(tuple(problems), False, False, False, {"structural": problems})

    witness: dict = {}
    nodes, edges, name = _full_quiver(c)
    comm = commutes_quiver(nodes, edges, node_name=name)
    if not comm.commutes:
        witness["commutativity"] = comm.witness

    col = colimit(c.base)
    u = colimit_mediator(col, c.core, {f.source.id: f for f in c.incoming})
    core_is_colimit = u is not None and is_isomorphism(u)
    if not core_is_colimit:
        witness["colimit"] = (
            "incoming arrows do not form a commuting cocone (no mediating map)"
            if u is None else _iso_failure(u)
        )

    lim = limit(c.base)
    v = limit_mediator(lim, c.core, {h.target.id: h for h in c.outgoing})
    core_is_limit = v is not None and is_isomorphism(v)
    if not core_is_limit:
        witness["limit"] = (
            "outgoing arrows do not form a commuting cone (no mediating map)"
            if v is None else _iso_failure(v)
        )
    return CCCDReport(tuple(problems), comm.commutes, core_is_colimit, core_is_limit, witness)


def _iso_failure(m: Infomorphism) -> dict:
    out = {"mediator": m.name}
    if len(set(m.type_map.values())) != len(m.source.types) or len(m.source.types) != len(m.target.types):
        out["types"] = "type map is not a bijection"
    if len(set(m.token_map.values())) != len(m.target.tokens) or len(m.source.tokens) != len(m.target.tokens):
        out["tokens"] = "token map is not a bijection"
    report = validate_infomorphism(m)
    if not report.ok:
        out["violations"] = [list(v) for v in report.violations]
    return out


def build_cccd(base: ClassifierDiagram, core_id: str = "core") -> CCCDCandidate:
    """Core = colimit of ``base`` with canonical incoming arrows; outgoing
    arrows are a limit cone transported along an isomorphism colimit -> limit.

    Raises NonCodeployableError when the base does not commute or when its
    colimit and limit are not isomorphic (no classification can be both).
    """
    comm = check_commutes(base)
    if not comm.commutes:
        raise NonCodeployableError("base diagram does not commute", witness=comm.witness)
    col = colimit(base, apex_id=core_id)
    lim = limit(base)
    iso = find_isomorphism(col.apex, lim.apex)
    if iso is None:
        raise NonCodeployableError(
            "colimit and limit of the base are not isomorphic; no common core exists",
            witness={"colimit_shape": list(col.apex.incidence.shape),
                     "limit_shape": list(lim.apex.incidence.shape)},
        )
    outgoing = tuple(compose(iso, lam, name=f"out_{lam.target.id}") for lam in lim.arrows)
    return CCCDCandidate(base, col.apex, col.arrows, outgoing)


def trivial_cccd(node: Classification, core_id: str | None = None) -> CCCDCandidate:
    """Single base node, core a copy of it, identity arrows both ways."""
    core = node.renamed(core_id or f"{node.id}'")
    f = Infomorphism(node, core, {t: t for t in node.types}, {t: t for t in node.tokens}, name=f"in_{node.id}")
    h = Infomorphism(core, node, {t: t for t in node.types}, {t: t for t in node.tokens}, name=f"out_{node.id}")
    return CCCDCandidate(ClassifierDiagram((node,)), core, (f,), (h,))


def combine_bases(d1: ClassifierDiagram, d2: ClassifierDiagram) -> ClassifierDiagram:
    """Union of two bases; nodes with equal ids are identified, equal edges deduplicated."""
    nodes = {n.id: n for n in d1.nodes}
    for n in d2.nodes:
        if n.id in nodes and nodes[n.id] != n:
            raise StructuralError(f"node id {n.id!r} names different classifications in the two bases")
        nodes.setdefault(n.id, n)
    edges = list(d1.edges)
    for e in d2.edges:
        if not any(e.same_maps(x) for x in edges):
            if any(e.name == x.name for x in edges):
                e = Infomorphism(e.source, e.target, e.type_map, e.token_map, name=e.name + "'")
            edges.append(e)
    return ClassifierDiagram(tuple(nodes.values()), tuple(edges))


def merge_cores(c1: CCCDCandidate, c2: CCCDCandidate, core_id: str | None = None) -> CCCDCandidate:
    """Common core over the combined base, or NonCodeployableError with witness."""
    for c in (c1, c2):
        rep = verify_cccd(c)
        if not rep.verdict:
            raise StructuralError(f"input candidate with core {c.core.id!r} is not a verified CCCD",
                                  witness=rep.to_json())
    base = combine_bases(c1.base, c2.base)
    merged = build_cccd(base, core_id=core_id or f"{c1.core.id}+{c2.core.id}")
    rep = verify_cccd(merged)
    if not rep.verdict:
        raise NonCodeployableError("merged candidate fails verification", witness=rep.to_json())
    return merged


__all__ = [
    "CCCDCandidate",
    "CCCDReport",
    "build_cccd",
    "combine_bases",
    "identity",
    "merge_cores",
    "trivial_cccd",
    "verify_cccd",
]
