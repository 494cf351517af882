"""Diagrams of classifications and their commutativity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Sequence

from ..errors import StructuralError
from .classification import Classification, Infomorphism


@dataclass(frozen=True)
class ClassifierDiagram:
    """A quiver whose vertices are classifications and whose arrows are infomorphisms."""

    nodes: tuple[Classification, ...]
    edges: tuple[Infomorphism, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        by_id = {}
        for n in self.nodes:
            if n.id in by_id:
                raise StructuralError(f"duplicate node id {n.id!r}")
            by_id[n.id] = n
        for e in self.edges:
            for end, role in ((e.source, "source"), (e.target, "target")):
                if by_id.get(end.id) != end:
                    raise StructuralError(f"edge {e.name!r}: {role} {end.id!r} is not a node of the diagram")

    def node(self, node_id: str) -> Classification:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]


@dataclass(frozen=True)
class CommutativityReport:
    commutes: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.commutes}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# A composite is identified by its action on indices:
# (start type index -> end type index, end token index -> start token index).
_Sig = tuple[tuple[int, ...], tuple[int, ...]]


def _edge_signature(e: Infomorphism) -> _Sig:
    type_idx, token_idx = e.index_arrays()
    return tuple(type_idx.tolist()), tuple(token_idx.tolist())


def _disagreement(start: Classification, end: Classification, s1: _Sig, s2: _Sig) -> dict:
    for i, (x, y) in enumerate(zip(s1[0], s2[0])):
        if x != y:
            return {"kind": "type", "element": start.types[i],
                    "images": [end.types[x], end.types[y]]}
    for i, (x, y) in enumerate(zip(s1[1], s2[1])):
        if x != y:
            return {"kind": "token", "element": end.tokens[i],
                    "images": [start.tokens[x], start.tokens[y]]}
    raise AssertionError("signatures differ but no element disagrees")


def commutes_quiver(
    nodes: dict[Hashable, Classification],
    edges: Sequence[tuple[Hashable, Hashable, Infomorphism]],
    node_name=str,
) -> CommutativityReport:
    """Compare every pair of walks with common endpoints.

    Walks include the empty walk at each vertex, so a closed walk must compose
    to the identity. Walk length is capped at ``len(edges)``; composites are
    deduplicated per endpoint, which keeps the search finite on cyclic quivers
    while still seeing every composite reachable within the cap.
    """
    cap = len(edges)
    sigs = [(s, t, _edge_signature(e), e.name) for s, t, e in edges]
    out_edges: dict[Hashable, list] = {k: [] for k in nodes}
    for s, t, sig, name in sigs:
        out_edges[s].append((t, sig, name))

    for start, start_cls in nodes.items():
        ident: _Sig = (tuple(range(len(start_cls.types))), tuple(range(len(start_cls.tokens))))
        seen: dict[Hashable, dict[_Sig, list[str]]] = {start: {ident: []}}
        frontier = deque([(start, ident, [])])
        while frontier:
            here, sig, path = frontier.popleft()
            if len(path) >= cap:
                continue
            for nxt, (etyp, etok), name in out_edges[here]:
                new_sig = (tuple(etyp[i] for i in sig[0]), tuple(sig[1][j] for j in etok))
                at = seen.setdefault(nxt, {})
                if new_sig in at:
                    continue
                new_path = path + [name]
                if at:
                    other_sig, other_path = next(iter(at.items()))
                    return CommutativityReport(False, {
                        "start": node_name(start),
                        "end": node_name(nxt),
                        "paths": [other_path, new_path],
                        "disagreement": _disagreement(start_cls, nodes[nxt], other_sig, new_sig),
                    })
                at[new_sig] = new_path
                frontier.append((nxt, new_sig, new_path))
    return CommutativityReport(True)


def check_commutes(d: ClassifierDiagram) -> CommutativityReport:
    """Verdict plus the first pair of disagreeing parallel paths."""
    nodes = {n.id: n for n in d.nodes}
    return commutes_quiver(nodes, [(e.source.id, e.target.id, e) for e in d.edges])
