"""Colimits and limits of finite classification diagrams, with mediating maps.

Colimit: types are the disjoint union of node types glued along type maps;
tokens are families of node tokens compatible with every token map. The limit
is the dual construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classification import Classification, Infomorphism
from .diagram import ClassifierDiagram


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the earlier element as representative for stable naming
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _classes(d: ClassifierDiagram, kind: str) -> list[list[tuple[int, int]]]:
    """Equivalence classes of (node, element) generated by type maps ("types")
    or token maps ("tokens"), in first-appearance order."""
    pos = {n.id: i for i, n in enumerate(d.nodes)}
    elems = [(i, j) for i, n in enumerate(d.nodes)
             for j in range(len(n.types if kind == "types" else n.tokens))]
    uf = _UnionFind(elems)
    for e in d.edges:
        s, t = pos[e.source.id], pos[e.target.id]
        if kind == "types":
            for a, b in e.type_map.items():
                uf.union((s, e.source.type_index(a)), (t, e.target.type_index(b)))
        else:
            for b, a in e.token_map.items():
                uf.union((t, e.target.token_index(b)), (s, e.source.token_index(a)))
    groups: dict = {}
    for x in elems:
        groups.setdefault(uf.find(x), []).append(x)
    return list(groups.values())


def _families(d: ClassifierDiagram, kind: str) -> list[tuple[int, ...]]:
    """Compatible families of node tokens ("tokens") or node types ("types").

    Token families satisfy a_src = tokenMap(a_tgt); type families satisfy
    typeMap(a_src) = a_tgt. Enumerated by backtracking in node order.
    """
    n = len(d.nodes)
    pos = {c.id: i for i, c in enumerate(d.nodes)}
    sizes = [len(c.tokens if kind == "tokens" else c.types) for c in d.nodes]
    checks: list[list[tuple[int, int, dict]]] = [[] for _ in range(n)]
    for e in d.edges:
        s, t = pos[e.source.id], pos[e.target.id]
        if kind == "tokens":
            m = {e.target.token_index(b): e.source.token_index(a) for b, a in e.token_map.items()}
            # family[s] == m[family[t]]
            checks[max(s, t)].append((t, s, m))
        else:
            m = {e.source.type_index(a): e.target.type_index(b) for a, b in e.type_map.items()}
            # family[t] == m[family[s]]
            checks[max(s, t)].append((s, t, m))

    out: list[tuple[int, ...]] = []
    fam = [0] * n

    def rec(k):
        if k == n:
            out.append(tuple(fam))
            return
        for v in range(sizes[k]):
            fam[k] = v
            if all(fam[dst] == m[fam[src]] for src, dst, m in checks[k]):
                rec(k + 1)

    rec(0)
    return out


def _family_name(d: ClassifierDiagram, fam: tuple[int, ...], kind: str) -> str:
    parts = []
    for c, v in zip(d.nodes, fam):
        parts.append(f"{c.id}.{(c.tokens if kind == 'tokens' else c.types)[v]}")
    return "(" + ",".join(parts) + ")"


def _class_name(d: ClassifierDiagram, cls: list[tuple[int, int]], kind: str) -> str:
    names = [f"{d.nodes[i].id}.{(d.nodes[i].types if kind == 'types' else d.nodes[i].tokens)[j]}"
             for i, j in cls]
    return "[" + "=".join(names) + "]"


@dataclass(frozen=True)
class UniversalCone:
    """Apex plus one arrow per diagram node (into the apex for a colimit,
    out of it for a limit), in diagram node order."""

    apex: Classification
    arrows: tuple[Infomorphism, ...]
    kind: str  # "colimit" | "limit"

    def arrow_for(self, node_id: str) -> Infomorphism:
        for a in self.arrows:
            if (a.source if self.kind == "colimit" else a.target).id == node_id:
                return a
        raise KeyError(node_id)


def _check_edges(d: ClassifierDiagram) -> None:
    for e in d.edges:
        e.index_arrays()  # raises StructuralError on dangling identifiers


def colimit(d: ClassifierDiagram, apex_id: str | None = None) -> UniversalCone:
    _check_edges(d)
    apex_id = apex_id or "colim(" + ",".join(d.node_ids()) + ")"
    type_classes = _classes(d, "types")
    class_of = {x: k for k, cls in enumerate(type_classes) for x in cls}
    families = _families(d, "tokens")
    types = [_class_name(d, cls, "types") for cls in type_classes]
    tokens = [_family_name(d, fam, "tokens") for fam in families]
    inc = np.zeros((len(tokens), len(types)), dtype=bool)
    for r, fam in enumerate(families):
        for k, cls in enumerate(type_classes):
            i, j = cls[0]
            inc[r, k] = d.nodes[i].incidence[fam[i], j]
    apex = Classification(apex_id, tuple(tokens), tuple(types), inc)
    arrows = []
    for i, node in enumerate(d.nodes):
        type_map = {node.types[j]: types[class_of[(i, j)]] for j in range(len(node.types))}
        token_map = {tokens[r]: node.tokens[fam[i]] for r, fam in enumerate(families)}
        arrows.append(Infomorphism(node, apex, type_map, token_map, name=f"in_{node.id}"))
    return UniversalCone(apex, tuple(arrows), "colimit")


def limit(d: ClassifierDiagram, apex_id: str | None = None) -> UniversalCone:
    _check_edges(d)
    apex_id = apex_id or "lim(" + ",".join(d.node_ids()) + ")"
    token_classes = _classes(d, "tokens")
    class_of = {x: k for k, cls in enumerate(token_classes) for x in cls}
    families = _families(d, "types")
    types = [_family_name(d, fam, "types") for fam in families]
    tokens = [_class_name(d, cls, "tokens") for cls in token_classes]
    inc = np.zeros((len(tokens), len(types)), dtype=bool)
    for k, cls in enumerate(token_classes):
        i, j = cls[0]
        for r, fam in enumerate(families):
            inc[k, r] = d.nodes[i].incidence[j, fam[i]]
    apex = Classification(apex_id, tuple(tokens), tuple(types), inc)
    arrows = []
    for i, node in enumerate(d.nodes):
        type_map = {types[r]: node.types[fam[i]] for r, fam in enumerate(families)}
        token_map = {node.tokens[j]: tokens[class_of[(i, j)]] for j in range(len(node.tokens))}
        arrows.append(Infomorphism(apex, node, type_map, token_map, name=f"out_{node.id}"))
    return UniversalCone(apex, tuple(arrows), "limit")


def colimit_mediator(col: UniversalCone, apex: Classification,
                     arrows: dict[str, Infomorphism]) -> Infomorphism | None:
    """The unique ``u: col.apex -> apex`` with ``in_i ; u = arrows[i]``.

    ``arrows`` maps node id to an infomorphism node -> apex. Returns None when
    the cocone does not commute (no mediating map exists).
    """
    type_map: dict[str, str] = {}
    for canon in col.arrows:
        f = arrows[canon.source.id]
        for a, cls in canon.type_map.items():
            img = f.type_map[a]
            if type_map.setdefault(cls, img) != img:
                return None
    token_map: dict[str, str] = {}
    family_index = {}
    for tok in col.apex.tokens:
        family_index[tuple(c.token_map[tok] for c in col.arrows)] = tok
    for x in apex.tokens:
        fam = tuple(arrows[c.source.id].token_map[x] for c in col.arrows)
        if fam not in family_index:
            return None
        token_map[x] = family_index[fam]
    return Infomorphism(col.apex, apex, type_map, token_map, name=f"mediate_{col.apex.id}_{apex.id}")


def limit_mediator(lim: UniversalCone, apex: Classification,
                   arrows: dict[str, Infomorphism]) -> Infomorphism | None:
    """The unique ``v: apex -> lim.apex`` with ``v ; out_i = arrows[i]``."""
    family_index = {}
    for typ in lim.apex.types:
        family_index[tuple(c.type_map[typ] for c in lim.arrows)] = typ
    type_map: dict[str, str] = {}
    for t in apex.types:
        fam = tuple(arrows[c.target.id].type_map[t] for c in lim.arrows)
        if fam not in family_index:
            return None
        type_map[t] = family_index[fam]
    token_map: dict[str, str] = {}
    for canon in lim.arrows:
        h = arrows[canon.target.id]
        for b, cls in canon.token_map.items():
            img = h.token_map[b]
            if token_map.setdefault(cls, img) != img:
                return None
    return Infomorphism(apex, lim.apex, type_map, token_map, name=f"mediate_{apex.id}_{lim.apex.id}")
