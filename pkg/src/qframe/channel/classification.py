"""Finite classifications and infomorphisms."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .. import kernels
from ..errors import StructuralError


def _frozen_bool(matrix, shape: tuple[int, int]) -> np.ndarray:
    arr = np.array(matrix, dtype=bool)
    if arr.size == 0:
        arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Classification:
    """Tokens, types and a boolean incidence ``incidence[token, type]``."""

    id: str
    tokens: tuple[str, ...]
    types: tuple[str, ...]
    incidence: np.ndarray
    _tok_index: Mapping[str, int] = field(init=False, repr=False)
    _typ_index: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        tokens = tuple(str(t) for t in self.tokens)
        types = tuple(str(t) for t in self.types)
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "types", types)
        for kind, names in (("token", tokens), ("type", types)):
            dup = [n for n, k in Counter(names).items() if k > 1]
            if dup:
                raise StructuralError(f"classification {self.id!r}: duplicate {kind} identifiers {dup}")
        shape = (len(tokens), len(types))
        inc = _frozen_bool(self.incidence, shape)
        if inc.shape != shape:
            raise StructuralError(
                f"classification {self.id!r}: incidence shape {inc.shape} != {shape}"
            )
        object.__setattr__(self, "incidence", inc)
        object.__setattr__(self, "_tok_index", MappingProxyType({t: i for i, t in enumerate(tokens)}))
        object.__setattr__(self, "_typ_index", MappingProxyType({t: i for i, t in enumerate(types)}))

    def token_index(self, token: str) -> int:
        return self._tok_index[token]

    def type_index(self, typ: str) -> int:
        return self._typ_index[typ]

    def has_token(self, token: str) -> bool:
        return token in self._tok_index

    def has_type(self, typ: str) -> bool:
        return typ in self._typ_index

    def satisfies(self, token: str, typ: str) -> bool:
        return bool(self.incidence[self._tok_index[token], self._typ_index[typ]])

    def renamed(self, new_id: str) -> "Classification":
        return Classification(new_id, self.tokens, self.types, self.incidence)

    def __eq__(self, other):
        if not isinstance(other, Classification):
            return NotImplemented
        return (
            self.id == other.id
            and self.tokens == other.tokens
            and self.types == other.types
            and np.array_equal(self.incidence, other.incidence)
        )

    def __hash__(self):
        return hash((self.id, self.tokens, self.types, self.incidence.tobytes()))

    def __repr__(self):
        return f"Classification({self.id!r}, {len(self.tokens)} tokens, {len(self.types)} types)"


@dataclass(frozen=True, eq=False)
class Infomorphism:
    """``source -> target``: types map forward, tokens map backward."""

    source: Classification
    target: Classification
    type_map: Mapping[str, str]
    token_map: Mapping[str, str]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "type_map", MappingProxyType({str(k): str(v) for k, v in dict(self.type_map).items()}))
        object.__setattr__(self, "token_map", MappingProxyType({str(k): str(v) for k, v in dict(self.token_map).items()}))
        if not self.name:
            object.__setattr__(self, "name", f"{self.source.id}->{self.target.id}")

    def __eq__(self, other):
        if not isinstance(other, Infomorphism):
            return NotImplemented
        return self.same_maps(other) and self.name == other.name

    def same_maps(self, other: "Infomorphism") -> bool:
        """Equality of endpoints and maps, ignoring the edge name."""
        return (
            self.source == other.source
            and self.target == other.target
            and dict(self.type_map) == dict(other.type_map)
            and dict(self.token_map) == dict(other.token_map)
        )

    def __hash__(self):
        return hash((self.source.id, self.target.id, tuple(sorted(self.type_map.items())),
                     tuple(sorted(self.token_map.items()))))

    def __repr__(self):
        return f"Infomorphism({self.name!r})"

    def structure_problems(self) -> list[str]:
        """Dangling or missing identifiers in either map."""
        problems = []
        src, tgt = self.source, self.target
        for a in src.types:
            if a not in self.type_map:
                problems.append(f"typeMap missing source type {a!r}")
        for a, b in self.type_map.items():
            if not src.has_type(a):
                problems.append(f"typeMap key {a!r} is not a type of {src.id!r}")
            if not tgt.has_type(b):
                problems.append(f"typeMap value {b!r} is not a type of {tgt.id!r}")
        for t in tgt.tokens:
            if t not in self.token_map:
                problems.append(f"tokenMap missing target token {t!r}")
        for t, s in self.token_map.items():
            if not tgt.has_token(t):
                problems.append(f"tokenMap key {t!r} is not a token of {tgt.id!r}")
            if not src.has_token(s):
                problems.append(f"tokenMap value {s!r} is not a token of {src.id!r}")
        return problems

    def index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(type_idx[source type] -> target type, token_idx[target token] -> source token)."""
        problems = self.structure_problems()
        if problems:
            raise StructuralError(f"infomorphism {self.name!r}: " + "; ".join(problems), witness=problems)
        src, tgt = self.source, self.target
        type_idx = np.array([tgt.type_index(self.type_map[a]) for a in src.types], dtype=np.int64)
        token_idx = np.array([src.token_index(self.token_map[b]) for b in tgt.tokens], dtype=np.int64)
        return type_idx, token_idx


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        out = {"verdict": self.ok}
        if self.violations:
            out["witness"] = [{"token": b, "type": a} for b, a in self.violations]
        return out


def validate_infomorphism(f: Infomorphism) -> ValidationReport:
    """Check the fundamental property at every (target token, source type) pair.

    Raises StructuralError when a map is not total or names unknown elements.
    """
    type_idx, token_idx = f.index_arrays()
    mismatch = kernels.infomorphism_mismatch(
        f.source.incidence, f.target.incidence, type_idx, token_idx
    )
    bad = np.argwhere(mismatch)
    violations = tuple((f.target.tokens[b], f.source.types[a]) for b, a in bad)
    return ValidationReport(not violations, violations)


def is_valid(f: Infomorphism) -> bool:
    try:
        return validate_infomorphism(f).ok
    except StructuralError:
        return False


def identity(a: Classification) -> Infomorphism:
    return Infomorphism(a, a, {t: t for t in a.types}, {t: t for t in a.tokens}, name=f"id_{a.id}")


def compose(f: Infomorphism, g: Infomorphism, name: str | None = None) -> Infomorphism:
    """Diagrammatic composite ``f ; g`` (first f, then g)."""
    if f.target != g.source:
        raise StructuralError(
            f"cannot compose {f.name!r} then {g.name!r}: target {f.target.id!r} != source {g.source.id!r}"
        )
    for h in (f, g):
        problems = h.structure_problems()
        if problems:
            raise StructuralError(f"infomorphism {h.name!r}: " + "; ".join(problems), witness=problems)
    type_map = {a: g.type_map[f.type_map[a]] for a in f.source.types}
    token_map = {c: f.token_map[g.token_map[c]] for c in g.target.tokens}
    return Infomorphism(f.source, g.target, type_map, token_map, name=name or f"{f.name};{g.name}")


def is_isomorphism(f: Infomorphism) -> bool:
    if f.structure_problems():
        return False
    types_bij = len(f.source.types) == len(f.target.types) and len(set(f.type_map.values())) == len(f.source.types)
    tokens_bij = len(f.source.tokens) == len(f.target.tokens) and len(set(f.token_map.values())) == len(f.target.tokens)
    return types_bij and tokens_bij and validate_infomorphism(f).ok


def find_isomorphism(a: Classification, b: Classification) -> Infomorphism | None:
    """Exhaustive search for a classification isomorphism ``a -> b``.

    Type bijections are enumerated within column-degree classes; for each one
    the tokens are matched by identical permuted rows.
    """
    if a.incidence.shape != b.incidence.shape:
        return None
    A = a.incidence.astype(np.int8)
    B = b.incidence.astype(np.int8)
    if sorted(A.sum(axis=0)) != sorted(B.sum(axis=0)) or sorted(A.sum(axis=1)) != sorted(B.sum(axis=1)):
        return None
    n_typ = len(a.types)
    deg_a, deg_b = A.sum(axis=0), B.sum(axis=0)
    classes = sorted(set(deg_a.tolist()))
    groups_a = [[i for i in range(n_typ) if deg_a[i] == d] for d in classes]
    groups_b = [[j for j in range(n_typ) if deg_b[j] == d] for d in classes]
    rows_b: dict[bytes, list[int]] = {}
    for k in range(B.shape[0]):
        rows_b.setdefault(B[k].tobytes(), []).append(k)

    for choice in itertools.product(*(itertools.permutations(gb) for gb in groups_b)):
        perm = np.empty(n_typ, dtype=np.int64)  # a-type i -> b-type perm[i]
        for ga, gb in zip(groups_a, choice):
            for i, j in zip(ga, gb):
                perm[i] = j
        # row of a-token k expressed in b's column order
        inv = np.empty(n_typ, dtype=np.int64)
        inv[perm] = np.arange(n_typ)
        pools = {key: list(v) for key, v in rows_b.items()}
        token_pairs = []
        for k in range(A.shape[0]):
            key = A[k, inv].tobytes()
            pool = pools.get(key)
            if not pool:
                break
            token_pairs.append((pool.pop(0), k))
        else:
            type_map = {a.types[i]: b.types[perm[i]] for i in range(n_typ)}
            token_map = {b.tokens[kb]: a.tokens[ka] for kb, ka in token_pairs}
            return Infomorphism(a, b, type_map, token_map, name=f"iso_{a.id}_{b.id}")
    return None


def classification(id: str, tokens: Sequence[str], types: Sequence[str], incidence) -> Classification:
    """Convenience constructor accepting nested lists of 0/1 or bools."""
    inc = np.array(incidence, dtype=bool)
    if inc.size == 0:
        inc = np.zeros((len(tokens), len(types)), dtype=bool)
    return Classification(id, tuple(tokens), tuple(types), inc)
