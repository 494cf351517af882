"""Deterministic fixture corpora shared by the unit and acceptance tests."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

from qframe.channel import (
    CCCDCandidate,
    Classification,
    ClassifierDiagram,
    Infomorphism,
    build_cccd,
    classification,
    trivial_cccd,
)
from qframe.errors import NonCodeployableError

from oracles import all_infomorphisms


def pool() -> list[Classification]:
    """Every classification with 1-2 tokens and 1-2 types, one per incidence."""
    out = []
    for nt in (1, 2):
        for ny in (1, 2):
            for bits in itertools.product((0, 1), repeat=nt * ny):
                inc = np.array(bits, dtype=bool).reshape(nt, ny)
                out.append((nt, ny, inc))
    return [classification(f"c{i}", [f"t{k}" for k in range(nt)], [f"y{k}" for k in range(ny)], inc)
            for i, (nt, ny, inc) in enumerate(out)]


BIT = classification("bit", ["0", "1"], ["p", "q"], [[1, 0], [0, 1]])


def _renamed(c: Classification, new_id: str) -> Classification:
    return c.renamed(new_id)


def _edge(rng, src, tgt, name):
    opts = all_infomorphisms(src, tgt)
    if not opts:
        return None
    tm, km = opts[rng.randrange(len(opts))]
    return Infomorphism(src, tgt, tm, km, name=name)


def _shape(rng, shape, nodes):
    ids = ["A", "B", "C", "D"]
    ns = [_renamed(c, ids[i]) for i, c in enumerate(nodes)]
    edges_by_shape = {
        "discrete": [],
        "edge": [(0, 1)],
        "span": [(2, 0), (2, 1)],
        "cospan": [(0, 2), (1, 2)],
        "chain": [(0, 1), (1, 2)],
        "parallel": [(0, 1), (0, 1)],
        "cycle": [(0, 1), (1, 0)],
        "loop": [(0, 0)],
    }[shape]
    edges = []
    for k, (s, t) in enumerate(edges_by_shape):
        e = _edge(rng, ns[s], ns[t], f"e{k}")
        if e is None:
            return None
        edges.append(e)
    used = sorted({i for st in edges_by_shape for i in st} | ({0, 1} if shape == "discrete" else set()))
    return ClassifierDiagram(tuple(ns[i] for i in used), tuple(edges))


@lru_cache(maxsize=None)
def diagram_corpus(seed: int = 11) -> tuple[tuple[str, ClassifierDiagram], ...]:
    """At least 20 small diagrams covering every shape, plus hand-built cycles."""
    rng = random.Random(seed)
    p = pool()
    shapes = ["discrete", "edge", "span", "cospan", "chain", "parallel", "cycle", "loop"]
    out = []
    for shape in shapes:
        made = 0
        tries = 0
        while made < 3 and tries < 200:
            tries += 1
            nodes = [p[rng.randrange(len(p))] for _ in range(3)]
            d = _shape(rng, shape, nodes)
            if d is not None:
                out.append((f"{shape}-{made}", d))
                made += 1
    b2 = BIT.renamed("bit2")
    swap = Infomorphism(BIT, b2, {"p": "q", "q": "p"}, {"0": "1", "1": "0"}, "swap")
    back = Infomorphism(b2, BIT, {"p": "q", "q": "p"}, {"0": "1", "1": "0"}, "back")
    same = Infomorphism(b2, BIT, {"p": "p", "q": "q"}, {"0": "0", "1": "1"}, "same")
    out.append(("cyclic-commuting", ClassifierDiagram((BIT, b2), (swap, back))))
    out.append(("cyclic-twisted", ClassifierDiagram((BIT, b2), (swap, same))))
    loop = Infomorphism(BIT, BIT, {"p": "q", "q": "p"}, {"0": "1", "1": "0"}, "flip")
    out.append(("self-loop-flip", ClassifierDiagram((BIT,), (loop,))))
    return tuple(out)


@lru_cache(maxsize=None)
def cccd_fixtures() -> tuple[tuple[str, CCCDCandidate], ...]:
    """Construct-then-verify fixtures: every corpus base whose core exists, plus trivial ones."""
    out = []
    for name, d in diagram_corpus():
        try:
            out.append((name, build_cccd(d, "core")))
        except NonCodeployableError:
            pass
    b2 = BIT.renamed("bit2")
    swap = Infomorphism(BIT, b2, {"p": "q", "q": "p"}, {"0": "1", "1": "0"}, "swap")
    out.append(("bit-iso-edge", build_cccd(ClassifierDiagram((BIT, b2), (swap,)), "core")))
    out.append(("two-bits-discrete", build_cccd(ClassifierDiagram((BIT, b2)), "core")))
    for c in pool()[::3]:
        out.append((f"trivial-{c.id}", trivial_cccd(c, "core")))
    out.append(("trivial-bit", trivial_cccd(BIT, "core")))
    return tuple(out)


def _replace_entry(m: dict, key, choices):
    for alt in choices:
        if alt != m[key]:
            new = dict(m)
            new[key] = alt
            return new
    return None


def mutants(c: CCCDCandidate) -> list[tuple[str, CCCDCandidate]]:
    """Single-entry perturbations of the arrows and single-bit flips of the core."""
    out = []
    for side in ("incoming", "outgoing"):
        arrows = list(getattr(c, side))
        for i, f in enumerate(arrows):
            for key in sorted(f.type_map):
                new = _replace_entry(dict(f.type_map), key, f.target.types)
                if new is not None:
                    g = Infomorphism(f.source, f.target, new, f.token_map, f.name)
                    arr = tuple(arrows[:i] + [g] + arrows[i + 1:])
                    kw = {"incoming": c.incoming, "outgoing": c.outgoing, side: arr}
                    out.append((f"{side}[{i}].type[{key}]", CCCDCandidate(c.base, c.core, **kw)))
            for key in sorted(f.token_map):
                new = _replace_entry(dict(f.token_map), key, f.source.tokens)
                if new is not None:
                    g = Infomorphism(f.source, f.target, f.type_map, new, f.name)
                    arr = tuple(arrows[:i] + [g] + arrows[i + 1:])
                    kw = {"incoming": c.incoming, "outgoing": c.outgoing, side: arr}
                    out.append((f"{side}[{i}].token[{key}]", CCCDCandidate(c.base, c.core, **kw)))
    nt, ny = c.core.incidence.shape
    for r in range(nt):
        for k in range(ny):
            inc = c.core.incidence.copy()
            inc[r, k] = not inc[r, k]
            core = Classification(c.core.id, c.core.tokens, c.core.types, inc)
            inc_arrows = tuple(Infomorphism(f.source, core, f.type_map, f.token_map, f.name) for f in c.incoming)
            out_arrows = tuple(Infomorphism(core, h.target, h.type_map, h.token_map, h.name) for h in c.outgoing)
            out.append((f"core[{r},{k}]", CCCDCandidate(c.base, core, inc_arrows, out_arrows)))
    return out


# -- contextuality ----------------------------------------------------------------

def scenario_covers(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Every antichain of nonempty subsets of range(n) that covers range(n)."""
    subsets = [s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)]
    out = []
    for r in range(1, len(subsets) + 1):
        for fam in itertools.combinations(subsets, r):
            if any(set(a) < set(b) for a in fam for b in fam):
                continue
            if set().union(*fam) == set(range(n)):
                out.append(fam)
    return out


@lru_cache(maxsize=None)
def scenario_corpus():
    """All scenarios with 1-4 two-outcome observables (126 covers)."""
    from qframe.contextuality import MeasurementScenario

    out = []
    for n in range(1, 5):
        for fam in scenario_covers(n):
            obs = {f"o{i}": (1, -1) for i in range(n)}
            ctxs = tuple(tuple(f"o{i}" for i in f) for f in fam)
            out.append(MeasurementScenario(obs, ctxs))
    return tuple(out)


def _bloch(s: float, label: str = "1"):
    from qframe.quantum import PureState, SystemLayout

    return PureState(SystemLayout.qubits([label]), np.array([np.cos(s / 2), np.sin(s / 2)], dtype=complex))


def linkage_noncodeployable():
    """Same-sector single-observable frame pairs with a state the first measurement disturbs.

    For Bloch angle s and x-z plane angles a, b the sequential marginal of the
    second observable moves iff sin(a - s) sin(b - a) != 0.
    """
    from qframe.quantum import QRF, xz_observable

    angles = [(0.0, np.pi / 2, 0.0), (0.0, np.pi / 4, -np.pi / 4), (0.3, 1.1, 2.0), (0.0, np.pi / 3, np.pi),
              (np.pi / 2, 0.0, np.pi / 4), (1.0, 2.5, 0.2), (0.0, np.pi / 8, np.pi / 2), (2.0, 0.5, 1.5),
              (-1.0, 0.7, -0.4), (np.pi, np.pi / 4, np.pi / 2), (0.1, 3.0, 1.2), (0.0, -np.pi / 6, np.pi / 6)]
    out = []
    for k, (s, a, b) in enumerate(angles):
        q1 = QRF.uniform("P", [xz_observable(a, "1")])
        q2 = QRF.uniform("Q", [xz_observable(b, "1")])
        out.append((f"nc{k}", _bloch(s), q1, q2, (s, a, b)))
    return out


def linkage_codeployable():
    """Commuting frame pairs: disjoint sectors, shared commuting observables, product-state CHSH."""
    from qframe.quantum import QRF, SystemLayout, bell_state, pauli, product_state, xz_observable

    phi = bell_state()
    zero2 = product_state(SystemLayout.qubits(["1", "2"]), [0, 0])
    out = []
    for k, (a, b) in enumerate([(0.0, 0.0), (0.0, np.pi / 4), (np.pi / 2, -np.pi / 4), (1.0, 2.0)]):
        out.append((f"disjoint{k}", phi, QRF.uniform("P", [xz_observable(a, "1")]),
                    QRF.uniform("Q", [xz_observable(b, "2")])))
    out.append(("same-z", _bloch(0.7), QRF.uniform("P", [pauli("Z", ["1"])]), QRF.uniform("Q", [pauli("Z", ["1"])])))
    out.append(("zz-parity", phi, QRF.uniform("P", [pauli("ZZ", ["1", "2"]), pauli("XX", ["1", "2"])]),
                QRF.uniform("Q", [pauli("YY", ["1", "2"])])))
    for k, (a0, a1, b0, b1) in enumerate([(0.0, np.pi / 2, np.pi / 4, -np.pi / 4), (0.3, 1.9, 0.8, -0.6),
                                          (0.0, 1.0, 2.0, 3.0)]):
        q1 = QRF.uniform("P", [xz_observable(a0, "1"), xz_observable(a1, "1")])
        q2 = QRF.uniform("Q", [xz_observable(b0, "2"), xz_observable(b1, "2")])
        out.append((f"product-chsh{k}", zero2, q1, q2))
    plus = _bloch(np.pi / 2, "1").kron(_bloch(1.2, "2"))
    out.append(("product-plus", plus, QRF.uniform("P", [xz_observable(0.0, "1"), xz_observable(np.pi / 2, "1")]),
                QRF.uniform("Q", [xz_observable(0.4, "2"), xz_observable(2.0, "2")])))
    return out


def fixture(name: str, expect=None):
    """A bundled fixture document, parsed and validated."""
    from qframe import io
    from qframe.cli import read_input

    return io.loads(read_input("fixture:" + name).decode("utf-8"), expect)
