"""JSON documents for every domain type.

Each document carries ``"kind"`` and ``"version"``; structure is checked
against the shipped JSON Schema first, then domain invariants are enforced by
the constructors. Both failure kinds surface as :class:`SchemaError` with JSON
pointers. Complex numbers are ``[re, im]`` pairs; exact probabilities are
strings (``"0.25"`` or ``"1/3"``); outcome tuples become comma-joined keys.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np

from .channel import CCCDCandidate, Classification, ClassifierDiagram, Infomorphism
from .contextuality import EmpiricalModel, MeasurementScenario
from .errors import ConstraintError, QFrameError, SchemaError, StructuralError
from .experiments import BellSetup, QFPInstance
from .quantum import QRF, DensityMatrix, Observable, PureState, SystemLayout, pauli
from .quantum.gates import GATES, chain

VERSION = 1
SCHEMA_FILE = "qframe.v1.json"


# -- schema ------------------------------------------------------------------

@lru_cache(maxsize=None)
def schema_root() -> dict:
    text = resources.files("qframe").joinpath("schemas", SCHEMA_FILE).read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(kind: str):
    root = schema_root()
    if kind not in root["$defs"]:
        raise KeyError(kind)
    schema = {"$defs": root["$defs"], "$ref": f"#/$defs/{kind}"}
    return jsonschema.Draft202012Validator(schema)


def _pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def schema_violations(doc: Any, kind: str) -> list[tuple[str, str]]:
    errs = sorted(_validator(kind).iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    return [(_pointer(e.absolute_path), e.message) for e in errs]


def _guard(ptr: str, fn: Callable, *args, **kwargs):
    """Run a domain constructor, re-raising invariant failures with a pointer."""
    try:
        return fn(*args, **kwargs)
    except (StructuralError, ConstraintError) as exc:
        w = exc.witness if isinstance(exc.witness, dict) else {}
        if "entry" in w:
            ptr += "".join(f"/{i}" for i in w["entry"])
        err = SchemaError([(ptr, str(exc))])
        err.cause = exc
        raise err from exc


# -- scalars -----------------------------------------------------------------

def complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _cx(v) -> complex:
    return complex(v[0], v[1])


def vector_to_json(v: np.ndarray) -> list:
    return [complex_to_json(z) for z in np.asarray(v).ravel()]


def matrix_to_json(m: np.ndarray) -> list:
    return [[complex_to_json(z) for z in row] for row in np.asarray(m)]


def _vector(doc) -> np.ndarray:
    return np.array([_cx(v) for v in doc], dtype=np.complex128)


def _matrix(doc, ptr: str) -> np.ndarray:
    widths = {len(r) for r in doc}
    if len(widths) > 1:
        raise SchemaError([(ptr, "matrix rows have different lengths")])
    return np.array([[_cx(v) for v in row] for row in doc], dtype=np.complex128).reshape(len(doc), -1)


def prob_to_json(p) -> str | float:
    if isinstance(p, Fraction):
        d = p.denominator
        while d % 2 == 0:
            d //= 2
        while d % 5 == 0:
            d //= 5
        if d == 1:
            # terminating decimal, written without float rounding
            q = p.denominator
            k = 0
            while 10 ** k % q:
                k += 1
            digits = str(abs(p.numerator) * (10 ** k // q)).rjust(k + 1, "0")
            text = digits if k == 0 else digits[:-k] + "." + digits[-k:]
            return ("-" if p < 0 else "") + text
        return f"{p.numerator}/{p.denominator}"
    return float(p)


def _prob(v, ptr: str):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise SchemaError([(ptr, f"not a rational number: {v!r}")]) from None
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    return float(v)


def outcome_key(t: tuple) -> str:
    return ",".join(str(x) for x in t)


# -- channel types -------------------------------------------------------------

def classification_to_json(c: Classification) -> dict:
    return {
        "kind": "classification", "version": VERSION, "id": c.id,
        "tokens": list(c.tokens), "types": list(c.types),
        "incidence": c.incidence.astype(int).tolist(),
    }


def classification_from_json(doc: dict, ptr: str = "") -> Classification:
    inc = doc["incidence"]
    widths = {len(r) for r in inc}
    if len(widths) > 1:
        raise SchemaError([(ptr + "/incidence", "rows have different lengths")])
    arr = np.array(inc, dtype=bool).reshape(len(inc), len(doc["types"]) if not inc else -1)
    return _guard(ptr, Classification, doc["id"], tuple(doc["tokens"]), tuple(doc["types"]), arr)


def _maps_to_json(f: Infomorphism) -> dict:
    return {"name": f.name, "type_map": dict(f.type_map), "token_map": dict(f.token_map)}


def infomorphism_to_json(f: Infomorphism) -> dict:
    return {"kind": "infomorphism", "version": VERSION, "source": classification_to_json(f.source),
            "target": classification_to_json(f.target), **_maps_to_json(f)}


def infomorphism_from_json(doc: dict, ptr: str = "") -> Infomorphism:
    src = classification_from_json(doc["source"], ptr + "/source")
    tgt = classification_from_json(doc["target"], ptr + "/target")
    return _guard(ptr, Infomorphism, src, tgt, doc["type_map"], doc["token_map"], doc.get("name", ""))


def _edge_to_json(f: Infomorphism) -> dict:
    return {"source": f.source.id, "target": f.target.id, **_maps_to_json(f)}


def _edge_from_json(doc: dict, nodes: dict[str, Classification], ptr: str) -> Infomorphism:
    for end in ("source", "target"):
        if doc[end] not in nodes:
            raise SchemaError([(f"{ptr}/{end}", f"unknown node id {doc[end]!r}")])
    return _guard(ptr, Infomorphism, nodes[doc["source"]], nodes[doc["target"]],
                  doc["type_map"], doc["token_map"], doc.get("name", ""))


def diagram_to_json(d: ClassifierDiagram) -> dict:
    return {"kind": "diagram", "version": VERSION,
            "nodes": [classification_to_json(n) for n in d.nodes],
            "edges": [_edge_to_json(e) for e in d.edges]}


def _nodes(doc: list, ptr: str) -> dict[str, Classification]:
    out: dict[str, Classification] = {}
    for i, nd in enumerate(doc):
        c = classification_from_json(nd, f"{ptr}/{i}")
        if c.id in out:
            raise SchemaError([(f"{ptr}/{i}/id", f"duplicate node id {c.id!r}")])
        out[c.id] = c
    return out


def diagram_from_json(doc: dict, ptr: str = "") -> ClassifierDiagram:
    nodes = _nodes(doc["nodes"], ptr + "/nodes")
    edges = [_edge_from_json(e, nodes, f"{ptr}/edges/{i}") for i, e in enumerate(doc.get("edges", []))]
    return _guard(ptr, ClassifierDiagram, tuple(nodes.values()), tuple(edges))


def cccd_to_json(c: CCCDCandidate) -> dict:
    return {"kind": "cccd", "version": VERSION, "base": diagram_to_json(c.base),
            "core": classification_to_json(c.core),
            "incoming": [_edge_to_json(f) for f in c.incoming],
            "outgoing": [_edge_to_json(f) for f in c.outgoing]}


def cccd_from_json(doc: dict, ptr: str = "") -> CCCDCandidate:
    base = diagram_from_json(doc["base"], ptr + "/base")
    core = classification_from_json(doc["core"], ptr + "/core")
    nodes = {n.id: n for n in base.nodes}
    if core.id in nodes:
        raise SchemaError([(ptr + "/core/id", f"core id {core.id!r} clashes with a base node")])
    nodes[core.id] = core
    inc = [_edge_from_json(e, nodes, f"{ptr}/incoming/{i}") for i, e in enumerate(doc["incoming"])]
    out = [_edge_from_json(e, nodes, f"{ptr}/outgoing/{i}") for i, e in enumerate(doc["outgoing"])]
    return _guard(ptr, CCCDCandidate, base, core, tuple(inc), tuple(out))


# -- quantum types -------------------------------------------------------------

def layout_to_json(l: SystemLayout) -> dict:
    return {"labels": list(l.labels), "dims": list(l.dims)}


def _layout(doc: dict, ptr: str) -> SystemLayout:
    return _guard(ptr, SystemLayout, tuple(str(x) for x in doc["labels"]), tuple(doc.get("dims", ())))


def state_to_json(s: PureState) -> dict:
    return {"kind": "state", "version": VERSION, **layout_to_json(s.layout),
            "amplitudes": vector_to_json(s.amplitudes)}


def state_from_json(doc: dict, ptr: str = "") -> PureState:
    layout = _layout(doc, ptr)
    if "basis" in doc:
        return _guard(ptr + "/basis", PureState.basis, layout, doc["basis"])
    return _guard(ptr + "/amplitudes", PureState, layout, _vector(doc["amplitudes"]))


def density_to_json(r: DensityMatrix) -> dict:
    return {"kind": "density", "version": VERSION, **layout_to_json(r.layout), "matrix": matrix_to_json(r.matrix)}


def density_from_json(doc: dict, ptr: str = "") -> DensityMatrix:
    layout = _layout(doc, ptr)
    return _guard(ptr + "/matrix", DensityMatrix, layout, _matrix(doc["matrix"], ptr + "/matrix"))


def observable_to_json(o: Observable) -> dict:
    return {"sector": list(o.sector), "dims": list(o.dims), "dichotomic": o.dichotomic,
            "matrix": matrix_to_json(o.matrix)}


def observable_from_json(doc: dict, ptr: str = "") -> Observable:
    if "pauli" in doc:
        return _guard(ptr, pauli, doc["pauli"], doc["sector"])
    m = _matrix(doc["matrix"], ptr + "/matrix")
    return _guard(ptr + "/matrix", Observable, tuple(doc["sector"]), m,
                  doc.get("dichotomic", True), tuple(doc.get("dims", ())))


def qrf_to_json(q: QRF) -> dict:
    return {"kind": "qrf", "version": VERSION, "id": q.id, "sector": list(q.sector),
            "observables": [observable_to_json(o) for o in q.observables],
            "weights": list(q.weights), "beta": q.beta, "temperature": q.temperature}


def qrf_from_json(doc: dict, ptr: str = "") -> QRF:
    obs = tuple(observable_from_json(o, f"{ptr}/observables/{i}") for i, o in enumerate(doc["observables"]))
    n = len(obs)
    weights = doc.get("weights", [1.0 / n] * n)
    kw = {k: doc[k] for k in ("beta", "temperature") if k in doc}
    sector = doc.get("sector") or list(dict.fromkeys(l for o in obs for l in o.sector))
    return _guard(ptr, QRF, doc["id"], tuple(sector), obs, tuple(weights), **kw)


# -- contextuality -------------------------------------------------------------

def model_to_json(m: EmpiricalModel) -> dict:
    sc = m.scenario
    return {
        "kind": "model", "version": VERSION,
        "scenario": {
            "observables": {k: list(v) for k, v in sc.observables.items()},
            "contexts": [list(c) for c in sc.contexts],
        },
        "tables": {str(i): {outcome_key(k): prob_to_json(p) for k, p in t.items()} for i, t in enumerate(m.tables)},
    }


def model_from_json(doc: dict, ptr: str = "") -> EmpiricalModel:
    scd = doc["scenario"]
    sc = _guard(ptr + "/scenario", MeasurementScenario, {k: tuple(v) for k, v in scd["observables"].items()},
                tuple(tuple(c) for c in scd["contexts"]))
    expected = [str(i) for i in range(len(sc.contexts))]
    if sorted(doc["tables"], key=int) != expected:
        raise SchemaError([(ptr + "/tables", f"tables keyed {sorted(doc['tables'], key=int)}, "
                                             f"contexts need {expected}")])
    tables = []
    for i, ctx in enumerate(sc.contexts):
        t = doc["tables"][str(i)]
        lookup = [{str(o): o for o in sc.observables[x]} for x in ctx]
        table = {}
        for key, v in t.items():
            parts = key.split(",") if key else []
            p = f"{ptr}/tables/{i}/{_pointer([key])[1:]}"
            if len(parts) != len(ctx) or any(s not in lk for s, lk in zip(parts, lookup)):
                raise SchemaError([(p, f"key {key!r} is not an outcome tuple of context {list(ctx)}")])
            table[tuple(lk[s] for s, lk in zip(parts, lookup))] = _prob(v, p)
        tables.append(table)
    try:
        return EmpiricalModel(sc, tuple(tables))
    except ConstraintError as exc:
        w = exc.witness if isinstance(exc.witness, dict) else {}
        where = f"{ptr}/tables/{w['context']}" if "context" in w else ptr + "/tables"
        err = SchemaError([(where, str(exc))])
        err.cause = exc
        raise err from exc
    except StructuralError as exc:
        raise SchemaError([(ptr + "/tables", str(exc))]) from exc


# -- experiment descriptors ----------------------------------------------------

def bell_setup_to_json(b: BellSetup) -> dict:
    return {"kind": "bell-setup", "version": VERSION, "state": state_to_json(b.state),
            "a_settings": list(b.a_settings), "b_settings": list(b.b_settings),
            "misalignment": b.misalignment, "shots": b.shots, "seed": b.seed}


def bell_setup_from_json(doc: dict, ptr: str = "") -> BellSetup:
    kw: dict[str, Any] = {}
    if "state" in doc:
        kw["state"] = state_from_json(doc["state"], ptr + "/state")
    for k in ("a_settings", "b_settings"):
        if k in doc:
            kw[k] = tuple(doc[k])
    for k in ("misalignment", "shots", "seed"):
        if k in doc:
            kw[k] = doc[k]
    return _guard(ptr, BellSetup, **kw)


def qfp_instance_to_json(q: QFPInstance) -> dict:
    return {"kind": "qfp-instance", "version": VERSION, "state": state_to_json(q.state),
            "components": [{"id": c, "qrf": qrf_to_json(f)} for c, f in q.components],
            "action": {"targets": list(q.targets), "matrix": matrix_to_json(q.action)}}


def _action(doc: dict, ptr: str) -> np.ndarray:
    if "matrix" in doc:
        return _matrix(doc["matrix"], ptr + "/matrix")
    steps = []
    for i, st in enumerate(doc["gates"]):
        g = st["gate"]
        if g not in GATES:
            raise SchemaError([(f"{ptr}/gates/{i}/gate", f"unknown gate {g!r}; known: {sorted(GATES)}")])
        steps.append((GATES[g], [str(x) for x in st["labels"]]))
    return _guard(ptr + "/gates", chain, steps, [str(t) for t in doc["targets"]])


def qfp_instance_from_json(doc: dict, ptr: str = "") -> QFPInstance:
    state = state_from_json(doc["state"], ptr + "/state")
    comps = [(c["id"], qrf_from_json(c["qrf"], f"{ptr}/components/{i}/qrf")) for i, c in enumerate(doc["components"])]
    act = doc["action"]
    u = _action(act, ptr + "/action")
    try:
        return QFPInstance(state, tuple(comps), u, tuple(str(t) for t in act["targets"]))
    except QFrameError as exc:
        err = SchemaError([(ptr, str(exc))])
        err.cause = exc
        raise err from exc


def agent_to_json(frames, catalog: str | None = None) -> dict:
    out = {"kind": "agent", "version": VERSION, "frames": [qrf_to_json(q) for q in frames]}
    if catalog is not None:
        out["catalog"] = catalog
    return out


def agent_from_json(doc: dict, ptr: str = "") -> tuple[list[QRF], str | None]:
    frames = [qrf_from_json(q, f"{ptr}/frames/{i}") for i, q in enumerate(doc["frames"])]
    return frames, doc.get("catalog")


def thermo_to_json(state: PureState, epsilon: float, seed: int, trials: int, observables=None) -> dict:
    out = {"kind": "thermo", "version": VERSION, "state": state_to_json(state),
           "epsilon": epsilon, "seed": seed, "trials": trials}
    if observables is not None:
        out["observables"] = [observable_to_json(o) for o in observables]
    return out


def thermo_from_json(doc: dict, ptr: str = "") -> dict:
    out: dict[str, Any] = {"base": state_from_json(doc["state"], ptr + "/state"), "epsilon": doc["epsilon"]}
    for k in ("seed", "trials"):
        if k in doc:
            out[k] = doc[k]
    if "observables" in doc:
        out["observables"] = [observable_from_json(o, f"{ptr}/observables/{i}")
                              for i, o in enumerate(doc["observables"])]
    return out


# -- dispatch ------------------------------------------------------------------

PARSERS: dict[str, Callable[[dict, str], Any]] = {
    "classification": classification_from_json,
    "infomorphism": infomorphism_from_json,
    "diagram": diagram_from_json,
    "cccd": cccd_from_json,
    "state": state_from_json,
    "density": density_from_json,
    "qrf": qrf_from_json,
    "model": model_from_json,
    "bell-setup": bell_setup_from_json,
    "qfp-instance": qfp_instance_from_json,
    "agent": agent_from_json,
    "thermo": thermo_from_json,
}

SERIALIZERS: dict[type, Callable[[Any], dict]] = {
    Classification: classification_to_json,
    Infomorphism: infomorphism_to_json,
    ClassifierDiagram: diagram_to_json,
    CCCDCandidate: cccd_to_json,
    PureState: state_to_json,
    DensityMatrix: density_to_json,
    QRF: qrf_to_json,
    EmpiricalModel: model_to_json,
    BellSetup: bell_setup_to_json,
    QFPInstance: qfp_instance_to_json,
}


def to_json(x: Any) -> dict:
    try:
        return SERIALIZERS[type(x)](x)
    except KeyError:
        raise TypeError(f"no serializer for {type(x).__name__}") from None


def from_json(doc: Any, expect: str | tuple[str, ...] | None = None) -> Any:
    """Schema-check then build the domain value named by ``doc["kind"]``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("kind"), str):
        raise SchemaError([("/kind", "document must be an object with a string 'kind'")])
    kind = doc["kind"]
    if kind not in PARSERS:
        raise SchemaError([("/kind", f"unknown kind {kind!r}; known: {sorted(PARSERS)}")])
    allowed = (expect,) if isinstance(expect, str) else expect
    if allowed and kind not in allowed:
        raise SchemaError([("/kind", f"expected {' or '.join(allowed)}, got {kind!r}")])
    if doc.get("version", VERSION) != VERSION:
        raise SchemaError([("/version", f"unsupported version {doc['version']!r}; this build reads {VERSION}")])
    bad = schema_violations(doc, kind)
    if bad:
        raise SchemaError(bad)
    return PARSERS[kind](doc, "")


def dumps(x: Any) -> str:
    return json.dumps(to_json(x), sort_keys=True)


def loads(text: str, expect=None) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError([("", f"invalid JSON: {exc}")]) from exc
    return from_json(doc, expect)


def parse_and_validate(path: str | Path, expect=None) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError([("", f"cannot read {path}: {exc.strerror}")]) from exc
    return loads(text, expect)


# -- report emission -----------------------------------------------------------

def round_floats(x: Any, digits: int = 12) -> Any:
    """Round every float to ``digits`` significant digits; non-finite -> string."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if not math.isfinite(v):
            return str(v)
        r = float(f"{v:.{digits}g}")
        return 0.0 if r == 0 else r
    if isinstance(x, Fraction):
        return prob_to_json(x)
    if isinstance(x, complex):
        return [round_floats(x.real, digits), round_floats(x.imag, digits)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return round_floats(x.tolist(), digits)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else outcome_key(k): round_floats(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round_floats(v, digits) for v in x]
    raise TypeError(f"cannot emit {type(x).__name__}")
