"""Command-line front end.

Exit codes: 0 computed and affirmative, 1 computed and negative (contextual,
non-codeployable, misclassified trial, ...), 2 input error, 3 resource cap.
A report is always written. Input paths of the form ``fixture:NAME`` load a
bundled fixture.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__, io
from .channel import (
    check_commutes,
    colimit,
    limit,
    merge_cores,
    validate_infomorphism,
    verify_cccd,
)
from .contextuality import (
    analyze,
    check_no_disturbance,
    chsh_value,
    contextual_fraction,
    correlators,
    empirical_model_from_qrfs,
    has_global_section,
)
from .errors import (
    NoAdversarialFamilyError,
    NonCodeployableError,
    QFrameError,
    ResourceCapError,
    SchemaError,
)
from .experiments import construct_adversarial_pair, run_bell, run_qfp_trial, thermo_context_demo
from .quantum import (
    build_interaction_hamiltonian,
    commutator_norm,
    entanglement_entropy,
    partial_trace,
    von_neumann_entropy,
)
from .quantum.operators import COMMUTE_TOL

OK, NEGATIVE, INPUT_ERROR, RESOURCE_CAP = 0, 1, 2, 3
FIXTURE_PREFIX = "fixture:"


class Outcome(Exception):
    """Computed result that ends the command with a given exit code."""

    def __init__(self, code: int, payload: dict):
        super().__init__(code)
        self.code = code
        self.payload = payload


# -- inputs --------------------------------------------------------------------

def fixture_names() -> list[str]:
    root = resources.files("qframe").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_input(path: str) -> bytes:
    if path.startswith(FIXTURE_PREFIX):
        name = path[len(FIXTURE_PREFIX):]
        res = resources.files("qframe").joinpath("fixtures", name + ".json")
        if not res.is_file():
            raise SchemaError([("", f"no bundled fixture {name!r}; available: {fixture_names()}")])
        return res.read_bytes()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise SchemaError([("", f"cannot read {path}: {exc.strerror}")]) from exc


class Inputs:
    """Loads input documents and records their digests for provenance."""

    def __init__(self):
        self.records: list[dict] = []

    def load(self, path: str, expect=None) -> Any:
        rec = {"path": path, "sha256": None}
        self.records.append(rec)
        data = read_input(path)
        rec["sha256"] = hashlib.sha256(data).hexdigest()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            raise SchemaError([("", f"{path} is not UTF-8 text")]) from None
        return io.loads(text, expect)


# -- verbs ---------------------------------------------------------------------

def _verdict(ok: bool, payload: dict) -> dict:
    payload = dict(payload)
    payload["verdict"] = bool(ok)
    raise Outcome(OK if ok else NEGATIVE, payload)


def _cone_json(cone) -> dict:
    return {"apex": io.classification_to_json(cone.apex),
            "arrows": [io._edge_to_json(a) for a in cone.arrows]}


def cmd_validate_infomorphism(a, inp: Inputs):
    rep = validate_infomorphism(inp.load(a.inputs[0], "infomorphism"))
    _verdict(rep.ok, rep.to_json())


def cmd_check_diagram(a, inp):
    rep = check_commutes(inp.load(a.inputs[0], "diagram"))
    _verdict(rep.commutes, rep.to_json())


def cmd_colimit(a, inp):
    return {"colimit": _cone_json(colimit(inp.load(a.inputs[0], "diagram")))}


def cmd_limit(a, inp):
    return {"limit": _cone_json(limit(inp.load(a.inputs[0], "diagram")))}


def cmd_verify_cccd(a, inp):
    rep = verify_cccd(inp.load(a.inputs[0], "cccd"))
    _verdict(rep.verdict, rep.to_json())


def cmd_merge_cores(a, inp):
    c1 = inp.load(a.inputs[0], "cccd")
    c2 = inp.load(a.inputs[1], "cccd")
    try:
        merged = merge_cores(c1, c2)
    except NonCodeployableError as exc:
        _verdict(False, {"error": {"kind": "non-codeployable", "message": str(exc), "witness": exc.witness}})
    _verdict(True, {"merged": io.cccd_to_json(merged), "check": verify_cccd(merged).to_json()})


def cmd_hamiltonian(a, inp):
    q = inp.load(a.inputs[0], "qrf")
    h = build_interaction_hamiltonian(q)
    return {"sector": list(h.sector), "matrix": io.matrix_to_json(h.matrix)}


def cmd_commutator(a, inp):
    q1 = inp.load(a.inputs[0], "qrf")
    q2 = inp.load(a.inputs[1], "qrf")
    tol = a.tol if a.tol is not None else COMMUTE_TOL
    c = commutator_norm(q1, q2)
    _verdict(c < tol, {"commutator_norm": c, "tolerance": tol, "codeployable": c < tol})


def cmd_entropy(a, inp):
    s = inp.load(a.inputs[0], ("state", "density"))
    keep = a.keep.split(",") if a.keep else list(s.layout.labels)
    rho = partial_trace(s, keep)
    return {"entropy_bits": von_neumann_entropy(rho), "keep": keep}


def cmd_entanglement(a, inp):
    s = inp.load(a.inputs[0], "state")
    value, (left, right) = entanglement_entropy(s)
    return {"entanglement_entropy_bits": value, "bipartition": [list(left), list(right)]}


def cmd_check_model(a, inp):
    m = inp.load(a.inputs[0], "model")
    rep = check_no_disturbance(m, a.tol) if a.tol is not None else check_no_disturbance(m)
    _verdict(rep.passes, {"no_disturbance": rep.to_json()})


def cmd_contextual_fraction(a, inp):
    m = inp.load(a.inputs[0], "model")
    nd = check_no_disturbance(m)
    if not nd.passes:
        _verdict(False, {"no_disturbance": nd.to_json(),
                         "note": "model is signaling; the contextual fraction is undefined"})
    cf = contextual_fraction(m, force_float=a.float)
    _verdict(cf == 0, {"contextual_fraction": cf, "exact": not a.float and m.exact})


def cmd_chsh(a, inp):
    m = inp.load(a.inputs[0], "model")
    rep = analyze(m)
    e = correlators(m)
    _verdict(rep.noncontextual, {
        "chsh": chsh_value(m),
        "correlators": {f"E({x},{y})": v for (x, y), v in e.items()},
        "contextuality": rep.to_json(),
    })


def cmd_model_from_qrfs(a, inp):
    s = inp.load(a.inputs[0], "state")
    q1 = inp.load(a.inputs[1], "qrf")
    q2 = inp.load(a.inputs[2], "qrf")
    try:
        res = empirical_model_from_qrfs(s, q1, q2, mode=a.mode)
    except NonCodeployableError as exc:
        _verdict(False, {"error": {"kind": "non-codeployable", "message": str(exc), "witness": exc.witness}})
    rep = analyze(res.model)
    _verdict(rep.noncontextual, {"model": io.model_to_json(res.model), "note": res.note,
                                 "contextuality": rep.to_json()})


def cmd_bell(a, inp):
    setup = inp.load(a.inputs[0], "bell-setup")
    changes = {k: getattr(a, k) for k in ("shots", "seed", "misalignment") if getattr(a, k) is not None}
    if changes:
        from dataclasses import replace
        setup = replace(setup, **changes)
    rep = run_bell(setup)
    out = rep.to_json()
    out["model"] = io.model_to_json(rep.model)
    a.used_seed = setup.seed if setup.shots is not None else None
    _verdict(rep.contextuality.noncontextual, out)


def cmd_qfp_pair(a, inp):
    frames, catalog = inp.load(a.inputs[0], "agent")
    try:
        pair = construct_adversarial_pair(frames, a.catalog or catalog)
    except NoAdversarialFamilyError as exc:
        _verdict(False, {"error": {"kind": "no-adversarial-family", "message": str(exc), "witness": exc.witness}})
    out = pair.to_json()
    out["first"] = io.state_to_json(pair.first)
    out["second"] = io.state_to_json(pair.second)
    _verdict(out.pop("verdict"), out)


def cmd_qfp_trial(a, inp):
    trial = run_qfp_trial(inp.load(a.inputs[0], "qfp-instance"))
    out = trial.to_json()
    _verdict(out.pop("verdict"), out)


def cmd_thermo_demo(a, inp):
    kw = inp.load(a.inputs[0], "thermo")
    for k in ("epsilon", "seed", "trials"):
        if getattr(a, k, None) is not None:
            kw[k] = getattr(a, k)
    rep = thermo_context_demo(**kw)
    a.used_seed = rep.seed
    return rep.to_json()


# name -> (handler, input arity, help)
VERBS: dict[str, tuple[Callable, int, str]] = {
    "validate-infomorphism": (cmd_validate_infomorphism, 1, "check the fundamental property of an infomorphism"),
    "check-diagram": (cmd_check_diagram, 1, "check that a classifier diagram commutes"),
    "colimit": (cmd_colimit, 1, "colimit of a classifier diagram"),
    "limit": (cmd_limit, 1, "limit of a classifier diagram"),
    "verify-cccd": (cmd_verify_cccd, 1, "verify a cone-cocone diagram"),
    "merge-cores": (cmd_merge_cores, 2, "merge two cone-cocone diagrams"),
    "hamiltonian": (cmd_hamiltonian, 1, "interaction Hamiltonian of a reference frame"),
    "commutator": (cmd_commutator, 2, "max commutator norm between two frames"),
    "entropy": (cmd_entropy, 1, "von Neumann entropy of a (reduced) state"),
    "entanglement": (cmd_entanglement, 1, "entanglement entropy maximised over bipartitions"),
    "check-model": (cmd_check_model, 1, "no-disturbance check of an empirical model"),
    "contextual-fraction": (cmd_contextual_fraction, 1, "contextual fraction of an empirical model"),
    "chsh": (cmd_chsh, 1, "CHSH value and global-section analysis"),
    "model-from-qrfs": (cmd_model_from_qrfs, 3, "empirical model from STATE QRF1 QRF2"),
    "bell": (cmd_bell, 1, "Bell run with a misaligned second observer"),
    "qfp-pair": (cmd_qfp_pair, 1, "adversarial environment pair for an agent"),
    "qfp-trial": (cmd_qfp_trial, 1, "frame-problem trial with the naive strategy"),
    "thermo-demo": (cmd_thermo_demo, 1, "drift from an unmodeled thermal kick"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qframe", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qframe {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")
    for name, (_, arity, help_) in VERBS.items():
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("inputs", nargs=arity, metavar="INPUT", help="JSON file or fixture:NAME")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if name in ("commutator", "check-model"):
            sp.add_argument("--tol", type=float, help="tolerance override")
        if name == "contextual-fraction":
            sp.add_argument("--float", action="store_true", help="solve in floating point")
        if name == "entropy":
            sp.add_argument("--keep", help="comma-separated labels to keep (default: all)")
        if name == "model-from-qrfs":
            sp.add_argument("--mode", choices=("joint", "sequential"), default="joint")
        if name == "bell":
            sp.add_argument("--shots", type=int)
            sp.add_argument("--seed", type=int)
            sp.add_argument("--misalignment", type=float)
        if name == "qfp-pair":
            sp.add_argument("--catalog", help="catalog family key")
        if name == "thermo-demo":
            sp.add_argument("--epsilon", type=float)
            sp.add_argument("--seed", type=int)
            sp.add_argument("--trials", type=int)
    return p


def _error(kind: str, exc: Exception) -> dict:
    out: dict[str, Any] = {"kind": kind, "message": str(exc)}
    if isinstance(exc, SchemaError):
        out["violations"] = [{"pointer": p, "message": m} for p, m in exc.violations]
        cause = getattr(exc, "cause", None)
        if cause is not None and hasattr(cause, "constraint"):
            out["constraint"] = cause.constraint
    elif isinstance(exc, QFrameError):
        if getattr(exc, "constraint", None):
            out["constraint"] = exc.constraint
        if exc.witness is not None:
            out["witness"] = exc.witness
    return out


def dispatch(args: argparse.Namespace) -> tuple[int, dict]:
    handler = VERBS[args.verb][0]
    inp = Inputs()
    args.used_seed = None
    try:
        payload = handler(args, inp)
        code = OK
        payload = dict(payload or {})
        payload.setdefault("verdict", None)
    except Outcome as o:
        code, payload = o.code, o.payload
    except ResourceCapError as exc:
        code, payload = RESOURCE_CAP, {"verdict": None, "error": _error("resource-cap", exc)}
    except (SchemaError, QFrameError) as exc:
        code, payload = INPUT_ERROR, {"verdict": None, "error": _error("input", exc)}
    report = {"verb": args.verb, "exit_code": code, **payload}
    report["provenance"] = {
        "tool": "qframe",
        "version": __version__,
        "schema": io.SCHEMA_FILE,
        "inputs": inp.records,
        "seed": args.used_seed,
    }
    return code, io.round_floats(report)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [f"verb: {report['verb']}", f"exit_code: {report['exit_code']}", f"verdict: {report.get('verdict')}"]
    for k in sorted(report):
        if k in ("verb", "exit_code", "verdict", "provenance"):
            continue
        lines.append(f"{k}: {json.dumps(report[k], sort_keys=True)}")
    prov = report["provenance"]
    lines.append(f"provenance: qframe {prov['version']}, seed {prov['seed']}")
    for rec in prov["inputs"]:
        lines.append(f"  input {rec['path']} sha256 {rec['sha256']}")
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code, report = dispatch(args)
    text = render(report, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
