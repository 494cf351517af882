"""Regenerate the bundled JSON fixtures under src/qframe/fixtures."""

from __future__ import annotations

import json
import math
from pathlib import Path

from qframe import io
from qframe.channel import ClassifierDiagram, Infomorphism, build_cccd, classification
from qframe.contextuality import empirical_model_from_qrfs, pr_box
from qframe.experiments import BellSetup, TSIRELSON_A, TSIRELSON_B, observer_frames
from qframe.quantum import QRF, PureState, SystemLayout, bell_state, pauli, product_state

OUT = Path(__file__).resolve().parent.parent / "src" / "qframe" / "fixtures"


def write(name: str, doc: dict) -> None:
    (OUT / f"{name}.json").write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    bit = classification("bit", ["0", "1"], ["p", "q"], [[1, 0], [0, 1]])
    bit2 = classification("bit2", ["0", "1"], ["p", "q"], [[1, 0], [0, 1]])
    swap = Infomorphism(bit, bit2, {"p": "q", "q": "p"}, {"0": "1", "1": "0"}, "swap")
    base = ClassifierDiagram((bit, bit2), (swap,))
    write("bit_swap_diagram", io.to_json(base))
    write("bit_swap_infomorphism", io.to_json(swap))
    write("bit_swap_cccd", io.to_json(build_cccd(base, "core")))
    write("bit_cccd", io.to_json(build_cccd(ClassifierDiagram((bit,)), "core")))

    write("zero4", {"kind": "state", "version": 1, "labels": ["1", "2", "3", "4"], "basis": [0, 0, 0, 0]})
    write("phi_plus", io.to_json(bell_state()))
    write("phi_plus_pair", io.to_json(bell_state("phi+", ["1", "2"]).kron(bell_state("phi+", ["3", "4"]))))

    setup = BellSetup()
    a1, a2 = observer_frames(setup)
    write("qrf_a1", io.to_json(a1))
    write("qrf_a2", io.to_json(a2))
    write("qrf_x1", io.to_json(QRF.uniform("X1", [pauli("X", ["1"])])))
    write("qrf_z1", io.to_json(QRF.uniform("Z1", [pauli("Z", ["1"])])))
    write("qrf_z2", io.to_json(QRF.uniform("Z2", [pauli("Z", ["2"])])))
    write("tsirelson_model", io.to_json(empirical_model_from_qrfs(setup.state, a1, a2).model))
    write("pr_box", io.to_json(pr_box()))

    write("bell_tsirelson", {"kind": "bell-setup", "version": 1,
                             "a_settings": list(TSIRELSON_A), "b_settings": list(TSIRELSON_B)})
    write("bell_shots", {"kind": "bell-setup", "version": 1, "a_settings": list(TSIRELSON_A),
                         "b_settings": list(TSIRELSON_B), "shots": 100000, "seed": 2024})
    write("bell_quarter_turn", {"kind": "bell-setup", "version": 1, "a_settings": list(TSIRELSON_A),
                                "b_settings": list(TSIRELSON_B), "misalignment": math.pi / 4})

    words = [a + b for a in "IXYZ" for b in "IXYZ" if a + b != "II"]
    comps = [{"id": f"P{w}", "qrf": {"kind": "qrf", "id": f"P{w}", "sector": ["1", "2"],
                                     "observables": [{"pauli": w, "sector": ["1", "2"]}]}} for w in words]
    env = {"kind": "state", "version": 1, "labels": ["1", "2", "3", "4"],
           "amplitudes": io.state_to_json(bell_state().kron(product_state(SystemLayout.qubits(["3", "4"]), [0, 0])))["amplitudes"]}
    write("qfp_witness", {"kind": "qfp-instance", "version": 1, "state": env, "components": comps,
                          "action": {"targets": ["3", "4"],
                                     "gates": [{"gate": "H", "labels": ["3"]}, {"gate": "CNOT", "labels": ["3", "4"]}]}})
    write("agent_pauli12", {"kind": "agent", "version": 1, "frames": [c["qrf"] for c in comps]})
    write("agent_z1_ghz", {"kind": "agent", "version": 1, "catalog": "ghz-vs-bell",
                           "frames": [{"kind": "qrf", "id": "Z1", "observables": [{"pauli": "Z", "sector": ["1"]}]}]})
    write("thermo_phi_plus", {"kind": "thermo", "version": 1, "state": io.to_json(bell_state()),
                              "epsilon": 0.1, "seed": 7, "trials": 16})


if __name__ == "__main__":
    main()
