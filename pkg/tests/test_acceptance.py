"""One test per acceptance criterion, each at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary.
"""

import json
import math
import time

import numpy as np
import pytest

from qframe.channel import (
    Infomorphism,
    check_commutes,
    classification,
    colimit,
    limit,
    validate_infomorphism,
    verify_cccd,
)
from qframe.contextuality import (
    check_no_disturbance,
    chsh_scenario,
    chsh_value,
    contextual_fraction,
    deterministic_model,
    empirical_model_from_qrfs,
    has_global_section,
    pr_box,
)
from qframe.errors import ConstraintError
from qframe.experiments import (
    born_decoding_error,
    communication_error_rate,
    construct_adversarial_pair,
    run_bell,
    run_qfp_trial,
)
from qframe.experiments.bell import BellSetup
from qframe.experiments.qfp import DEFAULT_ORDER
from qframe.io import dumps
from qframe.quantum import (
    LN2,
    QRF,
    Observable,
    PureState,
    SystemLayout,
    bell_state,
    codeployable,
    commutator_norm,
    entanglement_entropy,
    landauer_cost,
    pauli,
    product_state,
)

import oracles
from corpus import (
    cccd_fixtures,
    diagram_corpus,
    fixture,
    linkage_codeployable,
    linkage_noncodeployable,
    mutants,
    pool,
    scenario_corpus,
)
from test_contextuality import models_for, oracle_feasible

TSIRELSON = 2 * math.sqrt(2)


@pytest.mark.criterion(1, "infomorphism validator matches exhaustive (b, alpha) check on 200 random cases, < 1 s")
def test_criterion_01_validator():
    rng = np.random.default_rng(20240601)
    cases = []
    for _ in range(200):
        def rand_cls(cid):
            nt, ny = rng.integers(1, 7, size=2)
            return classification(cid, [f"{cid}t{i}" for i in range(nt)], [f"{cid}y{j}" for j in range(ny)],
                                  rng.random((nt, ny)) < 0.5)
        a, b = rand_cls("A"), rand_cls("B")
        tm = {x: b.types[rng.integers(len(b.types))] for x in a.types}
        km = {x: a.tokens[rng.integers(len(a.tokens))] for x in b.tokens}
        cases.append(Infomorphism(a, b, tm, km))
    t0 = time.perf_counter()
    reports = [validate_infomorphism(f) for f in cases]
    elapsed = time.perf_counter() - t0
    agree = sum(
        set(r.violations) == set(oracles.fundamental_property(f.source, f.target, dict(f.type_map),
                                                              dict(f.token_map)))
        for f, r in zip(cases, reports)
    )
    assert agree == 200
    assert any(r.ok for r in reports) and any(not r.ok for r in reports)
    assert elapsed < 1.0


@pytest.mark.criterion(2, "colimit/limit universal properties on >= 20 diagrams; verify_cccd accepts fixtures, "
                          "rejects >= 20 mutants")
def test_criterion_02_universal_properties():
    corpus = diagram_corpus()
    assert len(corpus) >= 20
    names = [n for n, _ in corpus]
    for shape in ("span", "cospan", "chain", "cycle"):
        assert any(n.startswith(shape) for n in names)
    probes = pool()[::2]
    for _, d in corpus:
        assert check_commutes(d).commutes == oracles.walks_commute(
            {n.id: n for n in d.nodes}, [(e.source.id, e.target.id, e) for e in d.edges], 2 * len(d.edges) + 2)
        col, lim = colimit(d), limit(d)
        for x in probes:
            for g in oracles.cocones_into(d, x, cap=8):
                assert oracles.count_colimit_mediators(col, x, g) == 1
            for g in oracles.cones_from(d, x, cap=8):
                assert oracles.count_limit_mediators(lim, x, g) == 1
    n_mut = 0
    for _, c in cccd_fixtures():
        assert verify_cccd(c).verdict
        for _, m in mutants(c):
            assert not verify_cccd(m).verdict
            n_mut += 1
    assert n_mut >= 20


@pytest.mark.criterion(3, "entanglement entropy: |0000> 0, phi+ 1, phi+ (x) phi+ 2 at {1,3}|{2,4}; 8 qubits < 5 s")
def test_criterion_03_entropy():
    zero = product_state(SystemLayout.qubits(["1", "2", "3", "4"]), [0, 0, 0, 0])
    assert abs(entanglement_entropy(zero)[0] - 0.0) <= 1e-9
    assert abs(entanglement_entropy(bell_state())[0] - 1.0) <= 1e-9
    pair = bell_state("phi+", ["1", "2"]).kron(bell_state("phi+", ["3", "4"]))
    value, arg = entanglement_entropy(pair)
    assert abs(value - 2.0) <= 1e-9
    assert abs(oracles.max_bipartition_entropy(pair.amplitudes, 4) - 2.0) <= 1e-9
    assert arg == (("1", "3"), ("2", "4"))
    rng = np.random.default_rng(8)
    v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    s8 = PureState.from_amplitudes(SystemLayout.qubits([str(i) for i in range(1, 9)]), v, normalize=True)
    t0 = time.perf_counter()
    entanglement_entropy(s8)
    assert time.perf_counter() - t0 < 5.0


@pytest.mark.criterion(4, "commutator: same-qubit X/Z 2*sqrt(2) +- 1e-12, disjoint sectors exactly 0, "
                          "codeployable consistent")
def test_criterion_04_commutator():
    x1 = QRF.uniform("X1", [pauli("X", ["1"])])
    z1 = QRF.uniform("Z1", [pauli("Z", ["1"])])
    z2 = QRF.uniform("Z2", [pauli("Z", ["2"])])
    a = oracles.kron_embed(np.array([[0, 1], [1, 0]]), 0, 1)
    b = oracles.kron_embed(np.array([[1, 0], [0, -1]]), 0, 1)
    assert abs(np.linalg.norm(a @ b - b @ a) - TSIRELSON) <= 1e-12
    assert abs(commutator_norm(x1, z1) - TSIRELSON) <= 1e-12
    assert commutator_norm(x1, z2) == 0.0
    assert not codeployable(x1, z1) and codeployable(x1, z2)


@pytest.mark.criterion(5, "has_global_section matches polytope oracle on every <= 4 two-outcome scenario; "
                          "PR box infeasible; 16 deterministic CHSH models feasible, chsh <= 2")
def test_criterion_05_global_sections():
    for k, sc in enumerate(scenario_corpus()):
        for label, m in models_for(sc, k):
            assert has_global_section(m).feasible == oracle_feasible(m), (k, label)
    assert not has_global_section(pr_box()).feasible and not oracle_feasible(pr_box())
    sc = chsh_scenario()
    count = 0
    for bits in np.ndindex(2, 2, 2, 2):
        m = deterministic_model(sc, {x: (1, -1)[b] for x, b in zip(sc.observable_ids, bits)})
        assert has_global_section(m).feasible and oracle_feasible(m)
        assert abs(chsh_value(m)) <= 2
        count += 1
    assert count == 16


@pytest.mark.criterion(6, "model-from-qrfs on phi+ at Tsirelson settings: chsh 2*sqrt(2) +- 1e-9, no global section, "
                          "CF sqrt(2)-1 +- 1e-6")
def test_criterion_06_quantum_chsh():
    s = fixture("phi_plus")
    q1, q2 = fixture("qrf_a1"), fixture("qrf_a2")
    m = empirical_model_from_qrfs(s, q1, q2).model
    assert abs(chsh_value(m) - TSIRELSON) <= 1e-9
    assert not has_global_section(m).feasible
    assert abs(contextual_fraction(m) - (math.sqrt(2) - 1)) <= 1e-6
    assert abs(oracles.chsh_contextual_fraction(TSIRELSON) - (math.sqrt(2) - 1)) <= 1e-12


@pytest.mark.criterion(7, "linkage: >= 10 non-codeployable same-sector pairs disturb or lack a section; "
                          ">= 10 co-deployable pairs have a section")
def test_criterion_07_linkage():
    nc = linkage_noncodeployable()
    co = linkage_codeployable()
    assert len(nc) >= 10 and len(co) >= 10
    for name, state, q1, q2, _ in nc:
        assert q1.sector == q2.sector and not codeployable(q1, q2), name
        m = empirical_model_from_qrfs(state, q1, q2, mode="sequential").model
        assert (not check_no_disturbance(m).passes) or (not has_global_section(m).feasible), name
    for name, state, q1, q2 in co:
        assert codeployable(q1, q2), name
        for mode in ("joint", "sequential"):
            assert has_global_section(empirical_model_from_qrfs(state, q1, q2, mode=mode).model).feasible, name


@pytest.mark.criterion(8, "communication error sin^2(theta/2) +- 1e-12 on 32 points (Born path agrees); "
                          "chsh(0) = 2*sqrt(2), nonincreasing on [0, pi/2]")
def test_criterion_08_bell_harness():
    for t in np.linspace(0.0, math.pi, 32):
        expected = math.sin(t / 2) ** 2
        assert abs(communication_error_rate(t) - expected) <= 1e-12
        assert abs(born_decoding_error(t) - expected) <= 1e-12
    values = [run_bell(BellSetup(misalignment=float(t))).chsh for t in np.linspace(0.0, math.pi / 2, 32)]
    assert abs(values[0] - TSIRELSON) <= 1e-9
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


@pytest.mark.criterion(9, "QFP witness: dS = 1 bit, discrepancy <= 1e-12, false-negative; "
                          "every catalog pair re-verifies")
def test_criterion_09_qfp():
    inst = fixture("qfp_witness", "qfp-instance")
    trial = run_qfp_trial(inst)
    assert abs((trial.entropy_after - trial.entropy_before) - 1.0) <= 1e-9
    assert trial.discrepancy <= 1e-12
    assert trial.classification == "false-negative"
    frames, _ = fixture("agent_pauli12", "agent")
    for key in DEFAULT_ORDER:
        pair = construct_adversarial_pair(frames, key)
        assert pair.discrepancy <= 1e-9
        assert pair.delta_entropy >= 1.0 - 1e-9
        n = pair.first.layout.n
        assert abs(oracles.max_bipartition_entropy(pair.first.amplitudes, n)
                   - oracles.max_bipartition_entropy(pair.second.amplitudes, n)) >= 1.0 - 1e-9


@pytest.mark.criterion(10, "frame constraints rejected by name (beta < ln 2, sum alpha != 1, non-dichotomic); "
                           "landauer_cost(ln 2, 300, 1) = 2.871e-21 +- 1e-24")
def test_criterion_10_constraints():
    z = pauli("Z", ["1"])
    with pytest.raises(ConstraintError) as exc:
        QRF("q", ("1",), (z,), (1.0,), beta=0.5)
    assert exc.value.constraint == "beta >= ln 2"
    with pytest.raises(ConstraintError) as exc:
        QRF("q", ("1",), (z, z), (0.5, 0.6))
    assert exc.value.constraint == "sum(alpha_i) = 1"
    half = Observable(("1",), np.diag([1.0, 0.5]), dichotomic=False)
    with pytest.raises(ConstraintError) as exc:
        QRF("q", ("1",), (half,), (1.0,))
    assert exc.value.constraint == "eigenvalues in {-1,1}"
    assert abs(landauer_cost(LN2, 300, 1) - 2.871e-21) <= 1e-24


@pytest.mark.criterion(11, "shot-mode Bell at 1e5 shots, fixed seed: TV < 0.02, byte-identical reports")
def test_criterion_11_shots():
    setup = fixture("bell_shots")
    assert setup.shots == 100_000
    a, b = run_bell(setup), run_bell(setup)
    assert a.tv_distance < 0.02
    assert dumps(a.model) == dumps(b.model)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
