import math

import numpy as np
import pytest

from qframe.errors import ConstraintError, NoAdversarialFamilyError, StructuralError
from qframe.experiments import (
    CATALOG,
    BellSetup,
    QFPInstance,
    bell_basis_measure,
    born_decoding_error,
    communication_error_rate,
    construct_adversarial_pair,
    drift_bound,
    generator,
    run_bell,
    run_qfp_trial,
    streams,
    thermo_context_demo,
    total_variation,
)
from qframe.experiments.qfp import DEFAULT_ORDER
from qframe.io import dumps
from qframe.quantum import QRF, SystemLayout, bell_state, pauli, product_state
from qframe.quantum.gates import H, X

import oracles
from corpus import fixture

GRID = np.linspace(0.0, math.pi, 32)
HALF_GRID = np.linspace(0.0, math.pi / 2, 32)


def born_error_oracle(theta):
    """P(decode != encode) with the decoder's +1 eigenvector rotated by theta about y."""
    plus = np.array([math.cos(theta / 2), math.sin(theta / 2)])
    minus = np.array([-math.sin(theta / 2), math.cos(theta / 2)])
    e0 = abs(minus @ np.array([1.0, 0.0])) ** 2
    e1 = abs(plus @ np.array([0.0, 1.0])) ** 2
    return 0.5 * (e0 + e1)


# -- Bell ---------------------------------------------------------------------------

@pytest.mark.parametrize("theta", GRID)
def test_communication_error_rate(theta):
    expected = math.sin(theta / 2) ** 2
    assert communication_error_rate(theta) == pytest.approx(expected, abs=1e-12)
    assert born_decoding_error(theta) == pytest.approx(expected, abs=1e-12)
    assert born_error_oracle(theta) == pytest.approx(expected, abs=1e-12)


def test_communication_error_fixed_points():
    assert communication_error_rate(0.0) == 0.0
    assert communication_error_rate(math.pi) == pytest.approx(1.0, abs=1e-15)
    assert communication_error_rate(math.pi / 2) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ConstraintError):
        communication_error_rate(4.0)


def test_tsirelson_chsh_and_contextuality():
    rep = run_bell(BellSetup())
    assert rep.chsh == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert not rep.contextuality.noncontextual
    assert rep.contextuality.contextual_fraction == pytest.approx(math.sqrt(2) - 1, abs=1e-6)
    for (x, y), e in rep.correlators.items():
        a = rep.setup.a_settings[int(x.split(":")[1])]
        b = rep.setup.b_settings[int(y.split(":")[1])]
        assert e == pytest.approx(oracles.tsirelson_correlator(a, b), abs=1e-12)


def test_chsh_is_nonincreasing_in_misalignment():
    values = [run_bell(BellSetup(misalignment=float(t))).chsh for t in HALF_GRID]
    assert values[0] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    # rotating A2 by t shifts every correlator to cos(a - b - t)
    for t, v in zip(HALF_GRID, values):
        expected = sum(s * math.cos(a - b - t) for s, a, b in [(1, 0, math.pi / 4), (1, 0, -math.pi / 4),
                                                               (1, math.pi / 2, math.pi / 4),
                                                               (-1, math.pi / 2, -math.pi / 4)])
        assert v == pytest.approx(expected, abs=1e-9)


def test_quarter_turn_is_below_tsirelson():
    assert run_bell(BellSetup(misalignment=math.pi / 4)).chsh < 2 * math.sqrt(2) - 1e-3


def test_product_state_is_local():
    rep = run_bell(BellSetup(state=product_state(SystemLayout.qubits(["1", "2"]), [0, 0])))
    assert rep.chsh <= 2 + 1e-12
    assert rep.contextuality.noncontextual


def test_bell_setup_invariants():
    with pytest.raises(ConstraintError):
        BellSetup(misalignment=-0.1)
    with pytest.raises(ConstraintError):
        BellSetup(a_settings=(math.inf, 0.0))
    with pytest.raises(StructuralError):
        BellSetup(state=product_state(SystemLayout.qubits(["1"]), [0]))


def test_shot_mode_is_close_and_reproducible():
    setup = fixture("bell_shots")
    assert setup.shots == 10 ** 5
    a = run_bell(setup)
    b = run_bell(setup)
    assert a.tv_distance < 0.02
    assert total_variation(a.model, a.exact_model) == a.tv_distance
    assert dumps(a.model) == dumps(b.model)
    assert a.to_json() == b.to_json()


def test_streams_are_independent_and_reproducible():
    x = [g.random(4) for g in streams(5, 3)]
    y = [g.random(4) for g in streams(5, 3)]
    assert all(np.array_equal(p, q) for p, q in zip(x, y))
    assert not np.array_equal(x[0], x[1])
    assert generator(1).random() == generator(1).random()


@pytest.mark.parametrize("kind", ["phi+", "phi-", "psi+", "psi-"])
def test_bell_basis_identifies_bell_states(kind):
    r = bell_basis_measure(bell_state(kind))
    assert r.distribution[kind] == pytest.approx(1.0, abs=1e-12)
    assert sum(r.distribution.values()) == pytest.approx(1.0, abs=1e-12)
    assert r.annotation["requires_entangling_measurement"]


def test_bell_basis_on_product_state():
    r = bell_basis_measure(product_state(SystemLayout.qubits(["1", "2"]), [0, 0]))
    assert r.distribution["phi+"] == pytest.approx(0.5)
    assert r.distribution["phi-"] == pytest.approx(0.5)


# -- frame problem -------------------------------------------------------------------

def test_bundled_witness_is_a_false_negative():
    inst = fixture("qfp_witness", "qfp-instance")
    assert {q.sector for _, q in inst.components} == {("1", "2")}
    trial = run_qfp_trial(inst)
    assert trial.entropy_after - trial.entropy_before == pytest.approx(1.0, abs=1e-9)
    assert trial.discrepancy <= 1e-12
    assert trial.classification == "false-negative"
    # oracle: the action leaves the agent sector's reduced state untouched
    from qframe.quantum import apply_unitary

    after = apply_unitary(inst.state, inst.action, inst.targets)
    n = inst.state.layout.n
    before_rho = oracles.density_partial_trace(inst.state.amplitudes, n, [0, 1])
    after_rho = oracles.density_partial_trace(after.amplitudes, n, [0, 1])
    assert np.allclose(before_rho, after_rho, atol=1e-12)
    assert oracles.max_bipartition_entropy(after.amplitudes, n) - \
        oracles.max_bipartition_entropy(inst.state.amplitudes, n) == pytest.approx(1.0, abs=1e-9)


def test_trial_on_agent_sector_is_seen():
    state = bell_state().kron(product_state(SystemLayout.qubits(["3", "4"]), [0, 0]))
    agent = (("z1", QRF.uniform("z1", [pauli("Z", ["1"])])),)
    trial = run_qfp_trial(QFPInstance(state, agent, X, ("1",)))
    assert trial.agent_changed is False  # Z marginal of phi+ is invariant under X on qubit 1
    z_state = product_state(SystemLayout.qubits(["1", "2"]), [0, 0])
    trial = run_qfp_trial(QFPInstance(z_state, agent, X, ("1",)))
    assert trial.agent_changed and not trial.truth_changed
    assert trial.classification == "false-positive"


def test_identity_action_is_correct():
    inst = fixture("qfp_witness", "qfp-instance")
    trial = run_qfp_trial(QFPInstance(inst.state, inst.components, np.eye(2), ("3",)))
    assert trial.classification == "correct"
    assert trial.discrepancy <= 1e-12


def test_instance_invariants():
    state = bell_state()
    agent = (("z", QRF.uniform("z", [pauli("Z", ["1"])])),)
    with pytest.raises(ConstraintError):
        QFPInstance(state, agent, np.array([[1, 1], [0, 1]]), ("1",))
    with pytest.raises(StructuralError):
        QFPInstance(state, agent, H, ("9",))
    with pytest.raises(StructuralError):
        QFPInstance(state, agent, np.eye(4), ("1",))


def _check_pair(pair, agent):
    assert not pair.problems()
    assert pair.discrepancy <= 1e-9
    assert pair.delta_entropy >= 1.0 - 1e-9
    # oracle: equal reduced states on the agent sector, entropies by einsum
    labels = list(pair.first.layout.labels)
    sector = sorted({labels.index(l) for q in agent for l in q.sector})
    n = len(labels)
    if sector:
        r1 = oracles.density_partial_trace(pair.first.amplitudes, n, sector)
        r2 = oracles.density_partial_trace(pair.second.amplitudes, n, sector)
        assert np.allclose(r1, r2, atol=1e-9)
    s1 = oracles.max_bipartition_entropy(pair.first.amplitudes, n)
    s2 = oracles.max_bipartition_entropy(pair.second.amplitudes, n)
    assert abs(s1 - s2) >= 1.0 - 1e-9


@pytest.mark.parametrize("key", sorted(DEFAULT_ORDER))
def test_catalog_pairs_reverify(key):
    agent = [QRF.uniform("z1", [pauli("Z", ["1"])]), QRF.uniform("x2", [pauli("X", ["2"])])]
    pair = construct_adversarial_pair(agent, key)
    _check_pair(pair, agent)


def test_negative_control_family_is_refused():
    # agent-indistinguishable, but both environments carry one bit
    agent = [QRF.uniform("z1", [pauli("Z", ["1"])])]
    with pytest.raises(NoAdversarialFamilyError) as exc:
        construct_adversarial_pair(agent, "ghz-vs-bell")
    assert "ghz-vs-bell" in exc.value.witness
    assert set(CATALOG) - set(DEFAULT_ORDER) == {"ghz-vs-bell"}


def test_bundled_agents():
    frames, catalog = fixture("agent_pauli12", "agent")
    pair = construct_adversarial_pair(frames, catalog)
    _check_pair(pair, frames)
    frames, catalog = fixture("agent_z1_ghz", "agent")
    with pytest.raises(NoAdversarialFamilyError) as exc:
        construct_adversarial_pair(frames, catalog)
    assert exc.value.witness


def test_empty_agent_gets_a_pair():
    pair = construct_adversarial_pair([])
    _check_pair(pair, [])


def test_unknown_catalog_key():
    with pytest.raises(StructuralError):
        construct_adversarial_pair([QRF.uniform("z1", [pauli("Z", ["1"])])], "nope")


# -- thermal drift -------------------------------------------------------------------

def test_drift_zero_without_kick():
    assert thermo_context_demo(bell_state(), 0.0, seed=3).drift == 0.0


def test_drift_grows_and_respects_bound():
    base = product_state(SystemLayout.qubits(["1", "2"]), [0, 0])
    eps = [0.0, 0.01, 0.1, 0.5, 1.0, math.pi]
    reps = [thermo_context_demo(base, e, seed=7) for e in eps]
    assert reps[2].drift > 0
    for r in reps:
        assert r.drift <= r.bound + 1e-12
    bounds = [r.bound for r in reps]
    assert bounds == sorted(bounds)
    assert reps[-1].drift > 0.1


def test_drift_is_seeded():
    a = thermo_context_demo(bell_state(), 0.2, seed=11)
    b = thermo_context_demo(bell_state(), 0.2, seed=11)
    assert a.per_trial == b.per_trial
    assert drift_bound(5) == 1.0 and isinstance(drift_bound(0), float)
    with pytest.raises(ConstraintError):
        thermo_context_demo(bell_state(), -1.0)
