import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qframe.errors import ConstraintError, NonCodeployableError, StructuralError
from qframe.quantum import (
    K_B,
    LN2,
    PAULI,
    QRF,
    DensityMatrix,
    Observable,
    PureState,
    SystemLayout,
    apply_unitary,
    bell_state,
    bipartitions,
    build_interaction_hamiltonian,
    codeployable,
    commutator_norm,
    entanglement_entropy,
    ghz_state,
    is_separable_pure,
    landauer_cost,
    measure,
    partial_trace,
    pauli,
    product_state,
    von_neumann_entropy,
    xz_observable,
)
from qframe.quantum.gates import CNOT, H, chain, check_unitary, ry

import oracles


def random_state(rng, n):
    v = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return PureState.from_amplitudes(SystemLayout.qubits([str(i + 1) for i in range(n)]), v, normalize=True)


# -- states ---------------------------------------------------------------------

def test_normalization_is_enforced():
    with pytest.raises(ConstraintError) as exc:
        PureState(SystemLayout.qubits(["1"]), np.array([0.9, 0.0]))
    assert exc.value.constraint == "normalization"


def test_layout_mismatch_is_structural():
    with pytest.raises(StructuralError):
        PureState(SystemLayout.qubits(["1", "2"]), np.array([1.0, 0.0]))


def test_density_checks():
    lay = SystemLayout.qubits(["1"])
    with pytest.raises(ConstraintError):
        DensityMatrix(lay, np.array([[1, 1], [0, 0]], dtype=complex))
    with pytest.raises(ConstraintError):
        DensityMatrix(lay, np.array([[1.5, 0], [0, -0.5]], dtype=complex))


def test_entropy_fixed_points():
    zero = product_state(SystemLayout.qubits(["1", "2", "3", "4"]), [0, 0, 0, 0])
    assert entanglement_entropy(zero)[0] == pytest.approx(0.0, abs=1e-9)
    assert entanglement_entropy(bell_state())[0] == pytest.approx(1.0, abs=1e-9)
    pair = bell_state("phi+", ["1", "2"]).kron(bell_state("phi+", ["3", "4"]))
    value, arg = entanglement_entropy(pair)
    assert value == pytest.approx(2.0, abs=1e-9)
    assert arg == (("1", "3"), ("2", "4"))


def test_bipartition_count_and_first_label():
    lay = SystemLayout.qubits(list("abcde"))
    parts = bipartitions(lay)
    assert len(parts) == 2 ** 4 - 1
    assert all(p[0][0] == "a" for p in parts)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
def test_entanglement_entropy_matches_einsum_oracle(n, seed):
    s = random_state(np.random.default_rng(seed), n)
    value, _ = entanglement_entropy(s)
    assert value == pytest.approx(oracles.max_bipartition_entropy(s.amplitudes, n), abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1), st.data())
def test_partial_trace_matches_oracle(n, seed, data):
    s = random_state(np.random.default_rng(seed), n)
    keep = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n)))
    rho = partial_trace(s, [str(k + 1) for k in keep])
    assert np.allclose(rho.matrix, oracles.density_partial_trace(s.amplitudes, n, keep), atol=1e-12)
    # pure-state complement entropies agree
    rest = [i for i in range(n) if i not in keep]
    if rest:
        other = partial_trace(s, [str(k + 1) for k in rest])
        assert von_neumann_entropy(rho) == pytest.approx(von_neumann_entropy(other), abs=1e-9)


def test_partial_trace_of_density_matches_pure_path():
    s = random_state(np.random.default_rng(3), 3)
    a = partial_trace(s, ["1", "3"])
    b = partial_trace(s.density(), ["1", "3"])
    assert np.allclose(a.matrix, b.matrix, atol=1e-12)


def test_partial_trace_needs_labels():
    with pytest.raises(StructuralError):
        partial_trace(bell_state(), [])


def test_entanglement_rejects_single_qubit_and_density():
    with pytest.raises(StructuralError):
        entanglement_entropy(product_state(SystemLayout.qubits(["1"]), [0]))
    with pytest.raises(StructuralError):
        entanglement_entropy(bell_state().density())


def test_separability():
    assert not is_separable_pure(bell_state(), (["1"], ["2"]))
    prod = product_state(SystemLayout.qubits(["1", "2"]), [0, 1])
    assert is_separable_pure(prod, (["1"], ["2"]))
    with pytest.raises(StructuralError):
        is_separable_pure(prod, (["1"], ["1"]))


def test_eight_qubits_is_fast():
    s = ghz_state([str(i) for i in range(1, 9)])
    t0 = time.perf_counter()
    value, _ = entanglement_entropy(s)
    assert time.perf_counter() - t0 < 5.0
    assert value == pytest.approx(1.0, abs=1e-9)


# -- observables and frames -----------------------------------------------------

def test_observable_checks():
    with pytest.raises(ConstraintError) as exc:
        Observable(("1",), np.array([[0, 1], [0, 0]]))
    assert exc.value.constraint == "Hermitian"
    with pytest.raises(ConstraintError) as exc:
        Observable(("1",), np.diag([1.0, 0.5]))
    assert exc.value.constraint == "eigenvalues in {-1,1}"
    Observable(("1",), np.diag([1.0, 0.5]), dichotomic=False)


def test_commutator_values():
    x = QRF.uniform("X", [pauli("X", ["1"])])
    z = QRF.uniform("Z", [pauli("Z", ["1"])])
    z2 = QRF.uniform("Z2", [pauli("Z", ["2"])])
    assert commutator_norm(x, z) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert commutator_norm(x, z2) == 0.0
    assert not codeployable(x, z)
    assert codeployable(x, z2)
    # oracle: explicit Kronecker products
    a = oracles.kron_embed(PAULI["X"], 0, 2)
    b = oracles.kron_embed(PAULI["Z"], 0, 2)
    assert commutator_norm(x, z, SystemLayout.qubits(["1", "2"])) == pytest.approx(np.linalg.norm(a @ b - b @ a))


@settings(max_examples=40, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_commutator_of_plane_observables(a, b):
    q1 = QRF.uniform("P", [xz_observable(a, "1")])
    q2 = QRF.uniform("Q", [xz_observable(b, "1")])
    # [n.sigma, m.sigma] = 2i (n x m).sigma, Frobenius norm 2*sqrt(2)*|sin(a-b)|
    assert commutator_norm(q1, q2) == pytest.approx(2 * math.sqrt(2) * abs(math.sin(a - b)), abs=1e-9)


def test_qrf_constraints_are_named():
    z = pauli("Z", ["1"])
    cases = [
        (dict(beta=0.5), "beta >= ln 2"),
        (dict(weights=(0.5, 0.4)), "sum(alpha_i) = 1"),
        (dict(weights=(1.5, -0.5)), "alpha_i in [0,1]"),
        (dict(temperature=0.0), "T > 0"),
    ]
    for kw, name in cases:
        args = dict(id="q", sector=("1",), observables=(z, z), weights=(0.5, 0.5))
        args.update(kw)
        with pytest.raises(ConstraintError) as exc:
            QRF(**args)
        assert exc.value.constraint == name
    half = Observable(("1",), np.diag([1.0, 0.5]), dichotomic=False)
    with pytest.raises(ConstraintError) as exc:
        QRF("q", ("1",), (half,), (1.0,))
    assert exc.value.constraint == "eigenvalues in {-1,1}"
    with pytest.raises(ConstraintError) as exc:
        QRF("q", ("2",), (z,), (1.0,))
    assert exc.value.constraint == "observables supported on sector"


def test_beta_boundary_is_accepted():
    QRF("q", ("1",), (pauli("Z", ["1"]),), (1.0,), beta=LN2)


def test_landauer_cost():
    assert landauer_cost(LN2, 300, 1) == pytest.approx(2.871e-21, abs=1e-24)
    assert landauer_cost(LN2, 300, 1) == pytest.approx(LN2 * 1.380649e-23 * 300, rel=1e-15)
    with pytest.raises(ConstraintError):
        landauer_cost(0.5, 300, 1)


def test_interaction_hamiltonian():
    q = QRF("q", ("1", "2"), (pauli("Z", ["1"]), pauli("X", ["2"])), (0.25, 0.75), beta=1.0, temperature=2.0)
    h = build_interaction_hamiltonian(q)
    expected = 1.0 * K_B * 2.0 * (0.25 * np.kron(PAULI["Z"], np.eye(2)) + 0.75 * np.kron(np.eye(2), PAULI["X"]))
    assert np.allclose(h.matrix, expected)
    assert h.sector == ("1", "2")


# -- measurement ------------------------------------------------------------------

def test_joint_measurement_requires_commuting():
    with pytest.raises(NonCodeployableError):
        measure(bell_state(), [pauli("X", ["1"]), pauli("Z", ["1"])], "joint")


def test_sequential_measurement_order_effect():
    plus = PureState(SystemLayout.qubits(["1"]), np.array([1, 1]) / math.sqrt(2))
    r = measure(plus, [pauli("Z", ["1"]), pauli("X", ["1"])], "sequential")
    assert r.marginal(1)[1] == pytest.approx(0.5)
    alone = measure(plus, [pauli("X", ["1"])])
    assert alone.distribution[(1,)] == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_bell_correlator_matches_analytic(a, b):
    r = measure(bell_state(), [xz_observable(a, "1"), xz_observable(b, "2")])
    e = sum(k[0] * k[1] * p for k, p in r.distribution.items())
    assert e == pytest.approx(oracles.tsirelson_correlator(a, b), abs=1e-12)
    assert sum(r.distribution.values()) == pytest.approx(1.0, abs=1e-12)


def test_gates_and_chain():
    for u in (H, CNOT, ry(0.3)):
        check_unitary(u)
    with pytest.raises(ConstraintError):
        check_unitary(np.array([[1, 1], [0, 1]]))
    u = chain([(H, ["3"]), (CNOT, ["3", "4"])], ["3", "4"])
    s = apply_unitary(product_state(SystemLayout.qubits(["3", "4"]), [0, 0]), u, ["3", "4"])
    assert np.allclose(s.amplitudes, bell_state("phi+", ["3", "4"]).amplitudes)
