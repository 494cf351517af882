"""Observables, quantum reference frames and the interaction Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConstraintError, NonCodeployableError, StructuralError
from .states import SystemLayout

K_B = 1.380649e-23  # J/K
LN2 = math.log(2.0)

HERMITIAN_TOL = 1e-12
DICHOTOMY_TOL = 1e-10
COMMUTE_TOL = 1e-10
WEIGHT_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix acting on ``sector`` (labels in tensor order).

    ``dims`` gives the local dimension of each sector label; when omitted it is
    inferred as qubits, or as a single qudit for a one-label sector.
    """

    sector: tuple[str, ...]
    matrix: np.ndarray
    dichotomic: bool = True
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        sector = tuple(str(x) for x in self.sector)
        m = np.array(self.matrix, dtype=np.complex128)
        m.setflags(write=False)
        if len(set(sector)) != len(sector) or not sector:
            raise StructuralError(f"observable sector must be nonempty with unique labels: {sector}")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StructuralError(f"observable matrix must be square, got shape {m.shape}")
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            if len(sector) == 1:
                dims = (m.shape[0],)
            else:
                dims = (2,) * len(sector)
        if math.prod(dims) != m.shape[0] or len(dims) != len(sector):
            raise StructuralError(f"matrix of size {m.shape[0]} does not fit sector {sector} with dims {dims}")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > HERMITIAN_TOL:
            i, j = np.unravel_index(int(np.argmax(np.abs(m - m.conj().T))), m.shape)
            raise ConstraintError("Hermitian", f"entry ({i},{j}) differs from its conjugate transpose by {herm!r}",
                                  witness={"entry": [int(i), int(j)]})
        if self.dichotomic:
            dev = float(np.max(np.abs(m @ m - np.eye(m.shape[0]))))
            if dev > DICHOTOMY_TOL:
                raise ConstraintError("eigenvalues in {-1,1}",
                                      f"M^2 deviates from identity by {dev!r}")
        object.__setattr__(self, "sector", sector)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    def projector(self, outcome: int) -> np.ndarray:
        """Spectral projector (I + o M)/2 of a dichotomic observable."""
        if not self.dichotomic:
            raise ConstraintError("eigenvalues in {-1,1}", "projectors are defined for dichotomic observables")
        return (np.eye(self.matrix.shape[0]) + outcome * self.matrix) / 2

    def __eq__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        return (self.sector == other.sector and self.dims == other.dims
                and self.dichotomic == other.dichotomic and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.sector, self.dims, self.dichotomic, self.matrix.tobytes()))

    def label_dims(self) -> dict[str, int]:
        return dict(zip(self.sector, self.dims))


def pauli(word: str, labels: Sequence) -> Observable:
    """Tensor product of Pauli letters, e.g. ``pauli("XZ", ["1", "2"])``."""
    if len(word) != len(labels):
        raise StructuralError(f"Pauli word {word!r} does not match labels {labels}")
    m = reduce(np.kron, (PAULI[c] for c in word.upper()))
    return Observable(tuple(labels), m)


def xz_observable(angle: float, label) -> Observable:
    """cos(angle) Z + sin(angle) X: a spin measurement in the x-z plane."""
    return Observable((str(label),), math.cos(angle) * PAULI["Z"] + math.sin(angle) * PAULI["X"])


def embed(matrix: np.ndarray, sector: Sequence[str], layout: SystemLayout) -> np.ndarray:
    """Operator on ``sector`` tensored with identities on the rest of ``layout``."""
    pos = layout.positions(sector)
    n = layout.n
    dims = layout.dims
    rest = [i for i in range(n) if i not in pos]
    d_rest = math.prod(dims[i] for i in rest)
    full = np.kron(matrix, np.eye(d_rest))
    order = pos + rest  # axis order of ``full``
    shape = [dims[i] for i in order]
    t = full.reshape(shape + shape)
    inv = [order.index(i) for i in range(n)]
    t = t.transpose(inv + [n + k for k in inv])
    return t.reshape(layout.total_dim, layout.total_dim)


def common_layout(observables: Iterable[Observable], layout: SystemLayout | None = None) -> SystemLayout:
    """Layout covering every observable's sector; checks dimension agreement."""
    dims: dict[str, int] = {}
    for obs in observables:
        for lab, d in obs.label_dims().items():
            if dims.setdefault(lab, d) != d:
                raise StructuralError(f"incompatible layouts: label {lab!r} has dims {dims[lab]} and {d}")
    if layout is None:
        return SystemLayout(tuple(dims), tuple(dims.values()))
    for lab, d in dims.items():
        if lab not in layout.labels:
            raise StructuralError(f"incompatible layouts: label {lab!r} missing from {layout.labels}")
        if layout.dim_of(lab) != d:
            raise StructuralError(f"incompatible layouts: label {lab!r} has dim {layout.dim_of(lab)}, observable uses {d}")
    return layout


@dataclass(frozen=True, eq=False)
class QRF:
    """Sector, weighted dichotomic observables and thermodynamic parameters.

    Construction enforces: weights in [0, 1] summing to 1, beta >= ln 2,
    temperature > 0, dichotomic observables supported on the sector.
    """

    id: str
    sector: tuple[str, ...]
    observables: tuple[Observable, ...]
    weights: tuple[float, ...]
    beta: float = LN2
    temperature: float = 1.0 / K_B

    def __post_init__(self):
        object.__setattr__(self, "sector", tuple(str(x) for x in self.sector))
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.weights) != len(self.observables):
            raise StructuralError(f"QRF {self.id!r}: {len(self.observables)} observables but {len(self.weights)} weights")
        for i, obs in enumerate(self.observables):
            if not obs.dichotomic:
                raise ConstraintError("eigenvalues in {-1,1}", f"QRF {self.id!r}: observable {i} is not dichotomic",
                                      witness={"observable": i})
            outside = [lab for lab in obs.sector if lab not in self.sector]
            if outside:
                raise ConstraintError("observables supported on sector",
                                      f"QRF {self.id!r}: observable {i} acts on {outside} outside {self.sector}")
        for i, w in enumerate(self.weights):
            if not (0.0 <= w <= 1.0):
                raise ConstraintError("alpha_i in [0,1]", f"QRF {self.id!r}: weight {i} = {w!r}",
                                      witness={"weight": i})
        total = math.fsum(self.weights)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ConstraintError("sum(alpha_i) = 1", f"QRF {self.id!r}: weights sum to {total!r}")
        if not (self.beta >= LN2):
            raise ConstraintError("beta >= ln 2", f"QRF {self.id!r}: beta = {self.beta!r} < ln 2 = {LN2!r}")
        if not (self.temperature > 0):
            raise ConstraintError("T > 0", f"QRF {self.id!r}: temperature = {self.temperature!r}")
        common_layout(self.observables)

    @classmethod
    def uniform(cls, id: str, observables: Sequence[Observable], sector: Sequence[str] | None = None,
                beta: float = LN2, temperature: float = 1.0 / K_B) -> "QRF":
        observables = tuple(observables)
        if sector is None:
            sector = tuple(dict.fromkeys(lab for o in observables for lab in o.sector))
        n = len(observables)
        return cls(id, tuple(sector), observables, tuple([1.0 / n] * n) if n else (), beta, temperature)

    def sector_layout(self) -> SystemLayout:
        dims: dict[str, int] = {}
        for o in self.observables:
            dims.update(o.label_dims())
        return SystemLayout(self.sector, tuple(dims.get(lab, 2) for lab in self.sector))


def build_interaction_hamiltonian(q: QRF) -> Observable:
    """beta * k_B * T * sum_i alpha_i M_i over the QRF sector."""
    layout = q.sector_layout()
    h = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
    for w, obs in zip(q.weights, q.observables):
        h += w * embed(obs.matrix, obs.sector, layout)
    h *= q.beta * K_B * q.temperature
    return Observable(layout.labels, h, dichotomic=False, dims=layout.dims)


def operator_commutator_norm(m: Observable, n: Observable, layout: SystemLayout | None = None) -> float:
    """Frobenius norm of [M, N] on the union of the two sectors (or ``layout``)."""
    layout = common_layout([m, n], layout)
    a = embed(m.matrix, m.sector, layout)
    b = embed(n.matrix, n.sector, layout)
    return float(np.linalg.norm(a @ b - b @ a))


def commutator_norm(q1: QRF, q2: QRF, layout: SystemLayout | None = None) -> float:
    """Max over observable pairs of the Frobenius norm of their commutator."""
    layout = common_layout(list(q1.observables) + list(q2.observables), layout)
    best = 0.0
    for m in q1.observables:
        a = embed(m.matrix, m.sector, layout)
        for n in q2.observables:
            b = embed(n.matrix, n.sector, layout)
            best = max(best, float(np.linalg.norm(a @ b - b @ a)))
    return best


def codeployable(q1: QRF, q2: QRF, tol: float = COMMUTE_TOL, layout: SystemLayout | None = None) -> bool:
    return commutator_norm(q1, q2, layout) < tol


def require_commuting(observables: Sequence[Observable], tol: float = COMMUTE_TOL) -> None:
    for i in range(len(observables)):
        for j in range(i + 1, len(observables)):
            c = operator_commutator_norm(observables[i], observables[j])
            if c >= tol:
                raise NonCodeployableError(
                    f"observables {i} and {j} do not commute (||[M,N]||_F = {c:.12g})",
                    witness={"pair": [i, j], "commutator_norm": c},
                )


def landauer_cost(beta: float, temperature: float, n_bits: float) -> float:
    """Free energy in joules to record ``n_bits`` irreversibly: n * beta * k_B * T."""
    if not (beta >= LN2):
        raise ConstraintError("beta >= ln 2", f"beta = {beta!r} < ln 2 = {LN2!r}")
    if not (temperature > 0):
        raise ConstraintError("T > 0", f"temperature = {temperature!r}")
    if n_bits < 0:
        raise ConstraintError("n_bits >= 0", f"n_bits = {n_bits!r}")
    return n_bits * beta * K_B * temperature
