"""Layouts, pure states, density matrices and entropies."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .. import kernels
from ..errors import ConstraintError, StructuralError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TIE_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemLayout:
    labels: tuple[str, ...]
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        dims = tuple(int(d) for d in self.dims) if self.dims else (2,) * len(labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", dims)
        if len(set(labels)) != len(labels):
            raise StructuralError(f"layout labels not unique: {labels}")
        if len(dims) != len(labels):
            raise StructuralError(f"layout has {len(labels)} labels but {len(dims)} dims")
        if any(d < 2 for d in dims):
            raise StructuralError(f"local dimensions must be >= 2, got {dims}")

    @classmethod
    def qubits(cls, labels: Iterable) -> "SystemLayout":
        labels = tuple(str(x) for x in labels)
        return cls(labels, (2,) * len(labels))

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise StructuralError(f"label {label!r} not in layout {self.labels}") from None

    def positions(self, labels: Iterable) -> list[int]:
        return [self.index(x) for x in labels]

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def sub(self, labels: Iterable) -> "SystemLayout":
        """Sub-layout with labels kept in this layout's order."""
        pos = sorted(set(self.positions(labels)))
        return SystemLayout(tuple(self.labels[p] for p in pos), tuple(self.dims[p] for p in pos))

    def concat(self, other: "SystemLayout") -> "SystemLayout":
        return SystemLayout(self.labels + other.labels, self.dims + other.dims)


@dataclass(frozen=True, eq=False)
class PureState:
    layout: SystemLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(np.ravel(self.amplitudes))
        if amps.shape != (self.layout.total_dim,):
            raise StructuralError(
                f"state has {amps.shape[0]} amplitudes, layout needs {self.layout.total_dim}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ConstraintError("normalization", f"state norm is {norm!r}, must be 1 within {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, layout: SystemLayout, amplitudes, normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(layout, amps)

    @classmethod
    def basis(cls, layout: SystemLayout, digits: Sequence[int]) -> "PureState":
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        amps[np.ravel_multi_index(tuple(digits), layout.dims)] = 1.0
        return cls(layout, amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix(self.layout, np.outer(psi, psi.conj()))

    def kron(self, other: "PureState") -> "PureState":
        return PureState(self.layout.concat(other.layout), np.kron(self.amplitudes, other.amplitudes))

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash((self.layout, self.amplitudes.tobytes()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    layout: SystemLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        d = self.layout.total_dim
        if m.shape != (d, d):
            raise StructuralError(f"density shape {m.shape}, layout needs {(d, d)}")
        herm = float(np.max(np.abs(m - m.conj().T))) if d else 0.0
        if herm > HERMITIAN_TOL:
            raise ConstraintError("Hermitian", f"max |rho - rho^dagger| = {herm!r}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > NORM_TOL:
            raise ConstraintError("trace", f"trace is {tr!r}, must be 1 within {NORM_TOL}")
        lo = float(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)))
        if lo < -PSD_TOL:
            raise ConstraintError("positive semidefinite", f"smallest eigenvalue {lo!r}")
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.layout, self.matrix.tobytes()))


def _keep_mask(layout: SystemLayout, keep: Iterable) -> np.ndarray:
    keep = [str(k) for k in keep]
    if not keep:
        raise StructuralError("partial trace needs a nonempty set of labels to keep")
    mask = np.zeros(layout.n, dtype=np.bool_)
    for p in layout.positions(keep):
        mask[p] = True
    return mask


def partial_trace(s: PureState | DensityMatrix, keep: Iterable) -> DensityMatrix:
    """Reduced density on ``keep`` (output ordered as in the input layout)."""
    layout = s.layout
    mask = _keep_mask(layout, keep)
    sub = SystemLayout(tuple(l for l, m in zip(layout.labels, mask) if m),
                       tuple(d for d, m in zip(layout.dims, mask) if m))
    if isinstance(s, PureState):
        m = kernels.bipartition_matrix(s.amplitudes, np.array(layout.dims, dtype=np.int64), mask)
        rho = m @ m.conj().T
    else:
        n = layout.n
        t = s.matrix.reshape(layout.dims + layout.dims)
        row = list(range(n))
        col = [n + i if mask[i] else i for i in range(n)]
        out = [i for i in range(n) if mask[i]] + [n + i for i in range(n) if mask[i]]
        rho = np.einsum(t, row + col, out).reshape(sub.total_dim, sub.total_dim)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(sub, rho)


def _entropy_bits(probs: np.ndarray) -> float:
    p = np.clip(np.real(probs), 0.0, 1.0)
    p = p[p > 0.0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; 0 log 0 is taken as 0."""
    return _entropy_bits(np.linalg.eigvalsh(rho.matrix))


def schmidt_coefficients(s: PureState, side: Iterable) -> np.ndarray:
    mask = _keep_mask(s.layout, side)
    m = kernels.bipartition_matrix(s.amplitudes, np.array(s.layout.dims, dtype=np.int64), mask)
    return np.linalg.svd(m, compute_uv=False)


def bipartitions(layout: SystemLayout) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All 2^(n-1) - 1 nontrivial bipartitions; the first part holds the first label.

    Ordered lexicographically by the layout positions of the first part.
    """
    n = layout.n
    out = []
    for r in range(0, n - 1):
        for rest in itertools.combinations(range(1, n), r):
            first = (0,) + rest
            out.append(first)
    out.sort()
    parts = []
    for first in out:
        second = tuple(i for i in range(n) if i not in first)
        parts.append((tuple(layout.labels[i] for i in first), tuple(layout.labels[i] for i in second)))
    return parts


def entanglement_entropy(s: PureState) -> tuple[float, tuple[tuple[str, ...], tuple[str, ...]]]:
    """Maximum over bipartitions of the reduced-state entropy, with an argmax.

    Ties within 1e-9 go to the lexicographically first bipartition.
    """
    if isinstance(s, DensityMatrix):
        raise StructuralError("entanglement entropy is defined here for pure states only")
    if s.layout.n < 2:
        raise StructuralError("entanglement entropy needs at least two subsystems")
    best = -1.0
    arg = None
    dims = np.array(s.layout.dims, dtype=np.int64)
    for first, second in bipartitions(s.layout):
        mask = _keep_mask(s.layout, first)
        m = kernels.bipartition_matrix(s.amplitudes, dims, mask)
        sv = np.linalg.svd(m, compute_uv=False)
        value = _entropy_bits(sv ** 2)
        if value > best + TIE_TOL:
            best, arg = value, (first, second)
    return best, arg


def _check_bipartition(layout: SystemLayout, bipartition) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if len(bipartition) != 2:
        raise StructuralError("bipartition must have exactly two parts")
    a = tuple(str(x) for x in bipartition[0])
    b = tuple(str(x) for x in bipartition[1])
    if not a or not b:
        raise StructuralError("bipartition parts must be nonempty")
    if set(a) & set(b):
        raise StructuralError(f"bipartition parts overlap: {sorted(set(a) & set(b))}")
    if set(a) | set(b) != set(layout.labels) or len(a) + len(b) != layout.n:
        raise StructuralError(f"bipartition {a}|{b} does not cover layout {layout.labels}")
    return a, b


def is_separable_pure(s: PureState, bipartition, tol: float = 1e-10) -> bool:
    """Schmidt rank 1 across the bipartition (second singular value below ``tol``)."""
    first, _ = _check_bipartition(s.layout, bipartition)
    sv = schmidt_coefficients(s, first)
    return len(sv) < 2 or float(sv[1]) < tol


# -- common states ------------------------------------------------------------

def bell_state(kind: str = "phi+", labels: Sequence = ("1", "2")) -> PureState:
    """phi+- = (|00> +- |11>)/sqrt2, psi+- = (|10> +- |01>)/sqrt2."""
    r = 1 / math.sqrt(2)
    vecs = {
        "phi+": [r, 0, 0, r],
        "phi-": [r, 0, 0, -r],
        "psi+": [0, r, r, 0],
        "psi-": [0, -r, r, 0],
    }
    return PureState(SystemLayout.qubits(labels), np.array(vecs[kind], dtype=np.complex128))


def ghz_state(labels: Sequence) -> PureState:
    layout = SystemLayout.qubits(labels)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return PureState(layout, amps)


def product_state(layout: SystemLayout, digits: Sequence[int]) -> PureState:
    return PureState.basis(layout, digits)
