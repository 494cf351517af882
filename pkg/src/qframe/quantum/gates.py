"""A few fixed gates and a helper to chain them into one unitary."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import ConstraintError
from .operators import PAULI, embed
from .states import SystemLayout

UNITARY_TOL = 1e-10

H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
X = PAULI["X"]
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128)
GATES = {"I": PAULI["I"], "X": X, "Y": PAULI["Y"], "Z": PAULI["Z"], "H": H, "CNOT": CNOT}


def ry(theta: float) -> np.ndarray:
    """exp(-i theta Y / 2): rotation about the y axis."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ConstraintError("unitary", f"matrix shape {u.shape} is not square")
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    if dev > tol:
        raise ConstraintError("unitary", f"||U^dagger U - I||_max = {dev!r}")


def chain(steps: Sequence[tuple[np.ndarray, Sequence[str]]], targets: Sequence[str]) -> np.ndarray:
    """Unitary on ``targets`` (qubits) applying each ``(gate, labels)`` in order."""
    layout = SystemLayout.qubits(targets)
    u = np.eye(layout.total_dim, dtype=np.complex128)
    for gate, labels in steps:
        u = embed(gate, [str(l) for l in labels], layout) @ u
    return u
