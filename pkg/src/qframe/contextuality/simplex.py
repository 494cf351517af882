"""Dense tableau simplex over exact rationals (Bland's rule).

Solves ``min c.x  s.t.  A x = b, x >= 0`` starting from a basis whose columns
form an identity matrix (slack or artificial variables), with ``b >= 0``.
The identity columns are kept in the tableau so the final basis inverse, and
hence the dual vector, can be read off directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class SimplexResult:
    status: str  # "optimal" | "unbounded"
    x: list[Fraction]
    objective: Fraction
    dual: list[Fraction]  # y with y^T A <= c at optimum
    pivots: int


def solve_standard_form(
    A: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    c: Sequence[Fraction],
    basis: Sequence[int],
    max_pivots: int = 1_000_000,
) -> SimplexResult:
    m = len(A)
    n = len(c)
    T = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    basis = list(basis)
    if any(T[i][n] < 0 for i in range(m)):
        raise ValueError("right-hand side must be nonnegative")
    for i, j in enumerate(basis):
        for r in range(m):
            if T[r][j] != (ONE if r == i else ZERO):
                raise ValueError("initial basis columns must form an identity matrix")
    init_basis = list(basis)
    cost = [Fraction(v) for v in c]

    # reduced costs r_j = c_j - c_B B^-1 A_j ; last entry holds -objective
    red = cost + [ZERO]
    for i, j in enumerate(basis):
        cj = cost[j]
        if cj:
            row = T[i]
            for k in range(n + 1):
                if row[k]:
                    red[k] -= cj * row[k]

    pivots = 0
    while True:
        enter = next((j for j in range(n) if red[j] < 0), None)
        if enter is None:
            status = "optimal"
            break
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][n] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            status = "unbounded"
            break
        _pivot(T, red, leave, enter)
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot limit exceeded")

    x = [ZERO] * n
    for i, j in enumerate(basis):
        x[j] = T[i][n]
    objective = sum((cost[j] * x[j] for j in range(n)), ZERO)
    # columns of the initial identity basis now hold B^-1; y_i = c_{e_i} - r_{e_i}
    dual = [cost[j] - red[j] for j in init_basis]
    return SimplexResult(status, x, objective, dual, pivots)


def _pivot(T, red, r, s):
    row = T[r]
    piv = row[s]
    if piv != ONE:
        inv = ONE / piv
        for k in range(len(row)):
            if row[k]:
                row[k] *= inv
    nz = [k for k in range(len(row)) if row[k]]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[s]
        if f:
            for k in nz:
                other[k] -= f * row[k]
    f = red[s]
    if f:
        for k in nz:
            red[k] -= f * row[k]


def phase_one(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> SimplexResult:
    """Minimise the sum of artificials for ``A x = b, x >= 0`` (``b >= 0``).

    Optimum 0 means feasible (``x[:n]`` is a solution); a positive optimum
    comes with ``dual`` y satisfying ``A^T y <= 0`` and ``b.y > 0``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [list(A[i]) + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    c = [ZERO] * n + [ONE] * m
    return solve_standard_form(rows, b, c, list(range(n, n + m)))


def maximize_packing(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]) -> SimplexResult:
    """``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0`` (slack start)."""
    m = len(A)
    n = len(c)
    rows = [list(A[i]) + [ONE if k == i else ZERO for k in range(m)] for i in range(m)]
    cost = [-Fraction(v) for v in c] + [ZERO] * m
    res = solve_standard_form(rows, b, cost, list(range(n, n + m)))
    res.objective = -res.objective
    return res
