"""Exact rational linear feasibility with Farkas infeasibility certificates.

Phase-one simplex over Fraction with Bland's rule (no cycling, no floats,
no external solver).  The system is  A_ge x >= b_ge,  A_eq x = b_eq  with x
free.  Infeasibility returns multipliers (y_ge >= 0, y_eq free) satisfying
y_ge A_ge + y_eq A_eq = 0 and y_ge b_ge + y_eq b_eq > 0, verified before
being handed out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


@dataclass
class LPResult:
    feasible: bool
    point: list[Fraction] | None = None
    farkas_ge: list[Fraction] | None = None
    farkas_eq: list[Fraction] | None = None


class LPError(RuntimeError):
    pass


def _to_rows(rows: Sequence[Sequence]) -> list[Row]:
    return [[Fraction(x) for x in row] for row in rows]


def feasibility(
    a_ge: Sequence[Sequence],
    b_ge: Sequence,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    a_ge = _to_rows(a_ge)
    a_eq = _to_rows(a_eq)
    b_ge = [Fraction(x) for x in b_ge]
    b_eq = [Fraction(x) for x in b_eq]
    if len(a_ge) != len(b_ge) or len(a_eq) != len(b_eq):
        raise ValueError("row/rhs count mismatch")
    rows = a_ge + a_eq
    if not rows:
        return LPResult(True, [])
    nv = len(rows[0])
    n_ge = len(a_ge)
    m = len(rows)
    rhs = b_ge + b_eq

    # columns: x+ (nv), x- (nv), slacks (n_ge), artificials (m)
    n_cols = 2 * nv + n_ge + m
    tableau: list[Row] = []
    flips = []
    for i in range(m):
        flip = -1 if rhs[i] < 0 else 1
        flips.append(flip)
        row = [flip * c for c in rows[i]]
        row += [-flip * c for c in rows[i]]
        slack = [Fraction(0)] * n_ge
        if i < n_ge:
            slack[i] = Fraction(-flip)
        row += slack
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        row += art
        row.append(flip * rhs[i])
        tableau.append(row)

    # phase-one objective: minimize the artificial sum; objective row holds
    # the negated reduced costs -(c_j - z_j) so pivoting is row arithmetic
    obj = [Fraction(0)] * (n_cols + 1)
    for i in range(m):
        for j in range(n_cols + 1):
            obj[j] += tableau[i][j]
    for j in range(2 * nv + n_ge, n_cols):
        obj[j] -= Fraction(1)

    basis = [2 * nv + n_ge + i for i in range(m)]

    def pivot(row_idx: int, col_idx: int):
        prow = tableau[row_idx]
        inv = Fraction(1) / prow[col_idx]
        tableau[row_idx] = [x * inv for x in prow]
        prow = tableau[row_idx]
        for r in range(m):
            if r != row_idx and tableau[r][col_idx]:
                factor = tableau[r][col_idx]
                tableau[r] = [x - factor * y for x, y in zip(tableau[r], prow)]
        if obj[col_idx]:
            factor = obj[col_idx]
            for j in range(n_cols + 1):
                obj[j] -= factor * prow[j]
        basis[row_idx] = col_idx

    guard = 0
    limit = 20000
    while True:
        guard += 1
        if guard > limit:
            raise LPError("simplex iteration limit exceeded")
        enter = next((j for j in range(n_cols) if obj[j] > 0), None)
        if enter is None:
            break
        best_row = None
        best_ratio = None
        for r in range(m):
            coeff = tableau[r][enter]
            if coeff > 0:
                ratio = tableau[r][n_cols] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_ratio = ratio
                    best_row = r
        if best_row is None:
            raise LPError("phase-one objective unbounded; internal error")
        pivot(best_row, enter)

    optimum = obj[n_cols]
    if optimum < 0:
        raise LPError("negative phase-one optimum; internal error")
    if optimum == 0:
        x = [Fraction(0)] * (2 * nv)
        for r, b in enumerate(basis):
            if b < 2 * nv:
                x[b] = tableau[r][n_cols]
        point = [x[j] - x[nv + j] for j in range(nv)]
        for row, b in zip(a_ge, b_ge):
            if sum(c * v for c, v in zip(row, point)) < b:
                raise LPError("claimed feasible point violates a >= row")
        for row, b in zip(a_eq, b_eq):
            if sum(c * v for c, v in zip(row, point)) != b:
                raise LPError("claimed feasible point violates an = row")
        return LPResult(True, point)

    # infeasible: read the dual off the artificial columns; the objective row
    # stores z_j - c_j, and an artificial column has A_col = e_i, c = 1, so
    # obj[col] = y_i - 1
    y_flip = [obj[2 * nv + n_ge + i] + Fraction(1) for i in range(m)]
    y = [flips[i] * y_flip[i] for i in range(m)]
    y_ge = y[:n_ge]
    y_eq = y[n_ge:]
    combo = [Fraction(0)] * nv
    for yi, row in zip(y_ge, a_ge):
        for j in range(nv):
            combo[j] += yi * row[j]
    for yi, row in zip(y_eq, a_eq):
        for j in range(nv):
            combo[j] += yi * row[j]
    value = sum(yi * bi for yi, bi in zip(y_ge, b_ge)) + sum(
        yi * bi for yi, bi in zip(y_eq, b_eq)
    )
    if any(combo) or value <= 0 or any(yi < 0 for yi in y_ge):
        raise LPError("Farkas certificate failed exact verification")
    return LPResult(False, None, y_ge, y_eq)


def verify_farkas(
    a_ge: Sequence[Sequence],
    b_ge: Sequence,
    y_ge: Sequence,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    y_eq: Sequence = (),
) -> bool:
    """Re-check an infeasibility certificate with exact arithmetic only."""
    a_ge = _to_rows(a_ge)
    a_eq = _to_rows(a_eq)
    y_ge = [Fraction(x) for x in y_ge]
    y_eq = [Fraction(x) for x in y_eq]
    if any(y < 0 for y in y_ge):
        return False
    nv = len(a_ge[0]) if a_ge else (len(a_eq[0]) if a_eq else 0)
    combo = [Fraction(0)] * nv
    for yi, row in zip(y_ge, a_ge):
        for j in range(nv):
            combo[j] += yi * row[j]
    for yi, row in zip(y_eq, a_eq):
        for j in range(nv):
            combo[j] += yi * row[j]
    if any(combo):
        return False
    value = sum(yi * Fraction(bi) for yi, bi in zip(y_ge, b_ge)) + sum(
        yi * Fraction(bi) for yi, bi in zip(y_eq, b_eq)
    )
    return value > 0
