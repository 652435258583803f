"""Exact dense linear algebra over GaussianRational vectors and matrices.

Matrices are lists of row lists.  Everything is fraction-exact; pivoting is
deterministic (first nonzero entry scanning left to right), so reduced
echelon forms and kernel bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import GaussianRational, ZERO, ONE

Vector = list[GaussianRational]
Matrix = list[Vector]


def gr(value) -> GaussianRational:
    return GaussianRational.coerce(value)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO for _ in range(cols)] for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for k in range(n):
        out[k][k] = ONE
    return out


def mat_from_rows(rows: Sequence[Sequence]) -> Matrix:
    return [[gr(x) for x in row] for row in rows]


def copy_matrix(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def matvec(m: Matrix, v: Sequence) -> Vector:
    return [sum((row[j] * gr(v[j]) for j in range(len(v))), ZERO) for row in m]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    rows, inner = len(a), len(a[0])
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            aik = ai[k]
            if aik.is_zero():
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                oi[j] = oi[j] + aik * bk[j]
    return out


def transpose(m: Matrix) -> Matrix:
    if not m:
        return []
    return [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]


def conj_transpose(m: Matrix) -> Matrix:
    if not m:
        return []
    return [[m[i][j].conjugate() for i in range(len(m))] for j in range(len(m[0]))]


def scale_vec(v: Sequence, s) -> Vector:
    s = gr(s)
    return [gr(x) * s for x in v]


def add_vec(u: Sequence, v: Sequence) -> Vector:
    return [gr(a) + gr(b) for a, b in zip(u, v)]


def sub_vec(u: Sequence, v: Sequence) -> Vector:
    return [gr(a) - gr(b) for a, b in zip(u, v)]


def is_zero_vec(v: Sequence) -> bool:
    return all(gr(x).is_zero() for x in v)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column list."""
    a = copy_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if not a[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix, cols: int | None = None) -> list[Vector]:
    """Deterministic basis of the right kernel {x : m x = 0}."""
    if cols is None:
        if not m:
            raise ValueError("kernel of empty matrix needs explicit column count")
        cols = len(m[0])
    if not m:
        return [e for e in identity(cols)]
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * cols
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One exact solution of m x = b, or None when inconsistent."""
    if not m:
        return []
    cols = len(m[0])
    aug = [row[:] + [gr(bv)] for row, bv in zip(m, b)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [m[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det(m: Matrix) -> GaussianRational:
    a = copy_matrix(m)
    n = len(a)
    out = ONE
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if not a[i][c].is_zero():
                pivot_row = i
                break
        if pivot_row is None:
            return ZERO
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            out = -out
        out = out * a[c][c]
        inv = ONE / a[c][c]
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                factor = a[i][c] * inv
                a[i] = [x - factor * y for x, y in zip(a[i], a[c])]
    return out


def row_space_rref(rows: Sequence[Sequence]) -> Matrix:
    """Canonical (RREF, zero rows dropped) basis of the span of the rows."""
    if not rows:
        return []
    red, pivots = rref(mat_from_rows(rows))
    return [red[i] for i in range(len(pivots))]


def in_row_space(rows_rref: Matrix, v: Sequence) -> bool:
    return is_zero_vec(reduce_against(rows_rref, v))


def reduce_against(rows_rref: Matrix, v: Sequence) -> Vector:
    """Residual of v after eliminating the pivots of an RREF row basis."""
    out = [gr(x) for x in v]
    for row in rows_rref:
        pc = next((j for j, x in enumerate(row) if not x.is_zero()), None)
        if pc is None:
            continue
        factor = out[pc] / row[pc]
        if not factor.is_zero():
            out = [x - factor * y for x, y in zip(out, row)]
    return out


def same_row_space(a: Matrix, b: Matrix) -> bool:
    return row_space_rref(a) == row_space_rref(b)


# -- Hermitian forms -----------------------------------------------------------


def hermitian_pairing(h: Matrix, x: Sequence, y: Sequence) -> GaussianRational:
    """sum_ij conj(x_i) h_ij y_j (conjugate-linear in the first slot)."""
    total = ZERO
    for i, xi in enumerate(x):
        cxi = gr(xi).conjugate()
        if cxi.is_zero():
            continue
        row = h[i]
        for j, yj in enumerate(y):
            yj = gr(yj)
            if not yj.is_zero():
                total = total + cxi * row[j] * yj
    return total


def hermitian_pivots(h: Matrix):
    """Conjugate Gram-Schmidt of a Hermitian matrix.

    Returns (is_positive_definite, pivots, vectors, witness) where pivots are
    the successive real diagonal values d_k = <u_k, u_k>_h; on failure,
    witness is the first vector with nonpositive value (exact certificate
    that the form is not positive definite).  Leading principal minors are
    the cumulative pivot products.
    """
    n = len(h)
    vectors: list[Vector] = []
    pivots: list[GaussianRational] = []
    for k in range(n):
        u = [ZERO] * n
        u[k] = ONE
        for l, (ul, dl) in enumerate(zip(vectors, pivots)):
            coeff = hermitian_pairing(h, ul, u) / dl
            if not coeff.is_zero():
                u = [a - coeff * b for a, b in zip(u, ul)]
        d = hermitian_pairing(h, u, u)
        if not d.is_real():
            raise ValueError("pairing matrix is not Hermitian")
        if d.re <= 0:
            return False, pivots, vectors, (u, d)
        vectors.append(u)
        pivots.append(d)
    return True, pivots, vectors, None


def leading_minors(pivots: Sequence[GaussianRational]) -> list[Fraction]:
    out: list[Fraction] = []
    acc = Fraction(1)
    for d in pivots:
        acc *= d.re
        out.append(acc)
    return out
