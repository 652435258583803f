"""Complex structures on real Lie algebras.

A ComplexStructureSpec always carries two synchronized representations after
validation: the real side (structure constants and the endomorphism J with
J^2 = -Id) and the complex side (a (1,0)-coframe a^1..a^n plus its structure
equations d a^j expanded over that coframe).  Either side can be the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exterior import (
    ComplexForm,
    MultiIndex,
    apply_antiderivation,
    conjugate,
    generator,
    monomial,
    substitute,
    wedge,
)
from .liealg import (
    InvalidAlgebraError,
    LieAlgebraSpec,
    ce_differential,
    ensure_valid,
    from_bracket_list,
    is_nilpotent,
)
from .linalg import (
    Matrix,
    Vector,
    gr,
    identity,
    inverse,
    is_zero_vec,
    kernel,
    mat_from_rows,
    matmul,
    matvec,
    reduce_against,
    row_space_rref,
    transpose,
    zeros,
)
from .scalars import GaussianRational, I, ONE, ZERO


class NonIntegrableError(ValueError):
    """The given almost complex structure is not integrable."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _has_02_part(eq: ComplexForm) -> bool:
    return any(key.bidegree == (0, 2) for key in eq.terms)


class JClass(str, Enum):
    SNN = "SNN"
    WEAKLY_NON_NILPOTENT = "WEAKLY_NON_NILPOTENT"
    NILPOTENT = "NILPOTENT"


@dataclass
class IntegrabilityResult:
    ok: bool
    witness: tuple[int, int] | None = None
    nijenhuis_value: list[Fraction] | None = None

    def __bool__(self):
        return self.ok


def _j_fraction_matrix(J: Matrix) -> list[list[Fraction]]:
    return [[entry.re for entry in row] for row in J]


def _check_j_square(J: Matrix, dim: int) -> None:
    for row in J:
        for entry in row:
            if not entry.is_real():
                raise ValueError("J must be a real rational matrix")
    sq = matmul(J, J)
    for i in range(dim):
        for j in range(dim):
            expect = -ONE if i == j else ZERO
            if sq[i][j] != expect:
                raise ValueError("J^2 != -Id")


def nijenhuis_tensor(g: LieAlgebraSpec, J: Matrix) -> IntegrabilityResult:
    """N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on basis pairs."""
    dim = g.dim
    jf = _j_fraction_matrix(J)

    def jcol(i: int) -> list[Fraction]:
        return [jf[k][i - 1] for k in range(dim)]

    def japply(v: list[Fraction]) -> list[Fraction]:
        return [sum((jf[k][m] * v[m] for m in range(dim)), Fraction(0)) for k in range(dim)]

    basis = [[Fraction(1) if m == i else Fraction(0) for m in range(dim)] for i in range(dim)]
    for i in range(1, dim + 1):
        for j in range(i + 1, dim + 1):
            x, y = basis[i - 1], basis[j - 1]
            jx, jy = jcol(i), jcol(j)
            term = g.bracket(jx, jy)
            term = [a - b for a, b in zip(term, japply(g.bracket(jx, y)))]
            term = [a - b for a, b in zip(term, japply(g.bracket(x, jy)))]
            term = [a - b for a, b in zip(term, g.bracket(x, y))]
            if any(term):
                return IntegrabilityResult(False, (i, j), term)
    return IntegrabilityResult(True)


def _eigen_coframe(g: LieAlgebraSpec, J: Matrix) -> Matrix:
    """Canonical basis (RREF rows) of the +i eigenspace of J acting on g*."""
    dim = g.dim
    jt = transpose(J)
    m = [[jt[r][c] - (I if r == c else ZERO) for c in range(dim)] for r in range(dim)]
    vecs = kernel(m, dim)
    if 2 * len(vecs) != dim:
        raise ValueError("J eigenspace has wrong dimension; is J^2 = -Id?")
    return row_space_rref(vecs)


def _real_d_on_coframe_row(g: LieAlgebraSpec, row: Vector) -> ComplexForm:
    """d of the complex 1-form sum_m row[m] e^m, as a real-coframe 2-form."""
    form = ComplexForm.zero(g.dim)
    for m, c in enumerate(row, start=1):
        if not c.is_zero():
            form = form + monomial(g.dim, (m,), coeff=c)
    return ce_differential(g, form)


def _real_to_complex_images(coframe: Matrix, dim: int, n: int) -> list[ComplexForm]:
    """Images e^m -> expansion in a^j, conj(a^j) for the given coframe rows."""
    big = [list(row) for row in coframe] + [
        [c.conjugate() for c in row] for row in coframe
    ]
    binv = inverse(big)
    images = []
    for m in range(dim):
        f = ComplexForm.zero(n)
        for j in range(n):
            c1 = binv[m][j]
            c2 = binv[m][n + j]
            if not c1.is_zero():
                f = f + monomial(n, (j + 1,), coeff=c1)
            if not c2.is_zero():
                f = f + monomial(n, anti=(j + 1,), coeff=c2)
        images.append(f)
    return images


def structure_equations(g: LieAlgebraSpec, coframe: Matrix) -> list[ComplexForm]:
    """d a^j expanded over the a / conj(a) coframe, for a^j = sum coframe[j] e."""
    dim = g.dim
    n = len(coframe)
    images = _real_to_complex_images(coframe, dim, n)
    zero_anti = [ComplexForm.zero(n)] * dim
    out = []
    for row in coframe:
        real_two_form = _real_d_on_coframe_row(g, row)
        out.append(substitute(real_two_form, images, zero_anti, n_target=n))
    return out


@dataclass
class ComplexStructureSpec:
    """Validated pair (g, J) with cached coframe and structure equations."""

    g: LieAlgebraSpec
    J: Matrix
    coframe: Matrix
    equations: list[ComplexForm]

    @property
    def n(self) -> int:
        return len(self.coframe)

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def from_matrix(g: LieAlgebraSpec, J: Sequence[Sequence]) -> "ComplexStructureSpec":
        J = mat_from_rows(J)
        if g.dim % 2:
            raise ValueError("complex structures need even real dimension")
        _check_j_square(J, g.dim)
        ensure_valid(g)
        integ = check_integrability(g, J)
        if not integ.ok:
            raise NonIntegrableError(
                f"Nijenhuis tensor nonzero on basis pair {integ.witness}",
                witness=integ,
            )
        coframe = _eigen_coframe(g, J)
        equations = structure_equations(g, coframe)
        return ComplexStructureSpec(g, J, coframe, equations)

    @staticmethod
    def from_coframe(g: LieAlgebraSpec, J: Sequence[Sequence], coframe: Sequence[Sequence]) -> "ComplexStructureSpec":
        """Use a caller-supplied adapted coframe instead of the canonical one."""
        J = mat_from_rows(J)
        coframe = mat_from_rows(coframe)
        _check_j_square(J, g.dim)
        ensure_valid(g)
        integ = check_integrability(g, J)
        if not integ.ok:
            raise NonIntegrableError(
                f"Nijenhuis tensor nonzero on basis pair {integ.witness}",
                witness=integ,
            )
        jt = transpose(J)
        for row in coframe:
            lhs = matvec(jt, row)
            if any(l != I * c for l, c in zip(lhs, row)):
                raise ValueError("coframe row is not a (1,0)-form for J")
        big = [list(r) for r in coframe] + [[c.conjugate() for c in r] for r in coframe]
        inverse(big)  # raises if the coframe is degenerate
        equations = structure_equations(g, coframe)
        return ComplexStructureSpec(g, J, coframe, equations)

    @staticmethod
    def from_equations(equations: Sequence[ComplexForm]) -> "ComplexStructureSpec":
        """Build the real algebra underlying given (1,0) structure equations.

        The real coframe is e^{2j-1} = Re a^j, e^{2j} = Im a^j; validation
        covers homogeneity, integrability ((0,2) parts must vanish) and the
        Jacobi identity (equivalently d^2 = 0 on the coframe).
        """
        n = len(equations)
        dim = 2 * n
        for j, eq in enumerate(equations, start=1):
            if eq.n != n:
                raise ValueError(f"equation {j} lives over the wrong coframe size")
            if not eq.is_zero() and eq.degrees() != {2}:
                raise ValueError(f"d a^{j} must be a 2-form")
            if _has_02_part(eq):
                raise NonIntegrableError(
                    f"d a^{j} has a (0,2) component; structure not integrable"
                )
        # real coframe images of a^j and conj(a^j)
        holo_images = []
        anti_images = []
        for j in range(1, n + 1):
            holo_images.append(
                monomial(dim, (2 * j - 1,)) + monomial(dim, (2 * j,), coeff=I)
            )
            anti_images.append(
                monomial(dim, (2 * j - 1,)) + monomial(dim, (2 * j,), coeff=-I)
            )
        entries = []
        for j in range(1, n + 1):
            d_alpha = substitute(equations[j - 1], holo_images, anti_images, n_target=dim)
            d_alpha_bar = substitute(
                conjugate(equations[j - 1]), holo_images, anti_images, n_target=dim
            )
            two = GaussianRational(2)
            d_re = (d_alpha + d_alpha_bar) / two
            d_im = (d_alpha - d_alpha_bar) / (two * I)
            for k, dform in ((2 * j - 1, d_re), (2 * j, d_im)):
                for (holo, _anti), coeff in dform.terms.items():
                    if not coeff.is_real():
                        raise ValueError("derived real structure constants not real")
                    i1, i2 = holo
                    entries.append((i1, i2, k, -coeff.re))
        g = from_bracket_list(dim, entries)
        ensure_valid(g)
        J = zeros(dim, dim)
        for j in range(1, n + 1):
            J[2 * j - 1][2 * j - 2] = ONE
            J[2 * j - 2][2 * j - 1] = -ONE
        coframe = zeros(n, dim)
        for j in range(1, n + 1):
            coframe[j - 1][2 * j - 2] = ONE
            coframe[j - 1][2 * j - 1] = I
        struct = ComplexStructureSpec(g, J, coframe, [eq for eq in equations])
        # the cached equations must agree with the real side
        recomputed = structure_equations(g, coframe)
        if recomputed != struct.equations:
            raise AssertionError("internal inconsistency between representations")
        return struct

    # -- differential -----------------------------------------------------------

    def d(self, f: ComplexForm) -> ComplexForm:
        """Chevalley-Eilenberg differential over the complex coframe."""
        if f.n != self.n:
            raise ValueError("form lives over a different coframe")
        return apply_antiderivation(f, self.equations)

    def closed_10_forms(self) -> list[Vector]:
        """Coefficient vectors x with d(sum x_j a^j) = 0, RREF-canonical."""
        keys = sorted({key for eq in self.equations for key in eq.terms})
        rows = [[eq.terms.get(key, ZERO) for eq in self.equations] for key in keys]
        if not rows:
            return [list(v) for v in identity(self.n)]
        return kernel(rows, self.n)

    def j_apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        jf = _j_fraction_matrix(self.J)
        dim = self.g.dim
        return [sum((jf[k][m] * Fraction(v[m]) for m in range(dim)), Fraction(0)) for k in range(dim)]


def struct_to_json(struct: ComplexStructureSpec) -> dict:
    from .exterior import form_to_json
    from .liealg import algebra_to_json

    return {
        "algebra": algebra_to_json(struct.g),
        "J": [[str(x.re) for x in row] for row in struct.J],
        "coframe": [[str(x) for x in row] for row in struct.coframe],
        "dalpha": [form_to_json(eq) for eq in struct.equations],
    }


def struct_from_json(data) -> ComplexStructureSpec:
    """Rebuild and revalidate a serialized structure; equations must agree."""
    from .exterior import form_from_json
    from .liealg import algebra_from_json
    from .scalars import parse_scalar

    g = algebra_from_json(data["algebra"])
    J = [[parse_scalar(x) for x in row] for row in data["J"]]
    coframe = [[parse_scalar(x) for x in row] for row in data["coframe"]]
    struct = ComplexStructureSpec.from_coframe(g, J, coframe)
    stored = [form_from_json(item, struct.n) for item in data["dalpha"]]
    if stored != struct.equations:
        raise ValueError("stored structure equations do not match the algebra")
    return struct


def check_integrability(g: LieAlgebraSpec, J: Sequence[Sequence]) -> IntegrabilityResult:
    """Nijenhuis test cross-checked against the bidegree test on d(Lambda^{1,0}).

    Disagreement between the two tests is an internal error, not a verdict.
    """
    J = mat_from_rows(J)
    _check_j_square(J, g.dim)
    ensure_valid(g)
    nij = nijenhuis_tensor(g, J)
    coframe = _eigen_coframe(g, J)
    equations = structure_equations(g, coframe)
    bidegree_ok = not any(_has_02_part(eq) for eq in equations)
    if bidegree_ok != nij.ok:
        raise AssertionError(
            "integrability tests disagree (Nijenhuis vs bidegree); internal bug"
        )
    return nij


def coframe_from_J(g: LieAlgebraSpec, J: Sequence[Sequence]) -> ComplexStructureSpec:
    """Canonical (1,0)-coframe and structure equations for an integrable J."""
    return ComplexStructureSpec.from_matrix(g, J)


# -- ascending series adapted to J ----------------------------------------------


@dataclass
class AscendingSeries:
    chain: list[Matrix]
    dims: list[int]
    stabilization: int
    classification: JClass

    @property
    def first_term(self) -> Matrix:
        return self.chain[1] if len(self.chain) > 1 else []


def ascending_series(struct: ComplexStructureSpec) -> AscendingSeries:
    """Chain a_0 = 0, a_k = {X : [X,g] and [JX,g] both land in a_{k-1}}.

    Defined (and classified) for nilpotent algebras only.
    """
    g = struct.g
    if not is_nilpotent(g):
        raise InvalidAlgebraError("ascending series classification needs a nilpotent algebra")
    dim = g.dim
    jf = _j_fraction_matrix(struct.J)
    ad_mats = []
    for i in range(1, dim + 1):
        b = zeros(dim, dim)
        for m in range(1, dim + 1):
            for k, c in g.bracket_basis(m, i).items():
                b[k - 1][m - 1] = gr(c)
        ad_mats.append(b)
    jmat = mat_from_rows(jf)

    chain: list[Matrix] = [[]]
    while True:
        prev = chain[-1]
        ann = kernel(prev, dim) if prev else [list(v) for v in identity(dim)]
        rows = []
        for b in ad_mats:
            bj = matmul(b, jmat)
            for phi in ann:
                rows.append([sum((phi[k] * b[k][m] for k in range(dim)), ZERO) for m in range(dim)])
                rows.append([sum((phi[k] * bj[k][m] for k in range(dim)), ZERO) for m in range(dim)])
        nxt = row_space_rref(kernel(rows, dim)) if rows else [list(v) for v in identity(dim)]
        if len(nxt) == len(prev):
            break
        chain.append(nxt)
    dims = [len(step) for step in chain]
    stab = len(chain) - 1
    if len(dims) == 1:
        classification = JClass.SNN
    elif dims[-1] == dim:
        classification = JClass.NILPOTENT
    else:
        classification = JClass.WEAKLY_NON_NILPOTENT
    return AscendingSeries(chain, dims, stab, classification)


def is_quasi_nilpotent(series: AscendingSeries) -> bool:
    return series.classification in (JClass.NILPOTENT, JClass.WEAKLY_NON_NILPOTENT)


# -- triangular coframe (closed forms first) --------------------------------------


@dataclass
class TriangularCoframe:
    transform: Matrix  # rows: new coframe in terms of the old one
    equations: list[ComplexForm]
    closed_count: int  # leading coframe elements with d = 0


def _two_form_keys(n: int) -> list[MultiIndex]:
    keys = []
    import itertools

    for p, q in ((2, 0), (1, 1), (0, 2)):
        for holo in itertools.combinations(range(1, n + 1), p):
            for anti in itertools.combinations(range(1, n + 1), q):
                keys.append(MultiIndex(holo, anti))
    return keys


def _form_vector(f: ComplexForm, keys: list[MultiIndex]) -> Vector:
    return [f.terms.get(key, ZERO) for key in keys]


def ideal_two_form_span(struct_n: int, rows: Matrix, keys: list[MultiIndex]) -> Matrix:
    """Span of {s ^ gamma : s in the row span, gamma any coframe 1-form}."""
    gens = []
    for row in rows:
        s = ComplexForm.zero(struct_n)
        for j, c in enumerate(row, start=1):
            if not c.is_zero():
                s = s + monomial(struct_n, (j,), coeff=c)
        for j in range(1, struct_n + 1):
            for anti in (False, True):
                w = wedge(s, generator(struct_n, j, anti))
                if not w.is_zero():
                    gens.append(_form_vector(w, keys))
    return row_space_rref(gens)


def triangular_coframe(struct: ComplexStructureSpec) -> TriangularCoframe:
    """Reorder/retriangulate the coframe so each d a^{j+1} lies in the ideal
    generated by a^1..a^j; closed elements come first.

    Exists for every complex structure on a nilpotent algebra; raises when
    the extraction stalls (non-nilpotent input).
    """
    g = struct.g
    if not is_nilpotent(g):
        raise InvalidAlgebraError("triangular coframe extraction needs a nilpotent algebra")
    n = struct.n
    keys = _two_form_keys(n)
    eq_vectors = [_form_vector(eq, keys) for eq in struct.equations]

    chosen: Matrix = []
    closed_count = None
    while len(chosen) < n:
        span = ideal_two_form_span(n, chosen, keys)
        rows = []
        reduced = [reduce_against(span, v) for v in eq_vectors]
        for coord in range(len(keys)):
            rows.append([reduced[j][coord] for j in range(n)])
        sols = row_space_rref(kernel(rows, n))
        if closed_count is None:
            closed_count = len(sols)
        if len(sols) <= len(chosen):
            raise InvalidAlgebraError("triangular extraction stalled; input not nilpotent?")
        new_rows = list(chosen)
        for cand in sols:
            span_now = row_space_rref(new_rows) if new_rows else []
            if not is_zero_vec(reduce_against(span_now, cand)):
                new_rows.append(cand)
        chosen = new_rows
    transform = chosen
    tinv = inverse([row[:] for row in transform])
    old_in_new = [
        sum(
            (monomial(n, (l + 1,), coeff=tinv[k][l]) for l in range(n) if not tinv[k][l].is_zero()),
            ComplexForm.zero(n),
        )
        for k in range(n)
    ]
    equations = []
    for row in transform:
        d_old = ComplexForm.zero(n)
        for k, c in enumerate(row):
            if not c.is_zero():
                d_old = d_old + struct.equations[k] * c
        equations.append(substitute(d_old, old_in_new, n_target=n))
    return TriangularCoframe(transform, equations, closed_count)


def in_coframe_ideal(form: ComplexForm, first: int) -> bool:
    """True when every term of `form` contains one of a^1..a^first."""
    return all(
        any(j <= first for j in key.holo) for key in form.terms
    )


# -- reductions -------------------------------------------------------------------


@dataclass
class Restriction:
    sub: ComplexStructureSpec
    omega_h: ComplexForm
    eta: ComplexForm
    theta: ComplexForm
    transform: Matrix


def _complete_row_to_basis(row: Vector, n: int) -> Matrix:
    pivot = next((j for j, c in enumerate(row) if not c.is_zero()), None)
    if pivot is None:
        raise ValueError("cannot complete the zero row")
    rows = [list(row)]
    for j in range(n):
        if j != pivot:
            unit = [ZERO] * n
            unit[j] = ONE
            rows.append(unit)
    return rows


def _transform_struct_forms(struct: ComplexStructureSpec, transform: Matrix):
    """Structure equations in the coframe a'^j = sum transform[j][k] a^k."""
    n = struct.n
    tinv = inverse([row[:] for row in transform])
    old_in_new = [
        sum(
            (monomial(n, (l + 1,), coeff=tinv[k][l]) for l in range(n) if not tinv[k][l].is_zero()),
            ComplexForm.zero(n),
        )
        for k in range(n)
    ]
    equations = []
    for row in transform:
        d_old = ComplexForm.zero(n)
        for k, c in enumerate(row):
            if not c.is_zero():
                d_old = d_old + struct.equations[k] * c
        equations.append(substitute(d_old, old_in_new, n_target=n))

    def to_new(f: ComplexForm) -> ComplexForm:
        return substitute(f, old_in_new, n_target=n)

    return equations, to_new


def _strip_index(f: ComplexForm, idx: int, n_new: int, relabel) -> ComplexForm:
    """Drop terms containing idx and relabel the rest via `relabel`."""
    out = ComplexForm.zero(n_new)
    for (holo, anti), c in f.terms.items():
        if idx in holo or idx in anti:
            continue
        out = out + monomial(
            n_new, tuple(relabel(j) for j in holo), tuple(relabel(j) for j in anti), c
        )
    return out


def _extract_factor(f: ComplexForm, idx: int, holo_side: bool, anti_side: bool, left: bool):
    """Write the idx-carrying part of f as factor ^ rest (or rest ^ factor).

    Returns the coefficient form `rest` such that wedging it with the fixed
    factor (a^idx, conj, or i a^{idx,idxb}) reproduces exactly those terms.
    """
    n = f.n
    if holo_side and anti_side:
        factor = monomial(n, (idx,), (idx,), I)
    elif holo_side:
        factor = monomial(n, (idx,))
    else:
        factor = monomial(n, anti=(idx,))
    rest = ComplexForm.zero(n)
    for (holo, anti), c in f.terms.items():
        if (idx in holo) != holo_side or (idx in anti) != anti_side:
            continue
        reduced = MultiIndex(
            tuple(j for j in holo if not (holo_side and j == idx)),
            tuple(j for j in anti if not (anti_side and j == idx)),
        )
        mono = ComplexForm(n, {reduced: ONE})
        probe = wedge(factor, mono) if left else wedge(mono, factor)
        scale = probe.terms[MultiIndex(holo, anti)]
        rest = rest + mono * (c / scale)
    return rest


def restrict_to_jinvariant_ideal(
    struct: ComplexStructureSpec, omega: ComplexForm, alpha: ComplexForm
) -> Restriction:
    """Restriction to the J-invariant codimension-2 ideal dual to a closed a^1.

    The closed (1,0)-form alpha becomes the first coframe element; the ideal
    h annihilates alpha and its conjugate, and omega splits as
    omega_h + a^1 ^ eta + conj + i a^{1,1b} ^ theta.
    """
    n = struct.n
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    if alpha.bidegrees() != {(1, 0)}:
        raise ValueError("alpha must be a (1,0)-form")
    if not struct.d(alpha).is_zero():
        raise ValueError("alpha must be closed")
    if not omega.is_real():
        raise ValueError("omega must be real")
    row = [alpha.terms.get(MultiIndex((j,), ()), ZERO) for j in range(1, n + 1)]
    transform = _complete_row_to_basis(row, n)
    equations, to_new = _transform_struct_forms(struct, transform)

    def relabel(j: int) -> int:
        return j - 1

    sub_equations = [
        _strip_index(equations[j], 1, n - 1, relabel) for j in range(1, n)
    ]
    sub = ComplexStructureSpec.from_equations(sub_equations)

    omega_new = to_new(omega)
    omega_h = _strip_index(omega_new, 1, n - 1, relabel)
    eta_full = _extract_factor(omega_new, 1, True, False, left=True)
    theta_full = _extract_factor(omega_new, 1, True, True, left=True)
    eta = _strip_index(eta_full, 1, n - 1, relabel)
    theta = _strip_index(theta_full, 1, n - 1, relabel)
    return Restriction(sub, omega_h, eta, theta, transform)


@dataclass
class BExtension:
    quotient: ComplexStructureSpec
    omega: ComplexForm  # coefficient of i a^{n,nb}; the (p-1,p-1) descent
    omega_k: ComplexForm
    eta: ComplexForm
    plane: Matrix  # real basis of the central J-invariant plane
    transform: Matrix


def b_extension_quotient(
    struct: ComplexStructureSpec, omega: ComplexForm, p: int
) -> BExtension:
    """Quotient by a central J-invariant plane inside the first series term.

    Requires a quasi-nilpotent structure.  The last coframe element spans the
    plane's (1,0)-dual; omega decomposes as
    omega_k + eta ^ a^n + conj(eta) ^ conj(a^n) + omega' ^ i a^{n,nb}
    and omega' is returned on the quotient coframe.
    """
    n = struct.n
    series = ascending_series(struct)
    first = series.first_term
    if not first:
        raise InvalidAlgebraError("no central J-invariant plane: structure is SnN")
    if not omega.is_real():
        raise ValueError("omega must be real")
    if omega.bidegrees() not in ({(p, p)}, set()):
        raise ValueError(f"omega must be a real ({p},{p})-form")
    x = [c.re for c in first[0]]
    jx = struct.j_apply(x)
    plane = mat_from_rows([x, jx])

    # (1,0)-forms vanishing on the plane: single linear condition
    u = [
        sum((struct.coframe[j][m] * gr(x[m]) for m in range(struct.g.dim)), ZERO)
        for j in range(n)
    ]
    vanish = kernel([u], n)
    if len(vanish) != n - 1:
        raise AssertionError("expected a corank-one condition on the coframe")
    pivot = next(j for j, c in enumerate(u) if not c.is_zero())
    last = [ZERO] * n
    last[pivot] = ONE / u[pivot]
    transform = [list(v) for v in vanish] + [last]
    equations, to_new = _transform_struct_forms(struct, transform)

    def relabel(j: int) -> int:
        return j

    sub_equations = []
    for j in range(n - 1):
        eq = equations[j]
        for key in eq.terms:
            if n in key.holo or n in key.anti:
                raise AssertionError("quotient equations must not touch the plane dual")
        sub_equations.append(_strip_index(eq, n, n - 1, relabel))
    quotient = ComplexStructureSpec.from_equations(sub_equations)

    omega_new = to_new(omega)
    omega_k = _strip_index(omega_new, n, n - 1, relabel)
    eta_full = _extract_factor(omega_new, n, True, False, left=False)
    omega_prime_full = _extract_factor(omega_new, n, True, True, left=False)
    eta = _strip_index(eta_full, n, n - 1, relabel)
    omega_prime = _strip_index(omega_prime_full, n, n - 1, relabel)
    return BExtension(quotient, omega_prime, omega_k, eta, plane, transform)
