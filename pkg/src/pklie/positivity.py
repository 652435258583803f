"""Positivity of real (p,p)-forms: transversality and its certificates.

Verdicts are three-valued.  TRANSVERSE and NOT_TRANSVERSE always carry exact
certificates (a positive-definite Gram reduction, or a simple test form with
nonpositive volume coefficient); INCONCLUSIVE reports search statistics.
Floating point appears only inside the candidate search; every candidate is
re-verified in exact arithmetic before it can appear in a certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exterior import (
    ComplexForm,
    MultiIndex,
    conjugate,
    monomial,
    reference_volume_coefficient,
    substitute,
    wedge,
    wedge_all,
)
from .linalg import (
    Matrix,
    Vector,
    gr,
    hermitian_pivots,
    kernel,
    leading_minors,
)
from .scalars import GaussianRational, I, ONE, ZERO, i_power


class TransStatus(str, Enum):
    TRANSVERSE = "TRANSVERSE"
    NOT_TRANSVERSE = "NOT_TRANSVERSE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class SearchBudget:
    """Knobs of the numeric searches; exact paths ignore them."""

    restarts: int = 200
    steps: int = 500
    seed: int = 0
    step_tol: float = 1e-12
    witness_cap: int = 24

    def config_json(self) -> dict:
        return {
            "pkl.search.restarts": self.restarts,
            "pkl.search.steps": self.steps,
            "pkl.search.seed": self.seed,
        }


@dataclass
class GramCertificate:
    pivots: list[GaussianRational]
    minors: list[Fraction]

    def to_json(self) -> dict:
        return {
            "pivots": [str(p) for p in self.pivots],
            "minors": [str(m) for m in self.minors],
        }


@dataclass
class SimpleFormWitness:
    """Columns of (1,0)-forms whose wedge is the offending simple form."""

    columns: list[list[GaussianRational]]
    value: GaussianRational

    def to_form(self, n: int) -> ComplexForm:
        factors = []
        for col in self.columns:
            f = ComplexForm.zero(n)
            for j, c in enumerate(col, start=1):
                if not gr(c).is_zero():
                    f = f + monomial(n, (j,), coeff=c)
            factors.append(f)
        return wedge_all(factors, n)

    def to_json(self) -> dict:
        return {
            "columns": [[str(c) for c in col] for col in self.columns],
            "value": str(self.value),
        }


@dataclass
class TransversalityVerdict:
    status: TransStatus
    gram: GramCertificate | None = None
    witness: SimpleFormWitness | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"status": self.status.value}
        if self.gram is not None:
            out["gram"] = self.gram.to_json()
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.stats:
            out["stats"] = self.stats
        return out


# -- volume pairing ---------------------------------------------------------------


def _top_coefficient(f: ComplexForm) -> GaussianRational:
    n = f.n
    top = MultiIndex(tuple(range(1, n + 1)), tuple(range(1, n + 1)))
    for key, value in f.terms.items():
        if key != top:
            raise ValueError("form is not of top degree")
    return f.terms.get(top, ZERO)


def volume_coefficient(omega: ComplexForm, psi: ComplexForm) -> GaussianRational:
    """c with i^{(n-p)^2} omega ^ psi ^ conj(psi) = c * (i a^{1,1b} ^ ... ^ i a^{n,nb})."""
    return pairing_coefficient(omega, psi, psi)


def pairing_coefficient(
    omega: ComplexForm, psi: ComplexForm, phi: ComplexForm
) -> GaussianRational:
    """Polarized volume pairing i^{(n-p)^2} omega ^ psi ^ conj(phi) over the volume."""
    n = omega.n
    bid = omega.bidegree()
    if bid is None or bid[0] != bid[1]:
        raise ValueError("omega must be a homogeneous (p,p)-form")
    p = bid[0]
    k = n - p
    for test in (psi, phi):
        if not test.is_zero() and test.bidegrees() != {(k, 0)}:
            raise ValueError(f"test form must be a ({k},0)-form")
    w = wedge(wedge(omega, psi), conjugate(phi)) * i_power(k * k)
    return _top_coefficient(w) / reference_volume_coefficient(n)


def gram_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), k))


def gram_matrix(omega: ComplexForm) -> tuple[list[tuple[int, ...]], Matrix]:
    """Hermitian matrix of the volume pairing on Lambda^{n-p,0} monomials."""
    n = omega.n
    bid = omega.bidegree()
    if bid is None or bid[0] != bid[1]:
        raise ValueError("omega must be a homogeneous (p,p)-form")
    k = n - bid[0]
    basis = gram_basis(n, k)
    mono = [monomial(n, idx) for idx in basis]
    h = [
        [pairing_coefficient(omega, mono[a], mono[b]) for b in range(len(basis))]
        for a in range(len(basis))
    ]
    for a in range(len(basis)):
        for b in range(len(basis)):
            if h[a][b] != h[b][a].conjugate():
                raise AssertionError("volume pairing is not Hermitian; omega not real?")
    return basis, h


def gram_positive_definite(h: Matrix):
    """(is_pd, certificate-or-witness) via exact conjugate Gram-Schmidt."""
    ok, pivots, _vectors, bad = hermitian_pivots(h)
    if ok:
        return True, GramCertificate(pivots, leading_minors(pivots))
    return False, bad


# -- simple (decomposable) forms ----------------------------------------------------


def divisor_space(psi: ComplexForm) -> list[Vector]:
    """(1,0)-forms phi with phi ^ psi = 0; dimension equals deg(psi) iff simple."""
    n = psi.n
    products = [wedge(monomial(n, (j,)), psi) for j in range(1, n + 1)]
    keys = sorted({key for w in products for key in w.terms})
    if not keys:
        return _std_basis(n)
    rows = [[w.terms.get(key, ZERO) for w in products] for key in keys]
    return kernel(rows, n)


def _std_basis(n: int) -> list[Vector]:
    out = []
    for j in range(n):
        v = [ZERO] * n
        v[j] = ONE
        out.append(v)
    return out


def is_simple(psi: ComplexForm) -> bool:
    if psi.is_zero():
        return False
    bid = psi.bidegree()
    if bid is None or bid[1] != 0:
        return False
    k = bid[0]
    if k in (0, 1, psi.n - 1, psi.n):
        return True
    return len(divisor_space(psi)) == k


def simple_factors(psi: ComplexForm) -> list[Vector] | None:
    """Columns mu_1..mu_k with mu_1 ^ ... ^ mu_k = psi exactly, or None."""
    if psi.is_zero():
        return None
    bid = psi.bidegree()
    if bid is None or bid[1] != 0:
        return None
    k = bid[0]
    if k == 0:
        return None
    cols = divisor_space(psi)
    if len(cols) != k:
        return None
    candidate = _columns_form(cols, psi.n)
    if candidate.is_zero():
        return None
    key = next(iter(psi.terms))
    cand_coeff = candidate.terms.get(key)
    if cand_coeff is None:
        return None
    scale = psi.terms[key] / cand_coeff
    if candidate * scale != psi:
        return None
    cols = [list(c) for c in cols]
    cols[0] = [x * scale for x in cols[0]]
    return cols


def _columns_form(cols: Sequence[Vector], n: int) -> ComplexForm:
    factors = []
    for col in cols:
        f = ComplexForm.zero(n)
        for j, c in enumerate(col, start=1):
            if not c.is_zero():
                f = f + monomial(n, (j,), coeff=c)
        factors.append(f)
    return wedge_all(factors, n)


# -- transversality decision --------------------------------------------------------


def check_transverse(omega: ComplexForm, budget: SearchBudget | None = None) -> TransversalityVerdict:
    """Decide transversality of a real (p,p)-form.

    Pipeline: exact Gram positivity (sufficient); exact witness extraction at
    p = 1 or p = n-1 (where transversality and positive definiteness agree);
    an exact scan over coframe monomials; then a budgeted numeric search over
    decomposable directions whose findings are rationalized and re-verified.
    """
    budget = budget or SearchBudget()
    n = omega.n
    bid = omega.bidegree()
    if bid is None or bid[0] != bid[1]:
        raise ValueError("transversality is defined for homogeneous (p,p)-forms")
    if not omega.is_real():
        raise ValueError("transversality is defined for real forms")
    p = bid[0]
    if not 1 <= p <= n - 1:
        raise ValueError("need 1 <= p <= n-1")
    k = n - p
    basis, h = gram_matrix(omega)
    ok, cert = gram_positive_definite(h)
    if ok:
        return TransversalityVerdict(TransStatus.TRANSVERSE, gram=cert)
    bad_vec, bad_val = cert
    if p in (1, n - 1):
        psi = _vector_form(bad_vec, basis, n)
        cols = simple_factors(psi)
        if cols is None:
            raise AssertionError("degree-1 or codegree-1 forms must be simple")
        value = volume_coefficient(omega, psi)
        witness = SimpleFormWitness(cols, value)
        return TransversalityVerdict(TransStatus.NOT_TRANSVERSE, witness=witness)
    # exact monomial scan on the Gram diagonal
    for a, idx in enumerate(basis):
        if h[a][a].re <= 0:
            cols = [_unit_column(n, j) for j in idx]
            witness = SimpleFormWitness(cols, h[a][a])
            return TransversalityVerdict(TransStatus.NOT_TRANSVERSE, witness=witness)
    found, stats = _numeric_negative_search(omega, basis, h, budget)
    if found is not None:
        return TransversalityVerdict(TransStatus.NOT_TRANSVERSE, witness=found, stats=stats)
    stats.update(budget.config_json())
    return TransversalityVerdict(TransStatus.INCONCLUSIVE, stats=stats)


def _unit_column(n: int, j: int) -> Vector:
    col = [ZERO] * n
    col[j - 1] = ONE
    return col


def _vector_form(vec: Sequence, basis, n: int) -> ComplexForm:
    out = ComplexForm.zero(n)
    for coeff, idx in zip(vec, basis):
        if not gr(coeff).is_zero():
            out = out + monomial(n, idx, coeff=coeff)
    return out


# -- numeric search over decomposable directions -------------------------------------


def _plucker(mat: np.ndarray, basis) -> np.ndarray:
    k = mat.shape[1]
    out = np.empty(len(basis), dtype=complex)
    for a, idx in enumerate(basis):
        rows = [j - 1 for j in idx]
        out[a] = np.linalg.det(mat[np.ix_(rows, range(k))]) if k else 1.0
    return out


def _plucker_jacobian(mat: np.ndarray, basis) -> np.ndarray:
    n, k = mat.shape
    jac = np.zeros((len(basis), n * k), dtype=complex)
    for a, idx in enumerate(basis):
        rows = [j - 1 for j in idx]
        for pos, r in enumerate(rows):
            for c in range(k):
                sub_rows = rows[:pos] + rows[pos + 1 :]
                sub_cols = [cc for cc in range(k) if cc != c]
                if sub_rows:
                    minor = np.linalg.det(mat[np.ix_(sub_rows, sub_cols)])
                else:
                    minor = 1.0
                jac[a, r * k + c] = (-1) ** (pos + c) * minor
    return jac


def _numeric_negative_search(omega, basis, h_exact, budget: SearchBudget):
    """Minimize the volume pairing over decomposable directions (float), then
    rationalize promising minima and re-verify exactly."""
    n = omega.n
    k = len(basis[0]) if basis else 0
    hf = np.array([[v.to_complex() for v in row] for row in h_exact])
    rng = np.random.default_rng(budget.seed)
    best = np.inf
    stats = {"restarts": 0, "min_margin": None}
    for _ in range(max(budget.restarts, 0)):
        stats["restarts"] += 1
        mat = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        lr = 0.1
        prev = np.inf
        for _step in range(budget.steps):
            p = _plucker(mat, basis)
            norm2 = float(np.real(np.vdot(p, p)))
            if norm2 < 1e-30:
                mat = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
                continue
            hp = hf @ p
            val = float(np.real(np.vdot(p, hp))) / norm2
            jac = _plucker_jacobian(mat, basis)
            grad = jac.conj().T @ (hp - val * p) / norm2
            mat = mat - lr * grad.reshape(n, k)
            scale = np.max(np.abs(mat))
            if scale > 4.0:
                mat = mat / scale
            if abs(prev - val) < budget.step_tol:
                break
            if val > prev:
                lr *= 0.5
            prev = val
        p = _plucker(mat, basis)
        norm2 = float(np.real(np.vdot(p, p)))
        if norm2 < 1e-30:
            continue
        val = float(np.real(np.vdot(p, hf @ p))) / norm2
        best = min(best, val)
        if val < -1e-9:
            witness = _rationalize_witness(omega, mat)
            if witness is not None:
                stats["min_margin"] = best
                return witness, stats
    stats["min_margin"] = best if best < np.inf else None
    return None, stats


def _rationalize_witness(omega: ComplexForm, mat: np.ndarray) -> SimpleFormWitness | None:
    """Continued-fraction rounding of float columns, then exact re-evaluation."""
    n, k = mat.shape
    scale = np.max(np.abs(mat))
    if scale > 0:
        mat = mat / scale
    for denom in (10, 100, 10**4, 10**6):
        cols = []
        for c in range(k):
            col = []
            for r in range(n):
                z = mat[r, c]
                col.append(
                    GaussianRational(
                        Fraction(float(np.real(z))).limit_denominator(denom),
                        Fraction(float(np.imag(z))).limit_denominator(denom),
                    )
                )
            cols.append(col)
        psi = _columns_form(cols, n)
        if psi.is_zero():
            continue
        value = volume_coefficient(omega, psi)
        if value.re <= 0:
            return SimpleFormWitness(cols, value)
    return None


def witness_from_json(data: dict) -> SimpleFormWitness:
    from .scalars import parse_scalar

    columns = [[parse_scalar(x) for x in col] for col in data["columns"]]
    return SimpleFormWitness(columns, parse_scalar(data["value"]))


def verify_verdict(omega: ComplexForm, data: dict) -> list[str]:
    """Exact re-verification of a serialized TransversalityVerdict."""
    failures: list[str] = []
    status = data.get("status")
    if status == TransStatus.TRANSVERSE.value:
        _, h = gram_matrix(omega)
        ok, pivots, _vectors, _bad = hermitian_pivots(h)
        if not ok:
            failures.append("Gram pairing is not positive definite")
        else:
            minors = [str(m) for m in leading_minors(pivots)]
            if minors != data.get("gram", {}).get("minors"):
                failures.append("stored minors do not match the recomputation")
    elif status == TransStatus.NOT_TRANSVERSE.value:
        witness = witness_from_json(data["witness"])
        psi = witness.to_form(omega.n)
        if psi.is_zero():
            failures.append("witness form is zero")
        else:
            value = volume_coefficient(omega, psi)
            if value != witness.value:
                failures.append("stored witness value does not match")
            if value.re > 0:
                failures.append("witness pairing is positive; no refutation")
    elif status != TransStatus.INCONCLUSIVE.value:
        failures.append(f"unknown status {status!r}")
    return failures


def verify_strongly_positive(omega: ComplexForm, factors: Sequence[ComplexForm]) -> bool:
    """Constructive strong-positivity check: omega = i^{p^2} sum psi_j ^ conj(psi_j).

    Only verifies a supplied decomposition; there is no general decision
    procedure here.
    """
    bid = omega.bidegree()
    if bid is None or bid[0] != bid[1]:
        return False
    p = bid[0]
    total = ComplexForm.zero(omega.n)
    for psi in factors:
        if not is_simple(psi):
            return False
        total = total + wedge(psi, conjugate(psi)) * i_power(p * p)
    return total == omega


def random_decomposable(n: int, k: int, rng) -> ComplexForm:
    """Random rational simple (k,0)-form; may be zero for degenerate draws."""
    cols = [
        [GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(n)]
        for _ in range(k)
    ]
    return _columns_form(cols, n)


# -- root extraction for top-codimension positive forms ------------------------------


@dataclass
class MetricRoot:
    exact: bool
    form: ComplexForm
    residual: float


def _nth_root_fraction(value: Fraction, k: int) -> Fraction | None:
    def iroot(m: int) -> int | None:
        if m < 0:
            return None
        r = round(m ** (1.0 / k)) if m else 0
        for cand in range(max(r - 2, 0), r + 3):
            if cand**k == m:
                return cand
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def metric_power_root(phi: ComplexForm) -> MetricRoot:
    """Extract the (1,1)-form omega with omega^(m-1)/(m-1)! = phi.

    phi must be a real (m-1,m-1)-form whose Gram pairing on Lambda^{1,0} is
    positive definite.  The pairing is diagonalized by an exact congruence;
    the diagonal system prod_{k != j} c_k = d_j has the closed-form solution
    c_j = S/d_j with S the (m-1)-st root of prod d_j.  When S is irrational
    the root is returned with float-accurate rational coefficients and the
    exact-wedge residual is reported.
    """
    m = phi.n
    bid = phi.bidegree()
    if bid != (m - 1, m - 1):
        raise ValueError("phi must be an (m-1,m-1)-form")
    if not phi.is_real():
        raise ValueError("phi must be real")
    basis, h = gram_matrix(phi)
    ok, pivots, vectors, bad = hermitian_pivots(h)
    if not ok:
        raise ValueError("phi is not strictly positive (Gram pairing not definite)")
    # coframe change b = S a with S = conj(V) (rows of the Gram-Schmidt basis)
    s_rows = [[c.conjugate() for c in vec] for vec in vectors]
    d = [piv.re for piv in pivots]
    prod = Fraction(1)
    for dj in d:
        prod *= dj
    root = _nth_root_fraction(prod, m - 1)
    factorial = 1
    for t in range(2, m):
        factorial *= t

    def build_root_form(cs: list[GaussianRational]) -> ComplexForm:
        omega_b = ComplexForm.zero(m)
        for j, c in enumerate(cs, start=1):
            omega_b = omega_b + monomial(m, (j,), (j,), c * I)
        images = []
        for row in s_rows:
            f = ComplexForm.zero(m)
            for j, c in enumerate(row, start=1):
                if not c.is_zero():
                    f = f + monomial(m, (j,), coeff=c)
            images.append(f)
        return substitute(omega_b, images, n_target=m)

    def power_over_factorial(w: ComplexForm) -> ComplexForm:
        acc = ComplexForm.scalar(m, 1)
        for _ in range(m - 1):
            acc = wedge(acc, w)
        return acc / factorial

    if root is not None:
        cs = [gr(root / dj) for dj in d]
        omega = build_root_form(cs)
        if power_over_factorial(omega) != phi:
            raise AssertionError("exact root reconstruction failed")
        return MetricRoot(True, omega, 0.0)
    root_f = float(prod) ** (1.0 / (m - 1))
    cs = [
        gr(Fraction(root_f / float(dj)).limit_denominator(10**12)) for dj in d
    ]
    omega = build_root_form(cs)
    diff = power_over_factorial(omega) - phi
    residual = max(
        (abs(v.to_complex()) for v in diff.terms.values()), default=0.0
    )
    if residual > 1e-6:
        raise AssertionError("float-mode root residual unexpectedly large")
    return MetricRoot(False, omega, residual)
