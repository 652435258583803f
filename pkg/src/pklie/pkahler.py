"""The p-Kahler decision pipeline.

Real (p,p)-forms are coordinatized over the rationals (Hermitian-symmetric
coefficient pairs), the closed subspace is an exact kernel, and verdicts are
certified: FOUND carries an exactly closed form with an exact Gram
certificate, REFUTED carries either an exact linear-programming witness
family with Farkas multipliers, a same-sign obstruction certificate, or the
empty closed cone.  INCONCLUSIVE is a first-class outcome.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .cxstruct import ComplexStructureSpec, ascending_series, JClass
from .exterior import (
    ComplexForm,
    MultiIndex,
    bidegree_component,
    conjugate,
    form_from_json,
    form_to_json,
    monomial,
    wedge,
)
from .liealg import InvalidAlgebraError, is_nilpotent, is_unimodular
from .linalg import gr, kernel, same_row_space
from .positivity import (
    GramCertificate,
    SearchBudget,
    TransStatus,
    TransversalityVerdict,
    check_transverse,
    gram_basis,
    gram_matrix,
    gram_positive_definite,
    is_simple,
    volume_coefficient,
)
from .scalars import GaussianRational, I, ONE, ZERO, i_power
from .simplex import feasibility, verify_farkas


class PKVerdict(str, Enum):
    FOUND = "FOUND"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


class ObstructionRejected(ValueError):
    pass


# -- real (p,p) coordinates ----------------------------------------------------


def real_pp_basis(n: int, p: int) -> list[ComplexForm]:
    """Rational basis of the real vector space of real (p,p)-forms."""
    combos = list(itertools.combinations(range(1, n + 1), p))
    unit = i_power(p * p)
    out = []
    for a in combos:
        out.append(monomial(n, a, a, unit))
    for ia, a in enumerate(combos):
        for b in combos[ia + 1 :]:
            out.append(monomial(n, a, b, unit) + monomial(n, b, a, unit))
            out.append(monomial(n, a, b, unit * I) - monomial(n, b, a, unit * I))
    return out


def pp_coordinates(omega: ComplexForm, p: int) -> list[Fraction]:
    """Coordinates of a real (p,p)-form over real_pp_basis, exact."""
    n = omega.n
    combos = list(itertools.combinations(range(1, n + 1), p))
    unit = i_power(p * p)
    coords: list[Fraction] = []
    for a in combos:
        c = omega.terms.get(MultiIndex(a, a), ZERO) / unit
        if not c.is_real():
            raise ValueError("omega is not real in these coordinates")
        coords.append(c.re)
    for ia, a in enumerate(combos):
        for b in combos[ia + 1 :]:
            c = omega.terms.get(MultiIndex(a, b), ZERO) / unit
            coords.append(c.re)
            coords.append(c.im)
    return coords


@dataclass
class ClosedPP:
    p: int
    real_basis: list[ComplexForm]
    coords: list[list[Fraction]]  # kernel basis over the real coordinates
    forms: list[ComplexForm]


def closed_pp_space(struct: ComplexStructureSpec, p: int) -> ClosedPP:
    """Exact kernel of d on real (p,p)-forms, deterministic RREF basis."""
    n = struct.n
    if not 0 <= p <= n:
        raise ValueError("p out of range")
    basis = real_pp_basis(n, p)
    images = [struct.d(f) for f in basis]
    keys = sorted({key for img in images for key in img.terms})
    rows = []
    for key in keys:
        rows.append([gr(img.terms.get(key, ZERO).re) for img in images])
        rows.append([gr(img.terms.get(key, ZERO).im) for img in images])
    if rows:
        coords_gr = kernel(rows, len(basis))
    else:
        coords_gr = [
            [ONE if i == j else gr(0) for j in range(len(basis))]
            for i in range(len(basis))
        ]
    coords = [[c.re for c in vec] for vec in coords_gr]
    forms = [_combine(basis, vec) for vec in coords]
    return ClosedPP(p, basis, coords, forms)


def _combine(basis: list[ComplexForm], coords) -> ComplexForm:
    out = ComplexForm.zero(basis[0].n if basis else 0)
    for c, f in zip(coords, basis):
        c = Fraction(c)
        if c:
            out = out + f * gr(c)
    return out


# -- certificates ------------------------------------------------------------------


@dataclass
class WitnessRefutation:
    """Finite witness family whose pairing constraints are exactly infeasible."""

    witnesses: list[ComplexForm]
    farkas: list[Fraction]

    def to_json(self) -> dict:
        return {
            "kind": "witness_family",
            "witnesses": [form_to_json(w) for w in self.witnesses],
            "farkas": [str(x) for x in self.farkas],
        }


@dataclass
class EmptyConeRefutation:
    def to_json(self) -> dict:
        return {"kind": "empty_cone"}


@dataclass
class ObstructionCertificate:
    beta: ComplexForm
    component: ComplexForm  # the (n-p, n-p) part of d beta
    terms: list[tuple[GaussianRational, ComplexForm]]  # (c_j, psi_j)

    def to_json(self) -> dict:
        return {
            "kind": "obstruction",
            "beta": form_to_json(self.beta),
            "component": form_to_json(self.component),
            "terms": [
                {"c": str(c), "psi": form_to_json(psi)} for c, psi in self.terms
            ],
        }


@dataclass
class PKahlerReport:
    p: int
    verdict: PKVerdict
    closed_basis: list[ComplexForm]
    found_form: ComplexForm | None = None
    found_certificate: TransversalityVerdict | None = None
    refutation: object | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {
            "p": self.p,
            "verdict": self.verdict.value,
            "closed_basis": [form_to_json(f) for f in self.closed_basis],
            "stats": self.stats,
        }
        if self.found_form is not None:
            out["found_form"] = form_to_json(self.found_form)
            out["found_certificate"] = self.found_certificate.to_json()
        if self.refutation is not None:
            out["refutation"] = self.refutation.to_json()
        return out


# -- obstruction machinery ----------------------------------------------------------


def obstruction_check(
    struct: ComplexStructureSpec,
    p: int,
    beta: ComplexForm,
    decomposition: list[tuple[GaussianRational, ComplexForm]] | None = None,
) -> ObstructionCertificate:
    """Validate a same-sign obstruction form for degree p.

    d beta is recomputed from the structure equations; its (n-p,n-p) part
    must be nonzero and equal to sum c_j psi_j ^ conj(psi_j) with real
    same-sign c_j and simple psi_j.  Soundness of the refutation uses that
    exact top-degree forms vanish, so the algebra must be unimodular.
    """
    n = struct.n
    q = n - p
    if not 1 <= p < n:
        raise ValueError("need 1 <= p < n")
    if beta.is_zero() or beta.degrees() != {2 * n - 2 * p - 1}:
        raise ObstructionRejected(f"beta must be a nonzero ({2 * n - 2 * p - 1})-form")
    if not is_unimodular(struct.g):
        raise ObstructionRejected("obstruction argument needs a unimodular algebra")
    dbeta = struct.d(beta)
    component = bidegree_component(dbeta, q, q)
    if component.is_zero():
        raise ObstructionRejected("the (n-p,n-p) part of d beta vanishes")
    if decomposition is None:
        decomposition = _diagonal_decomposition(component)
    total = ComplexForm.zero(n)
    signs = set()
    for c, psi in decomposition:
        c = gr(c)
        if not c.is_real() or c.is_zero():
            raise ObstructionRejected("decomposition coefficients must be real nonzero")
        signs.add(c.re > 0)
        if not is_simple(psi):
            raise ObstructionRejected("decomposition contains a non-simple test form")
        total = total + wedge(psi, conjugate(psi)) * c
    if len(signs) != 1:
        raise ObstructionRejected("decomposition coefficients have mixed signs")
    if total != component:
        raise ObstructionRejected("decomposition does not reproduce the component")
    return ObstructionCertificate(beta, component, [(gr(c), psi) for c, psi in decomposition])


def _diagonal_decomposition(component: ComplexForm):
    n = component.n
    terms = []
    for (holo, anti), c in sorted(component.terms.items()):
        if holo != anti:
            raise ObstructionRejected(
                "component has off-diagonal terms; supply an explicit decomposition"
            )
        terms.append((c, monomial(n, holo)))
    return terms


def obstruction_search(
    struct: ComplexStructureSpec, p: int, budget: SearchBudget | None = None
) -> ObstructionCertificate | None:
    """Exact search for a diagonal same-sign obstruction.

    The ansatz runs over (q-1,q) and (q,q-1) monomials (the only bidegrees
    whose differential meets (q,q)); the sign conditions become an exact
    rational feasibility problem.
    """
    n = struct.n
    q = n - p
    if not 1 <= p < n or q < 1:
        return None
    if not is_unimodular(struct.g):
        return None
    ansatz: list[MultiIndex] = []
    for a, b in ((q - 1, q), (q, q - 1)):
        for holo in itertools.combinations(range(1, n + 1), a):
            for anti in itertools.combinations(range(1, n + 1), b):
                ansatz.append(MultiIndex(holo, anti))
    if not ansatz:
        return None
    images = [
        bidegree_component(struct.d(ComplexForm(n, {key: ONE})), q, q) for key in ansatz
    ]
    target_keys = sorted({key for img in images for key in img.terms})
    diag_keys = [key for key in target_keys if key.holo == key.anti]
    off_keys = [key for key in target_keys if key.holo != key.anti]
    nv = 2 * len(ansatz)

    def row_for(key: MultiIndex, part: str) -> list[Fraction]:
        row = []
        for img in images:
            c = img.terms.get(key, ZERO)
            if part == "re":
                row.extend([c.re, -c.im])
            else:
                row.extend([c.im, c.re])
        return row

    a_eq = []
    b_eq = []
    for key in off_keys:
        a_eq.append(row_for(key, "re"))
        b_eq.append(Fraction(0))
        a_eq.append(row_for(key, "im"))
        b_eq.append(Fraction(0))
    for key in diag_keys:
        a_eq.append(row_for(key, "im"))
        b_eq.append(Fraction(0))
    a_ge = [row_for(key, "re") for key in diag_keys]
    b_ge = [Fraction(0)] * len(diag_keys)
    if diag_keys:
        a_ge.append([sum(col) for col in zip(*[row_for(key, "re") for key in diag_keys])])
        b_ge.append(Fraction(1))
    else:
        return None
    res = feasibility(a_ge, b_ge, a_eq, b_eq)
    if not res.feasible:
        return None
    beta = ComplexForm.zero(n)
    for idx, key in enumerate(ansatz):
        c = GaussianRational(res.point[2 * idx], res.point[2 * idx + 1])
        if not c.is_zero():
            beta = beta + ComplexForm(n, {key: c})
    return obstruction_check(struct, p, beta)


@dataclass
class CoframeClosureResult:
    t: int
    forbidden_p: int | None


def closed_coframe_obstruction(struct: ComplexStructureSpec) -> CoframeClosureResult:
    """Count of closed coframe elements t; degree n-t admits no structure.

    Defined for nilpotent complex structures on nilpotent algebras.
    """
    if not is_nilpotent(struct.g):
        raise InvalidAlgebraError("closure obstruction needs a nilpotent algebra")
    series = ascending_series(struct)
    if series.classification != JClass.NILPOTENT:
        raise InvalidAlgebraError("closure obstruction needs a nilpotent complex structure")
    t = len(struct.closed_10_forms())
    forbidden = struct.n - t
    return CoframeClosureResult(t, forbidden if forbidden >= 1 else None)


# -- the main search ------------------------------------------------------------------


def find_pkahler(
    struct: ComplexStructureSpec, p: int, budget: SearchBudget | None = None
) -> PKahlerReport:
    """Search for, or refute, a d-closed transverse real (p,p)-form.

    Pipeline: exact closed-space kernel; positive-definite candidates
    (projection of the standard power, kernel elements, seeded random
    combinations, eigenvalue hill-climbing with exact re-verification);
    exact infeasibility over a growing family of simple witnesses
    (coframe monomials first); diagonal obstruction search.
    """
    budget = budget or SearchBudget()
    n = struct.n
    if not 1 <= p < n:
        raise ValueError("need 1 <= p < n")
    closed = closed_pp_space(struct, p)
    stats: dict = {"closed_dim": len(closed.coords)}
    stats.update(budget.config_json())
    report = PKahlerReport(p, PKVerdict.INCONCLUSIVE, closed.forms, stats=stats)
    if not closed.coords:
        report.verdict = PKVerdict.REFUTED
        report.refutation = EmptyConeRefutation()
        return report

    k_dim = len(closed.coords)
    mono_basis = gram_basis(n, n - p)
    grams = [gram_matrix(f)[1] for f in closed.forms]
    gram_size = len(mono_basis)

    def exact_pd(coords: list[Fraction]):
        h = [
            [
                sum((gr(c) * grams[r][a][b] for r, c in enumerate(coords) if c), ZERO)
                for b in range(gram_size)
            ]
            for a in range(gram_size)
        ]
        ok, cert = gram_positive_definite(h)
        return (ok, cert)

    def finish_found(coords: list[Fraction], cert: GramCertificate) -> PKahlerReport:
        omega = _combine(closed.forms, coords)
        if not struct.d(omega).is_zero():
            raise AssertionError("candidate is not closed; internal error")
        report.verdict = PKVerdict.FOUND
        report.found_form = omega
        report.found_certificate = TransversalityVerdict(
            TransStatus.TRANSVERSE, gram=cert
        )
        return report

    # seeded candidates, as coefficient vectors over the kernel basis
    candidates: list[list[Fraction]] = []
    std_coords = _standard_power_coords(n, p)
    proj = _project_onto_span(std_coords, closed.coords)
    if proj is not None and any(proj):
        candidates.append(proj)
    unit_starts = []
    for r in range(k_dim):
        unit = [Fraction(0)] * k_dim
        unit[r] = Fraction(1)
        candidates.append(unit)
        unit_starts.append(unit)
    rng = random.Random(budget.seed)
    for _ in range(min(budget.restarts, 16)):
        candidates.append(
            [Fraction(rng.randint(-2, 2)) for _ in range(k_dim)]
        )
    seen = set()
    for cand in candidates:
        key = tuple(cand)
        if key in seen or not any(cand):
            continue
        seen.add(key)
        ok, cert = exact_pd(cand)
        if ok:
            return finish_found(cand, cert)

    # witness family: all coframe monomials, then harvested simple forms
    witnesses: list[ComplexForm] = [monomial(n, idx) for idx in mono_basis]
    rows: list[list[Fraction]] = [
        [grams[r][a][a].re for r in range(k_dim)] for a in range(gram_size)
    ]

    harvest_budget = SearchBudget(
        restarts=max(2, budget.restarts // 20),
        steps=max(50, budget.steps // 5),
        seed=budget.seed,
        step_tol=budget.step_tol,
    )
    obstruction_done = False
    for round_idx in range(max(budget.witness_cap, 1)):
        res = feasibility(rows, [Fraction(1)] * len(rows))
        if not res.feasible:
            if not verify_farkas(rows, [Fraction(1)] * len(rows), res.farkas_ge):
                raise AssertionError("Farkas certificate failed re-verification")
            report.verdict = PKVerdict.REFUTED
            report.refutation = WitnessRefutation(witnesses, res.farkas_ge)
            report.stats["witness_rounds"] = round_idx + 1
            return report
        cand = res.point
        ok, cert = exact_pd(cand)
        if ok:
            return finish_found(cand, cert)
        # eigenvalue hill-climb around the feasible region
        improved = _pd_hill_climb(grams, [cand] + unit_starts, budget)
        for better in improved:
            ok, cert = exact_pd(better)
            if ok:
                return finish_found(better, cert)
        if not obstruction_done:
            obstruction_done = True
            cert_obs = obstruction_search(struct, p, budget)
            if cert_obs is not None:
                report.verdict = PKVerdict.REFUTED
                report.refutation = cert_obs
                report.stats["witness_rounds"] = round_idx + 1
                return report
        omega_hat = _combine(closed.forms, cand)
        verdict = check_transverse(omega_hat, harvest_budget)
        if verdict.status == TransStatus.NOT_TRANSVERSE and verdict.witness is not None:
            psi = verdict.witness.to_form(n)
            witnesses.append(psi)
            rows.append([volume_coefficient(closed.forms[r], psi).re for r in range(k_dim)])
        else:
            probe = _random_witness_row(closed.forms, cand, n, n - p, rng)
            if probe is None:
                report.stats["witness_rounds"] = round_idx + 1
                break
            psi, row = probe
            witnesses.append(psi)
            rows.append(row)
    report.verdict = PKVerdict.INCONCLUSIVE
    return report


def _standard_power_coords(n: int, p: int) -> list[Fraction]:
    omega = ComplexForm.zero(n)
    for j in range(1, n + 1):
        omega = omega + monomial(n, (j,), (j,), I)
    acc = ComplexForm.scalar(n, 1)
    fact = 1
    for t in range(1, p + 1):
        acc = wedge(acc, omega)
        fact *= t
    return pp_coordinates(acc / fact, p)


def _project_onto_span(x0: list[Fraction], basis_vecs: list[list[Fraction]]):
    """Exact orthogonal projection coefficients of x0 onto span(basis_vecs)."""
    if not basis_vecs:
        return None
    k = len(basis_vecs)
    gram = [
        [
            sum(Fraction(a) * Fraction(b) for a, b in zip(basis_vecs[i], basis_vecs[j]))
            for j in range(k)
        ]
        for i in range(k)
    ]
    rhs = [sum(Fraction(a) * Fraction(b) for a, b in zip(basis_vecs[i], x0)) for i in range(k)]
    from .linalg import mat_from_rows, solve

    sol = solve(mat_from_rows(gram), [gr(v) for v in rhs])
    if sol is None:
        return None
    return [c.re for c in sol]


def _pd_hill_climb(grams, starts, budget: SearchBudget) -> list[list[Fraction]]:
    """Maximize the minimal Gram eigenvalue over the closed space (float),
    returning rationalized candidates worth exact checking."""
    k = len(grams)
    if k == 0:
        return []
    size = len(grams[0])
    hf = np.array(
        [[[v.to_complex() for v in row] for row in h] for h in grams]
    )  # shape (k, size, size)
    rng = np.random.default_rng(budget.seed)
    out = []
    start_vecs = [np.array([float(c) for c in s]) for s in starts if any(s)]
    for _ in range(max(2, min(budget.restarts // 10, 10))):
        start_vecs.append(rng.standard_normal(k))
    for y in start_vecs[: 12]:
        y = y.astype(float)
        norm = np.linalg.norm(y)
        if norm == 0:
            continue
        y = y / norm
        best_val = -np.inf
        best_y = y
        lr = 0.5
        for _ in range(min(budget.steps, 120)):
            h = np.tensordot(y, hf, axes=(0, 0))
            vals, vecs = np.linalg.eigh(h)
            lam = vals[0]
            if lam > best_val:
                best_val = lam
                best_y = y.copy()
            v = vecs[:, 0]
            grad = np.array([float(np.real(np.vdot(v, hf[r] @ v))) for r in range(k)])
            gnorm = np.linalg.norm(grad)
            if gnorm < 1e-14:
                break
            y = y + lr * grad / gnorm
            y = y / np.linalg.norm(y)
        if best_val > 1e-9:
            for denom in (3, 10, 100, 1000):
                out.append([Fraction(float(c)).limit_denominator(denom) for c in best_y])
    return out


def _random_witness_row(forms, cand, n, k, rng):
    """Probe random rational decomposables for a nonpositive pairing at cand."""
    from .positivity import random_decomposable

    omega_hat = _combine(forms, cand)
    for _ in range(40):
        psi = random_decomposable(n, k, rng)
        if psi.is_zero():
            continue
        if volume_coefficient(omega_hat, psi).re <= 0:
            row = [volume_coefficient(forms[r], psi).re for r in range(len(forms))]
            return psi, row
    return None


# -- re-verification of serialized reports -------------------------------------------


def verify_report(struct: ComplexStructureSpec, data: dict) -> list[str]:
    """Exact re-verification of a serialized PKahlerReport; returns failures."""
    failures: list[str] = []
    p = int(data["p"])
    n = struct.n
    closed = closed_pp_space(struct, p)
    stored_basis = [form_from_json(item, n) for item in data.get("closed_basis", [])]
    stored_coords = [pp_coordinates(f, p) for f in stored_basis]
    ours = [[gr(c) for c in vec] for vec in closed.coords]
    theirs = [[gr(c) for c in vec] for vec in stored_coords]
    if stored_basis and not same_row_space(ours, theirs):
        failures.append("closed space mismatch")
    if not stored_basis and closed.coords:
        failures.append("closed space mismatch")
    verdict = data["verdict"]
    if verdict == PKVerdict.FOUND.value:
        omega = form_from_json(data["found_form"], n)
        if not struct.d(omega).is_zero():
            failures.append("found form is not closed")
        if not omega.is_real():
            failures.append("found form is not real")
        _, h = gram_matrix(omega)
        ok, _ = gram_positive_definite(h)
        if not ok:
            failures.append("found form fails the exact Gram test")
        from .positivity import verify_verdict

        failures.extend(verify_verdict(omega, data.get("found_certificate", {})))
    elif verdict == PKVerdict.REFUTED.value:
        ref = data.get("refutation", {})
        kind = ref.get("kind")
        if kind == "empty_cone":
            if closed.coords:
                failures.append("closed space is nonzero; empty-cone claim false")
        elif kind == "witness_family":
            witnesses = [form_from_json(item, n) for item in ref["witnesses"]]
            farkas = [Fraction(x) for x in ref["farkas"]]
            rows = []
            for psi in witnesses:
                if psi.is_zero():
                    failures.append("zero witness form")
                    continue
                rows.append(
                    [volume_coefficient(f, psi).re for f in closed.forms]
                )
            if len(farkas) != len(rows):
                failures.append("farkas length mismatch")
            elif not verify_farkas(rows, [Fraction(1)] * len(rows), farkas):
                failures.append("farkas certificate invalid")
        elif kind == "obstruction":
            beta = form_from_json(ref["beta"], n)
            terms = [
                (GaussianRational.parse(item["c"]), form_from_json(item["psi"], n))
                for item in ref["terms"]
            ]
            try:
                cert = obstruction_check(struct, p, beta, terms)
            except ObstructionRejected as exc:
                failures.append(f"obstruction invalid: {exc}")
            else:
                stored_component = form_from_json(ref["component"], n)
                if cert.component != stored_component:
                    failures.append("stored obstruction component mismatch")
        else:
            failures.append(f"unknown refutation kind {kind!r}")
    elif verdict != PKVerdict.INCONCLUSIVE.value:
        failures.append(f"unknown verdict {verdict!r}")
    return failures
