"""Command-line front end.

Subcommands: validate, classify, find, obstruct, restrict, quotient,
aab-kahler, verify, catalog.  Exit codes: 0 for a definitive verdict
(FOUND / REFUTED / true / false / valid certificate), 2 for INCONCLUSIVE,
1 for input errors.  JSON reports embed full certificates so `pkl verify`
can re-check them with exact arithmetic only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from .catalog import (
    AlmostAbelianData,
    InadmissibleParameters,
    kahler_decision_almost_abelian,
    named_example,
    registry,
)
from .cxstruct import (
    ComplexStructureSpec,
    NonIntegrableError,
    ascending_series,
    b_extension_quotient,
    restrict_to_jinvariant_ideal,
    struct_from_json,
    struct_to_json,
)
from .exterior import ComplexForm, form_to_json, form_to_literal, monomial, parse_form
from .liealg import (
    InvalidAlgebraError,
    algebra_from_json,
    algebra_invariants,
)
from .pkahler import (
    ObstructionRejected,
    PKVerdict,
    find_pkahler,
    obstruction_check,
    obstruction_search,
    closed_coframe_obstruction,
    verify_report,
)
from .positivity import SearchBudget
from .scalars import parse_fraction

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2


class InputError(ValueError):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_structure(args) -> ComplexStructureSpec:
    if args.catalog:
        try:
            return named_example(args.catalog)
        except (KeyError, InadmissibleParameters) as exc:
            raise InputError(str(exc)) from exc
    if not getattr(args, "infile", None):
        raise InputError("need --catalog NAME or --in FILE")
    data = _load_json(args.infile)
    try:
        if "dalpha" in data and isinstance(data["dalpha"], dict):
            params = {
                name: parse_fraction(value)
                for name, value in data.get("params", {}).items()
            }
            keys = sorted(int(k.lstrip("a")) for k in data["dalpha"])
            n = int(data.get("n", max(keys) if keys else 0))
            equations = [
                parse_form(data["dalpha"].get(f"a{j}", "0"), n, params)
                for j in range(1, n + 1)
            ]
            return ComplexStructureSpec.from_equations(equations)
        if "algebra" in data:
            return struct_from_json(data)
        if "J" in data:
            g = algebra_from_json(data)
            return ComplexStructureSpec.from_matrix(g, _parse_matrix(data["J"]))
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    raise InputError("unrecognized input format")


def _parse_matrix(rows):
    from .scalars import parse_scalar

    return [[parse_scalar(str(x)) for x in row] for row in rows]


def load_almost_abelian(args) -> AlmostAbelianData:
    if not getattr(args, "infile", None):
        raise InputError("aab-kahler needs --in FILE with almost_abelian data")
    data = _load_json(args.infile)
    body = data.get("almost_abelian", data)
    try:
        return AlmostAbelianData(
            int(body["n"]),
            parse_fraction(str(body.get("lambda", body.get("lam", 0)))),
            [parse_fraction(str(x)) for x in body["v"]],
            [[parse_fraction(str(x)) for x in row] for row in body["A"]],
        )
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad almost_abelian payload: {exc}") from exc


def budget_from(args) -> SearchBudget:
    seed = args.seed
    env_seed = os.environ.get("PKL_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    return SearchBudget(
        restarts=args.budget_restarts,
        steps=args.budget_steps,
        seed=seed,
        witness_cap=args.witness_cap,
    )


def emit(args, report: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def cmd_validate(args) -> int:
    struct = load_structure(args)
    report = {
        "tool": "pkl",
        "command": "validate",
        "input": struct_to_json(struct),
        "valid": True,
    }
    emit(args, report, ["VALID: Jacobi, J^2 = -Id and integrability all hold"])
    return EXIT_OK


def cmd_classify(args) -> int:
    struct = load_structure(args)
    inv = algebra_invariants(struct.g)
    lines = [
        f"real dimension {struct.g.dim}, complex dimension {struct.n}",
        f"nilpotent: {inv.is_nilpotent}, unimodular: {inv.is_unimodular}",
        f"center dimension: {len(inv.center_basis)}",
        f"lower central series dims: {inv.lower_central_series_dims}",
        f"almost abelian: {inv.abelian_codim1_ideal is not None}",
    ]
    report = {
        "tool": "pkl",
        "command": "classify",
        "input": struct_to_json(struct),
        "nilpotent": inv.is_nilpotent,
        "unimodular": inv.is_unimodular,
        "center_dim": len(inv.center_basis),
        "lcs_dims": inv.lower_central_series_dims,
        "almost_abelian": inv.abelian_codim1_ideal is not None,
    }
    if inv.is_nilpotent:
        series = ascending_series(struct)
        report["structure_class"] = series.classification.value
        report["series_dims"] = series.dims
        lines.append(
            f"structure class: {series.classification.value}; series dims {series.dims}"
        )
        if series.classification.value == "NILPOTENT":
            res = closed_coframe_obstruction(struct)
            report["closed_coframe_count"] = res.t
            report["forbidden_p"] = res.forbidden_p
            lines.append(
                f"closed coframe elements: {res.t}; no ({res.forbidden_p})-Kahler structure"
                if res.forbidden_p
                else f"closed coframe elements: {res.t}"
            )
    emit(args, report, lines)
    return EXIT_OK


def cmd_find(args) -> int:
    struct = load_structure(args)
    budget = budget_from(args)
    rep = find_pkahler(struct, args.p, budget)
    report = {
        "tool": "pkl",
        "command": "find",
        "input": struct_to_json(struct),
        "seed": budget.seed,
        "report": rep.to_json(),
    }
    lines = [f"verdict: {rep.verdict.value} (p = {args.p})"]
    if rep.verdict == PKVerdict.FOUND:
        lines.append(f"form: {form_to_literal(rep.found_form)}")
    elif rep.verdict == PKVerdict.REFUTED:
        kind = rep.refutation.to_json()["kind"]
        lines.append(f"refutation: {kind}")
        if kind == "obstruction":
            lines.append(f"beta: {form_to_literal(rep.refutation.beta)}")
            lines.append(f"component: {form_to_literal(rep.refutation.component)}")
    emit(args, report, lines)
    return EXIT_OK if rep.verdict != PKVerdict.INCONCLUSIVE else EXIT_INCONCLUSIVE


def cmd_obstruct(args) -> int:
    struct = load_structure(args)
    if args.beta:
        beta = parse_form(args.beta, struct.n)
        try:
            cert = obstruction_check(struct, args.p, beta)
        except ObstructionRejected as exc:
            report = {
                "tool": "pkl",
                "command": "obstruct",
                "input": struct_to_json(struct),
                "p": args.p,
                "obstructed": False,
                "reason": str(exc),
            }
            emit(args, report, [f"REJECTED: {exc}"])
            return EXIT_OK
    else:
        cert = obstruction_search(struct, args.p, budget_from(args))
        if cert is None:
            report = {
                "tool": "pkl",
                "command": "obstruct",
                "input": struct_to_json(struct),
                "p": args.p,
                "obstructed": None,
            }
            emit(args, report, ["no obstruction found in the monomial ansatz"])
            return EXIT_INCONCLUSIVE
    report = {
        "tool": "pkl",
        "command": "obstruct",
        "input": struct_to_json(struct),
        "p": args.p,
        "obstructed": True,
        "certificate": cert.to_json(),
    }
    emit(
        args,
        report,
        [
            "OBSTRUCTED: no p-Kahler structure exists",
            f"beta: {form_to_literal(cert.beta)}",
            f"(n-p,n-p) part of d beta: {form_to_literal(cert.component)}",
        ],
    )
    return EXIT_OK


def _load_omega(args, struct) -> ComplexForm:
    if not args.omega:
        raise InputError("need --omega FORM (compact literal syntax)")
    return parse_form(args.omega, struct.n)


def cmd_restrict(args) -> int:
    struct = load_structure(args)
    omega = _load_omega(args, struct)
    if args.alpha:
        alpha = parse_form(args.alpha, struct.n)
    else:
        closed = struct.closed_10_forms()
        if not closed:
            raise InputError("no closed (1,0)-form exists; supply --alpha")
        alpha = ComplexForm.zero(struct.n)
        for j, c in enumerate(closed[0], start=1):
            if not c.is_zero():
                alpha = alpha + monomial(struct.n, (j,), coeff=c)
    res = restrict_to_jinvariant_ideal(struct, omega, alpha)
    closed_ok = res.sub.d(res.omega_h).is_zero()
    report = {
        "tool": "pkl",
        "command": "restrict",
        "input": struct_to_json(struct),
        "alpha": form_to_json(alpha),
        "omega": form_to_json(omega),
        "ideal": struct_to_json(res.sub),
        "omega_h": form_to_json(res.omega_h),
        "omega_h_closed": closed_ok,
        "omega_h_zero": res.omega_h.is_zero(),
    }
    emit(
        args,
        report,
        [
            f"codimension-2 ideal has complex dimension {res.sub.n}",
            f"omega_h: {form_to_literal(res.omega_h)}",
            f"omega_h closed: {closed_ok}",
        ],
    )
    return EXIT_OK


def cmd_quotient(args) -> int:
    struct = load_structure(args)
    omega = _load_omega(args, struct)
    res = b_extension_quotient(struct, omega, args.p)
    closed_ok = res.quotient.d(res.omega).is_zero()
    report = {
        "tool": "pkl",
        "command": "quotient",
        "input": struct_to_json(struct),
        "p": args.p,
        "omega": form_to_json(omega),
        "quotient": struct_to_json(res.quotient),
        "descended_form": form_to_json(res.omega),
        "descended_closed": closed_ok,
    }
    emit(
        args,
        report,
        [
            f"quotient has complex dimension {res.quotient.n}",
            f"descended form: {form_to_literal(res.omega)}",
            f"descended form closed: {closed_ok}",
        ],
    )
    return EXIT_OK


def cmd_aab_kahler(args) -> int:
    data = load_almost_abelian(args)
    try:
        dec = kahler_decision_almost_abelian(data)
    except InadmissibleParameters as exc:
        raise InputError(str(exc)) from exc
    report = {
        "tool": "pkl",
        "command": "aab-kahler",
        "almost_abelian": {
            "n": data.n,
            "lambda": str(data.lam),
            "v": [str(x) for x in data.v],
            "A": [[str(x) for x in row] for row in data.A],
        },
        "kahler": dec.value,
        "adapted": dec.adapted,
        "reason": dec.reason,
    }
    if dec.absorb is not None:
        report["absorb"] = [str(x) for x in dec.absorb]
    if dec.min_poly is not None:
        report["min_poly"] = dec.min_poly
        report["char_poly_A"] = dec.char_poly_a
    emit(args, report, [f"kahler: {dec.value}", f"reason: {dec.reason}"])
    return EXIT_OK


def _infer_p(omega: ComplexForm) -> int:
    bid = omega.bidegree()
    if bid is None:
        raise InputError("cannot infer p from a non-homogeneous form")
    return bid[0]


def cmd_verify(args) -> int:
    if not args.report:
        raise InputError("verify needs a report path")
    data = _load_json(args.report)
    command = data.get("command")
    if command == "aab-kahler":
        body = data["almost_abelian"]
        recomputed = kahler_decision_almost_abelian(
            AlmostAbelianData(
                int(body["n"]),
                parse_fraction(body["lambda"]),
                [parse_fraction(x) for x in body["v"]],
                [[parse_fraction(x) for x in row] for row in body["A"]],
            )
        )
        if recomputed.value != data.get("kahler"):
            sys.stdout.write("FAIL: stored verdict does not match the recomputation\n")
            return EXIT_INPUT
        sys.stdout.write("certificate verified (exact arithmetic)\n")
        return EXIT_OK
    try:
        struct = struct_from_json(data["input"])
    except (KeyError, ValueError) as exc:
        raise InputError(f"report does not embed a valid structure: {exc}") from exc
    failures: list[str] = []
    if command == "find":
        failures = verify_report(struct, data["report"])
    elif command == "obstruct" and data.get("obstructed"):
        from .exterior import form_from_json
        from .scalars import GaussianRational

        cert = data["certificate"]
        beta = form_from_json(cert["beta"], struct.n)
        terms = [
            (GaussianRational.parse(item["c"]), form_from_json(item["psi"], struct.n))
            for item in cert["terms"]
        ]
        try:
            obstruction_check(struct, int(data["p"]), beta, terms)
        except ObstructionRejected as exc:
            failures = [str(exc)]
    elif command == "restrict":
        from .exterior import form_from_json

        omega = form_from_json(data["omega"], struct.n)
        alpha = form_from_json(data["alpha"], struct.n)
        res = restrict_to_jinvariant_ideal(struct, omega, alpha)
        if form_to_json(res.omega_h) != data["omega_h"]:
            failures.append("restricted form does not match")
        if res.sub.d(res.omega_h).is_zero() != data.get("omega_h_closed"):
            failures.append("closedness flag does not match")
    elif command == "quotient":
        from .exterior import form_from_json

        omega = form_from_json(data["omega"], struct.n)
        res = b_extension_quotient(struct, omega, int(data.get("p", 0)) or _infer_p(omega))
        if form_to_json(res.omega) != data["descended_form"]:
            failures.append("descended form does not match")
    elif command == "validate":
        pass  # reconstruction above already re-validated everything
    else:
        raise InputError(f"no verifier for command {command!r}")
    if failures:
        for f in failures:
            sys.stdout.write(f"FAIL: {f}\n")
        return EXIT_INPUT
    sys.stdout.write("certificate verified (exact arithmetic)\n")
    return EXIT_OK


def cmd_catalog(args) -> int:
    entries = registry()
    report = {"tool": "pkl", "command": "catalog", "entries": entries}
    lines = [f"{name}: {desc}" for name, desc in entries.items()]
    lines.append("parametrized: snn8f1:eps,nu,a,b[:delta] and snn8f2:eps,mu,nu,a,b")
    emit(args, report, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pkl",
        description="decide, certify or refute p-Kahler structures on Lie algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_p=False):
        p.add_argument("--catalog", help="catalog instance name")
        p.add_argument("--in", dest="infile", help="JSON input file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget-restarts", type=int, default=200)
        p.add_argument("--budget-steps", type=int, default=500)
        p.add_argument("--witness-cap", type=int, default=24)
        if needs_p:
            p.add_argument("--p", type=int, required=True)

    common(sub.add_parser("validate", help="parse and validate an input"))
    common(sub.add_parser("classify", help="structural invariants and class"))
    common(sub.add_parser("find", help="search or refute a p-Kahler structure"), needs_p=True)
    p_obs = sub.add_parser("obstruct", help="check or search a same-sign obstruction")
    common(p_obs, needs_p=True)
    p_obs.add_argument("--beta", help="candidate form in compact literal syntax")
    p_res = sub.add_parser("restrict", help="restrict to the codimension-2 ideal")
    common(p_res)
    p_res.add_argument("--omega", help="real (p,p)-form literal", required=False)
    p_res.add_argument("--alpha", help="closed (1,0)-form literal (default: first closed)")
    p_quo = sub.add_parser("quotient", help="quotient by a central J-invariant plane")
    common(p_quo, needs_p=True)
    p_quo.add_argument("--omega", help="real (p,p)-form literal", required=False)
    p_aab = sub.add_parser("aab-kahler", help="almost-abelian Kahler decision")
    common(p_aab)
    p_ver = sub.add_parser("verify", help="re-verify a JSON report")
    p_ver.add_argument("report", help="path to a report emitted with --format json")
    p_ver.add_argument("--format", choices=("text", "json"), default="text")
    common(sub.add_parser("catalog", help="list named instances"))
    return parser


_DISPATCH = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "find": cmd_find,
    "obstruct": cmd_obstruct,
    "restrict": cmd_restrict,
    "quotient": cmd_quotient,
    "aab-kahler": cmd_aab_kahler,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _DISPATCH[args.command]
    try:
        return handler(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (InvalidAlgebraError, NonIntegrableError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
