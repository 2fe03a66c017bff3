"""Command-line entry point: ``locpow {validate,classify,cohomology,f2xf2,roundtrip}``.

Exit status is 0 when no invariant or verdict failure occurred, 1 when one
did, and 2 for unusable input (parse errors, flag/document mismatches).
"""

from __future__ import annotations

import argparse
import sys
from itertools import combinations
from math import comb
from pathlib import Path

from . import documents
from .classify import THETA_ABELIAN, ABELIAN, classify, tits_report
from .cohomology import (
    binomial_bound_holds,
    dimension_identity_check,
    exterior_profile,
    f2xf2_table,
    lambda2_cup_injectivity,
    quadratic_check,
)
from .errors import LocpowError, ParseError, PrecisionMismatch, PrimeMismatch
from .expr import atoms, default_cutoff, evaluate, parse, scalar_value
from .group import UniformPresentation, from_lie, lower_series_dims, present_theta_abelian, to_lie
from .lie import BracketTable
from .padic import PadicScalar, SMALL_PRIMES, powerful_valuation, require_domain

SCHEMA = "locpow.report/1"


class Failure(Exception):
    """Carries a finished report whose verdict is a failure (exit status 1)."""

    def __init__(self, report):
        self.report = report


def _check_flags(args, p: int, k: int) -> None:
    if args.prime is not None and args.prime != p:
        raise PrimeMismatch(f"--prime {args.prime} disagrees with the document prime {p}")
    if args.precision is not None and args.precision != k:
        raise PrecisionMismatch(f"--precision {args.precision} disagrees with the document precision {k}")


def _load(args):
    doc = documents.load(args.input)
    kind = documents.kind(doc)
    if kind in ("table", "presentation"):
        p, k, _ = documents.header(doc)
        _check_flags(args, p, k)
    return doc, kind


# validate ------------------------------------------------------------------

def _table_violations(p, k, d, brackets) -> list:
    out = []
    q = p ** powerful_valuation(p)
    for (i, j), coeffs in sorted(brackets.items()):
        for n, c in enumerate(coeffs):
            if c % q:
                out.append({
                    "kind": "not_powerful",
                    "location": f"({i + 1},{j + 1}) coefficient of x_{n + 1}",
                    "detail": f"{c % p**k} is not divisible by {q}",
                })
    t = BracketTable(p, k, d, brackets, validate=False)
    for triple in combinations(range(d), 3):
        sub = _jacobi_at(t, triple)
        if any(sub):
            out.append({
                "kind": "jacobi",
                "location": "triple (" + ",".join(str(x + 1) for x in triple) + ")",
                "detail": "defect " + str([str(x) for x in sub]),
            })
    return out


def _jacobi_at(t: BracketTable, triple) -> tuple:
    from .lie import add, bracket

    i, j, l = (t.basis(x) for x in triple)
    return add(t, add(t, bracket(t, bracket(t, i, j), l), bracket(t, bracket(t, j, l), i)), bracket(t, bracket(t, l, i), j))


def cmd_validate(args) -> dict:
    doc, kind = _load(args)
    report = {"schema": SCHEMA, "command": "validate", "document": kind}
    if kind == "table":
        p, k, d, br = documents.raw_table(doc)
        violations = _table_violations(p, k, d, br)
    elif kind == "presentation":
        p, k, d, rel = documents.raw_presentation(doc)
        violations = []
        for (i, j), exps in sorted(rel.items()):
            for n, e in enumerate(exps):
                try:
                    require_domain(e, p, k)
                except LocpowError as exc:
                    violations.append({
                        "kind": "exponent_domain",
                        "location": f"[x_{i + 1},x_{j + 1}] exponent of x_{n + 1}",
                        "detail": str(exc),
                    })
        if not violations:
            P = UniformPresentation(p, k, d, rel, validate=False)
            try:
                t = P.lie
                violations.extend(_table_violations(p, k, d, t.brackets))
            except LocpowError as exc:
                violations.append({"kind": "lie_algebra", "location": "relations", "detail": str(exc)})
    else:
        raise ParseError(f"validate expects a table or presentation document, got {kind}", str(args.input))
    summary = f"valid mod {p}^{k}" if not violations else f"{len(violations)} violation(s) mod {p}^{k}"
    report.update(p=p, k=k, d=d, valid=not violations, violations=violations, valid_mod=f"{p}^{k}", summary=summary)
    if violations:
        raise Failure(report)
    return report


# classify ------------------------------------------------------------------

def cmd_classify(args) -> dict:
    doc, kind = _load(args)
    if kind == "table":
        t = documents.parse_table(doc)
        P = from_lie(t)
    elif kind == "presentation":
        P = documents.parse_presentation(doc)
    else:
        raise ParseError(f"classify expects a table or presentation document, got {kind}", str(args.input))
    report = tits_report(P, cutoff=args.cutoff)
    report["command"] = "classify"
    verdict = report.get("classification", {}).get("verdict")
    if verdict not in (THETA_ABELIAN, ABELIAN):
        raise Failure(report)
    return report


# cohomology ----------------------------------------------------------------

def _profile_report(profile, cutoff, identity=None) -> dict:
    upto = min(4, cutoff)
    q = quadratic_check(profile.algebra, upto)
    report = {
        "schema": SCHEMA,
        "command": "cohomology",
        "label": profile.label,
        "p": profile.prime,
        "cutoff": cutoff,
        "dims": list(profile.dims),
        "d": profile.d,
        "r": profile.r,
        "cd": profile.cd if profile.cd is not None else "exceeds cutoff",
        "quadratic": q.describe(),
        "quadratic_ok": q.ok,
        "lambda2_injective": lambda2_cup_injectivity(profile),
        "binomial_bound": binomial_bound_holds(profile),
        "relation_bound": profile.r <= comb(profile.d, 2),
        "graded_commutative": profile.algebra.graded_commutativity_defect() is None,
        "profile": profile.to_dict(),
    }
    if identity is not None:
        report["dimension_identity"] = identity
    return report


def _identity_from_presentation(P: UniformPresentation) -> dict:
    dims = lower_series_dims(P, 2)
    d = P.rank
    ident = dimension_identity_check(d, comb(d, 2), dims[1])
    out = ident.to_dict()
    out.update(d=d, r=comb(d, 2), dim_l2l3=dims[1])
    return out


def cmd_cohomology(args) -> dict:
    source = args.source
    identity = None
    if Path(source).is_file():
        args.input = source
        doc, kind = _load(args)
        if kind == "profile":
            profile = documents.parse_profile(doc)
            cutoff = profile.algebra.cutoff
        else:
            P = documents.parse_presentation(doc) if kind == "presentation" else from_lie(documents.parse_table(doc))
            outcome = classify(P.lie)
            if not outcome.is_theta_abelian:
                raise Failure({
                    "schema": SCHEMA, "command": "cohomology", "verdict": outcome.verdict,
                    "error": "no closed-form cohomology for a group that is not theta-abelian",
                })
            cutoff = args.cutoff or max(P.rank + 1, 4)
            profile = exterior_profile(P.rank, cutoff, P.prime)
            if P.precision >= 3:
                identity = _identity_from_presentation(P)
    else:
        node = parse(source)
        p = args.prime if args.prime is not None else 3
        if p not in SMALL_PRIMES:
            raise ParseError(f"prime {p} is not supported", "--prime")
        cutoff = args.cutoff or default_cutoff(node)
        k = args.precision or 3
        profile = evaluate(node, p, cutoff, k)
        found = atoms(node)
        if len(found) == 1 and found[0].name == "theta_abelian" and k >= 3:
            lam = scalar_value(found[0].args[1], p)
            P, _ = present_theta_abelian(found[0].args[0], PadicScalar(p, k, lam))
            identity = _identity_from_presentation(P)
    if cutoff < 2:
        raise ParseError("cutoff must be at least 2", "--cutoff")
    report = _profile_report(profile, cutoff, identity)
    ok = report["quadratic_ok"] and report["graded_commutative"]
    if identity is not None:
        ok = ok and identity["holds"]
    if not ok:
        raise Failure(report)
    return report


# f2xf2 ----------------------------------------------------------------------

def cmd_f2xf2(args) -> dict:
    p = args.prime if args.prime is not None else 2
    rows = f2xf2_table(p, args.kmax)
    increasing = all(a.exact < b.exact for a, b in zip(rows, rows[1:]))
    out_rows = [
        {
            "k": r.k,
            "order": r.order,
            "module_dim": r.module_dim,
            "exact": r.exact,
            "bound": r.bound,
            "meets_bound": r.exact >= r.bound,
            "fact_inequality": r.fact_inequality,
        }
        for r in rows
    ]
    report = {
        "schema": SCHEMA,
        "command": "f2xf2",
        "p": p,
        "k_max": args.kmax,
        "rows": out_rows,
        "strictly_increasing": increasing,
        "note": "dim(M^G)*|G| >= dim M is evaluated with |G| the order of the cyclic group",
    }
    if not (increasing and all(r["meets_bound"] and r["fact_inequality"] for r in out_rows)):
        raise Failure(report)
    return report


# roundtrip ------------------------------------------------------------------

def cmd_roundtrip(args) -> dict:
    doc, kind = _load(args)
    report = {"schema": SCHEMA, "command": "roundtrip", "document": kind}
    if kind == "table":
        t = documents.parse_table(doc)
        P = from_lie(t)
        fresh = UniformPresentation(P.prime, P.precision, P.rank, dict(P.relations))
        back = to_lie(fresh)
        report.update(presentation=documents.presentation_doc(P), identity=back == t)
    elif kind == "presentation":
        P = documents.parse_presentation(doc)
        t = to_lie(P)
        Q = from_lie(t)
        report.update(table=documents.table_doc(t), identity=Q.relations == P.relations)
    else:
        raise ParseError(f"roundtrip expects a table or presentation document, got {kind}", str(args.input))
    report["valid_mod"] = f"{P.prime}^{P.precision}"
    if not report["identity"]:
        raise Failure(report)
    return report


# rendering ------------------------------------------------------------------

_WORDS = {"theta_abelian": "θ-abelian", "not_locally_powerful": "not locally powerful"}


def render_human(report: dict) -> str:
    lines = []
    _render(report, lines, 0)
    return "\n".join(lines) + "\n"


def _render(obj, lines, depth):
    pad = "  " * depth
    for key in sorted(obj):
        if key in ("schema", "profile"):
            continue
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            _render(val, lines, depth + 1)
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(f"{pad}  -")
                _render(item, lines, depth + 2)
        else:
            if isinstance(val, list):
                val = "(" + ", ".join(str(x) for x in val) + ")"
            elif isinstance(val, str):
                val = _WORDS.get(val, val)
            lines.append(f"{pad}{key}: {val}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, help="prime p (documents carry their own; a mismatch is an error)")
    common.add_argument("--precision", type=int, help="precision k, working mod p^k")
    common.add_argument("--cutoff", type=int, help="top cohomological degree N (default max(d+1, 4))")
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="locpow", description="Locally powerful pro-p group workbench.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", parents=[common], help="check a table or presentation document")
    p.add_argument("input", type=Path)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("classify", parents=[common], help="theta-abelian classification and dichotomy report")
    p.add_argument("input", type=Path)
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("cohomology", parents=[common], help="cohomology profile of a document or expression")
    p.add_argument("source", help="document path or expression such as 'free(2) ∐ zp_x_free(1)'")
    p.set_defaults(func=cmd_cohomology)
    p = sub.add_parser("f2xf2", parents=[common], help="fixed-point growth table for F2 x F2")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(func=cmd_f2xf2)
    p = sub.add_parser("roundtrip", parents=[common], help="to_lie/from_lie diagnostics")
    p.add_argument("input", type=Path)
    p.set_defaults(func=cmd_roundtrip)
    return parser


def _emit(report: dict, args) -> None:
    text = documents.dumps(report) if args.format == "json" else render_human(report)
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision is not None and args.precision < 1:
        parser.error("--precision must be at least 1")
    if args.cutoff is not None and args.cutoff < 2:
        parser.error("--cutoff must be at least 2")
    if args.prime is not None and args.prime not in SMALL_PRIMES:
        parser.error(f"--prime must be one of {SMALL_PRIMES}")
    try:
        report = args.func(args)
    except Failure as fail:
        _emit(fail.report, args)
        return 1
    except (ParseError, PrimeMismatch, PrecisionMismatch) as exc:
        print(f"locpow: error: {exc}", file=sys.stderr)
        return 2
    except LocpowError as exc:
        print(f"locpow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
