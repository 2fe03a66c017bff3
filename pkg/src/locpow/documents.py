"""JSON documents for tables, presentations, elements, orientations and profiles.

Generator indices in documents are 1-based; coefficients may be given as
integers or decimal strings and are always written back as decimal strings.
"""

from __future__ import annotations

import json
from pathlib import Path

from .cohomology import CohomologyProfile, GradedAlgebra
from .errors import ParseError
from .group import GroupOrientation, UniformPresentation
from .lie import BracketTable
from .padic import SMALL_PRIMES


def dumps(doc) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(doc, dict):
        raise ParseError("a document must be a single JSON object", str(path))
    return doc


def kind(doc: dict) -> str:
    if "brackets" in doc:
        return "table"
    if "relations" in doc:
        return "presentation"
    if "dims" in doc:
        return "profile"
    if "exponents" in doc:
        return "element"
    if "images" in doc:
        return "orientation"
    raise ParseError("unrecognised document (expected brackets, relations, dims, exponents or images)", "$")


def _int(value, where: str) -> int:
    if isinstance(value, bool):
        raise ParseError(f"expected an integer, got {value!r}", where)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            pass
    raise ParseError(f"expected an integer or decimal string, got {value!r}", where)


def _field(doc: dict, name: str, where: str = "$"):
    if name not in doc:
        raise ParseError(f"missing field {name!r}", where)
    return doc[name]


def header(doc: dict) -> tuple:
    """(p, k, d) with basic sanity checks."""
    p = _int(_field(doc, "p"), "$.p")
    k = _int(_field(doc, "k"), "$.k")
    d = _int(_field(doc, "d"), "$.d")
    if p not in SMALL_PRIMES:
        raise ParseError(f"prime {p} is not in the supported list {SMALL_PRIMES}", "$.p")
    if k < 1:
        raise ParseError("precision k must be at least 1", "$.k")
    if d < 1:
        raise ParseError("rank d must be at least 1", "$.d")
    return p, k, d


def _vector(values, d: int, where: str) -> tuple:
    if not isinstance(values, list):
        raise ParseError("expected a list", where)
    if len(values) != d:
        raise ParseError(f"expected {d} entries, got {len(values)}", where)
    return tuple(_int(v, f"{where}[{n}]") for n, v in enumerate(values))


def _pairs(doc: dict, key: str, value_key: str, d: int) -> dict:
    entries = _field(doc, key)
    if not isinstance(entries, list):
        raise ParseError("expected a list", f"$.{key}")
    out = {}
    for n, entry in enumerate(entries):
        where = f"$.{key}[{n}]"
        if not isinstance(entry, dict):
            raise ParseError("expected an object", where)
        i = _int(_field(entry, "i", where), f"{where}.i")
        j = _int(_field(entry, "j", where), f"{where}.j")
        if not (1 <= i < j <= d):
            raise ParseError(f"indices must satisfy 1 <= i < j <= {d}, got ({i}, {j})", where)
        if (i - 1, j - 1) in out:
            raise ParseError(f"pair ({i}, {j}) listed twice", where)
        out[(i - 1, j - 1)] = _vector(_field(entry, value_key, where), d, f"{where}.{value_key}")
    return out


def raw_table(doc: dict) -> tuple:
    """(p, k, d, brackets) without any algebraic validation."""
    p, k, d = header(doc)
    return p, k, d, _pairs(doc, "brackets", "coeffs", d)


def raw_presentation(doc: dict) -> tuple:
    p, k, d = header(doc)
    return p, k, d, _pairs(doc, "relations", "exponents", d)


def parse_table(doc: dict, validate: bool = True) -> BracketTable:
    p, k, d, br = raw_table(doc)
    return BracketTable(p, k, d, br, validate=validate)


def parse_presentation(doc: dict, validate: bool = True) -> UniformPresentation:
    p, k, d, rel = raw_presentation(doc)
    return UniformPresentation(p, k, d, rel, validate=validate)


def table_doc(t: BracketTable) -> dict:
    return {
        "p": t.prime,
        "k": t.precision,
        "d": t.rank,
        "brackets": [
            {"i": i + 1, "j": j + 1, "coeffs": [str(c) for c in coeffs]}
            for (i, j), coeffs in sorted(t.brackets.items())
        ],
    }


def presentation_doc(P: UniformPresentation) -> dict:
    return {
        "p": P.prime,
        "k": P.precision,
        "d": P.rank,
        "relations": [
            {"i": i + 1, "j": j + 1, "exponents": [str(e) for e in exps]}
            for (i, j), exps in sorted(P.relations.items())
        ],
    }


def parse_element(doc: dict, d: int) -> tuple:
    return _vector(_field(doc, "exponents"), d, "$.exponents")


def element_doc(g) -> dict:
    return {"exponents": [str(x) for x in g]}


def parse_orientation(doc: dict, p: int, k: int, d: int) -> GroupOrientation:
    return GroupOrientation(p, k, _vector(_field(doc, "images"), d, "$.images"))


def orientation_doc(theta: GroupOrientation) -> dict:
    return {"images": [str(u) for u in theta.images]}


def parse_profile(doc: dict) -> CohomologyProfile:
    try:
        return CohomologyProfile(GradedAlgebra.from_dict(doc), doc.get("label", ""))
    except (KeyError, ValueError, IndexError, TypeError) as exc:
        raise ParseError(f"malformed profile: {exc}", "$") from exc
