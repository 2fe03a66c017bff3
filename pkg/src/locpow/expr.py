"""Composition expressions for cohomology profiles.

    expr  := term (("∐" | "*") term)*
    term  := atom | "(" expr ")"
    atom  := "theta_abelian" "(" INT "," scalar ")" | "free" "(" INT ")" | "zp_x_free" "(" INT ")"
    scalar:= ["-"] INT | "p" | "p^" INT | INT "p"

Positions in error messages are 1-based character offsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cohomology import CohomologyProfile, exterior_profile, free_product_profile, free_profile, zp_times_free_profile
from .errors import ParseError
from .padic import powerful_valuation, vp_mod

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<op>[(),^*∐-]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int  # 1-based


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        if text[i:].strip() == "":
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            j = i
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", f"position {j + 1}")
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start + 1))
        i = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple
    pos: int


@dataclass(frozen=True)
class Coproduct:
    parts: tuple


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, what: str):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"expected {what}, found {found}", f"position {tok.pos}")

    def take(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            self.fail(what or (repr(text) if text else kind))
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("'∐' or end of input")
        return node

    def expr(self):
        parts = [self.term()]
        while self.tok.kind == "op" and self.tok.text in ("∐", "*"):
            self.i += 1
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Coproduct(tuple(parts))

    def term(self):
        if self.tok.kind == "op" and self.tok.text == "(":
            self.i += 1
            node = self.expr()
            self.take("op", ")", "')'")
            return node
        if self.tok.kind != "name":
            self.fail("theta_abelian, free, zp_x_free or '('")
        name = self.take("name")
        if name.text not in ("theta_abelian", "free", "zp_x_free"):
            raise ParseError(f"unknown atom {name.text!r}", f"position {name.pos}")
        self.take("op", "(", "'('")
        args = [int(self.take("int", what="an integer").text)]
        if name.text == "theta_abelian":
            self.take("op", ",", "','")
            args.append(self.scalar())
        self.take("op", ")", "')'")
        return Atom(name.text, tuple(args), name.pos)

    def scalar(self):
        """Returns ('int', n) or ('p', coefficient, exponent)."""
        sign = 1
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            sign = -1
        if self.tok.kind == "int":
            n = int(self.take("int").text)
            if self.tok.kind == "name" and self.tok.text == "p":
                self.i += 1
                return ("p", sign * n, self._exponent())
            return ("int", sign * n)
        if self.tok.kind == "name" and self.tok.text == "p":
            self.i += 1
            return ("p", sign, self._exponent())
        self.fail("an integer, p or p^n")

    def _exponent(self) -> int:
        if self.tok.kind == "op" and self.tok.text == "^":
            self.i += 1
            return int(self.take("int", what="an exponent").text)
        return 1


def parse(text: str):
    return _Parser(text).parse()


def atoms(node) -> list:
    if isinstance(node, Atom):
        return [node]
    return [a for part in node.parts for a in atoms(part)]


def scalar_value(s, p: int) -> int:
    if s[0] == "int":
        return s[1]
    return s[1] * p ** s[2]


def default_cutoff(node) -> int:
    d = sum(_rank(a) for a in atoms(node))
    return max(d + 1, 4)


def _rank(a: Atom) -> int:
    return a.args[0] + 1 if a.name == "zp_x_free" else a.args[0]


def evaluate(node, p: int, cutoff: int, k: int = 8) -> CohomologyProfile:
    """Profile of the composition; theta_abelian needs lambda in p.Z_p (4.Z_2), checked mod p^k."""
    if isinstance(node, Coproduct):
        out = evaluate(node.parts[0], p, cutoff, k)
        for part in node.parts[1:]:
            out = free_product_profile(out, evaluate(part, p, cutoff, k))
        return out
    n = node.args[0]
    if node.name == "free":
        return free_profile(n, cutoff, p)
    if node.name == "zp_x_free":
        return zp_times_free_profile(n, cutoff, p)
    lam = scalar_value(node.args[1], p)
    if vp_mod(lam, p, k) < powerful_valuation(p):
        raise ParseError(
            f"theta_abelian needs lambda in {p ** powerful_valuation(p)}.Z_{p}, got {lam}",
            f"position {node.pos}",
        )
    if n < 1:
        raise ParseError("theta_abelian needs d >= 1", f"position {node.pos}")
    prof = exterior_profile(n, cutoff, p)
    return CohomologyProfile(prof.algebra, f"theta_abelian({n},{lam})")
