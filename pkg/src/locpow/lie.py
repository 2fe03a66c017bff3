"""Powerful Z_p-Lie algebras given by structure constants mod p^k.

Indices are 0-based in the API.  Elements of the algebra are plain tuples of
ints (coordinates over the basis x_0..x_{d-1}), reduced mod p^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidLie, RankMismatch
from .linalg import in_span_mod
from .padic import powerful_valuation


class JacobiDefect(NamedTuple):
    triple: tuple
    defect: tuple


class PowerfulCheck(NamedTuple):
    ok: bool
    offender: Optional[tuple]  # (i, j, n) of the first coefficient with too small valuation

    def __bool__(self):
        return self.ok


class SpanWitness(NamedTuple):
    v: tuple
    w: tuple
    bracket: tuple


@dataclass(frozen=True, eq=False)
class BracketTable:
    """Structure constants c[(i, j)][n] = coefficient of x_n in (x_i, x_j), i < j.

    Pairs missing from ``brackets`` have zero bracket.  The table is checked
    for powerfulness and the Jacobi identity on construction unless
    ``validate=False`` (used for basis changes of tables already known good).
    """

    prime: int
    precision: int
    rank: int
    brackets: dict
    validate: bool = True

    def __post_init__(self):
        mod = self.prime**self.precision
        clean = {}
        for (i, j), coeffs in self.brackets.items():
            if not (0 <= i < self.rank and 0 <= j < self.rank) or i == j:
                raise ValueError(f"bad bracket index ({i}, {j})")
            coeffs = tuple(int(c) % mod for c in coeffs)
            if len(coeffs) != self.rank:
                raise RankMismatch(f"bracket ({i},{j}) has {len(coeffs)} coefficients, rank {self.rank}")
            if i > j:
                i, j = j, i
                coeffs = tuple(-c % mod for c in coeffs)
            if any(coeffs):
                clean[(i, j)] = coeffs
        object.__setattr__(self, "brackets", clean)
        zero = (0,) * self.rank
        full = [[zero] * self.rank for _ in range(self.rank)]
        for (i, j), coeffs in clean.items():
            full[i][j] = coeffs
            # negated integers, not residues: BCH works above precision k and needs an antisymmetric lift
            full[j][i] = tuple(-c for c in coeffs)
        object.__setattr__(self, "_full", full)
        if self.validate:
            check = is_powerful(self)
            if not check.ok:
                from .errors import NotPowerful

                i, j, n = check.offender
                raise NotPowerful(f"coefficient of x_{n} in (x_{i},x_{j}) has too small valuation")
            defect = jacobi_defect(self)
            if defect is not None:
                raise InvalidLie(f"Jacobi identity fails at {defect.triple}: {defect.defect}")

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def basis(self, i: int) -> tuple:
        return tuple(1 if n == i else 0 for n in range(self.rank))

    def zero(self) -> tuple:
        return (0,) * self.rank

    def coeff(self, i: int, j: int) -> tuple:
        """Coordinates of (x_i, x_j) for any i, j."""
        mod = self.modulus
        return tuple(c % mod for c in self._full[i][j])

    def is_abelian(self) -> bool:
        return not self.brackets

    def reduce(self, precision: int) -> BracketTable:
        return BracketTable(self.prime, precision, self.rank, dict(self.brackets), validate=False)

    def __eq__(self, other):
        return (
            isinstance(other, BracketTable)
            and (self.prime, self.precision, self.rank) == (other.prime, other.precision, other.rank)
            and self.brackets == other.brackets
        )

    def __hash__(self):
        return hash((self.prime, self.precision, self.rank, tuple(sorted(self.brackets.items()))))

    def __repr__(self):
        return f"BracketTable(p={self.prime}, k={self.precision}, d={self.rank}, {self.brackets})"


def _check_element(t: BracketTable, v: Sequence[int]) -> None:
    if len(v) != t.rank:
        raise RankMismatch(f"element of length {len(v)} for rank {t.rank}")


def add(t: BracketTable, v, w) -> tuple:
    mod = t.modulus
    return tuple((a + b) % mod for a, b in zip(v, w))


def scale(t: BracketTable, a: int, v) -> tuple:
    mod = t.modulus
    return tuple(a * x % mod for x in v)


def bracket(t: BracketTable, v: Sequence[int], w: Sequence[int]) -> tuple:
    """Bilinear, antisymmetric extension of the structure constants."""
    _check_element(t, v)
    _check_element(t, w)
    d = t.rank
    out = [0] * d
    full = t._full
    for i in range(d):
        if not v[i]:
            continue
        for j in range(d):
            if not w[j] or i == j:
                continue
            c = full[i][j]
            f = v[i] * w[j]
            for n in range(d):
                if c[n]:
                    out[n] += f * c[n]
    mod = t.modulus
    return tuple(x % mod for x in out)


def jacobi_defect(t: BracketTable) -> Optional[JacobiDefect]:
    """First basis triple (lexicographic) whose Jacobi sum is nonzero mod p^k."""
    for i, j, l in combinations(range(t.rank), 3):
        xi, xj, xl = t.basis(i), t.basis(j), t.basis(l)
        s = add(
            t,
            add(t, bracket(t, bracket(t, xi, xj), xl), bracket(t, bracket(t, xj, xl), xi)),
            bracket(t, bracket(t, xl, xi), xj),
        )
        if any(s):
            return JacobiDefect((i, j, l), s)
    return None


def adjoint_matrix(t: BracketTable, v: Sequence[int]):
    """Matrix of ad(v) (column n = (v, x_n)) and its trace mod p^k."""
    _check_element(t, v)
    cols = [bracket(t, v, t.basis(n)) for n in range(t.rank)]
    matrix = [[cols[n][m] for n in range(t.rank)] for m in range(t.rank)]
    trace = sum(matrix[i][i] for i in range(t.rank)) % t.modulus
    return matrix, trace


def is_powerful(t: BracketTable) -> PowerfulCheck:
    """Every structure constant divisible by p (by 4 when p = 2)."""
    q = t.prime ** powerful_valuation(t.prime)
    for (i, j) in sorted(t.brackets):
        for n, c in enumerate(t.brackets[(i, j)]):
            if c % q:
                return PowerfulCheck(False, (i, j, n))
    return PowerfulCheck(True, None)


def in_span(t: BracketTable, vectors, target):
    """Coefficients writing target in the Z/p^k-span of vectors, else None."""
    return in_span_mod([tuple(v) for v in vectors], tuple(target), t.prime, t.precision)


def span_closure_witness(t: BracketTable, S) -> Optional[SpanWitness]:
    """A pair from S whose bracket leaves span(S), or None when span(S) is bracket-closed."""
    S = [tuple(int(x) % t.modulus for x in s) for s in S]
    if not S:
        raise ValueError("S must be nonempty")
    for a, b in combinations(range(len(S)), 2):
        br = bracket(t, S[a], S[b])
        if in_span(t, S, br) is None:
            return SpanWitness(S[a], S[b], br)
    return None


def lie_orientation_valid(t: BracketTable, images: Sequence[int]) -> bool:
    """Images of a Lie orientation must lie in p.Z_p (4.Z_2)."""
    q = t.prime ** powerful_valuation(t.prime)
    return len(images) == t.rank and all(x % q == 0 for x in images)


def change_basis(t: BracketTable, B) -> BracketTable:
    """Transport t to the basis whose i-th vector has coordinates column i of B.

    B must be invertible mod p; the result is not re-validated.
    """
    from .linalg import solve_mod

    d = t.rank
    cols = [tuple(B[r][c] for r in range(d)) for c in range(d)]
    new = {}
    for i, j in combinations(range(d), 2):
        br = bracket(t, cols[i], cols[j])
        coords = solve_mod(B, list(br), t.prime, t.precision)
        if coords is None:
            raise ValueError("basis change matrix is not invertible")
        new[(i, j)] = coords
    return BracketTable(t.prime, t.precision, d, new, validate=False)


def theta_abelian_table(p: int, k: int, d: int, lam: int) -> BracketTable:
    """(x_0, x_i) = lam*x_i for i >= 1, all other brackets zero."""
    mod = p**k
    br = {}
    for i in range(1, d):
        coeffs = [0] * d
        coeffs[i] = lam % mod
        br[(0, i)] = coeffs
    return BracketTable(p, k, d, br)
