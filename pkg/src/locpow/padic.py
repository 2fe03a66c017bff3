"""Exact arithmetic in Z/p^k Z and the p-adic exp/log pair.

Everything here is a truncation of Z_p: a :class:`PadicScalar` is a residue
mod p^k that remembers p and k.  The integer-level helpers (``vp``,
``exp_mod``, ``log_mod``...) work on plain ints and are what the rest of the
package uses in inner loops; the classes wrap them for the public surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainViolation, NotAUnit, PrecisionMismatch

INFINITY = math.inf

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_mod(n: int, p: int, k: int):
    """Valuation of a residue mod p^k, INFINITY for the zero residue."""
    n %= p**k
    if n == 0:
        return INFINITY
    return vp(n, p)


def powerful_valuation(p: int) -> int:
    """Minimal valuation for the convergence domain: 1, or 2 when p = 2."""
    return 2 if p == 2 else 1


def fraction_mod(q: Fraction, p: int, k: int) -> int:
    """Reduce a p-integral rational to its residue mod p^k."""
    den = q.denominator
    if den % p == 0:
        raise DomainViolation(f"{q} is not {p}-integral")
    mod = p**k
    return q.numerator * pow(den, -1, mod) % mod


def exp_mod(x: int, p: int, k: int) -> int:
    """exp(x) mod p^k for x in the convergence domain.

    Terms x^n/n! have valuation >= n*v(x) - (n-1)/(p-1); that lower bound
    strictly increases with n, so summation stops at the first n where it
    reaches k.
    """
    mod = p**k
    x %= mod
    if x == 0:
        return 1
    v = vp(x, p)
    if v < powerful_valuation(p):
        raise DomainViolation(f"exp needs valuation >= {powerful_valuation(p)}, got {v}")
    total = Fraction(0)
    term = Fraction(1)
    n = 0
    while True:
        total += term
        n += 1
        if n * v - Fraction(n - 1, p - 1) >= k:
            break
        term = term * x / n
    return fraction_mod(total, p, k)


def log_mod(u: int, p: int, k: int) -> int:
    """log(u) mod p^k for u in 1 + p.Z_p (1 + 4.Z_2 when p = 2).

    Terms y^n/n have valuation >= n*v(y) - log_p(n), nondecreasing in n
    once v(y) >= 1.
    """
    mod = p**k
    y = (u - 1) % mod
    if y == 0:
        return 0
    v = vp(y, p)
    if v < powerful_valuation(p):
        raise DomainViolation(
            f"log needs u = 1 mod {p ** powerful_valuation(p)}, got u = {u % mod} mod {mod}"
        )
    total = Fraction(0)
    n = 1
    power = Fraction(y)
    while True:
        total += Fraction((-1) ** (n + 1)) * power / n
        n += 1
        power *= y
        if n * v - _floor_log(n, p) >= k:
            break
    return fraction_mod(total, p, k)


def _floor_log(n: int, p: int) -> int:
    e = 0
    while p ** (e + 1) <= n:
        e += 1
    return e


@dataclass(frozen=True)
class PadicScalar:
    prime: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.prime < 2:
            raise ValueError("prime must be >= 2")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _check(self, other) -> int:
        if isinstance(other, PadicScalar):
            if (other.prime, other.precision) != (self.prime, self.precision):
                raise PrecisionMismatch(
                    f"Z/{self.prime}^{self.precision} vs Z/{other.prime}^{other.precision}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, value: int) -> PadicScalar:
        return PadicScalar(self.prime, self.precision, value)

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __int__(self):
        return self.value

    def valuation(self):
        return valuation(self)

    def is_unit(self) -> bool:
        return self.value % self.prime != 0

    def to_dict(self) -> dict:
        return {"p": self.prime, "k": self.precision, "v": str(self.value)}

    @classmethod
    def from_dict(cls, doc: dict) -> PadicScalar:
        return cls(int(doc["p"]), int(doc["k"]), int(doc["v"]))

    def __str__(self):
        return f"{self.value} (mod {self.prime}^{self.precision})"


class PadicUnit:
    """A unit of Z/p^k; membership in 1+p.Z_p (1+4.Z_2) is computed on demand."""

    __slots__ = ("scalar",)

    def __init__(self, scalar: PadicScalar):
        if not scalar.is_unit():
            raise NotAUnit(f"{scalar.value} is divisible by {scalar.prime}")
        object.__setattr__(self, "scalar", scalar)

    def __setattr__(self, name, value):
        raise AttributeError("PadicUnit is immutable")

    @classmethod
    def of(cls, prime: int, precision: int, value: int) -> PadicUnit:
        return cls(PadicScalar(prime, precision, value))

    @property
    def prime(self):
        return self.scalar.prime

    @property
    def precision(self):
        return self.scalar.precision

    @property
    def value(self):
        return self.scalar.value

    @property
    def is_principal(self) -> bool:
        """True when the unit lies in 1 + p.Z_p."""
        return (self.value - 1) % self.prime == 0

    @property
    def in_log_domain(self) -> bool:
        """True when log converges: 1 + p.Z_p, or 1 + 4.Z_2 for p = 2."""
        return (self.value - 1) % (self.prime ** powerful_valuation(self.prime)) == 0

    def __mul__(self, other: PadicUnit) -> PadicUnit:
        return PadicUnit(self.scalar * other.scalar)

    def __eq__(self, other):
        return isinstance(other, PadicUnit) and self.scalar == other.scalar

    def __hash__(self):
        return hash(("unit", self.scalar))

    def __repr__(self):
        return f"PadicUnit({self.prime}, {self.precision}, {self.value})"


def valuation(x: PadicScalar):
    """Largest v <= k with p^v | value, or INFINITY for the zero residue."""
    return vp_mod(x.value, x.prime, x.precision)


def unit_inverse(u: PadicUnit) -> PadicUnit:
    mod = u.scalar.modulus
    return PadicUnit(PadicScalar(u.prime, u.precision, pow(u.value, -1, mod)))


def exp_p(x: PadicScalar) -> PadicUnit:
    return PadicUnit(PadicScalar(x.prime, x.precision, exp_mod(x.value, x.prime, x.precision)))


def log_p(u) -> PadicScalar:
    if isinstance(u, PadicUnit):
        u = u.scalar
    return PadicScalar(u.prime, u.precision, log_mod(u.value, u.prime, u.precision))


def require_domain(value: int, p: int, k: int, what: str = "value") -> None:
    """Raise DomainViolation unless value has valuation >= 1 (>= 2 for p = 2)."""
    value %= p**k
    if value == 0:
        return
    need = powerful_valuation(p)
    if vp(value, p) < need:
        raise DomainViolation(f"{what} = {value} must lie in {p ** need}.Z_{p}")
