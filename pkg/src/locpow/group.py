"""Uniform pro-p groups given by presentations, at finite precision.

A presentation [x_i, x_j] = x_1^{l_1(i,j)} ... x_d^{l_d(i,j)} determines the
Lie algebra log(G) and conversely.  Arithmetic on normal forms
x_1^{a_1}...x_d^{a_d} runs through that correspondence: normal-form
exponents are converted to log coordinates by a chain of BCH products,
multiplied with BCH, and converted back by a contracting fixed-point
iteration.  Everything is exact mod p^k because G^{p^k} corresponds to
exponents divisible by p^k in both coordinate systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .bch import bch
from .errors import DomainViolation, NonConvergence, PrecisionExhausted
from .lie import BracketTable, is_powerful, jacobi_defect
from .linalg import elementary_divisors
from .padic import PadicScalar, PadicUnit, log_mod, powerful_valuation, require_domain


def _full(t: BracketTable):
    return t._full


def _log_normal_form(t: BracketTable, a: Sequence[int]) -> tuple:
    """log(x_1^{a_1} ... x_d^{a_d}) in Lie coordinates."""
    p, k, d = t.prime, t.precision, t.rank
    mod = p**k
    z = None
    for i in range(d):
        if a[i] % mod == 0:
            continue
        term = tuple(a[i] % mod if n == i else 0 for n in range(d))
        z = term if z is None else bch(_full(t), p, k, z, term)
    return z if z is not None else (0,) * d


def _normal_form_from_log(t: BracketTable, v: Sequence[int]) -> tuple:
    p, k = t.prime, t.precision
    mod = p**k
    v = tuple(x % mod for x in v)
    a = v
    for _ in range(4 * k + 8):
        err = tuple((x - y) % mod for x, y in zip(v, _log_normal_form(t, a)))
        if not any(err):
            return a
        a = tuple((x + y) % mod for x, y in zip(a, err))
    raise NonConvergence("normal-form conversion did not stabilize")


def _commutator_log(t: BracketTable, X, Y) -> tuple:
    """log([exp X, exp Y]) = log(exp X exp Y exp(-X) exp(-Y))."""
    p, k = t.prime, t.precision
    mod = p**k
    full = _full(t)
    nx = tuple(-x % mod for x in X)
    ny = tuple(-y % mod for y in Y)
    z = bch(full, p, k, X, Y)
    z = bch(full, p, k, z, nx)
    return bch(full, p, k, z, ny)


def relations_of_table(t: BracketTable) -> dict:
    """Normal-form exponents of [x_i, x_j] in exp(t), for i < j (zeros omitted)."""
    rel = {}
    for i, j in combinations(range(t.rank), 2):
        if not any(t.coeff(i, j)):
            continue
        log_c = _commutator_log(t, t.basis(i), t.basis(j))
        nf = _normal_form_from_log(t, log_c)
        if any(nf):
            rel[(i, j)] = nf
    return rel


@dataclass(frozen=True, eq=False)
class UniformPresentation:
    """Generators x_0..x_{d-1} with [x_i, x_j] = prod_n x_n^{relations[(i, j)][n]}.

    Every exponent must lie in p.Z_p (4.Z_2 for p = 2).  With ``validate``
    the associated Lie algebra is computed on construction and must satisfy
    the Jacobi identity mod p^k.
    """

    prime: int
    precision: int
    rank: int
    relations: dict = field(default_factory=dict)
    validate: bool = True

    def __post_init__(self):
        mod = self.prime**self.precision
        clean = {}
        for (i, j), exps in self.relations.items():
            if not (0 <= i < j < self.rank):
                raise ValueError(f"relation index ({i}, {j}) must satisfy 0 <= i < j < d")
            exps = tuple(int(e) % mod for e in exps)
            if len(exps) != self.rank:
                raise ValueError(f"relation ({i},{j}) has {len(exps)} exponents, rank {self.rank}")
            for n, e in enumerate(exps):
                require_domain(e, self.prime, self.precision, f"exponent {n} of [x_{i},x_{j}]")
            if any(exps):
                clean[(i, j)] = exps
        object.__setattr__(self, "relations", clean)
        if self.validate:
            self.lie  # noqa: B018 -- forces to_lie and its Jacobi check

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @cached_property
    def lie(self) -> BracketTable:
        return _solve_table(self)

    def identity(self) -> tuple:
        return (0,) * self.rank

    def generator(self, i: int) -> tuple:
        return tuple(1 if n == i else 0 for n in range(self.rank))

    def __eq__(self, other):
        return (
            isinstance(other, UniformPresentation)
            and (self.prime, self.precision, self.rank) == (other.prime, other.precision, other.rank)
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.prime, self.precision, self.rank, tuple(sorted(self.relations.items()))))

    def __repr__(self):
        return f"UniformPresentation(p={self.prime}, k={self.precision}, d={self.rank}, {self.relations})"


@dataclass(frozen=True)
class GroupOrientation:
    """theta(x_i) for each generator; every image in 1+p.Z_p (1+4.Z_2)."""

    prime: int
    precision: int
    images: tuple

    def __post_init__(self):
        mod = self.prime**self.precision
        imgs = tuple(int(u) % mod for u in self.images)
        q = self.prime ** powerful_valuation(self.prime)
        for i, u in enumerate(imgs):
            if (u - 1) % q:
                raise DomainViolation(f"theta(x_{i}) = {u} is not in 1 + {q}.Z_{self.prime}")
        object.__setattr__(self, "images", imgs)

    def units(self):
        return [PadicUnit.of(self.prime, self.precision, u) for u in self.images]

    def __call__(self, g: Sequence[int]) -> int:
        """theta of a normal form; exponents act through the integer representative."""
        mod = self.prime**self.precision
        out = 1
        for u, a in zip(self.images, g):
            out = out * pow(u, int(a) % mod, mod) % mod
        return out

    def lie_images(self) -> tuple:
        return tuple(log_mod(u, self.prime, self.precision) for u in self.images)


def _solve_table(P: UniformPresentation, max_iter: int | None = None) -> BracketTable:
    """Find the bracket table whose exponential reproduces P's relations.

    The relation exponents equal the table entries up to terms of higher
    valuation, so t <- t - (relations(t) - target) contracts p-adically.
    """
    p, k, d = P.prime, P.precision, P.rank
    mod = p**k
    target = P.relations
    current = dict(target)
    iters = max_iter if max_iter is not None else 4 * k + 8
    for _ in range(iters):
        t = BracketTable(p, k, d, current, validate=False)
        got = relations_of_table(t)
        diff = {}
        for key in set(got) | set(target):
            g = got.get(key, (0,) * d)
            w = target.get(key, (0,) * d)
            delta = tuple((a - b) % mod for a, b in zip(g, w))
            if any(delta):
                diff[key] = delta
        if not diff:
            defect = jacobi_defect(t)
            if defect is not None:
                from .errors import InvalidLie

                i, j, l = defect.triple
                raise InvalidLie(
                    f"presentation is not uniform mod {p}^{k}: Jacobi fails at "
                    f"(x_{i},x_{j},x_{l}) with defect {defect.defect}"
                )
            if not is_powerful(t):
                raise NonConvergence("associated Lie algebra is not powerful")
            return t
        for key, delta in diff.items():
            old = current.get(key, (0,) * d)
            current[key] = tuple((a - b) % mod for a, b in zip(old, delta))
    raise NonConvergence(f"bracket table did not stabilize after {iters} iterations")


# group operations --------------------------------------------------------

def _mod_elem(P, g):
    mod = P.modulus
    if len(g) != P.rank:
        from .errors import RankMismatch

        raise RankMismatch(f"element of length {len(g)} for rank {P.rank}")
    return tuple(int(x) % mod for x in g)


def log_element(P: UniformPresentation, g) -> tuple:
    return _log_normal_form(P.lie, _mod_elem(P, g))


def exp_element(P: UniformPresentation, v) -> tuple:
    return _normal_form_from_log(P.lie, v)


def multiply(P: UniformPresentation, g, h) -> tuple:
    """Normal form of g*h."""
    g = _mod_elem(P, g)
    h = _mod_elem(P, h)
    if not any(g):
        return h
    if not any(h):
        return g
    t = P.lie
    if t.is_abelian():
        return tuple((a + b) % P.modulus for a, b in zip(g, h))
    z = bch(t._full, t.prime, t.precision, _log_normal_form(t, g), _log_normal_form(t, h))
    return _normal_form_from_log(t, z)


def inverse(P: UniformPresentation, g) -> tuple:
    t = P.lie
    v = _log_normal_form(t, _mod_elem(P, g))
    return _normal_form_from_log(t, tuple(-x for x in v))


def power(P: UniformPresentation, g, e) -> tuple:
    """g^e for an integer or p-adic exponent: log(g^e) = e*log(g)."""
    if isinstance(e, PadicScalar):
        e = e.value
    t = P.lie
    v = _log_normal_form(t, _mod_elem(P, g))
    return _normal_form_from_log(t, tuple(e * x for x in v))


def commutator(P: UniformPresentation, g, h) -> tuple:
    """[g, h] = g h g^-1 h^-1."""
    return multiply(P, multiply(P, g, h), multiply(P, inverse(P, g), inverse(P, h)))


def conjugate(P: UniformPresentation, g, h) -> tuple:
    """g h g^-1."""
    return multiply(P, multiply(P, g, h), inverse(P, g))


# functors ----------------------------------------------------------------

def to_lie(P: UniformPresentation) -> BracketTable:
    return P.lie


def from_lie(t: BracketTable) -> UniformPresentation:
    """The presentation of exp(t) on the generators exp(x_i)."""
    if not is_powerful(t):
        from .errors import NotPowerful

        raise NotPowerful("from_lie needs a powerful bracket table")
    P = UniformPresentation(t.prime, t.precision, t.rank, relations_of_table(t), validate=False)
    P.__dict__["lie"] = t
    return P


def limit_bracket(P: UniformPresentation, i: int, j: int, n: int) -> tuple:
    """Approximant [x_i^{p^n}, x_j^{p^n}]^{p^{-2n}} in log coordinates mod p^k.

    Computed in the group at precision k + 2n on the lifted table; the
    commutator's log is divided by p^{2n}.
    """
    p, k = P.prime, P.precision
    kk = k + 2 * n
    lifted = BracketTable(p, kk, P.rank, dict(P.lie.brackets), validate=False)
    mod = p**kk
    X = tuple(p**n if m == i else 0 for m in range(P.rank))
    Y = tuple(p**n if m == j else 0 for m in range(P.rank))
    # [x_i^{p^n}, x_j^{p^n}] as a normal form in the lifted group, then back to log coordinates
    nf = _normal_form_from_log(lifted, _commutator_log(lifted, X, Y))
    v = _log_normal_form(lifted, nf)
    q = p ** (2 * n)
    out = []
    for x in v:
        x %= mod
        if x % q:
            raise NonConvergence(f"commutator of {p}^{n}-th powers not divisible by {p}^{2 * n}")
        out.append((x // q) % p**k)
    return tuple(out)


def limit_table(P: UniformPresentation, n: int) -> BracketTable:
    br = {}
    for i, j in combinations(range(P.rank), 2):
        br[(i, j)] = limit_bracket(P, i, j, n)
    return BracketTable(P.prime, P.precision, P.rank, br, validate=False)


def stabilized_limit_table(P: UniformPresentation, max_n: int | None = None):
    """Iterate the limit formula until successive approximants agree mod p^k.

    Returns (table, n) for the first n where approximants n and n+1 agree.
    """
    max_n = max_n if max_n is not None else 2 * P.precision + 2
    prev = limit_table(P, 0)
    for n in range(1, max_n + 1):
        cur = limit_table(P, n)
        if cur == prev:
            return cur, n - 1
        prev = cur
    raise NonConvergence("limit-formula approximants did not stabilize")


# theta-centers, lower p-series, canonical presentations -------------------

def theta_center_contains(P: UniformPresentation, theta: GroupOrientation, h) -> bool:
    """h in ker(theta) and x_i h x_i^-1 = h^{theta(x_i)} for every generator."""
    h = _mod_elem(P, h)
    if theta(h) != 1:
        return False
    for i in range(P.rank):
        if conjugate(P, P.generator(i), h) != power(P, h, theta.images[i]):
            return False
    return True


def lower_series_dims(P: UniformPresentation, upto: int) -> tuple:
    """F_p-dimensions of lambda_i(G)/lambda_{i+1}(G), i = 1..upto.

    lambda_i is generated by the p^{i-1}-th powers of the generators and the
    commutators [x_a^{p^{i-2}}, x_b]; its log lattice is their Z_p-span and
    the index of each lattice is read off its elementary divisors.
    """
    p, k, d = P.prime, P.precision, P.rank
    if upto >= k:
        raise PrecisionExhausted(f"lower p-series depth {upto} needs precision > {upto}, have {k}")
    t = P.lie

    def lattice_index(i: int) -> int:
        gens = [tuple(p ** (i - 1) if n == a else 0 for n in range(d)) for a in range(d)]
        if i >= 2:
            for a in range(d):
                X = tuple(p ** (i - 2) if n == a else 0 for n in range(d))
                for b in range(d):
                    if a != b:
                        gens.append(_commutator_log(t, X, t.basis(b)))
        divs = elementary_divisors([list(g) for g in gens], p, k)
        return sum(divs) + (d - len(divs)) * k

    idx = [lattice_index(i) for i in range(1, upto + 2)]
    return tuple(idx[i + 1] - idx[i] for i in range(upto))


def present_theta_abelian(d: int, lam: PadicScalar):
    """<x_1..x_d | [x_1, x_i] = x_i^lam, [x_i, x_j] = 1> with theta(x_1) = 1 + lam."""
    p, k = lam.prime, lam.precision
    require_domain(lam.value, p, k, "lambda")
    rel = {}
    if lam.value:
        for i in range(1, d):
            rel[(0, i)] = tuple(lam.value if n == i else 0 for n in range(d))
    P = UniformPresentation(p, k, d, rel)
    images = tuple([(1 + lam.value) % p**k] + [1] * (d - 1))
    return P, GroupOrientation(p, k, images)


def semidirect_multiply(p: int, k: int, lam: int, g, h) -> tuple:
    """Closed form in Z_p ltimes Z_p^{d-1} where x_1 acts by 1+lam.

    (x_1^a y) (x_1^b z) = x_1^{a+b} (y^{(1+lam)^{-b}} z).
    """
    mod = p**k
    a, b = g[0] % mod, h[0] % mod
    f = pow((1 + lam) % mod, -b, mod)
    return ((a + b) % mod,) + tuple((f * y + z) % mod for y, z in zip(g[1:], h[1:]))
