"""Baker-Campbell-Hausdorff series on a concrete bracket table, exactly mod p^k.

The homogeneous components Z_n of log(exp X exp Y) are generated by the
recursion

    (n+1) Z_{n+1} = 1/2 [X - Y, Z_n]
                    + sum_{q >= 1, 2q <= n} B_{2q}/(2q)! * sum_{k_1+..+k_{2q}=n} [Z_{k_1},[...,[Z_{k_2q}, X+Y]]]

evaluated directly in the algebra.  Values are carried as (numerator vector,
s) meaning numerator / p^s with numerators mod p^M; M is chosen so that the
final division by p^s still leaves k correct digits.

A weight-w term has valuation at least w*a + (w-1)*(e - 1/(p-1)), where a is
the smaller input valuation and e the powerful exponent (1, or 2 for p = 2),
because BCH coefficients of degree w have p-adic valuation >= -(w-1)/(p-1).
The series is cut at the last weight for which that bound is still below k.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import NonConvergence
from .padic import powerful_valuation


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        total += Fraction(factorial(n + 1), factorial(j) * factorial(n + 1 - j)) * bernoulli(j)
    return -total / (n + 1)


def weight_cutoff(p: int, k: int, min_valuation: int = 0) -> int:
    """Largest weight whose BCH terms can still be nonzero mod p^k."""
    e = powerful_valuation(p)
    slope = Fraction(e) - Fraction(1, p - 1)
    w = 1
    while (w + 1) * min_valuation + w * slope < k:
        w += 1
    return w


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class _Scaled:
    """Arithmetic on numerator/p^s vectors for one bracket table."""

    def __init__(self, full, p, M):
        self.full = full
        self.p = p
        self.d = len(full)
        self.mod = p**M
        self.M = M

    def bracket(self, a, b):
        va, sa = a
        vb, sb = b
        d = self.d
        out = [0] * d
        full = self.full
        for i in range(d):
            if not va[i]:
                continue
            for j in range(d):
                if i == j or not vb[j]:
                    continue
                c = full[i][j]
                f = va[i] * vb[j]
                for n in range(d):
                    if c[n]:
                        out[n] += f * c[n]
        mod = self.mod
        return ([x % mod for x in out], sa + sb)

    def add(self, a, b):
        va, sa = a
        vb, sb = b
        s = max(sa, sb)
        fa = self.p ** (s - sa)
        fb = self.p ** (s - sb)
        mod = self.mod
        return ([(x * fa + y * fb) % mod for x, y in zip(va, vb)], s)

    def scale(self, c: Fraction, a):
        va, sa = a
        if c == 0:
            return ([0] * self.d, 0)
        num, den = c.numerator, c.denominator
        e = _vp(den, self.p)
        unit = den // self.p**e
        f = num * pow(unit, -1, self.mod) % self.mod
        return ([x * f % self.mod for x in va], sa + e)

    def zero(self):
        return ([0] * self.d, 0)


def bch_components(full, p: int, M: int, X, Y, weight: int):
    """Homogeneous components Z_1..Z_weight as scaled vectors."""
    S = _Scaled(full, p, M)
    x = (list(X), 0)
    y = (list(Y), 0)
    x_plus_y = S.add(x, y)
    x_minus_y = S.add(x, S.scale(Fraction(-1), y))
    Z = [None, x_plus_y]
    # A[j][n]: sum over compositions of n into j parts of nested brackets ending in X+Y
    A = {0: {0: x_plus_y}}
    for n in range(1, weight):
        for j in range(1, n + 1):
            row = A.setdefault(j, {})
            acc = S.zero()
            prev = A[j - 1]
            for m in range(1, n + 1):
                inner = prev.get(n - m)
                if inner is None:
                    continue
                acc = S.add(acc, S.bracket(Z[m], inner))
            row[n] = acc
        total = S.scale(Fraction(1, 2), S.bracket(x_minus_y, Z[n]))
        q = 1
        while 2 * q <= n:
            coeff = bernoulli(2 * q) / factorial(2 * q)
            total = S.add(total, S.scale(coeff, A[2 * q][n]))
            q += 1
        Z.append(S.scale(Fraction(1, n + 1), total))
    return Z[1:]


def _unscale(vec, p: int, k: int, M: int):
    v, s = vec
    if M - s < k:
        raise NonConvergence("internal precision exhausted in BCH evaluation")
    ps = p**s
    mod = p**k
    out = []
    for x in v:
        x %= p**M
        if x % ps:
            raise NonConvergence("BCH term is not p-integral; table is not powerful")
        out.append((x // ps) % mod)
    return tuple(out)


def _min_valuation(v, p, k):
    best = k
    for x in v:
        x %= p**k
        if x:
            best = min(best, _vp(x, p))
    return best


def bch(full, p: int, k: int, X, Y, weight: int | None = None) -> tuple:
    """log(exp X exp Y) mod p^k on the bracket table ``full`` (d x d x d ints)."""
    mod = p**k
    X = [x % mod for x in X]
    Y = [y % mod for y in Y]
    if not any(X):
        return tuple(Y)
    if not any(Y):
        return tuple(X)
    if weight is None:
        a = min(_min_valuation(X, p, k), _min_valuation(Y, p, k))
        weight = weight_cutoff(p, k, a)
    if weight <= 1:
        return tuple((x + y) % mod for x, y in zip(X, Y))
    M = k + 2 * weight + 4 * _vp_factorial_bound(weight, p) + 4
    comps = bch_components(full, p, M, X, Y, weight)
    S = _Scaled(full, p, M)
    total = S.zero()
    for z in comps:
        total = S.add(total, z)
    return _unscale(total, p, k, M)


def _vp_factorial_bound(n: int, p: int) -> int:
    return sum(n // p**i for i in range(1, 64) if p**i <= n) + n


def bch_component_values(full, p: int, k: int, X, Y, weight: int):
    """Each Z_n reduced mod p^k (for truncation-soundness diagnostics)."""
    M = k + 2 * weight + 4 * _vp_factorial_bound(weight, p) + 4
    return [_unscale(z, p, k, M) for z in bch_components(full, p, M, X, Y, weight)]
