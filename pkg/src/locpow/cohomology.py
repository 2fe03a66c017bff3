"""Graded F_p-algebras with explicit cup-product tables, and the profiles built from them.

A GradedAlgebra stores dims[0..N] and, for every a, b >= 1 with a + b <= N,
an integer array of shape (dims[a], dims[b], dims[a+b]) giving the product of
basis elements.  Degree 0 is the span of the unit and is not tabulated.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import NamedTuple, Optional

import numpy as np

from .errors import CutoffExceeded, PrimeMismatch, SizeGuard, WrongPrime
from .linalg import nullspace_dim_fp, quotient_projection, rank_fp

DEFAULT_PRIME = 3
FIXED_POINT_GUARD = 512


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    prime: int
    dims: tuple
    products: dict  # (a, b) -> ndarray (dims[a], dims[b], dims[a+b])

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        if not dims or dims[0] != 1:
            raise ValueError("dim H^0 must be 1")
        object.__setattr__(self, "dims", dims)
        N = len(dims) - 1
        table = {}
        for a in range(1, N + 1):
            for b in range(1, N + 1 - a):
                shape = (dims[a], dims[b], dims[a + b])
                arr = self.products.get((a, b))
                arr = np.zeros(shape, dtype=np.int64) if arr is None else np.asarray(arr, dtype=np.int64) % self.prime
                if arr.shape != shape:
                    raise ValueError(f"product table ({a},{b}) has shape {arr.shape}, expected {shape}")
                table[(a, b)] = arr
        object.__setattr__(self, "products", table)

    @property
    def cutoff(self) -> int:
        return len(self.dims) - 1

    def multiply(self, a: int, u, b: int, v) -> np.ndarray:
        """Cup product of u in degree a with v in degree b."""
        p = self.prime
        u = np.asarray(u, dtype=np.int64) % p
        v = np.asarray(v, dtype=np.int64) % p
        if a == 0:
            return u[0] * v % p
        if b == 0:
            return v[0] * u % p
        if a + b > self.cutoff:
            raise CutoffExceeded(f"degree {a + b} is beyond the cutoff {self.cutoff}")
        return np.einsum("i,j,ijn->n", u, v, self.products[(a, b)]) % p

    def graded_commutativity_defect(self) -> Optional[tuple]:
        """First (a, b, i, j) with x_i y_j != (-1)^{ab} y_j x_i, or None."""
        p = self.prime
        for (a, b), arr in self.products.items():
            other = self.products[(b, a)]
            sign = -1 if (a * b) % 2 else 1
            diff = (arr - sign * np.transpose(other, (1, 0, 2))) % p
            hit = np.argwhere(diff.any(axis=2))
            if hit.size:
                return (a, b, int(hit[0][0]), int(hit[0][1]))
        return None

    def associativity_defect(self) -> Optional[tuple]:
        """First degree triple (a, b, c) where (xy)z != x(yz) on basis elements, or None."""
        p = self.prime
        N = self.cutoff
        for a in range(1, N + 1):
            for b in range(1, N + 1 - a):
                for c in range(1, N + 1 - a - b):
                    left = np.einsum("ijm,mkn->ijkn", self.products[(a, b)], self.products[(a + b, c)]) % p
                    right = np.einsum("jkm,imn->ijkn", self.products[(b, c)], self.products[(a, b + c)]) % p
                    if ((left - right) % p).any():
                        return (a, b, c)
        return None

    def to_dict(self) -> dict:
        products = {}
        for (a, b), arr in sorted(self.products.items()):
            entries = [[int(i) + 1, int(j) + 1, int(n) + 1, int(arr[i, j, n])] for i, j, n in np.argwhere(arr)]
            if entries:
                products[f"{a},{b}"] = entries
        return {"p": self.prime, "cutoff": self.cutoff, "dims": list(self.dims), "products": products}

    @classmethod
    def from_dict(cls, doc: dict) -> GradedAlgebra:
        dims = tuple(int(x) for x in doc["dims"])
        p = int(doc["p"])
        products = {}
        for key, entries in doc.get("products", {}).items():
            a, b = (int(s) for s in key.split(","))
            arr = np.zeros((dims[a], dims[b], dims[a + b]), dtype=np.int64)
            for i, j, n, c in entries:
                arr[int(i) - 1, int(j) - 1, int(n) - 1] = int(c) % p
            products[(a, b)] = arr
        return cls(p, dims, products)


@dataclass(frozen=True)
class CohomologyProfile:
    algebra: GradedAlgebra
    label: str = ""

    @property
    def prime(self) -> int:
        return self.algebra.prime

    @property
    def dims(self) -> tuple:
        return self.algebra.dims

    @property
    def d(self) -> int:
        return self.dims[1] if len(self.dims) > 1 else 0

    @property
    def r(self) -> int:
        return self.dims[2] if len(self.dims) > 2 else 0

    @property
    def cd(self) -> Optional[int]:
        """Top nonzero degree, or None when H^cutoff is still nonzero."""
        if self.dims[-1]:
            return None
        return max(n for n, x in enumerate(self.dims) if x)

    def to_dict(self) -> dict:
        out = self.algebra.to_dict()
        out.update(label=self.label, d=self.d, r=self.r, cd=self.cd if self.cd is not None else "exceeds cutoff")
        return out


# constructions -------------------------------------------------------------

def _wedge(S: tuple, T: tuple):
    """Sign and support of e_S ^ e_T on sorted index tuples; sign 0 when they overlap."""
    if set(S) & set(T):
        return 0, ()
    inversions = sum(1 for s in S for t in T if s > t)
    return (-1) ** inversions, tuple(sorted(S + T))


def exterior_profile(d: int, cutoff: int, p: int = DEFAULT_PRIME) -> CohomologyProfile:
    """Exterior algebra on d degree-1 generators, lexicographic wedge-monomial basis."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    basis = [list(combinations(range(d), n)) for n in range(cutoff + 1)]
    index = [{m: i for i, m in enumerate(B)} for B in basis]
    dims = tuple(len(B) for B in basis)
    products = {}
    for a in range(1, cutoff + 1):
        for b in range(1, cutoff + 1 - a):
            arr = np.zeros((dims[a], dims[b], dims[a + b]), dtype=np.int64)
            for i, S in enumerate(basis[a]):
                for j, T in enumerate(basis[b]):
                    sign, U = _wedge(S, T)
                    if sign:
                        arr[i, j, index[a + b][U]] = sign % p
            products[(a, b)] = arr
    return CohomologyProfile(GradedAlgebra(p, dims, products), f"exterior({d})")


def free_profile(n: int, cutoff: int, p: int = DEFAULT_PRIME) -> CohomologyProfile:
    """Free pro-p group of rank n: H^1 of dim n, nothing above."""
    dims = (1, n) + (0,) * (cutoff - 1)
    return CohomologyProfile(GradedAlgebra(p, dims[: cutoff + 1], {}), f"free({n})")


def zp_times_free_profile(rank_S: int, cutoff: int, p: int = DEFAULT_PRIME) -> CohomologyProfile:
    """Z_p x S with S free of rank s: H^1 basis x_1..x_s, y; H^2 basis x_i y; x_i x_j = 0."""
    s = rank_S
    dims = ((1, s + 1, s) + (0,) * cutoff)[: cutoff + 1]
    products = {}
    if cutoff >= 2:
        arr = np.zeros((s + 1, s + 1, s), dtype=np.int64)
        for i in range(s):
            arr[i, s, i] = 1
            arr[s, i, i] = (-1) % p
        products[(1, 1)] = arr
    return CohomologyProfile(GradedAlgebra(p, dims, products), f"zp_x_free({s})")


def free_product_profile(A: CohomologyProfile, B: CohomologyProfile) -> CohomologyProfile:
    """Dims add in positive degrees; products are block diagonal with zero cross terms."""
    if A.prime != B.prime:
        raise PrimeMismatch(f"free product of profiles over F_{A.prime} and F_{B.prime}")
    if A.algebra.cutoff != B.algebra.cutoff:
        raise ValueError("free product needs profiles with the same cutoff")
    N = A.algebra.cutoff
    da, db = A.dims, B.dims
    dims = (1,) + tuple(da[n] + db[n] for n in range(1, N + 1))
    products = {}
    for (a, b), arr_a in A.algebra.products.items():
        arr_b = B.algebra.products[(a, b)]
        arr = np.zeros((dims[a], dims[b], dims[a + b]), dtype=np.int64)
        arr[: da[a], : da[b], : da[a + b]] = arr_a
        arr[da[a]:, da[b]:, da[a + b]:] = arr_b
        products[(a, b)] = arr
    label = f"{A.label} * {B.label}" if A.label and B.label else ""
    return CohomologyProfile(GradedAlgebra(A.prime, dims, products), label)


def polynomial_profile_p2(d: int, cutoff: int) -> CohomologyProfile:
    """F_2[chi_1..chi_d]: the mod-2 cohomology of (Z/2)^d, monomial basis by sorted exponent tuples."""
    basis = [list(combinations_with_replacement(range(d), n)) for n in range(cutoff + 1)]
    index = [{m: i for i, m in enumerate(B)} for B in basis]
    dims = tuple(len(B) for B in basis)
    products = {}
    for a in range(1, cutoff + 1):
        for b in range(1, cutoff + 1 - a):
            arr = np.zeros((dims[a], dims[b], dims[a + b]), dtype=np.int64)
            for i, S in enumerate(basis[a]):
                for j, T in enumerate(basis[b]):
                    arr[i, j, index[a + b][tuple(sorted(S + T))]] = 1
            products[(a, b)] = arr
    return CohomologyProfile(GradedAlgebra(2, dims, products), f"(Z/2)^{d}")


# checks ------------------------------------------------------------------

class QuadraticVerdict(NamedTuple):
    ok: bool
    checked_through: int
    failure_degree: Optional[int]
    reason: str

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"quadratic through degree {self.checked_through}"
        return f"not quadratic: degree {self.failure_degree} ({self.reason})"


def quadratic_cover_dims(A: GradedAlgebra, upto: int) -> list:
    """Dimensions of T(H^1)/(R), R = kernel of the degree-1 multiplication, in degrees 0..upto."""
    p = A.prime
    d = A.dims[1] if A.cutoff >= 1 else 0
    out = [1]
    if upto >= 1:
        out.append(d)
    if upto < 2:
        return out
    mult = A.products[(1, 1)].reshape(d * d, A.dims[2])
    # R: left kernel of mult, as rows in V (x) V with index a*d + b
    Rrows = _left_kernel(mult, p)
    # proj[n]: matrix Q_{n-1} (x) V -> Q_n, rows indexed by (q, a)
    proj = {1: np.eye(d, dtype=np.int64)}
    dimQ = {0: 1, 1: d}
    for n in range(2, upto + 1):
        src = dimQ[n - 1] * d
        rel = []
        for q in range(dimQ[n - 2]):
            for r in Rrows:
                vec = np.zeros(src, dtype=np.int64)
                for a in range(d):
                    for b in range(d):
                        c = r[a * d + b]
                        if c:
                            # q (x) v_a lands in Q_{n-1} via proj[n-1]; then tensor with v_b
                            image = proj[n - 1][:, q * d + a]
                            for m in np.nonzero(image)[0]:
                                vec[m * d + b] += c * image[m]
                rel.append(vec % p)
        if src == 0:
            P = np.zeros((0, 0), dtype=np.int64)
        else:
            P = quotient_projection(np.array(rel, dtype=np.int64).reshape(len(rel), src), src, p)
        proj[n] = P
        dimQ[n] = P.shape[0]
        out.append(dimQ[n])
    return out


def _left_kernel(M: np.ndarray, p: int) -> list:
    """Basis of {x : x M = 0} over F_p."""
    from .linalg import rref_fp

    rows, cols = M.shape
    aug = np.concatenate([M % p, np.eye(rows, dtype=np.int64)], axis=1)
    R, pivots = rref_fp(aug, p)
    out = []
    for i, c in enumerate(pivots):
        if c >= cols:
            out.append(R[i, cols:].copy())
    # rows of the echelon form whose M-part is zero span the left kernel
    rank_M = sum(1 for c in pivots if c < cols)
    assert len(out) == rows - rank_M
    return out


def quadratic_check(A: GradedAlgebra, upto: int = 4) -> QuadraticVerdict:
    """Generated in degree 1 and relations generated in degree 2, through degree ``upto``."""
    if upto > A.cutoff:
        raise CutoffExceeded(f"quadraticity requested through {upto}, cutoff is {A.cutoff}")
    p = A.prime
    d = A.dims[1] if A.cutoff >= 1 else 0
    for n in range(2, upto + 1):
        if A.dims[n] == 0:
            continue
        arr = A.products[(1, n - 1)].reshape(d * A.dims[n - 1], A.dims[n])
        if rank_fp(arr, p) < A.dims[n]:
            return QuadraticVerdict(False, n - 1, n, "not generated in degree 1")
    cover = quadratic_cover_dims(A, upto)
    for n in range(upto + 1):
        if cover[n] != A.dims[n]:
            return QuadraticVerdict(False, n - 1, n, f"quadratic cover has dim {cover[n]}, algebra has {A.dims[n]}")
    return QuadraticVerdict(True, upto, None, "")


class DimensionIdentity(NamedTuple):
    holds: bool
    residual: int
    relation_bound: bool  # r <= C(d, 2)
    generator_bound: bool  # d <= dim lambda_2/lambda_3

    def to_dict(self) -> dict:
        return dict(self._asdict())


def dimension_identity_check(d: int, r: int, dim_l2l3: int) -> DimensionIdentity:
    """d + C(d,2) = dim(lambda_2/lambda_3) + r, with the residual of the difference."""
    if min(d, r, dim_l2l3) < 0:
        raise ValueError("dimensions must be nonnegative")
    residual = dim_l2l3 + r - d - comb(d, 2)
    return DimensionIdentity(residual == 0, residual, r <= comb(d, 2), d <= dim_l2l3)


def binomial_bound_holds(profile: CohomologyProfile) -> bool:
    d = profile.d
    return all(x <= comb(d, n) for n, x in enumerate(profile.dims))


def lambda2_cup_injectivity(profile: CohomologyProfile) -> bool:
    """Is chi_i ^ chi_j -> chi_i u chi_j injective on the exterior square of H^1?"""
    A = profile.algebra
    d = profile.d
    pairs = list(combinations(range(d), 2))
    if not pairs:
        return True
    if A.cutoff < 2 or A.dims[2] == 0:
        return False
    M = np.array([A.products[(1, 1)][i, j] for i, j in pairs], dtype=np.int64)
    return rank_fp(M, A.prime) == len(pairs)


class BocksteinTable(NamedTuple):
    d: int
    h2_basis: tuple  # pairs (a, b), a <= b, meaning chi_a chi_b
    images: tuple  # beta(chi_i) as H^2 coordinate vectors

    def __call__(self, chi) -> tuple:
        """beta on an H^1 vector: chi u chi in the symmetric-square model."""
        index = {m: n for n, m in enumerate(self.h2_basis)}
        out = [0] * len(self.h2_basis)
        for a in range(self.d):
            for b in range(self.d):
                if chi[a] % 2 and chi[b] % 2:
                    out[index[tuple(sorted((a, b)))]] ^= 1
        return tuple(out)


def bockstein_p2(d: int, p: int = 2) -> BocksteinTable:
    """beta(chi) = chi u chi on H^1((Z/2)^d)."""
    if p != 2:
        raise WrongPrime(f"the Bockstein formula beta(chi) = chi^2 needs p = 2, got p = {p}")
    profile = polynomial_profile_p2(d, 2)
    basis = tuple(combinations_with_replacement(range(d), 2))
    table = profile.algebra.products.get((1, 1))
    images = tuple(tuple(int(x) for x in table[i, i]) for i in range(d)) if d else ()
    return BocksteinTable(d, basis, images)


# F_2 x F_2 fixed points ----------------------------------------------------

def _shift_pair(a: int, b: int, n: int):
    """Image of e_a ^ e_b (a < b) under the cyclic shift, as (sign, (a', b')) with a' < b'."""
    a2, b2 = (a + 1) % n, (b + 1) % n
    return (1, (a2, b2)) if a2 < b2 else (-1, (b2, a2))


def fixed_point_dimension(p: int, k: int) -> int:
    """dim of the C_{p^k}-invariants in the exterior square of the dual regular module over F_p.

    The generator permutes the wedge basis up to sign, so (g - 1)v = 0 splits
    along orbits: an orbit carries a one-dimensional solution exactly when
    the signs picked up going once around it multiply to 1 in F_p.
    """
    n = p**k
    if k < 1:
        raise ValueError("k must be at least 1")
    if n > FIXED_POINT_GUARD:
        raise SizeGuard(f"p^k = {n} exceeds the guard {FIXED_POINT_GUARD}")
    seen = set()
    count = 0
    for pair in combinations(range(n), 2):
        if pair in seen:
            continue
        sign = 1
        cur = pair
        while True:
            seen.add(cur)
            s, cur = _shift_pair(cur[0], cur[1], n)
            sign *= s
            if cur == pair:
                break
        if (sign - 1) % p == 0:
            count += 1
    return count


def fixed_point_dimension_dense(p: int, k: int) -> int:
    """Same quantity from the full matrix of g - 1 (small n only)."""
    n = p**k
    basis = list(combinations(range(n), 2))
    index = {m: i for i, m in enumerate(basis)}
    N = len(basis)
    G = np.zeros((N, N), dtype=np.int64)
    for col, (a, b) in enumerate(basis):
        s, img = _shift_pair(a, b, n)
        G[index[img], col] = s % p
    return nullspace_dim_fp((G - np.eye(N, dtype=np.int64)) % p, p)


class FixedPointRow(NamedTuple):
    p: int
    k: int
    order: int
    module_dim: int
    exact: int
    bound: int

    @property
    def fact_inequality(self) -> bool:
        """dim(M^G) * |G| >= dim M."""
        return self.exact * self.order >= self.module_dim


def f2xf2_table(p: int, k_max: int) -> list:
    rows = []
    for k in range(1, k_max + 1):
        n = p**k
        rows.append(FixedPointRow(p, k, n, comb(n, 2), fixed_point_dimension(p, k), -(-(n - 1) // 2)))
    return rows
