"""Linear algebra over Z/p^k (a local ring, not a field) and over F_p.

Matrices are lists of lists of ints.  Over Z/p^k every nonzero entry is
p^e * unit, so pivoting on an entry of minimal valuation lets it clear its
whole row and column; this is the Smith-style reduction used for span
membership.
"""

from __future__ import annotations

import numpy as np


def _val(x: int, p: int, k: int) -> int:
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def solve_mod(A, b, p: int, k: int):
    """Return one c with A c = b mod p^k, or None when no solution exists.

    A is m x n (list of rows), b has length m.
    """
    mod = p**k
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[x % mod for x in row] for row in A]
    rhs = [x % mod for x in b]
    # column operations in order: ("swap", a, b) or ("add", t, s, f) for col_t -= f*col_s
    col_ops = []
    pivots = []
    r = 0
    while r < min(m, n):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if M[i][j]:
                    v = _val(M[i][j], p, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        e, i, j = best
        M[r], M[i] = M[i], M[r]
        rhs[r], rhs[i] = rhs[i], rhs[r]
        if j != r:
            for row in M:
                row[r], row[j] = row[j], row[r]
            col_ops.append(("swap", r, j))
        piv = M[r][r]
        unit_inv = pow(piv // p**e, -1, mod)
        for i2 in range(m):
            if i2 != r and M[i2][r]:
                f = (M[i2][r] // p**e) * unit_inv % mod
                M[i2] = [(a - f * c) % mod for a, c in zip(M[i2], M[r])]
                rhs[i2] = (rhs[i2] - f * rhs[r]) % mod
        for j2 in range(r + 1, n):
            if M[r][j2]:
                f = (M[r][j2] // p**e) * unit_inv % mod
                for row in M:
                    row[j2] = (row[j2] - f * row[r]) % mod
                col_ops.append(("add", j2, r, f))
        pivots.append(e)
        r += 1
    y = [0] * n
    for i in range(m):
        if i < len(pivots):
            e = pivots[i]
            if rhs[i] % p**e:
                return None
            unit = M[i][i] // p**e
            y[i] = (rhs[i] // p**e) * pow(unit, -1, mod) % mod
        elif rhs[i]:
            return None
    # y solves the reduced system E A V y = E b; recover c = V y
    for op in reversed(col_ops):
        if op[0] == "swap":
            _, a, b2 = op
            y[a], y[b2] = y[b2], y[a]
        else:
            _, t, s, f = op
            y[s] = (y[s] - f * y[t]) % mod
    return y


def in_span_mod(vectors, target, p: int, k: int):
    """Coefficients expressing target in the Z/p^k-span of vectors, or None."""
    if not vectors:
        return [] if all(x % p**k == 0 for x in target) else None
    d = len(target)
    A = [[vec[i] for vec in vectors] for i in range(d)]
    return solve_mod(A, target, p, k)


def elementary_divisors(rows, p: int, k: int):
    """Valuations of the Smith diagonal of the module spanned by rows (each < k)."""
    mod = p**k
    M = [[x % mod for x in row] for row in rows]
    out = []
    while M and M[0]:
        best = None
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                if x:
                    v = _val(x, p, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        e, i, j = best
        piv_row = M[i]
        inv = pow(piv_row[j] // p**e, -1, mod)
        rest = []
        for i2, row in enumerate(M):
            if i2 == i:
                continue
            f = (row[j] // p**e) * inv % mod
            rest.append([(a - f * c) % mod for a, c in zip(row, piv_row)])
        M = [row[:j] + row[j + 1:] for row in rest]
        out.append(e)
    return out


def det_mod(B, mod: int) -> int:
    """Determinant by cofactor expansion; matrices here are at most ~6x6."""
    n = len(B)
    if n == 1:
        return B[0][0] % mod
    total = 0
    for j in range(n):
        if B[0][j]:
            minor = [row[:j] + row[j + 1:] for row in B[1:]]
            total += (-1) ** j * B[0][j] * det_mod(minor, mod)
    return total % mod


def matmul_mod(A, B, mod: int):
    return [
        [sum(a * b for a, b in zip(row, col)) % mod for col in zip(*B)]
        for row in A
    ]


def inverse_mod(B, p: int, k: int):
    """Inverse of a square matrix over Z/p^k; None when det is not a unit."""
    n = len(B)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        c = solve_mod(B, e, p, k)
        if c is None:
            return None
        cols.append(c)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# F_p routines -------------------------------------------------------------

def rref_fp(M, p: int):
    """Reduced row echelon form over F_p. Returns (R, pivot_columns)."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        R = R.reshape(0, 0)
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        others = np.nonzero(R[:, c])[0]
        for i2 in others:
            if i2 != r:
                R[i2] = (R[i2] - R[i2, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank_fp(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_fp(M, p)[1])


def quotient_projection(relations, dim: int, p: int):
    """Projection F_p^dim -> F_p^dim / span(relations) on the non-pivot basis.

    Returns a (dim_quotient x dim) integer matrix.
    """
    rel = np.asarray(relations, dtype=np.int64).reshape(-1, dim)
    if rel.shape[0]:
        R, pivots = rref_fp(rel, p)
    else:
        R, pivots = np.zeros((0, dim), dtype=np.int64), []
    free = [c for c in range(dim) if c not in set(pivots)]
    index = {c: i for i, c in enumerate(free)}
    P = np.zeros((len(free), dim), dtype=np.int64)
    for c in free:
        P[index[c], c] = 1
    for r, c in enumerate(pivots):
        for c2 in free:
            if R[r, c2]:
                P[index[c2], c] = (-R[r, c2]) % p
    return P


def nullspace_dim_fp(M, p: int) -> int:
    M = np.asarray(M, dtype=np.int64)
    return M.shape[1] - rank_fp(M, p)
