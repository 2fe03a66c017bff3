import itertools
import random

import numpy as np
import pytest
import sympy

from locpow.linalg import (
    det_mod,
    elementary_divisors,
    in_span_mod,
    inverse_mod,
    matmul_mod,
    nullspace_dim_fp,
    quotient_projection,
    rank_fp,
    solve_mod,
)


def _brute_solvable(A, b, mod):
    n = len(A[0])
    for c in itertools.product(range(mod), repeat=n):
        if all(sum(a * x for a, x in zip(row, c)) % mod == y % mod for row, y in zip(A, b)):
            return True
    return False


@pytest.mark.parametrize("seed", range(4))
def test_solve_mod_matches_brute_force(seed):
    rng = random.Random(seed)
    p, k = rng.choice([(2, 3), (3, 2)])
    mod = p**k
    for _ in range(150):
        m, n = rng.randint(1, 3), rng.randint(1, 2)
        A = [[rng.randrange(mod) * rng.choice([1, p]) for _ in range(n)] for _ in range(m)]
        b = [rng.randrange(mod) * rng.choice([1, p, p * p]) for _ in range(m)]
        c = solve_mod(A, b, p, k)
        if c is None:
            assert not _brute_solvable(A, b, mod)
        else:
            assert [sum(a * x for a, x in zip(row, c)) % mod for row in A] == [y % mod for y in b]


def test_in_span_respects_valuation():
    # 3*e1 spans a submodule that misses e1 mod 9
    assert in_span_mod([(3, 0)], (1, 0), 3, 2) is None
    assert in_span_mod([(3, 0)], (6, 0), 3, 2) == [2]
    assert in_span_mod([], (0, 0), 3, 2) == []


def test_elementary_divisors():
    assert elementary_divisors([[3, 0], [0, 9]], 3, 3) == [1, 2]
    assert sorted(elementary_divisors([[1, 3], [3, 9]], 3, 3)) == [0]


def test_inverse_and_det():
    B = [[2, 1], [7, 4]]
    inv = inverse_mod(B, 3, 3)
    assert matmul_mod(B, inv, 27) == [[1, 0], [0, 1]]
    assert det_mod(B, 27) == 1
    assert inverse_mod([[3, 0], [0, 1]], 3, 3) is None


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_fp_matches_sympy(p):
    rng = np.random.default_rng(p)
    for _ in range(30):
        M = rng.integers(0, p, size=(rng.integers(1, 6), rng.integers(1, 6)))
        gf = sympy.polys.matrices.DomainMatrix.from_list_sympy(*M.shape, M.tolist()).convert_to(sympy.GF(p))
        assert rank_fp(M, p) == gf.rank()


def test_quotient_projection_kills_relations():
    p = 3
    rel = np.array([[1, 1, 0, 0], [0, 0, 1, 2]])
    P = quotient_projection(rel, 4, p)
    assert P.shape == (2, 4)
    assert not (P @ rel.T % p).any()
    assert rank_fp(P, p) == 2
    assert nullspace_dim_fp(rel, p) == 2
