import random
from fractions import Fraction

import pytest

from locpow.bch import bch, bch_component_values, bernoulli, weight_cutoff
from locpow.errors import NonConvergence
from oracles import gl_lie_table, matrix_bch


def test_bernoulli():
    assert [bernoulli(n) for n in range(5)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]


def test_weight_cutoff_grows_with_precision():
    assert weight_cutoff(3, 1) >= 1
    assert weight_cutoff(3, 4) > weight_cutoff(3, 2)
    assert weight_cutoff(5, 3, min_valuation=2) < weight_cutoff(5, 3)


@pytest.mark.parametrize("p,k", [(3, 3), (5, 2), (2, 3), (3, 4)])
def test_matches_matrix_exponentials(p, k):
    scale = 4 if p == 2 else p
    idx, full = gl_lie_table(2, scale)
    rng = random.Random(p * 10 + k)
    for _ in range(2):
        X = [rng.randrange(p**k) for _ in idx]
        Y = [rng.randrange(p**k) for _ in idx]
        assert bch(full, p, k, X, Y) == matrix_bch(X, Y, 2, scale, p, k)


@pytest.mark.parametrize("p,k", [(3, 3), (2, 4), (5, 3)])
def test_truncation_is_sound(p, k):
    scale = 4 if p == 2 else p
    _, full = gl_lie_table(2, scale)
    rng = random.Random(k)
    X = [rng.randrange(p**k) for _ in range(4)]
    Y = [rng.randrange(p**k) for _ in range(4)]
    W = weight_cutoff(p, k)
    comps = bch_component_values(full, p, k, X, Y, W + 3)
    assert all(not any(z) for z in comps[W:])


def test_abelian_and_zero_shortcuts():
    full = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    assert bch(full, 3, 3, [1, 2], [4, 5]) == (5, 7)
    assert bch(full, 3, 3, [0, 0], [4, 5]) == (4, 5)


def test_non_powerful_table_fails_loudly():
    _, full = gl_lie_table(2, 1)
    with pytest.raises(NonConvergence):
        bch(full, 3, 3, [1, 0, 0, 0], [0, 1, 0, 0], weight=8)
