import itertools
import random

import pytest

from locpow.errors import DomainViolation, PrecisionExhausted
from locpow.group import (
    GroupOrientation,
    UniformPresentation,
    commutator,
    exp_element,
    from_lie,
    inverse,
    log_element,
    lower_series_dims,
    multiply,
    power,
    present_theta_abelian,
    semidirect_multiply,
    stabilized_limit_table,
    theta_center_contains,
    to_lie,
)
from locpow.lie import BracketTable, change_basis, theta_abelian_table
from locpow.linalg import det_mod
from locpow.padic import PadicScalar, exp_mod, log_mod


def random_uniform(rng, p, k, d):
    """Presentation of x_1 acting on Z_p^{d-1} by exp of a random matrix in p.M_{d-1}, in a random basis."""
    m = p**k
    br = {}
    for j in range(1, d):
        br[(0, j)] = tuple(0 if n == 0 else p * rng.randrange(m) % m for n in range(d))
    t = BracketTable(p, k, d, br)
    while True:
        B = [[rng.randrange(m) for _ in range(d)] for _ in range(d)]
        if det_mod(B, m) % p:
            break
    t = BracketTable(p, k, d, change_basis(t, B).brackets)
    return UniformPresentation(p, k, d, dict(from_lie(t).relations)), t


def test_semidirect_closed_form():
    rng = random.Random(0)
    for p, k, lam in [(3, 3, 3), (5, 2, 10), (2, 4, 4), (3, 4, 18)]:
        P, _ = present_theta_abelian(2, PadicScalar(p, k, lam))
        m = p**k
        for _ in range(100):
            g = (rng.randrange(m), rng.randrange(m))
            h = (rng.randrange(m), rng.randrange(m))
            assert multiply(P, g, h) == semidirect_multiply(p, k, lam, g, h)


def test_identity_and_abelian():
    P = UniformPresentation(5, 3, 3, {})
    g, h = (1, 2, 3), (4, 5, 6)
    assert multiply(P, g, P.identity()) == g
    assert multiply(P, g, h) == (5, 7, 9)


def test_commutator_and_power():
    P, _ = present_theta_abelian(3, PadicScalar(3, 3, 3))
    assert commutator(P, P.generator(0), P.generator(1)) == (0, 3, 0)
    g = (4, 7, 2)
    assert commutator(P, g, g) == P.identity()
    assert power(P, P.generator(1), 3) == (0, 3, 0)
    assert multiply(P, g, inverse(P, g)) == P.identity()
    assert power(P, g, PadicScalar(3, 3, 2)) == multiply(P, g, g)


def test_to_lie_examples():
    P = UniformPresentation(3, 2, 2, {(0, 1): (0, 3)})
    assert to_lie(P).coeff(0, 1) == (0, 3)
    assert to_lie(UniformPresentation(3, 2, 3, {})).is_abelian()
    for p, k, lam in [(3, 3, 3), (5, 3, 10), (2, 5, 4)]:
        P, _ = present_theta_abelian(2, PadicScalar(p, k, lam))
        assert to_lie(P).coeff(0, 1) == (0, log_mod(1 + lam, p, k))


def test_from_lie_examples():
    assert from_lie(BracketTable(3, 3, 2, {})).relations == {}
    for p, k, lam_L in [(3, 3, 6), (5, 2, 5), (2, 4, 8)]:
        P = from_lie(theta_abelian_table(p, k, 3, lam_L))
        lam = (exp_mod(lam_L, p, k) - 1) % p**k
        assert P.relations == {(0, 1): (0, lam, 0), (0, 2): (0, 0, lam)}


def test_limit_formula_agrees_with_solved_table():
    rng = random.Random(4)
    for p, k, d in [(3, 3, 2), (3, 2, 3), (5, 2, 3)]:
        P, t = random_uniform(rng, p, k, d)
        table, _ = stabilized_limit_table(P)
        assert table == t


@pytest.mark.parametrize("p,k,d", [(3, 3, 2), (3, 3, 3), (5, 2, 4), (3, 4, 3)])
def test_relations_and_associativity(p, k, d):
    rng = random.Random(p + k + d)
    P, t = random_uniform(rng, p, k, d)
    for i, j in itertools.combinations(range(d), 2):
        want = P.relations.get((i, j), P.identity())
        assert commutator(P, P.generator(i), P.generator(j)) == want
    m = p**k
    for _ in range(20):
        g, h, f = (tuple(rng.randrange(m) for _ in range(d)) for _ in range(3))
        assert multiply(P, multiply(P, g, h), f) == multiply(P, g, multiply(P, h, f))
        assert exp_element(P, log_element(P, g)) == g


def test_round_trip_random_tables():
    rng = random.Random(9)
    for _ in range(50):
        p, k, d = rng.choice([3, 5]), rng.randint(1, 4), rng.randint(1, 4)
        P, t = random_uniform(rng, p, k, d)
        assert to_lie(UniformPresentation(p, k, d, dict(P.relations))) == t
        assert from_lie(to_lie(P)).relations == P.relations


def test_theta_center_is_kernel():
    p, k = 3, 2
    P, theta = present_theta_abelian(2, PadicScalar(p, k, 3))
    for h in itertools.product(range(p**k), repeat=2):
        assert theta_center_contains(P, theta, h) == (theta(h) == 1)
    assert not theta_center_contains(P, theta, P.generator(0))
    A = UniformPresentation(3, 2, 2, {})
    trivial = GroupOrientation(3, 2, (1, 1))
    assert all(theta_center_contains(A, trivial, h) for h in itertools.product(range(9), repeat=2))


def test_lower_series():
    P, _ = present_theta_abelian(3, PadicScalar(3, 3, 3))
    assert lower_series_dims(P, 2) == (3, 3)
    assert lower_series_dims(UniformPresentation(5, 3, 4, {}), 2) == (4, 4)
    assert lower_series_dims(UniformPresentation(3, 4, 2, {(0, 1): (0, 3)}), 2) == (2, 2)
    with pytest.raises(PrecisionExhausted):
        lower_series_dims(P, 3)
    rng = random.Random(1)
    for _ in range(5):
        Q, _ = random_uniform(rng, 3, 4, 3)
        assert lower_series_dims(Q, 3) == (3, 3, 3)


def test_present_theta_abelian_guards():
    P, theta = present_theta_abelian(3, PadicScalar(3, 2, 0))
    assert P.relations == {} and theta.images == (1, 1, 1)
    with pytest.raises(DomainViolation):
        present_theta_abelian(2, PadicScalar(2, 4, 2))
    with pytest.raises(DomainViolation):
        UniformPresentation(3, 2, 2, {(0, 1): (0, 1)})


def test_rank_one():
    P = UniformPresentation(3, 3, 1, {})
    assert multiply(P, (4,), (5,)) == (9,)
    assert to_lie(P).is_abelian()
