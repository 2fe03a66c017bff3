"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import random
import time
from math import ceil, comb

import numpy as np
import pytest

from locpow.classify import classify, classify_rank2
from locpow.cohomology import (
    bockstein_p2,
    dimension_identity_check,
    exterior_profile,
    f2xf2_table,
    fixed_point_dimension,
    fixed_point_dimension_dense,
    free_product_profile,
    free_profile,
    lambda2_cup_injectivity,
    polynomial_profile_p2,
    quadratic_check,
    zp_times_free_profile,
)
from locpow.errors import DomainViolation, NotPowerful
from locpow.group import (
    GroupOrientation,
    UniformPresentation,
    from_lie,
    lower_series_dims,
    multiply,
    present_theta_abelian,
    semidirect_multiply,
    to_lie,
)
from locpow.lie import BracketTable, adjoint_matrix, change_basis, jacobi_defect, theta_abelian_table
from locpow.linalg import det_mod
from locpow.padic import PadicScalar, PadicUnit, log_p
from oracles import FreeClassTwo, gl2_mod, rank2_eigen_lambdas


def _random_basis(rng, p, k, d):
    m = p**k
    while True:
        B = [[rng.randrange(m) for _ in range(d)] for _ in range(d)]
        if det_mod(B, m) % p:
            return B


def test_criterion_1_rank_two_exhaustive(criterion):
    start = time.perf_counter()
    p, k = 3, 2
    m = p**k
    group = gl2_mod(m, p)
    agree = 0
    total = 0
    for a, b in itertools.product(range(m), repeat=2):
        total += 1
        t = BracketTable(p, k, 2, {(0, 1): (a, b)}, validate=False)
        if (a, b) == (0, 0):
            oracle = "abelian"
            lambdas = {0}
        else:
            lambdas = {lam for lam in rank2_eigen_lambdas((a, b), p, k, group) if lam % p == 0}
            oracle = "theta_abelian" if lambdas else "rejected"
        try:
            out = classify_rank2(t)
            ok = out.verdict == oracle and out.orientation[0] in lambdas
        except NotPowerful:
            ok = oracle == "rejected"
        agree += ok
    elapsed = time.perf_counter() - start
    ok = agree == total == 81 and elapsed < 5
    criterion(1, "rank-2 exhaustive agreement p=3 k=2", ok, f"{agree}/{total} agree, {elapsed:.2f}s")
    assert ok


def test_criterion_2_rank3_algebra(criterion):
    start = time.perf_counter()
    p, k = 3, 3
    m = p**k
    jacobi_ok = 0
    pairs = [(b3, g1) for b3 in range(0, m, p) for g1 in range(0, m, p)]
    for b3, g1 in pairs:
        t = BracketTable(p, k, 3, {(1, 2): (0, 0, b3), (0, 2): (g1, 0, 0)}, validate=False)
        defect = jacobi_defect(t)
        none = defect is None
        jacobi_ok += none == ((b3 * g1) % m == 0)
        if defect is not None:
            assert defect.triple == (0, 1, 2) and defect.defect == ((-b3 * g1) % m, 0, 0)
    k2 = 2
    m2 = p**k2
    trace_ok = 0
    trace_total = 0
    for a, b, g in itertools.product(range(0, m2, p), repeat=3):
        t = BracketTable(p, k2, 3, {(0, 1): (0, a, 0), (1, 2): (0, b, 0), (0, 2): (0, 0, g)}, validate=False)
        _, trace = adjoint_matrix(t, (0, 0, g))
        trace_total += 1
        trace_ok += trace == (b * g) % m2
    elapsed = time.perf_counter() - start
    ok = jacobi_ok == len(pairs) and trace_ok == trace_total and elapsed < 5
    criterion(
        2, "Jacobi reduction and trace identity", ok,
        f"jacobi {jacobi_ok}/{len(pairs)}, trace {trace_ok}/{trace_total} at k=2, {elapsed:.2f}s",
    )
    assert ok


def test_criterion_3_functor_round_trip(criterion):
    start = time.perf_counter()
    rng = random.Random(2024)
    count = 0
    good = 0
    while count < 240:
        p, k = rng.choice([3, 5]), rng.randint(1, 4)
        m = p**k
        if count % 2:
            d = rng.randint(2, 4)
            lam = p * rng.randrange(m) % m
            t = change_basis(theta_abelian_table(p, k, d, lam), _random_basis(rng, p, k, d))
        else:
            d = 2
            t = BracketTable(p, k, 2, {(0, 1): (p * rng.randrange(m) % m, p * rng.randrange(m) % m)})
        t = BracketTable(p, k, d, dict(t.brackets))
        P = from_lie(t)
        fresh = UniformPresentation(p, k, d, dict(P.relations))
        forward = to_lie(fresh) == t
        backward = from_lie(to_lie(UniformPresentation(p, k, d, dict(P.relations)))).relations == P.relations
        good += forward and backward
        count += 1
    elapsed = time.perf_counter() - start
    ok = good == count and count >= 200 and elapsed < 60
    criterion(3, "to_lie/from_lie round trip", ok, f"{good}/{count} inputs, {elapsed:.2f}s")
    assert ok


def test_criterion_4_multiplication_oracle(criterion):
    start = time.perf_counter()
    rng = random.Random(7)
    configs = [(3, 3, 3, 2), (3, 4, 6, 2), (5, 3, 5, 2), (3, 3, 9, 3)]
    good = 0
    total = 0
    for p, k, lam, d in configs:
        P, _ = present_theta_abelian(d, PadicScalar(p, k, lam))
        m = p**k
        for _ in range(1000):
            g = tuple(rng.randrange(m) for _ in range(d))
            h = tuple(rng.randrange(m) for _ in range(d))
            good += multiply(P, g, h) == semidirect_multiply(p, k, lam, g, h)
            total += 1
    elapsed = time.perf_counter() - start
    ok = good == total and elapsed < 30
    criterion(4, "multiplication vs semidirect closed form", ok, f"{good}/{total} pairs, {len(configs)} configurations, {elapsed:.2f}s")
    assert ok


def test_criterion_5_cohomology_dimensions(criterion):
    start = time.perf_counter()
    checks = []
    for d in range(7):
        prof = exterior_profile(d, max(d + 1, 4))
        checks.append(prof.dims[: d + 1] == tuple(comb(d, n) for n in range(d + 1)))
    for d in range(1, 5):
        P, _ = present_theta_abelian(d, PadicScalar(3, 3, 3))
        l2l3 = lower_series_dims(P, 2)[1]
        checks.append(l2l3 == d and dimension_identity_check(d, comb(d, 2), l2l3).holds)
    free_l2l3 = FreeClassTwo(3).lower_quotient_dims(2)[1]
    checks.append(free_l2l3 == 3 and dimension_identity_check(2, 0, free_l2l3).holds)
    zp = zp_times_free_profile(2, 4)
    checks.append(zp.dims[:4] == (1, 3, 2, 0))
    checks.append(quadratic_check(zp.algebra, 4).ok)
    checks.append(not lambda2_cup_injectivity(zp))
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 5
    criterion(5, "cohomology dimensions and identities", ok, f"{sum(checks)}/{len(checks)} checks, {elapsed:.2f}s")
    assert ok


def test_criterion_6_free_products(criterion):
    start = time.perf_counter()
    N = 4
    profiles = {
        "exterior(2)": exterior_profile(2, N),
        "exterior(3)": exterior_profile(3, N),
        "free(2)": free_profile(2, N),
        "zp_x_free(1)": zp_times_free_profile(1, N),
    }
    good = 0
    total = 0
    for (na, A), (nb, B) in itertools.product(profiles.items(), repeat=2):
        C = free_product_profile(A, B)
        dims_ok = C.dims[0] == 1 and all(C.dims[n] == A.dims[n] + B.dims[n] for n in range(1, N + 1))
        verdict = quadratic_check(C.algebra, N).ok
        expected = quadratic_check(A.algebra, N).ok and quadratic_check(B.algebra, N).ok
        good += dims_ok and verdict == expected
        total += 1
    elapsed = time.perf_counter() - start
    ok = good == total and elapsed < 5
    criterion(6, "free products add dims and keep quadratic verdicts", ok, f"{good}/{total} pairs, {elapsed:.2f}s")
    assert ok


def test_criterion_7_fixed_point_growth(criterion):
    start = time.perf_counter()
    checks = []
    for p, kmax in [(2, 3), (3, 2)]:
        rows = f2xf2_table(p, kmax)
        for row in rows:
            checks.append(row.exact == fixed_point_dimension_dense(p, row.k))
            checks.append(row.exact >= ceil((p**row.k - 1) / 2) == row.bound)
            checks.append(row.fact_inequality)
        checks.append(all(a.exact < b.exact for a, b in zip(rows, rows[1:])))
    at_guard = fixed_point_dimension(2, 9)
    checks.append(at_guard >= ceil((512 - 1) / 2) and at_guard * 512 >= comb(512, 2))
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 60
    criterion(7, "F2 x F2 fixed-point witness", ok, f"{sum(checks)}/{len(checks)} checks incl. p^k=512, {elapsed:.2f}s")
    assert ok


def test_criterion_8_torsion_guards(criterion):
    start = time.perf_counter()
    checks = []
    for k in (2, 3, 5):
        minus_one = PadicScalar(2, k, -1)
        for attempt in (
            lambda: present_theta_abelian(2, minus_one - PadicScalar(2, k, 1)),
            lambda: log_p(PadicUnit(minus_one)),
            lambda: GroupOrientation(2, k, (-1, 1)),
        ):
            try:
                attempt()
                checks.append(False)
            except DomainViolation:
                checks.append(True)
        try:
            BracketTable(2, k, 2, {(0, 1): (0, 2)})
            checks.append(False)
        except NotPowerful:
            checks.append(True)
        checks.append(BracketTable(2, k, 2, {(0, 1): (0, 4 % 2**k)}).rank == 2)
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 1
    criterion(8, "pro-2 dihedral datum and p=2 powerfulness guards", ok, f"{sum(checks)}/{len(checks)} checks, {elapsed:.3f}s")
    assert ok


def test_criterion_9_bockstein(criterion):
    start = time.perf_counter()
    checks = []
    for d in range(1, 5):
        beta = bockstein_p2(d)
        algebra = polynomial_profile_p2(d, 2).algebra
        vectors = list(itertools.product(range(2), repeat=d))
        values = {v: beta(v) for v in vectors}
        for i in range(d):
            chi = tuple(1 if n == i else 0 for n in range(d))
            square = tuple(int(x) for x in algebra.multiply(1, chi, 1, chi))
            checks.append(values[chi] == square == beta.images[i])
            checks.append(beta.h2_basis[square.index(1)] == (i, i))
        for v in vectors:
            checks.append(values[v] == tuple(int(x) for x in algebra.multiply(1, v, 1, v)))
        for v, w in itertools.product(vectors, repeat=2):
            s = tuple((a + b) % 2 for a, b in zip(v, w))
            checks.append(values[s] == tuple((a + b) % 2 for a, b in zip(values[v], values[w])))
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 1
    criterion(9, "Bockstein beta(chi) = chi^2 and additivity", ok, f"{sum(checks)}/{len(checks)} checks, {elapsed:.3f}s")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
