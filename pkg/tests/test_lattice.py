import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcrit.lattice import (
    LatticeError,
    NotAnInvolution,
    QuotientGroup,
    Sublattice,
    as_fraction,
    determinant,
    eigenlattice,
    hermite_normal_form,
    identity,
    integer_combination,
    integer_kernel,
    matmul,
    quotient_index,
    smith_normal_form,
)


def is_hnf(H):
    """Row-style echelon form, positive pivots, entries above pivots reduced."""
    last = -1
    zero_seen = False
    for r, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            zero_seen = True
            continue
        if zero_seen:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        for above in H[:r]:
            if not 0 <= above[p] < row[p]:
                return False
        last = p
    return True


def span_points(M, c=3):
    n = len(M[0])
    pts = set()
    for coeffs in itertools.product(range(-c, c + 1), repeat=len(M)):
        pts.add(tuple(sum(a * row[j] for a, row in zip(coeffs, M)) for j in range(n)))
    return pts


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_hnf_identity_and_zero():
    I3 = identity(3)
    assert hermite_normal_form(I3) == (I3, I3)
    H, U = hermite_normal_form(((0, 0), (0, 0)))
    assert H == ((0, 0), (0, 0)) and abs(determinant(U)) == 1


def test_hnf_small_example():
    H, U = hermite_normal_form(((2, 4), (0, 6)))
    assert H == ((2, 4), (0, 6))
    assert matmul(U, ((2, 4), (0, 6))) == H


def test_hnf_all_small_2x2_against_naive_span():
    vals = range(-3, 4)
    for a, b, c, d in itertools.product(vals, repeat=4):
        M = ((a, b), (c, d))
        H, U = hermite_normal_form(M)
        assert matmul(U, M) == H
        assert abs(determinant(U)) == 1
        assert is_hnf(H)
        assert abs(determinant(M)) == abs(determinant(H))
        # same lattice: generators of each lie in the other's integer span
        L = Sublattice.span(M, 2)
        for row in H:
            assert integer_combination(M, row) is not None
        for row in M:
            assert row in L


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(M):
    H, U = hermite_normal_form(M)
    assert matmul(U, M) == H
    assert abs(determinant(U)) == 1
    assert is_hnf(H)
    assert hermite_normal_form(H)[0] == H


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_snf_properties(M):
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_eigenlattice_examples():
    swap = ((0, 1), (1, 0))
    assert eigenlattice(swap, -1) == Sublattice.span([(1, -1)], 2)
    rev = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert eigenlattice(rev, -1) == Sublattice.span([(1, 0, -1)], 3)
    negP = ((0, -1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, -1), (0, 0, -1, 0))
    assert eigenlattice(negP, -1) == Sublattice.span([(1, 1, 0, 0), (0, 0, 1, 1)], 4)


def test_eigenlattice_rejects_non_involution():
    with pytest.raises(NotAnInvolution):
        eigenlattice(((1, 1), (0, 1)), 1)


def random_unimodular(rng, n, steps=8):
    M = [list(r) for r in identity(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.choice([-2, -1, 1, 2])
        M[i] = [a + k * b for a, b in zip(M[i], M[j])]
    return tuple(tuple(r) for r in M)


def inverse_unimodular(M):
    n = len(M)
    cols = [integer_combination(M, tuple(int(i == j) for i in range(n))) for j in range(n)]
    return tuple(tuple(c) for c in cols)


def test_eigenlattices_have_finite_index_for_random_involutions():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 6)
        P = random_unimodular(rng, n)
        Pinv = inverse_unimodular(P)
        assert matmul(Pinv, P) == identity(n)
        D = tuple(tuple(rng.choice([-1, 1]) if i == j else 0 for j in range(n)) for i in range(n))
        A = matmul(matmul(Pinv, D), P)
        assert matmul(A, A) == identity(n)
        plus, minus = eigenlattice(A, 1), eigenlattice(A, -1)
        assert plus.is_saturated and minus.is_saturated
        idx = quotient_index(Sublattice.full(n), plus + minus)
        assert idx != math.inf
        # the index divides 2^n since 2y = (y + Ay) + (y - Ay)
        assert 2 ** n % idx == 0


def brute_index(M):
    """Index of the row lattice of a full-rank square M in Z^n by counting points in a period box."""
    n = len(M)
    d = abs(int(determinant(M)))
    L = Sublattice.span(M, n)
    inside = sum(1 for p in itertools.product(range(d), repeat=n) if p in L)
    return d ** n // inside


def test_quotient_index_matches_brute_force():
    rng = random.Random(3)
    seen = 0
    while seen < 40:
        n = rng.randint(1, 3)
        M = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
        d = abs(determinant(M))
        if d == 0 or d > 12:
            continue
        seen += 1
        idx = quotient_index(Sublattice.full(n), Sublattice.span(M, n))
        assert idx == d == brute_index(M)


def test_quotient_index_examples():
    Z2 = Sublattice.full(2)
    assert quotient_index(Z2, Z2) == 1
    assert quotient_index(Z2, Sublattice.span([(2, 0), (0, 2)], 2)) == 4
    assert quotient_index(Z2, Sublattice.span([(1, 0)], 2)) == math.inf
    with pytest.raises(LatticeError):
        quotient_index(Sublattice.span([(2, 0)], 2), Sublattice.span([(1, 0)], 2))


def test_quotient_group_representatives_are_distinct_classes():
    outer = Sublattice.full(2)
    inner = Sublattice.span([(2, 1), (0, 3)], 2)
    Q = QuotientGroup(outer, inner)
    reps = Q.representatives()
    assert Q.order == len(reps) == 6
    for a, b in itertools.combinations(reps, 2):
        assert tuple(x - y for x, y in zip(a, b)) not in inner


def test_sublattice_equality_is_canonical():
    assert Sublattice.span([(1, 1), (0, 2)], 2) == Sublattice.span([(1, -1), (2, 0)], 2)
    L = Sublattice.span([(2, 0)], 2)
    assert L.index == 2 and L.saturation() == Sublattice.span([(1, 0)], 2)


def test_kernel_and_intersection():
    K = Sublattice.kernel([(1, 1, 1)], 3)
    assert K.rank == 2 and all(sum(b) == 0 for b in K.basis)
    assert integer_kernel(((1, 2),), 2) in (((-2, 1),), ((2, -1),))
    A = Sublattice.span([(2, 0)], 2)
    B = Sublattice.span([(3, 0)], 2)
    assert A.intersection(B) == Sublattice.span([(6, 0)], 2)


def test_points_in_box_matches_naive():
    L = Sublattice.span([(1, 2, 0), (0, 3, 3)], 3)
    naive = sorted(p for p in itertools.product(range(-4, 5), repeat=3) if p in L)
    assert L.points_in_box(4) == naive


def test_as_fraction_refuses_floats():
    assert as_fraction("-3/2") == Fraction(-3, 2)
    with pytest.raises(TypeError):
        as_fraction(0.5)
