import itertools
from fractions import Fraction

import pytest

from relcrit.involution import (
    InvolutionError,
    SigmaBasisViolated,
    build,
    component_lattices,
    group_case,
    maximal_proper_subsets,
    restricted_root_system,
    sigma_split_subsets,
)
from relcrit.lattice import NotAnInvolution, Sublattice, determinant, matvec
from relcrit.rootdatum import BasedRootDatum, gl


def test_gl3_structure(gl3):
    assert gl3.fixed_simple == ()
    assert len(gl3.restricted_simple) == 1
    abar = gl3.restricted_simple[0]
    assert abar.vector == (Fraction(1, 2), 0, Fraction(-1, 2))
    assert set(abar.preimages) == {(1, -1, 0), (0, 1, -1)}


def test_gl3_restricted_system_is_bc1(gl3):
    roots, simple = restricted_root_system(gl3)
    a = simple[0].vector
    expected = {a, tuple(-x for x in a), tuple(2 * x for x in a), tuple(-2 * x for x in a)}
    assert {r.vector for r in roots} == expected
    two_a = next(r for r in roots if r.vector == tuple(2 * x for x in a))
    assert two_a.preimages == ((1, 0, -1),)


def test_gl4_structure(gl4):
    assert gl4.fixed_simple == (0, 2)
    assert len(gl4.restricted_simple) == 1
    assert gl4.restricted_simple[0].preimages == ((0, 1, -1, 0),)
    assert gl4.S0 == Sublattice.span([(1, 1, 0, 0), (0, 0, 1, 1)], 4)
    assert gl4.Z0 == Sublattice.span([(1, 1, 1, 1)], 4)
    assert [s.subset for s in sigma_split_subsets(gl4)] == [(0, 2), (0, 1, 2)]


def test_group_case_structure():
    for n in (2, 3, 4):
        data = group_case(gl(n))
        assert data.fixed_simple == ()
        assert len(data.restricted_simple) == n - 1


def test_identity_involution_has_no_restricted_roots():
    data = build(gl(3), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert data.restricted_roots == ()
    assert data.S0.rank == 0
    assert [s.subset for s in sigma_split_subsets(data)] == [(0, 1)]


def test_build_errors():
    with pytest.raises(NotAnInvolution):
        build(gl(2), ((1, 1), (0, 1)))
    with pytest.raises(InvolutionError):
        # sends e1 - e2 to e1 + e2, which is not a root
        build(gl(2), ((1, 0), (0, -1)))
    with pytest.raises(SigmaBasisViolated) as exc:
        build(gl(3), ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    assert exc.value.root in gl(3).positive_roots


PRESETS = ["gl3", "gl4", "gc2", "gc3"]


@pytest.mark.parametrize("name", PRESETS)
def test_restriction_anticommutes_with_sigma(name, request):
    data = request.getfixturevalue(name)
    for r in data.base.roots:
        assert data.restrict(matvec(data.sigma, r)) == tuple(-x for x in data.restrict(r))


@pytest.mark.parametrize("name", PRESETS)
def test_positive_restricted_roots_are_nonnegative_integer_combinations(name, request):
    data = request.getfixturevalue(name)
    simple = [r.vector for r in data.restricted_simple]
    k = len(simple)
    for r in data.base.positive_roots:
        if matvec(data.sigma, r) == r:
            continue
        v = data.restrict(r)
        found = False
        for c in itertools.product(range(0, 5), repeat=k):
            if tuple(sum(ci * s[j] for ci, s in zip(c, simple)) for j in range(data.rank)) == v:
                found = True
                break
        assert found, r


@pytest.mark.parametrize("name", PRESETS)
def test_bracket_is_a_bijection(name, request):
    data = request.getfixturevalue(name)
    k = len(data.restricted_simple)
    for size in range(k + 1):
        for Ibar in itertools.combinations(range(k), size):
            I = data.sigma_split(Ibar)
            assert data.restricted_subset(I) == Ibar
            assert data.is_sigma_split(I)
    for s in sigma_split_subsets(data):
        assert data.sigma_split(data.restricted_subset(s.subset)) == s.subset


@pytest.mark.parametrize("name", PRESETS)
def test_z0_is_killed_by_simple_roots(name, request):
    data = request.getfixturevalue(name)
    for b in data.Z0.basis:
        assert b in data.S0
        assert all(sum(x * y for x, y in zip(a, b)) == 0 for a in data.base.simple_roots)


def test_maximal_proper_subsets(gl3, gl4, gc3):
    assert [s.subset for s in maximal_proper_subsets(gl3)] == [()]
    assert [s.subset for s in maximal_proper_subsets(gl4)] == [(0, 2)]
    assert sorted(s.subset for s in maximal_proper_subsets(gc3)) == [(0, 2), (1, 3)]


def index_by_determinant(outer, gens):
    coords = [outer.coordinates(g) for g in gens]
    M = Sublattice.span(coords, outer.rank).basis
    return abs(determinant(M))


@pytest.mark.parametrize("name", PRESETS)
def test_component_lattices_index(name, request):
    data = request.getfixturevalue(name)
    k = len(data.restricted_simple)
    for size in range(k + 1):
        for Ibar in itertools.combinations(range(k), size):
            A, B, idx = component_lattices(data, Ibar)
            assert idx == index_by_determinant(data.S0, A.basis + B.basis)


def test_gl3_component_index_is_finite(gl3):
    _, _, idx = component_lattices(gl3, ())
    assert idx == 1
