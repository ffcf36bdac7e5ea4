import itertools

import pytest

from relcrit.cones import (
    AmbientError,
    ConeRegion,
    PointDecomposer,
    decompose_point,
    factor_inclusion,
    inclusion_threshold,
    partition_check,
    region_contains,
)
from relcrit.involution import build, sigma_split_subsets
from relcrit.rootdatum import BasedRootDatum

PRESETS = ["gl3", "gl4", "gc2", "gc3"]


def test_origin_in_s0_minus(gl3, gl4, gc2, gc3):
    for data in (gl3, gl4, gc2, gc3):
        assert region_contains(ConeRegion(data, "S0_minus", data.full_subset), (0,) * data.rank)


def test_gl3_examples(gl3):
    y = (1, 0, -1)
    assert region_contains(ConeRegion(gl3, "S0_minus", ()), y)
    assert not region_contains(ConeRegion(gl3, "S_I_minus", (), 2), y)
    assert region_contains(ConeRegion(gl3, "S_I_minus", (), 2), (2, 0, -2))
    assert region_contains(ConeRegion(gl3, "S0_minus", (), plus=True), (-1, 0, 1))


def test_wrong_ambient(gl3, gl4):
    with pytest.raises(AmbientError):
        region_contains(ConeRegion(gl3, "S0_minus", ()), (1, 0, 0))
    with pytest.raises(AmbientError):
        region_contains(ConeRegion(gl4, "S_I_minus", (0, 1, 2), 1), (1, 1, 0, 0))
    with pytest.raises(ValueError):
        ConeRegion(gl4, "S0_minus", (0,))


@pytest.mark.parametrize("name", PRESETS)
def test_restricted_and_simple_tests_agree(name, request):
    data = request.getfixturevalue(name)
    for s in sigma_split_subsets(data):
        for kind in ("S_I_minus", "S0_I_minus", "pre_I_S0_minus"):
            for N in (0, 1, 2):
                reg = ConeRegion(data, kind, s.subset, N)
                for y in reg.ambient.points_in_box(3):
                    assert region_contains(reg, y) == region_contains(reg, y, via_restricted=True)


@pytest.mark.parametrize("name", PRESETS)
def test_chain_inclusions_and_monotonicity(name, request):
    data = request.getfixturevalue(name)
    box = data.S0.points_in_box(4)
    for s in sigma_split_subsets(data):
        for N in (0, 1, 2, 3):
            a = ConeRegion(data, "S_I_minus", s.subset, N)
            b = ConeRegion(data, "pre_I_S0_minus", s.subset, N)
            c = ConeRegion(data, "S0_I_minus", s.subset, N)
            c_lower = ConeRegion(data, "S0_I_minus", s.subset, max(N - 1, 0))
            d = ConeRegion(data, "S0_minus", s.subset, N)
            for y in box:
                in_a = y in s.lattice and region_contains(a, y)
                if in_a and N > 0:
                    assert region_contains(b, y)
                if region_contains(b, y):
                    assert region_contains(c, y)
                if region_contains(c, y):
                    assert region_contains(d, y) and region_contains(c_lower, y)


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("N", [1, 2])
def test_partition(name, N, request):
    r = partition_check(request.getfixturevalue(name), N, 6)
    assert r.ok and r.first_violation is None and r.points > 0


def test_partition_deterministic_under_threads(gc3, monkeypatch):
    single = partition_check(gc3, 2, 5, workers=1)
    multi = partition_check(gc3, 2, 5, workers=4)
    assert (single.points, single.counts) == (multi.points, multi.counts)


def test_partition_rank_zero():
    torus = BasedRootDatum(1, (), (), (), "torus")
    data = build(torus, ((-1,),))
    r = partition_check(data, 1, 5)
    assert r.ok and r.counts == {(): 11}


def test_partition_requires_positive_threshold(gl3):
    with pytest.raises(ValueError):
        partition_check(gl3, 0, 3)


def test_decompose_gl3_rank_one(gl3):
    f = decompose_point(gl3, (), 1, (3, 0, -3))
    assert f.y_I == (3, 0, -3) and f.t == (0, 0, 0) and f.z == (0, 0, 0)


def test_decompose_rejects_outside_points(gl3):
    with pytest.raises(ValueError):
        decompose_point(gl3, (0, 1), 2, (3, 0, -3))


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_decomposition_reverifies(name, N, request):
    data = request.getfixturevalue(name)
    for s in sigma_split_subsets(data):
        dec = PointDecomposer(data, s.subset, N)
        target = ConeRegion(data, "S_I_minus", s.subset, max(dec.reduced_threshold, 0))
        for y in data.S0.points_in_box(4):
            if region_contains(dec.region, y):
                f = dec.decompose(y)
                assert region_contains(target, f.y_I)
                assert region_contains(ConeRegion(data, "S0_minus", s.subset), f.t)
                assert f.z in data.Z0


def test_decomposition_with_zero_pairings_has_no_translate(gc3):
    dec = PointDecomposer(gc3, (), 2)
    y = (2, 0, -2, -2, 0, 2)
    f = dec.decompose(y)
    assert f.t == (0,) * 6 and f.y_I == y


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("N", [1, 2])
def test_inclusion_threshold(name, N, request):
    data = request.getfixturevalue(name)
    for s in sigma_split_subsets(data):
        Np = inclusion_threshold(data, s.subset, N)
        if s.subset == data.full_subset:
            assert Np == N
        reg = ConeRegion(data, "S0_I_minus", s.subset, Np)
        for y in data.S0.points_in_box(6 if data.rank < 6 else 3):
            if region_contains(reg, y):
                a, b = factor_inclusion(data, s.subset, N, y)
                assert tuple(x + z for x, z in zip(a, b)) == y
                assert region_contains(ConeRegion(data, "S_I_minus", s.subset, N), a)
                assert region_contains(ConeRegion(data, "S0_minus", s.subset), b)
