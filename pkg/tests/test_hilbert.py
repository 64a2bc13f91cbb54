import random
from math import gcd

import pytest
from conftest import ALL, fund, lattice, tri

from normsurf.coords import SurfaceVector, is_admissible, matching_system, vertex_link
from normsurf.errors import NotDecomposable, ResourceLimit
from normsurf.hilbert import (FundamentalSet, Limits, cache_key, cone_rays, decompose,
                              enumerate_fundamental, enumerate_vertex_solutions, hilbert_basis,
                              maximal_support_faces)


def _support_minimal(pool):
    """Primitive pool vectors whose support is minimal among all pool vectors."""
    sups = [frozenset(i for i, x in enumerate(v) if x) for v in pool]
    out = set()
    for v, s in zip(pool, sups):
        g = 0
        for x in v:
            g = gcd(g, x)
        if g != 1:
            continue
        if not any(o < s for o in sups):
            out.add(tuple(v))
    return out


@pytest.mark.parametrize("name", ["one_tet", "one_tet_s3", "two_tet_s2xs1", "two_tet_tori"])
def test_vertex_solutions_match_lattice_scan(name):
    t = tri(name)
    got = {tuple(v) for v in enumerate_vertex_solutions(t, matching_system(t)) if sum(v) <= 20}
    assert got == _support_minimal(lattice(name))


@pytest.mark.parametrize("name", ALL)
def test_fundamental_minimal_and_admissible(name):
    t = tri(name)
    s = matching_system(t)
    pool = set(lattice(name))
    for m in fund(name):
        assert is_admissible(m, s)
        for a in pool:
            b = tuple(x - y for x, y in zip(m, a))
            assert not (any(b) and min(b) >= 0 and b in pool)


@pytest.mark.parametrize("name", ALL)
def test_vertex_link_is_fundamental(name):
    assert vertex_link(tri(name)) in fund(name).members


@pytest.mark.parametrize("name", ALL)
def test_decompose_resums(name):
    F = fund(name)
    rng = random.Random(3)
    for v in rng.sample(lattice(name), min(40, len(lattice(name)))):
        terms = decompose(SurfaceVector(v), F)
        total = [0] * len(v)
        for c, m in terms:
            assert c >= 1
            total = [a + c * b for a, b in zip(total, m)]
        assert tuple(total) == tuple(v)
        assert sum(c * sum(m) for c, m in terms) == sum(v)


def test_decompose_identity_and_constructed():
    F = fund("two_tet_s3")
    m1, m2 = F.members[0], F.members[-1]
    assert decompose(m1, F) == [(1, m1)]
    v = 2 * m1 + 3 * m2
    total = sum((c * m for c, m in decompose(v, F)), SurfaceVector.zero(2))
    assert total == v


def test_decompose_detects_incomplete_set():
    F = fund("two_tet")
    partial = FundamentalSet(F.members[:1])
    with pytest.raises(NotDecomposable):
        decompose(F.members[1], partial)


def test_cone_single_ray():
    # x0 = x1 = x2 cone has exactly one ray
    a = [[1, -1, 0], [0, 1, -1]]
    assert cone_rays(a, 3) == [(1, 1, 1)]
    assert hilbert_basis(a, 3) == [(1, 1, 1)]


def test_hilbert_basis_needs_interior_points():
    # x + y = 2z: rays (2,0,1), (0,2,1); (1,1,1) is an extra basis element
    hb = hilbert_basis([[1, 1, -2]], 3)
    assert sorted(hb) == [(0, 2, 1), (1, 1, 1), (2, 0, 1)]


def test_support_face_count():
    assert len(maximal_support_faces(2)) == 9 + 2 * 3 * 3
    assert len(maximal_support_faces(2, octagons=False)) == 9


def test_resource_limit():
    t = tri("three_tet")
    with pytest.raises(ResourceLimit):
        enumerate_vertex_solutions(t, matching_system(t), Limits(max_rays=1))


def test_worker_count_does_not_change_output():
    t = tri("two_tet_s3")
    s = matching_system(t)
    one = enumerate_fundamental(t, s, Limits(workers=1)).members
    two = enumerate_fundamental(t, s, Limits(workers=2)).members
    assert one == two


def test_cache_key_depends_on_limits():
    t = tri("one_tet")
    assert cache_key(t, "fundamental", Limits()) != cache_key(t, "fundamental", Limits(max_rays=7))
    assert cache_key(t, "fundamental", Limits()) == cache_key(t, "fundamental", Limits())


@pytest.mark.parametrize("name", ALL)
def test_euler_is_linear_over_decompositions(name):
    from normsurf.topology import euler_linear
    t = tri(name)
    F = fund(name)
    for v in lattice(name)[:30]:
        terms = decompose(SurfaceVector(v), F)
        assert sum(c * euler_linear(t, m) for c, m in terms) == euler_linear(t, SurfaceVector(v))
