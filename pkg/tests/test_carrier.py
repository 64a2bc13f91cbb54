import itertools
import random

import pytest
from conftest import ALL, fund, tri
from oracles import matching_rows, restricted_lattice

from normsurf import carrier as car
from normsurf.coords import SurfaceVector, vertex_link
from normsurf.errors import EmptySupport, NotCarried, UnknownComponent
from normsurf.topology import reconstruct


def _supports(name):
    F = fund(name)
    out = {m.support() for m in F}
    for a, b in itertools.combinations(F.members, 2):
        out.add(a.support() | b.support())
    good = []
    for s in sorted(out, key=sorted):
        try:
            car.BranchedCarrier(tri(name), s)
        except EmptySupport:
            continue
        good.append(s)
    return good


def test_all_triangles_carrier():
    t = tri("two_tet")
    c = car.build_carrier(t, "all-tri")
    assert c.locus == [] and c.vertical_boundary_components() == []
    link = vertex_link(t)
    assert car.carried_vectors(c, 24) == [k * link for k in (1, 2, 3)]
    assert [tuple(v) for v in car.carried_vectors(c, 15)] == restricted_lattice(t, c.support, 15)
    for d in ("inward", "outward"):
        assert car.disk_search(c, 0, d, 10).status == "not_found"


def test_torus_support_fully_carries_torus():
    t = tri("two_tet")
    torus = [m for m in fund("two_tet") if m != vertex_link(t)][0]
    c = car.build_carrier(t, torus)
    assert car.fully_carries(c, torus)
    assert car.sub_branched(c, torus).support == c.support


def test_incompatible_support():
    t = tri("two_tet")
    with pytest.raises(EmptySupport):
        car.build_carrier(t, frozenset({4, 5}))
    with pytest.raises(EmptySupport):
        car.build_carrier(t, frozenset())
    with pytest.raises(EmptySupport):
        car.build_carrier(t, frozenset({7, 17}))


@pytest.mark.parametrize("name", ALL)
def test_carried_vectors_match_restricted_lattice(name):
    t = tri(name)
    for s in _supports(name)[:12]:
        c = car.BranchedCarrier(t, s)
        got = [tuple(v) for v in car.carried_vectors(c, 15)]
        assert got == restricted_lattice(t, s, 15)
        for v in got:
            v = SurfaceVector(v)
            assert car.is_carried(c, v)
            assert car.fully_carries(c, v) == all(v[i] > 0 for i in c.sectors)


def test_fully_carried_is_additive_and_subcarrier_idempotent():
    t = tri("two_tet_s3")
    for s in _supports("two_tet_s3"):
        c = car.BranchedCarrier(t, s)
        vs = car.carried_vectors(c, 12)
        full = [v for v in vs if car.fully_carries(c, v)]
        for a, b in itertools.product(full[:3], repeat=2):
            if (a + b).octagons() <= 1:
                assert car.fully_carries(c, a + b)
        for v in vs[:5]:
            sub = car.sub_branched(c, v)
            assert car.fully_carries(sub, v)
            assert car.sub_branched(sub, v).support == sub.support == v.support()


def test_not_carried():
    t = tri("two_tet")
    c = car.build_carrier(t, "all-tri")
    torus = [m for m in fund("two_tet") if m != vertex_link(t)][0]
    with pytest.raises(NotCarried):
        car.sub_branched(c, torus)
    assert not car.fully_carries(c, SurfaceVector.zero(2))


def test_branch_equations_have_branch_form():
    for name in ALL:
        for s in _supports(name)[:6]:
            c = car.BranchedCarrier(tri(name), s)
            for row in c.branch_equations():
                arc = [x for x in row[len(c.sectors):] if x]
                sec = [x for x in row[:len(c.sectors)] if x]
                assert arc == [1] and all(x == -1 for x in sec) and len(sec) <= 2
            for la in c.locus:
                assert len(la.contributors) == 2 and la.side in (0, 1)


def test_circuits_partition_locus_and_are_deterministic():
    for name in ALL:
        for s in _supports(name):
            c1 = car.BranchedCarrier(tri(name), s)
            c2 = car.BranchedCarrier(tri(name), s)
            circ = c1.vertical_boundary_components()
            arcs = sorted(a for cc in circ for a in cc.arcs)
            assert arcs == list(range(len(c1.locus)))
            assert [x.to_json() for x in circ] == [x.to_json() for x in
                                                  c2.vertical_boundary_components()]


def _independent_check(t, c, circuit, direction, vec):
    """Face-arc surplus recomputed from scratch plus a reconstruction."""
    eps = 1 if direction == "inward" else -1
    want = {}
    for i in circuit.arcs:
        la = c.locus[i]
        want[(la.gluing, la.corner)] = want.get((la.gluing, la.corner), 0) + (
            eps if la.side == 0 else -eps)
    rows = matching_rows(t)
    # every matching row is satisfied up to the circuit's surplus
    surplus = sorted(abs(sum(a * x for a, x in zip(r, vec))) for r in rows)
    assert sum(surplus) == sum(abs(x) for x in want.values())
    s = reconstruct(t, vec, allow_boundary=True)
    assert s.num_components == 1 and s.component_euler(0) == 1
    assert len(s.boundary_curves()) == 1


def test_disk_search_outcomes_and_verification():
    rng = random.Random(23)
    queries = []
    for name in ALL:
        for s in _supports(name):
            c = car.BranchedCarrier(tri(name), s)
            for circ in c.vertical_boundary_components():
                queries.append((name, s, circ.index))
    rng.shuffle(queries)
    statuses = set()
    for name, s, k in queries[:40]:
        c = car.BranchedCarrier(tri(name), s)
        for d in ("inward", "outward"):
            res = car.disk_search(c, k, d, rng.randint(1, 10))
            statuses.add(res.status)
            if res.status == "found":
                circ = c.vertical_boundary_components()[k]
                assert sum(res.vector) <= 10
                assert car.verify_disk(c.tri, c, circ, d, res.vector) == []
                _independent_check(c.tri, c, circ, d, res.vector)
    assert statuses == {"found", "not_found", "inconclusive"}


def test_disk_search_edge_cases():
    t = tri("three_tet")
    c = car.build_carrier(t, "all-tri,2.q2")
    assert c.locus
    assert car.disk_search(c, 0, "inward", 0).status == "inconclusive"
    assert car.disk_search(c, 0, "inward", 0).bound == 0
    with pytest.raises(UnknownComponent):
        car.disk_search(c, 99, "inward", 5)
    res = car.disk_search(c, 0, "outward", 8)
    assert res.status == "found"


def test_disk_search_workers_agree():
    t = tri("three_tet")
    c = car.build_carrier(t, "all-tri,0.q1")
    for k in range(len(c.vertical_boundary_components())):
        for d in ("inward", "outward"):
            ref = car.disk_search(c, k, d, 9, workers=1).to_json()
            for w in (2, 8):
                assert car.disk_search(c, k, d, 9, workers=w).to_json() == ref


def test_carries_sphere_gate_on_zero_efficient_fixture():
    t = tri("two_tet")
    link = vertex_link(t).support()
    for s in _supports("two_tet"):
        c = car.BranchedCarrier(t, s)
        if not link <= s:
            assert car.carries_sphere(c) is False
        else:
            assert car.carries_sphere(c) is True


def test_carrier_json_is_stable():
    t = tri("three_tet")
    c = car.build_carrier(t, "all-tri,2.q2")
    assert c.to_json() == car.build_carrier(t, "all-tri,2.q2").to_json()
    assert car.parse_support("0.t0, 1.q2", 2) == frozenset({0, 16})
    with pytest.raises(EmptySupport):
        car.parse_support("0.x9", 2)
