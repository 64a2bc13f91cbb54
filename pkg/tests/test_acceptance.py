"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import io
import itertools
import random
import time

import pytest
from cli_cases import cases
from conftest import ALL, fund, lattice, tri
from oracles import (_types_ok, balanced_oracle, candidate_tuples, random_admissible,
                     restricted_lattice)

from normsurf import carrier as car
from normsurf import cli
from normsurf import pipeline as pl
from normsurf.coords import SurfaceVector, vertex_link
from normsurf.errors import EmptySupport
from normsurf.hilbert import decompose, enumerate_fundamental
from normsurf.coords import matching_system
from normsurf.topology import classify_vector, euler_linear

ZERO_EFFICIENT = "two_tet"
NOT_ZERO_EFFICIENT = "two_tet_s2xs1"
STREAM_FIXTURE = "two_tet_s2xs1"

_printer = print


def report(num, ok, detail):
    _printer(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.fixture(autouse=True)
def _show(capsys):
    global _printer

    def shout(line):
        with capsys.disabled():
            print("\n" + line)
    _printer = shout
    yield
    _printer = print


def _cell_chi(t, v):
    return sum(r.euler for r in classify_vector(t, v))


def _random_vectors(name, count, rng):
    lat = lattice(name)
    members = fund(name).members
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(SurfaceVector(rng.choice(lat)))
        else:
            out.append(SurfaceVector(random_admissible(members, rng)))
    return out


def criterion_1():
    worst, failures = 0.0, 0
    for name in ALL:
        t = tri(name)
        lat = lattice(name, 20)
        t0 = time.perf_counter()
        F = enumerate_fundamental(t, matching_system(t))
        for v in lat:
            terms = decompose(v, F)
            total = SurfaceVector.zero(t.num_tets)
            for c, m in terms:
                total = total + c * m
            failures += total != SurfaceVector(v)
        worst = max(worst, time.perf_counter() - t0)
    report(1, failures == 0 and worst < 60.0 and len(ALL) >= 3,
           f"{len(ALL)} fixtures, {failures} decomposition failures, slowest {worst:.1f}s (< 60s)")


def criterion_2():
    rng = random.Random(2024)
    bad = total = 0
    for name in ALL:
        t = tri(name)
        pairs = 0
        while pairs < 200:
            a, b = _random_vectors(name, 2, rng)
            if not _types_ok(a + b):
                continue
            pairs += 1
            bad += _cell_chi(t, a + b) != _cell_chi(t, a) + _cell_chi(t, b)
        total += pairs
    report(2, bad == 0, f"{total} compatible pairs, {bad} additivity violations")


def criterion_3():
    rng = random.Random(77)
    bad = checked = 0
    for name in ALL:
        t = tri(name)
        vecs = list(fund(name).members) + _random_vectors(name, 500, rng)
        for v in vecs:
            bad += euler_linear(t, v) != _cell_chi(t, v)
            checked += 1
    report(3, bad == 0, f"{checked} vectors over {len(ALL)} fixtures, {bad} disagreements")


def _spheres(name):
    t = tri(name)
    return [m for m in fund(name).members
            if any(r.kind == "sphere" for r in classify_vector(t, m))]


def criterion_4():
    s0, s1 = _spheres(ZERO_EFFICIENT), _spheres(NOT_ZERO_EFFICIENT)
    ok = (s0 == [vertex_link(tri(ZERO_EFFICIENT))]
          and len([s for s in s1 if s != vertex_link(tri(NOT_ZERO_EFFICIENT))]) >= 1)
    report(4, ok, f"{ZERO_EFFICIENT}: {len(s0)} sphere(s); {NOT_ZERO_EFFICIENT}: {len(s1)} sphere(s)")


def criterion_5():
    seqs = ["".join(s) for n in range(0, 13, 2) for s in itertools.product("+-", repeat=n)
            if s.count("+") == n // 2]
    t0 = time.perf_counter()
    ks = [pl.balanced_reduce(s) for s in seqs]
    elapsed = time.perf_counter() - t0
    mismatch = sum(k != balanced_oracle(s)[0] for s, k in zip(seqs, ks))
    over = sum(k > len(s) // 2 for s, k in zip(seqs, ks))
    report(5, mismatch == 0 and over == 0 and elapsed < 10.0,
           f"{len(seqs)} sequences, {mismatch} oracle mismatches, {over} bound violations, "
           f"{elapsed:.2f}s (< 10s)")


def _fixture_supports(name):
    F = fund(name)
    sups = {m.support() for m in F.members}
    for a, b in itertools.combinations(F.members, 2):
        sups.add(a.support() | b.support())
    out = []
    for s in sorted(sups, key=sorted):
        try:
            out.append(car.BranchedCarrier(tri(name), s))
        except EmptySupport:
            pass
    return out


def criterion_6():
    carriers = mismatches = positivity = 0
    for name in ALL:
        for c in _fixture_supports(name):
            carriers += 1
            got = [tuple(v) for v in car.carried_vectors(c, 15)]
            mismatches += got != restricted_lattice(c.tri, c.support, 15)
            for v in got:
                v = SurfaceVector(v)
                positivity += car.fully_carries(c, v) != all(v[i] > 0 for i in c.sectors)
    report(6, mismatches == 0 and positivity == 0 and carriers > 0,
           f"{carriers} carriers, {mismatches} accept-set mismatches, "
           f"{positivity} positivity mismatches")


def _independent_disk_check(c, circuit, direction, vec):
    from oracles import matching_rows
    from normsurf.topology import reconstruct
    eps = 1 if direction == "inward" else -1
    want = {}
    for i in circuit.arcs:
        la = c.locus[i]
        key = (la.gluing, la.corner)
        want[key] = want.get(key, 0) + (eps if la.side == 0 else -eps)
    surplus = sum(abs(sum(a * x for a, x in zip(r, vec))) for r in matching_rows(c.tri))
    if surplus != sum(abs(x) for x in want.values()):
        return False
    if not c.support >= vec.support() or sum(vec) == 0:
        return False
    s = reconstruct(c.tri, vec, allow_boundary=True)
    return (s.num_components == 1 and s.component_euler(0) == 1
            and len(s.boundary_curves()) == 1
            and car.verify_disk(c.tri, c, circuit, direction, vec) == [])


def criterion_7():
    rng = random.Random(7)
    pool = []
    for name in ALL:
        for c in _fixture_supports(name):
            for circ in c.vertical_boundary_components():
                pool.append((c, circ))
    found = bad = flips = 0
    for _ in range(100):
        c, circ = rng.choice(pool)
        d = rng.choice(("inward", "outward"))
        bound = rng.randint(1, 10)
        results = [car.disk_search(c, circ.index, d, bound, workers=w) for w in (1, 2, 8)]
        if len({r.status for r in results}) > 1 or len({r.vector for r in results}) > 1:
            flips += 1
        r = results[0]
        if r.status == "found":
            found += 1
            bad += not _independent_disk_check(c, circ, d, r.vector)
    report(7, bad == 0 and flips == 0,
           f"100 queries, {found} found, {bad} failed verification, {flips} worker flips")


def criterion_8():
    t, F = tri(STREAM_FIXTURE), fund(STREAM_FIXTURE)
    members = list(F.members)
    tori, _ = pl.split_fundamentals(F, t)
    want = candidate_tuples(members, [_cell_chi(t, m) for m in members],
                            [m in tori for m in members], 2, 3)
    got = []
    for d in pl.candidate_stream(t, F, 2, 3):
        terms = dict((m, c) for m, c in d.base_terms + d.torus_terms)
        got.append((tuple(terms.get(m, 0) for m in members), tuple(d.vector())))
    report(8, len(members) <= 4 and got == want,
           f"{STREAM_FIXTURE}: {len(members)} fundamentals, stream {len(got)}, oracle {len(want)}")


def criterion_9():
    rng = random.Random(9)
    names = [n for n in ALL if pl.split_fundamentals(fund(n), tri(n))[0]]
    done = bad = twisted = 0
    while done < 100:
        name = rng.choice(names)
        t = tri(name)
        tori, non = pl.split_fundamentals(fund(name), t)
        torus = rng.choice(tori)
        base = SurfaceVector.zero(t.num_tets)
        terms = []
        for m in rng.sample(non, rng.randint(0, min(2, len(non)))):
            c = rng.randint(1, 2)
            terms.append((m, c))
            base = base + c * m
        if not _types_ok(base + torus):
            continue
        c = rng.randint(1, 14)
        d = pl.Decomposition(base, [(torus, c)], terms, [], rng.randint(0, 2),
                             euler_linear(t, base + c * torus))
        n1 = pl.twist_normalize(t, d, {torus})
        n2 = pl.twist_normalize(t, n1, {torus})
        v0, v1 = d.vector(), n1.vector()
        ok = (_cell_chi(t, v0) == _cell_chi(t, v1) and v0.support() == v1.support()
              and n2.torus_terms == n1.torus_terms and n2.audit == n1.audit
              and n2.vector() == v1)
        bad += not ok
        twisted += bool(n1.audit)
        done += 1
    report(9, bad == 0, f"{done} decompositions ({twisted} twisted), {bad} invariant violations")


def criterion_10():
    differing = []
    for argv in cases():
        outs = set()
        for w in (1, 8):
            for _ in range(2):
                buf = io.StringIO()
                cli.run(argv + ["--workers", str(w)], buf, io.StringIO())
                outs.add(buf.getvalue().encode())
        if len(outs) != 1:
            differing.append(argv[0])
    report(10, not differing,
           f"{len(cases())} invocations over {len({c[0] for c in cases()})} commands, "
           f"{len(differing)} non-deterministic {differing}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(crit):
    crit()


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        try:
            crit()
        except AssertionError:
            failed += 1
    raise SystemExit(1 if failed else 0)
