"""Exact enumeration of the admissible solution cone.

The admissible set is a union of polyhedral cones, one per maximal
*support face*: every triangle type plus at most one quad or octagon type
per tetrahedron, with octagons allowed in at most one tetrahedron.  On each
face we run the double description method for the extreme rays and a
placing triangulation + fundamental-parallelepiped scan for the Hilbert
basis.  Everything is plain Python integers / Fractions.
"""
from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .coords import COORDS_PER_TET, OCT, QUAD, SurfaceVector
from .errors import NotDecomposable, ResourceLimit
from .intlinalg import (determinant, integer_kernel, inverse_unimodular, primitive,
                        rational_inverse, smith_normal_form, solve_row_combination)


@dataclass(frozen=True)
class Limits:
    max_rays: int = 50_000
    max_candidates: int = 500_000
    workers: int = 1

    def __post_init__(self):
        if self.max_rays <= 0 or self.max_candidates <= 0 or self.workers <= 0:
            raise ValueError("limits must be positive")


DEFAULT_LIMITS = Limits()


# -- cones {x >= 0 : A x = 0} ------------------------------------------------

def cone_rays(a, n, max_rays=DEFAULT_LIMITS.max_rays):
    """Primitive extreme rays of ``{x in R^n : a x = 0, x >= 0}`` (double description)."""
    lines = [primitive(l) for l in integer_kernel(a, n)] if a else \
        [[int(i == j) for j in range(n)] for i in range(n)]
    rays = []        # list of (vector, zero-mask over processed constraints)
    for j in range(n):
        bit = 1 << j
        li = next((i for i, l in enumerate(lines) if l[j]), None)
        if li is not None:
            l = lines.pop(li)
            if l[j] < 0:
                l = [-x for x in l]
            lines = [primitive([l[j] * x - m[j] * y for x, y in zip(m, l)]) if m[j] else m
                     for m in lines]
            new = []
            for r, z in rays:
                if r[j]:
                    r = primitive([l[j] * x - r[j] * y for x, y in zip(r, l)])
                new.append((r, z | bit))
            new.append((l, bit - 1))
            rays = new
            continue
        pos = [i for i, (r, z) in enumerate(rays) if r[j] > 0]
        neg = [i for i, (r, z) in enumerate(rays) if r[j] < 0]
        out = [(r, z | bit) for r, z in rays if r[j] == 0] + [rays[i] for i in pos]
        masks = [z for _, z in rays]
        for ip in pos:
            p, zp = rays[ip]
            for iq in neg:
                q, zq = rays[iq]
                common = zp & zq
                adjacent = True
                for ir, zr in enumerate(masks):
                    if ir != ip and ir != iq and common & zr == common:
                        adjacent = False
                        break
                if adjacent:
                    r = primitive([p[j] * y - q[j] * x for x, y in zip(p, q)])
                    out.append((r, common | bit))
        if len(out) > max_rays:
            raise ResourceLimit(f"intermediate ray count {len(out)} exceeds {max_rays}",
                                rays=len(out), max_rays=max_rays)
        rays = out
    if lines:
        raise AssertionError("cone is not pointed")
    return sorted({tuple(r) for r, _ in rays})


def _lattice_basis(rays, n):
    perp = integer_kernel([list(r) for r in rays], n)
    if not perp:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return integer_kernel(perp, n)


def placing_triangulation(coords):
    """Simplices (index tuples) of a placing triangulation of cone(coords).

    ``coords`` must be full-dimensional in their ambient space.
    """
    d = len(coords[0])
    chosen = []
    for i in range(len(coords)):
        trial = [coords[k] for k in chosen] + [coords[i]]
        if _rank_frac(trial) == len(trial):
            chosen.append(i)
        if len(chosen) == d:
            break
    if len(chosen) < d:
        raise AssertionError("rays are not full-dimensional")
    simplices = [tuple(chosen)]
    for i in range(len(coords)):
        if i in chosen:
            continue
        facet_count = {}
        for s in simplices:
            for w in s:
                f = tuple(x for x in s if x != w)
                facet_count[f] = facet_count.get(f, 0) + 1
        new = []
        for s in simplices:
            for w in s:
                f = tuple(x for x in s if x != w)
                if facet_count[f] != 1:
                    continue
                base = [coords[x] for x in f]
                dr = determinant(base + [coords[i]])
                if dr == 0:
                    continue
                dw = determinant(base + [coords[w]])
                if (dr > 0) != (dw > 0):
                    new.append(tuple(sorted(f + (i,))))
        simplices.extend(new)
    return simplices


def _rank_frac(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rk = 0
    ncol = len(m[0]) if m else 0
    for c in range(ncol):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][c] != 0:
                f = m[i][c] / m[rk][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rk])]
        rk += 1
    return rk


def parallelepiped_points(rays, lcoords, max_candidates):
    """Lattice points of the half-open parallelepiped spanned by a simplicial cone."""
    d = len(lcoords)
    dmat, _, v = smith_normal_form(lcoords)
    diag = [dmat[i][i] for i in range(d)]
    total = 1
    for x in diag:
        total *= x
    if total > max_candidates:
        raise ResourceLimit(f"simplicial cone of index {total} exceeds candidate limit",
                            index=total, max_candidates=max_candidates)
    vinv = inverse_unimodular(v)
    rinv = rational_inverse(lcoords)
    out = []
    for z in itertools.product(*(range(x) for x in diag)):
        if not any(z):
            continue
        y = [sum(z[i] * vinv[i][k] for i in range(d)) for k in range(d)]
        lam = [sum(y[i] * rinv[i][k] for i in range(d)) for k in range(d)]
        frac = [l - floor(l) for l in lam]
        pt = [sum(frac[i] * rays[i][c] for i in range(d)) for c in range(len(rays[0]))]
        if any(x.denominator != 1 for x in pt):
            raise AssertionError("parallelepiped point is not integral")
        out.append(tuple(int(x) for x in pt))
    return out


def minimal_elements(vectors):
    """Coordinatewise-minimal nonzero vectors."""
    pool = sorted({tuple(v) for v in vectors if any(v)}, key=lambda v: (sum(v), v))
    out = []
    for x in pool:
        if not any(all(a <= b for a, b in zip(y, x)) for y in out):
            out.append(x)
    return out


def hilbert_basis(a, n, limits=DEFAULT_LIMITS):
    """Hilbert basis of the monoid ``{x in Z^n : a x = 0, x >= 0}``."""
    rays = cone_rays(a, n, limits.max_rays)
    if not rays:
        return []
    basis = _lattice_basis(rays, n)
    lc = []
    for r in rays:
        y = solve_row_combination(basis, r)
        if y is None or any(c.denominator != 1 for c in y):
            raise AssertionError("ray outside lattice")
        lc.append([int(c) for c in y])
    cands = set(rays)
    for simplex in placing_triangulation(lc):
        sr = [rays[i] for i in simplex]
        cands.update(parallelepiped_points(sr, [lc[i] for i in simplex],
                                           limits.max_candidates))
        if len(cands) > limits.max_candidates:
            raise ResourceLimit("candidate pool exceeds limit", max_candidates=limits.max_candidates)
    return minimal_elements(cands)


# -- support faces -----------------------------------------------------------

@dataclass(frozen=True)
class SupportFace:
    """Per tetrahedron: ``None`` or ``("quad"|"oct", k)``; triangles always allowed."""
    choice: tuple

    def columns(self):
        cols = []
        for t, c in enumerate(self.choice):
            cols.extend(10 * t + j for j in range(4))
            if c is not None:
                kind, k = c
                cols.append(10 * t + (QUAD if kind == "quad" else OCT) + k)
        return cols

    def contains(self, vec):
        cols = set(self.columns())
        return all(i in cols for i, x in enumerate(vec) if x)

    def to_json(self):
        return [None if c is None else list(c) for c in self.choice]


def maximal_support_faces(num_tets, octagons=True):
    quads = [("quad", k) for k in range(3)]
    faces = [SupportFace(c) for c in itertools.product(quads, repeat=num_tets)]
    if octagons:
        for t in range(num_tets):
            for k in range(3):
                for rest in itertools.product(quads, repeat=num_tets - 1):
                    choice = rest[:t] + (("oct", k),) + rest[t:]
                    faces.append(SupportFace(choice))
    return faces


def support_face_of(vec):
    """The unique minimal choice-tuple describing vec's quad/oct usage."""
    choice = []
    for t in range(vec.num_tets):
        c = None
        for k in range(3):
            if vec.quad(t, k):
                c = ("quad", k)
            if vec.oct(t, k):
                c = ("oct", k)
        choice.append(c)
    return SupportFace(tuple(choice))


def _restrict(sys, cols):
    rows = []
    for row in sys.equations:
        r = [row[c] for c in cols]
        if any(r):
            rows.append(r)
    return rows


def _lift(vec, cols, n):
    out = [0] * n
    for c, x in zip(cols, vec):
        out[c] = x
    return SurfaceVector(out)


def _face_task(args):
    sys, face, mode, limits = args
    cols = face.columns()
    a = _restrict(sys, cols)
    if mode == "vertex":
        found = cone_rays(a, len(cols), limits.max_rays)
    else:
        found = hilbert_basis(a, len(cols), limits)
    out = []
    for v in found:
        vec = _lift(v, cols, sys.ncols)
        if vec.octagons() <= 1:
            out.append(tuple(vec))
    return out


def canonical_key(vec):
    return (sum(vec), tuple(vec))


def _run_faces(sys, mode, limits, octagons):
    faces = maximal_support_faces(sys.num_tets, octagons)
    tasks = [(sys, f, mode, limits) for f in faces]
    if limits.workers > 1:
        with ProcessPoolExecutor(max_workers=limits.workers) as pool:
            results = list(pool.map(_face_task, tasks, chunksize=4))
    else:
        results = [_face_task(t) for t in tasks]
    merged = {v for res in results for v in res}
    return [SurfaceVector(v) for v in sorted(merged, key=canonical_key)]


def enumerate_vertex_solutions(tri, sys, limits=DEFAULT_LIMITS, octagons=True):
    """Primitive extreme rays of every maximal support face, merged and sorted.

    Rays whose primitive representative carries more than one octagon are
    not admissible and are dropped.
    """
    return _run_faces(sys, "vertex", limits, octagons)


@dataclass
class FundamentalSet:
    members: tuple
    tori: tuple = ()
    non_tori: tuple = ()
    other: tuple = ()
    classified: bool = False
    reports: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def to_json(self):
        return [m.to_json() for m in self.members]


def enumerate_fundamental(tri, sys, limits=DEFAULT_LIMITS, octagons=True):
    """Hilbert basis of the admissible monoid, as the union over maximal faces.

    A vector with one octagon is a sum of exactly one octagon-carrying basis
    element and octagon-free ones, so filtering each face's basis to
    ``octagons <= 1`` keeps the union complete.
    """
    return FundamentalSet(tuple(_run_faces(sys, "hilbert", limits, octagons)))


def decompose(vec, fund):
    """Greedy-with-backtracking decomposition over members in canonical order.

    Returns a list of ``(coefficient, member)`` whose weighted sum is ``vec``.
    """
    vec = SurfaceVector(vec)
    members = [m for m in fund if m <= vec]
    failed = set()

    def go(rest, start):
        if not any(rest):
            return []
        if (rest, start) in failed:
            return None
        for i in range(start, len(members)):
            m = members[i]
            cmax = min(r // x for r, x in zip(rest, m) if x)
            for c in range(cmax, 0, -1):
                sub = go(SurfaceVector(r - c * x for r, x in zip(rest, m)), i + 1)
                if sub is not None:
                    return [(c, m)] + sub
        failed.add((rest, start))
        return None

    res = go(vec, 0)
    if res is None:
        raise NotDecomposable("vector does not decompose over the fundamental set",
                              vector=vec.rows())
    return res


# -- cache -------------------------------------------------------------------

def cache_key(tri, mode, limits, octagons=True):
    import hashlib
    doc = json.dumps({"tri": tri.to_json(), "mode": mode, "octagons": octagons,
                      "max_rays": limits.max_rays,
                      "max_candidates": limits.max_candidates},
                     sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(doc.encode()).hexdigest()
