"""Normal and almost normal coordinates, matching equations, Haken sums.

Per tetrahedron a vector carries ten integers, in this order::

    t0 t1 t2 t3 | q0 q1 q2 | o0 o1 o2

``t_v`` counts triangles cutting off vertex ``v``.  Quad and octagon type
``k`` separate the vertex pairs ``{0, k+1}`` and the complementary pair.

Arc incidence (face ``f`` is opposite vertex ``f``; a normal arc in a face
has the *type* of the face corner it cuts off):

* triangle ``v`` gives one arc of type ``v`` in each of the three faces
  containing ``v``;
* quad ``k`` gives one arc per face; in face ``f`` it cuts off the partner
  of ``f`` in the separating pair;
* octagon ``k`` meets the two edges inside its separating pairs twice and
  the other four edges once.  In face ``f`` it leaves two arcs, cutting off
  the two corners of the pair not containing ``f``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DimensionMismatch, IncompatibleSummands, NotOneVertex, ParseError
from .triangulation import face_vertices

COORDS_PER_TET = 10
TRI, QUAD, OCT = 0, 4, 7

QUAD_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def partner(k, v):
    for a, b in QUAD_PAIRS[k]:
        if v == a:
            return b
        if v == b:
            return a
    raise ValueError(v)


def separates(k, a, b):
    """True if quad/oct type ``k`` puts vertices a and b on opposite sides."""
    return partner(k, a) != b


def arc_contributors(f, v):
    """Local coordinate slots contributing one arc of type ``v`` to face ``f``."""
    out = [TRI + v]
    for k in range(3):
        if partner(k, f) == v:
            out.append(QUAD + k)
        else:
            out.append(OCT + k)
    return out


class SurfaceVector(tuple):
    """Immutable flat coordinate tuple; ``len == 10 * num_tets``."""

    def __new__(cls, coords):
        vals = tuple(int(x) for x in coords)
        if len(vals) % COORDS_PER_TET:
            raise DimensionMismatch("coordinate count is not a multiple of 10",
                                    length=len(vals))
        return super().__new__(cls, vals)

    @classmethod
    def zero(cls, num_tets):
        return cls([0] * (COORDS_PER_TET * num_tets))

    @classmethod
    def from_rows(cls, rows):
        return cls([x for row in rows for x in row])

    @property
    def num_tets(self):
        return len(self) // COORDS_PER_TET

    def tri(self, t, v):
        return self[10 * t + TRI + v]

    def quad(self, t, k):
        return self[10 * t + QUAD + k]

    def oct(self, t, k):
        return self[10 * t + OCT + k]

    def rows(self):
        return [list(self[10 * t:10 * t + 10]) for t in range(self.num_tets)]

    def support(self):
        return frozenset(i for i, x in enumerate(self) if x)

    def octagons(self):
        return sum(self[10 * t + OCT + k] for t in range(self.num_tets) for k in range(3))

    def __add__(self, other):
        if len(self) != len(other):
            raise DimensionMismatch("vectors over different triangulations")
        return SurfaceVector(a + b for a, b in zip(self, other))

    def __mul__(self, c):
        return SurfaceVector(c * a for a in self)

    __rmul__ = __mul__

    def __sub__(self, other):
        return SurfaceVector(a - b for a, b in zip(self, other))

    def __le__(self, other):
        return all(a <= b for a, b in zip(self, other))

    def to_json(self):
        return {"coords": self.rows()}

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __repr__(self):
        return "SurfaceVector(" + " / ".join(
            " ".join(map(str, r[:4])) + "|" + " ".join(map(str, r[4:7])) + "|"
            + " ".join(map(str, r[7:])) for r in self.rows()) + ")"


def parse_vector(text, num_tets=None):
    try:
        doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    rows = doc.get("coords") if isinstance(doc, dict) else None
    if not isinstance(rows, list) or not all(
            isinstance(r, list) and len(r) == COORDS_PER_TET for r in rows):
        raise ParseError("expected {'coords': [[10 integers] per tetrahedron]}")
    if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0
               for r in rows for x in r):
        raise ParseError("coordinates must be non-negative integers")
    vec = SurfaceVector.from_rows(rows)
    if num_tets is not None and vec.num_tets != num_tets:
        raise DimensionMismatch("vector and triangulation disagree on tetrahedra",
                                vector_tets=vec.num_tets, tets=num_tets)
    return vec


def load_vector(path, num_tets=None):
    with open(path, encoding="utf-8") as fh:
        return parse_vector(fh.read(), num_tets)


@dataclass(frozen=True)
class MatchingSystem:
    num_tets: int
    equations: tuple     # rows of length 10 * num_tets
    labels: tuple        # (tet, face, to_tet, to_face, corner) per row

    @property
    def ncols(self):
        return COORDS_PER_TET * self.num_tets

    def evaluate(self, vec):
        return [sum(a * x for a, x in zip(row, vec) if a) for row in self.equations]

    def to_json(self):
        return {"rows": len(self.equations), "cols": self.ncols,
                "equations": [list(r) for r in self.equations],
                "labels": [list(l) for l in self.labels]}


def matching_system(tri):
    """Three rows per glued face pair: arcs of each type agree across the gluing."""
    n = tri.num_tets
    rows, labels = [], []
    for g in tri.canonical_gluings():
        for v in face_vertices(g.face):
            row = [0] * (COORDS_PER_TET * n)
            for j in arc_contributors(g.face, v):
                row[10 * g.tet + j] += 1
            w = g.perm[v]
            for j in arc_contributors(g.to_face, w):
                row[10 * g.to_tet + j] -= 1
            rows.append(tuple(row))
            labels.append((g.tet, g.face, g.to_tet, g.to_face, v))
    return MatchingSystem(n, tuple(rows), tuple(labels))


@dataclass
class Admissibility:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"admissible": self.ok, "violations": self.violations}


def type_violations(vec):
    """Per-tetrahedron quad/oct conflicts and the octagon total."""
    out = []
    for t in range(vec.num_tets):
        used = [k for k in range(6) if vec[10 * t + QUAD + k]]
        if len(used) > 1:
            out.append({"kind": "disk_types", "tet": t,
                        "types": [("quad", k) if k < 3 else ("oct", k - 3) for k in used]})
    if vec.octagons() > 1:
        out.append({"kind": "octagon_total", "total": vec.octagons()})
    return out


def is_admissible(vec, sys):
    if len(vec) != sys.ncols:
        raise DimensionMismatch("vector length does not match system",
                                length=len(vec), expected=sys.ncols)
    violations = []
    neg = [i for i, x in enumerate(vec) if x < 0]
    if neg:
        violations.append({"kind": "negative", "coords": neg})
    for i, val in enumerate(sys.evaluate(vec)):
        if val:
            violations.append({"kind": "matching", "row": i, "label": list(sys.labels[i]),
                               "value": val})
    violations.extend(type_violations(vec))
    return Admissibility(not violations, violations)


def vertex_link(tri, per_vertex=False):
    """The vertex-linking sphere (or one link per vertex when ``per_vertex``)."""
    sk = tri.skeleton
    if sk.V != 1 and not per_vertex:
        raise NotOneVertex(f"triangulation has {sk.V} vertices", vertices=sk.V)
    links = []
    for orbit in sk.vertex_orbits:
        coords = [0] * (COORDS_PER_TET * tri.num_tets)
        for t, v in orbit:
            coords[10 * t + TRI + v] = 1
        links.append(SurfaceVector(coords))
    return links if per_vertex else links[0]


def weight(vec):
    return sum(vec)


def haken_sum(v1, v2):
    if len(v1) != len(v2):
        raise DimensionMismatch("vectors over different triangulations")
    s = v1 + v2
    bad = type_violations(s)
    if bad:
        b = bad[0]
        if b["kind"] == "disk_types":
            raise IncompatibleSummands(f"incompatible disk types in tet {b['tet']}",
                                       tet=b["tet"], constraint="disk_types")
        raise IncompatibleSummands("more than one octagon", constraint="octagon_total")
    return s
