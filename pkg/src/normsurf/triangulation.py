"""Gluing tables of closed triangulated 3-manifolds.

Conventions: face ``k`` of a tetrahedron is the face opposite vertex ``k``;
a gluing permutation is stored as the images of vertices ``(0, 1, 2, 3)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

from .errors import GluingError, ParseError

# edges of a tetrahedron, indexed 0..5
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}
EDGE_INDEX.update({(b, a): i for (a, b), i in list(EDGE_INDEX.items())})


def face_vertices(f):
    return tuple(v for v in range(4) if v != f)


def perm_sign(p):
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_inverse(p):
    inv = [0] * 4
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


@dataclass(frozen=True)
class Gluing:
    tet: int
    face: int
    to_tet: int
    to_face: int
    perm: tuple

    def to_json(self):
        return {"tet": self.tet, "face": self.face, "to_tet": self.to_tet,
                "to_face": self.to_face, "perm": list(self.perm)}


class Triangulation:
    """A validated closed triangulation.

    ``adj[t][f]`` is ``(t2, f2, perm)`` for every face, so the inverse gluing
    is stored explicitly as well.  Instances are immutable after construction.
    """

    def __init__(self, num_tets, gluings):
        if not isinstance(num_tets, int) or num_tets <= 0:
            raise GluingError("num_tets must be a positive integer", num_tets=num_tets)
        self.num_tets = num_tets
        self.gluings = tuple(gluings)
        adj = [[None] * 4 for _ in range(num_tets)]
        for g in self.gluings:
            _check_record(g, num_tets)
            if (g.tet, g.face) == (g.to_tet, g.to_face):
                raise GluingError("face glued to itself", tet=g.tet, face=g.face)
            for t, f in ((g.tet, g.face), (g.to_tet, g.to_face)):
                if adj[t][f] is not None:
                    raise GluingError(f"face {f} of tet {t} appears in two gluings",
                                      tet=t, face=f)
            adj[g.tet][g.face] = (g.to_tet, g.to_face, g.perm)
            adj[g.to_tet][g.to_face] = (g.tet, g.face, perm_inverse(g.perm))
        for t in range(num_tets):
            for f in range(4):
                if adj[t][f] is None:
                    raise GluingError(f"face {f} of tet {t} is unglued (only closed "
                                      "triangulations are accepted)", tet=t, face=f)
        self.adj = tuple(tuple(row) for row in adj)
        self._check_closed()

    # -- derived structure -------------------------------------------------
    @cached_property
    def skeleton(self):
        return compute_skeleton(self)

    def _check_closed(self):
        sk = compute_skeleton(self, check_euler=False)
        if sk.reversed_edges:
            raise GluingError("an edge is identified with itself in reverse",
                              edge_orbits=sorted(sk.reversed_edges))
        for i, chi in enumerate(sk.vertex_link_euler):
            if chi != 2:
                raise GluingError(f"vertex {i} link has Euler characteristic {chi}; "
                                  "not a closed 3-manifold", vertex=i, link_euler=chi)
        self.__dict__["skeleton"] = sk
        sk.check_euler()

    def canonical_gluings(self):
        """Each face pair once, from the lexicographically smaller side."""
        out = []
        for t in range(self.num_tets):
            for f in range(4):
                t2, f2, p = self.adj[t][f]
                if (t, f) < (t2, f2):
                    out.append(Gluing(t, f, t2, f2, tuple(p)))
        return out

    def to_json(self):
        return {"tets": self.num_tets,
                "gluings": [g.to_json() for g in self.canonical_gluings()]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __eq__(self, other):
        return isinstance(other, Triangulation) and self.dumps() == other.dumps()

    def __hash__(self):
        return hash(self.dumps())

    def __repr__(self):
        return f"Triangulation(tets={self.num_tets})"


def _check_record(g, n):
    for name in ("tet", "to_tet"):
        v = getattr(g, name)
        if not (0 <= v < n):
            raise GluingError(f"{name}={v} out of range", record=g.to_json())
    for name in ("face", "to_face"):
        v = getattr(g, name)
        if not (0 <= v < 4):
            raise GluingError(f"{name}={v} out of range", record=g.to_json())
    if sorted(g.perm) != [0, 1, 2, 3]:
        raise GluingError("perm is not a permutation of 0..3", record=g.to_json())
    if g.perm[g.face] != g.to_face:
        raise GluingError("perm does not map face onto to_face", record=g.to_json())


def parse_triangulation(text):
    """Parse and validate a document in the triangulation JSON format."""
    try:
        doc = json.loads(text) if isinstance(text, (str, bytes)) else text
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "tets" not in doc or "gluings" not in doc:
        raise ParseError("expected an object with 'tets' and 'gluings'")
    n = doc["tets"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ParseError("'tets' must be a positive integer")
    recs = doc["gluings"]
    if not isinstance(recs, list):
        raise ParseError("'gluings' must be a list")
    gluings = []
    for r in recs:
        if not isinstance(r, dict):
            raise ParseError("gluing records must be objects")
        try:
            vals = [r[k] for k in ("tet", "face", "to_tet", "to_face")]
            perm = r["perm"]
        except KeyError as exc:
            raise ParseError(f"gluing record missing key {exc}") from None
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
            raise ParseError("gluing indices must be integers")
        if (not isinstance(perm, list) or len(perm) != 4
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in perm)):
            raise ParseError("perm must be a list of 4 integers")
        gluings.append(Gluing(*vals, tuple(perm)))
    if len(gluings) != 2 * n:
        # duplicates are reported as gluing errors, plain miscounts too
        tri_error = None
        try:
            Triangulation(n, gluings)
        except GluingError as exc:
            tri_error = exc
        if tri_error is not None:
            raise tri_error
        raise GluingError(f"expected {2 * n} gluing records, got {len(gluings)}")
    return Triangulation(n, gluings)


def load_triangulation(path):
    with open(path, encoding="utf-8") as fh:
        return parse_triangulation(fh.read())


# -- skeleton ---------------------------------------------------------------

class _UF:
    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, x):
        root, par = x, 0
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression with parity
        while self.parent[x] != root:
            nxt, p = self.parent[x], self.parity[x]
            self.parent[x], self.parity[x] = root, par
            par ^= p
            x = nxt
        return root, par

    def union(self, a, b, rel=0):
        """Merge so that parity(a) ^ parity(b) == rel; False on conflict."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        if ra < rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ rel
        return True


def _orbits(uf, n):
    groups = {}
    for x in range(n):
        r, p = uf.find(x)
        groups.setdefault(r, []).append((x, p))
    return sorted(groups.values(), key=lambda g: g[0][0])


@dataclass(frozen=True)
class Skeleton:
    num_tets: int
    vertex_orbits: tuple        # tuple of tuples of (tet, vertex)
    edge_orbits: tuple          # tuple of tuples of (tet, edge_index, sign)
    face_pairs: tuple           # tuple of ((tet, face), (tet, face))
    vertex_of: dict             # (tet, vertex) -> orbit id
    edge_of: dict               # (tet, edge_index) -> (orbit id, sign)
    vertex_link_euler: tuple
    reversed_edges: frozenset

    @property
    def V(self):
        return len(self.vertex_orbits)

    @property
    def E(self):
        return len(self.edge_orbits)

    @property
    def F(self):
        return len(self.face_pairs)

    def check_euler(self):
        if self.V - self.E + self.F - self.num_tets != 0:
            raise AssertionError("V - E + F - T != 0")

    def to_json(self):
        return {
            "V": self.V, "E": self.E, "F": self.F, "T": self.num_tets,
            "vertex_orbits": [[list(c) for c in o] for o in self.vertex_orbits],
            "edge_orbits": [[list(c) for c in o] for o in self.edge_orbits],
            "face_pairs": [[list(a), list(b)] for a, b in self.face_pairs],
        }


def compute_skeleton(tri, check_euler=True):
    """Vertex/edge orbits by closing corner identifications under the gluings."""
    n = tri.num_tets
    vuf = _UF(4 * n)
    euf = _UF(6 * n)
    reversed_roots = set()
    for t in range(n):
        for f in range(4):
            t2, f2, p = tri.adj[t][f]
            fv = face_vertices(f)
            for v in fv:
                vuf.union(4 * t + v, 4 * t2 + p[v])
            for i in range(3):
                for j in range(i + 1, 3):
                    a, b = fv[i], fv[j]
                    e1 = EDGE_INDEX[(a, b)]
                    e2 = EDGE_INDEX[(p[a], p[b])]
                    rel = 0 if p[a] < p[b] else 1
                    if not euf.union(6 * t + e1, 6 * t2 + e2, rel):
                        reversed_roots.add(6 * t + e1)
    vorb = _orbits(vuf, 4 * n)
    eorb = _orbits(euf, 6 * n)
    vertex_orbits = tuple(tuple(divmod(x, 4) for x, _ in o) for o in vorb)
    edge_orbits = tuple(tuple((x // 6, x % 6, 1 - 2 * p) for x, p in o) for o in eorb)
    vertex_of = {c: i for i, o in enumerate(vertex_orbits) for c in o}
    edge_of = {(t, e): (i, s) for i, o in enumerate(edge_orbits) for t, e, s in o}
    reversed_edges = frozenset(edge_of[divmod(x, 6)][0] for x in reversed_roots)

    face_pairs = tuple(((g.tet, g.face), (g.to_tet, g.to_face))
                       for g in tri.canonical_gluings())

    # Euler characteristic of each vertex link: triangles are corners, link
    # edges are face-corners glued in pairs, link vertices are edge ends.
    nv = len(vertex_orbits)
    tris = [0] * nv
    corners = [0] * nv
    ends = [set() for _ in range(nv)]
    for (t, v), i in vertex_of.items():
        tris[i] += 1
        corners[i] += 3
    for (t, e), (eo, s) in edge_of.items():
        a, b = EDGES[e]
        # end of the edge orbit at this vertex, in orbit direction
        ends[vertex_of[(t, a)]].add((eo, 0 if s > 0 else 1))
        ends[vertex_of[(t, b)]].add((eo, 1 if s > 0 else 0))
    link_chi = tuple(len(ends[i]) - corners[i] // 2 + tris[i] for i in range(nv))
    sk = Skeleton(n, vertex_orbits, edge_orbits, face_pairs, vertex_of, edge_of,
                  link_chi, reversed_edges)
    if check_euler:
        sk.check_euler()
    return sk


def is_orientable(tri):
    """2-colour the tetrahedra: o(t2) = -sign(perm) * o(t) across every gluing."""
    colour = [0] * tri.num_tets
    colour[0] = 1
    stack = [0]
    seen_all = {0}
    while stack:
        t = stack.pop()
        for f in range(4):
            t2, f2, p = tri.adj[t][f]
            want = -perm_sign(p) * colour[t]
            if colour[t2] == 0:
                colour[t2] = want
                seen_all.add(t2)
                stack.append(t2)
            elif colour[t2] != want:
                return False
    return True


def is_one_vertex(tri):
    return tri.skeleton.V == 1


def is_connected(tri):
    seen = {0}
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            t2 = tri.adj[t][f][0]
            if t2 not in seen:
                seen.add(t2)
                stack.append(t2)
    return len(seen) == tri.num_tets
