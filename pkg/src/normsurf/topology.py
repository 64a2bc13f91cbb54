"""Cellular reconstruction of normal / almost normal surfaces.

Stacking convention: inside a tetrahedron, copies of a disk type are ordered
by distance from a reference vertex.  Triangle copies nest in their corner
(copy 0 closest to the vertex); quad copies are ordered from the side of the
pair containing vertex 0; the single octagon sits between the triangle
stacks.  In a face, arcs cutting off corner ``v`` are numbered from ``v``
outwards: triangles first, then the quad or octagon arcs.  An arc at
position ``j`` is glued to the arc at position ``j`` of the matching type
across the face gluing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .coords import OCT, QUAD, TRI, SurfaceVector, partner, separates, vertex_link
from .errors import NotATorus, OpenArcs, Unsupported
from .intlinalg import integer_kernel, quotient_map, solve_row_combination
from .triangulation import EDGE_INDEX, EDGES, face_vertices


# -- linear Euler characteristic -------------------------------------------------

def edge_crossings(vec, t, a, b):
    """Number of pieces of ``vec`` in tet ``t`` meeting the edge ``ab``."""
    n = vec.tri(t, a) + vec.tri(t, b)
    for k in range(3):
        if separates(k, a, b):
            n += vec.quad(t, k) + vec.oct(t, k)
        else:
            n += 2 * vec.oct(t, k)
    return n


def euler_linear(tri, vec):
    """chi = V - E + F read off the coordinates (closed surfaces only)."""
    faces = sum(vec)
    arcs = 0
    for t in range(tri.num_tets):
        arcs += 3 * sum(vec.tri(t, v) for v in range(4))
        arcs += 4 * sum(vec.quad(t, k) for k in range(3))
        arcs += 8 * sum(vec.oct(t, k) for k in range(3))
    verts = 0
    for orbit in tri.skeleton.edge_orbits:
        t, e, _ = orbit[0]
        verts += edge_crossings(vec, t, *EDGES[e])
    chi = Fraction(verts) - Fraction(arcs, 2) + faces
    return int(chi) if chi.denominator == 1 else chi


# -- pieces ----------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    tet: int
    kind: str      # "tri" | "quad" | "oct"
    type: int      # corner for triangles, k for quads / octagons
    copy: int

    @property
    def slot(self):
        return 10 * self.tet + {"tri": TRI, "quad": QUAD, "oct": OCT}[self.kind] + self.type


def _arc_position(vec, t, f, v, piece):
    """Position (from corner v) of ``piece``'s arc of type v in face f."""
    if piece.kind == "tri":
        return piece.copy
    base = vec.tri(t, v)
    if piece.kind == "oct":
        return base
    k = piece.type
    n = vec.quad(t, k)
    dist = piece.copy if v in QUAD_ZERO_SIDE[k] else n - 1 - piece.copy
    return base + dist


QUAD_ZERO_SIDE = tuple(frozenset((0, k + 1)) for k in range(3))


def _piece_arcs(piece):
    """(face, corner) pairs of the arcs of a piece."""
    if piece.kind == "tri":
        v = piece.type
        return [(f, v) for f in range(4) if f != v]
    k = piece.type
    if piece.kind == "quad":
        return [(f, partner(k, f)) for f in range(4)]
    out = []
    for f in range(4):
        p = partner(k, f)
        for v in face_vertices(f):
            if v != p:
                out.append((f, v))
    return out


def _local_point(vec, t, v, a, j):
    """Point on edge {v, a} of tet t, j steps from v; keyed from the lower vertex."""
    n = edge_crossings(vec, t, v, a)
    e = EDGE_INDEX[(v, a)]
    idx = j if v < a else n - 1 - j
    return (t, e, idx)


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.p[rb] = ra


@dataclass
class LocalArc:
    piece: int
    tet: int
    face: int
    corner: int
    pos: int
    ends: tuple        # (other vertex a, other vertex b) with a < b
    points: tuple      # local point ids for (a-end, b-end)


class CarriedSurface:
    """Cell complex of a surface given by coordinates.

    ``arcs`` are local (one per piece-face incidence); ``arc_class[i]`` names
    the glued class, ``mate[i]`` the local arc on the other side (or None on
    the boundary).  Point classes are global vertices of the cellulation.
    """

    def __init__(self, tri, vec, allow_boundary=False):
        self.tri = tri
        self.vec = SurfaceVector(vec)
        vec = self.vec
        self.pieces = []
        for t in range(tri.num_tets):
            for v in range(4):
                self.pieces += [Piece(t, "tri", v, i) for i in range(vec.tri(t, v))]
            for k in range(3):
                self.pieces += [Piece(t, "quad", k, i) for i in range(vec.quad(t, k))]
            for k in range(3):
                self.pieces += [Piece(t, "oct", k, i) for i in range(vec.oct(t, k))]
        self.arcs = []
        self.piece_arcs = []
        by_slot = {}
        for pi, pc in enumerate(self.pieces):
            ids = []
            for f, v in _piece_arcs(pc):
                j = _arc_position(vec, pc.tet, f, v, pc)
                a, b = (x for x in face_vertices(f) if x != v)
                pts = (_local_point(vec, pc.tet, v, a, j), _local_point(vec, pc.tet, v, b, j))
                arc = LocalArc(pi, pc.tet, f, v, j, (a, b), pts)
                ids.append(len(self.arcs))
                by_slot[(pc.tet, f, v, j)] = len(self.arcs)
                self.arcs.append(arc)
            self.piece_arcs.append(ids)
        self._by_slot = by_slot

        # glue arcs across faces
        self.mate = [None] * len(self.arcs)
        for i, arc in enumerate(self.arcs):
            t2, f2, p = tri.adj[arc.tet][arc.face]
            other = by_slot.get((t2, f2, p[arc.corner], arc.pos))
            if other is None:
                if not allow_boundary:
                    raise AssertionError(f"unmatched arc {arc}; vector not admissible?")
                continue
            self.mate[i] = other
        self.boundary_arcs = [i for i, m in enumerate(self.mate) if m is None]

        # arc classes: canonical side is the smaller local arc id
        self.arc_class = [None] * len(self.arcs)
        self.class_sides = []
        for i, m in enumerate(self.mate):
            if self.arc_class[i] is not None:
                continue
            cid = len(self.class_sides)
            self.arc_class[i] = cid
            if m is None:
                self.class_sides.append((i, None))
            else:
                self.arc_class[m] = cid
                self.class_sides.append((i, m))

        # global points and the transport of arc endpoints across gluings
        uf = _UF()
        for arc in self.arcs:
            for q in arc.points:
                uf.find(q)
        for i, m in enumerate(self.mate):
            if m is None or m < i:
                continue
            for q_here, q_there in self._matched_points(i, m):
                uf.union(q_here, q_there)
        roots = sorted({uf.find(q) for arc in self.arcs for q in arc.points})
        rid = {r: n for n, r in enumerate(roots)}
        self.point_class = {q: rid[uf.find(q)] for arc in self.arcs for q in arc.points}
        self.num_points = len(roots)

        # boundary cycle of each piece as (local arc, direction) with
        # direction +1 when traversed from ends[0] to ends[1]
        self.cycles = [self._walk(ids) for ids in self.piece_arcs]

        # components
        cuf = _UF()
        for pi in range(len(self.pieces)):
            cuf.find(pi)
        for i, m in enumerate(self.mate):
            if m is not None:
                cuf.union(self.arcs[i].piece, self.arcs[m].piece)
        croots = sorted({cuf.find(pi) for pi in range(len(self.pieces))})
        cid = {r: n for n, r in enumerate(croots)}
        self.component_map = [cid[cuf.find(pi)] for pi in range(len(self.pieces))]
        self.num_components = len(croots)

    def _matched_points(self, i, m):
        """Pairs (point of arc i, point of arc m) identified by the gluing."""
        a, b = self.arcs[i], self.arcs[m]
        _, _, p = self.tri.adj[a.tet][a.face]
        out = []
        for end, q in zip(a.ends, a.points):
            img = p[end]
            out.append((q, b.points[b.ends.index(img)]))
        return out

    def _walk(self, ids):
        # adjacency via shared local points
        at_point = {}
        for i in ids:
            for q in self.arcs[i].points:
                at_point.setdefault(q, []).append(i)
        start = ids[0]
        cycle = [(start, 1)]
        q = self.arcs[start].points[1]
        prev = start
        while True:
            nxt = [i for i in at_point[q] if i != prev]
            if len(nxt) != 1:
                raise AssertionError("piece boundary is not a cycle")
            i = nxt[0]
            if i == start:
                break
            pts = self.arcs[i].points
            d = 1 if pts[0] == q else -1
            cycle.append((i, d))
            q = pts[1] if d == 1 else pts[0]
            prev = i
        if len(cycle) != len(ids):
            raise AssertionError("piece boundary is not a single cycle")
        return cycle

    # orientation of an arc class: canonical side, ends[0] -> ends[1]
    def class_direction(self, local_arc, d):
        """Sign of traversing ``local_arc`` in direction d w.r.t. its class."""
        cid = self.arc_class[local_arc]
        side0, side1 = self.class_sides[cid]
        if local_arc == side0:
            return d
        a0 = self.arcs[side0]
        _, _, p = self.tri.adj[a0.tet][a0.face]
        b = self.arcs[local_arc]
        same = (p[a0.ends[0]] == b.ends[0])
        return d if same else -d

    def class_tail_point(self, cid):
        """Global point class at the tail of an arc class."""
        side0, _ = self.class_sides[cid]
        return self.point_class[self.arcs[side0].points[0]]

    def class_head_point(self, cid):
        side0, _ = self.class_sides[cid]
        return self.point_class[self.arcs[side0].points[1]]

    def component_vector(self, c):
        out = [0] * len(self.vec)
        for pi, pc in enumerate(self.pieces):
            if self.component_map[pi] == c:
                out[pc.slot] += 1
        return SurfaceVector(out)

    @cached_property
    def orientation(self):
        """Per-piece signs, or None per component that is non-orientable."""
        sign = [0] * len(self.pieces)
        bad = set()
        for root in range(len(self.pieces)):
            if sign[root]:
                continue
            sign[root] = 1
            stack = [root]
            while stack:
                pi = stack.pop()
                for i, d in self.cycles[pi]:
                    m = self.mate[i]
                    if m is None:
                        continue
                    pj = self.arcs[m].piece
                    dm = next(dd for ii, dd in self.cycles[pj] if ii == m)
                    here = self.class_direction(i, d) * sign[pi]
                    need = -here * self.class_direction(m, dm)
                    # sign[pj] * class_direction(m, dm) must equal -here
                    if sign[pj] == 0:
                        sign[pj] = need
                        stack.append(pj)
                    elif sign[pj] != need:
                        bad.add(self.component_map[pi])
        return sign, bad

    def component_euler(self, c):
        pieces = [pi for pi in range(len(self.pieces)) if self.component_map[pi] == c]
        arcs = {self.arc_class[i] for pi in pieces for i in self.piece_arcs[pi]}
        pts = {self.point_class[q] for pi in pieces for i in self.piece_arcs[pi]
               for q in self.arcs[i].points}
        return len(pts) - len(arcs) + len(pieces)

    def boundary_curves(self, c=None):
        """Boundary circles as lists of boundary arc classes, in walking order."""
        barcs = [i for i in self.boundary_arcs
                 if c is None or self.component_map[self.arcs[i].piece] == c]
        by_point = {}
        for i in barcs:
            for q in self.arcs[i].points:
                by_point.setdefault(self.point_class[q], []).append(i)
        seen, curves = set(), []
        for i in barcs:
            if i in seen:
                continue
            curve, cur = [], i
            q = self.point_class[self.arcs[i].points[1]]
            while cur not in seen:
                seen.add(cur)
                curve.append(cur)
                nxt = [j for j in by_point.get(q, []) if j not in seen]
                if not nxt:
                    break
                cur = nxt[0]
                pts = [self.point_class[x] for x in self.arcs[cur].points]
                q = pts[1] if pts[0] == q else pts[0]
            curves.append(curve)
        return curves


def reconstruct(tri, vec, allow_boundary=False):
    return CarriedSurface(tri, vec, allow_boundary)


# -- classification ----------------------------------------------------------------

@dataclass
class ComponentReport:
    index: int
    euler: int
    orientable: bool
    genus: int
    kind: str
    is_vertex_linking: bool
    boundary_components: int = 0
    vector: SurfaceVector = None

    def to_json(self):
        return {"index": self.index, "euler": self.euler, "orientable": self.orientable,
                "genus": self.genus, "kind": self.kind,
                "is_vertex_linking": self.is_vertex_linking,
                "boundary_components": self.boundary_components,
                "coords": self.vector.rows() if self.vector is not None else None}


def _kind(chi, orientable, nbdry):
    if nbdry:
        if chi == 1 and orientable and nbdry == 1:
            return "disk"
        return "bounded"
    if orientable:
        if chi == 2:
            return "sphere"
        if chi == 0:
            return "torus"
        return f"higher_genus({(2 - chi) // 2})"
    return f"nonorientable({2 - chi})"


def classify_components(surface):
    links = set()
    if surface.tri is not None:
        links = {tuple(l) for l in vertex_link(surface.tri, per_vertex=True)}
    _, bad = surface.orientation
    out = []
    for c in range(surface.num_components):
        chi = surface.component_euler(c)
        orient = c not in bad
        nb = len(surface.boundary_curves(c)) if surface.boundary_arcs else 0
        if nb:
            genus = (2 - chi - nb) // 2 if orient else 2 - chi - nb
        else:
            genus = (2 - chi) // 2 if orient else 2 - chi
        vec = surface.component_vector(c)
        out.append(ComponentReport(c, chi, orient, genus, _kind(chi, orient, nb),
                                   tuple(vec) in links, nb, vec))
    return out


def classify_vector(tri, vec):
    return classify_components(reconstruct(tri, vec))


def is_torus(tri, vec):
    reps = classify_vector(tri, vec)
    return len(reps) == 1 and reps[0].kind == "torus"


# -- homology of a component ----------------------------------------------------

class ComponentHomology:
    """First homology of one component via the primal cell complex."""

    def __init__(self, surface, c):
        self.surface = surface
        self.component = c
        s = surface
        self.pieces = [pi for pi in range(len(s.pieces)) if s.component_map[pi] == c]
        arcs = sorted({s.arc_class[i] for pi in self.pieces for i in s.piece_arcs[pi]})
        pts = sorted({s.point_class[q] for pi in self.pieces for i in s.piece_arcs[pi]
                      for q in s.arcs[i].points})
        self.arc_index = {a: n for n, a in enumerate(arcs)}
        self.point_index = {p: n for n, p in enumerate(pts)}
        m = len(arcs)
        d1 = [[0] * m for _ in pts]
        for a, col in self.arc_index.items():
            d1[self.point_index[s.class_head_point(a)]][col] += 1
            d1[self.point_index[s.class_tail_point(a)]][col] -= 1
        self.cycles_basis = integer_kernel(d1, m) if pts else \
            [[int(i == j) for j in range(m)] for i in range(m)]
        rel = []
        for pi in self.pieces:
            row = [0] * m
            for i, d in s.cycles[pi]:
                row[self.arc_index[s.arc_class[i]]] += s.class_direction(i, d)
            y = self._coords(row)
            rel.append([int(x) for x in y])
        k = len(self.cycles_basis)
        self.v, self.invariants = quotient_map([r for r in rel if any(r)], k)
        self.k = k

    def _coords(self, chain):
        y = solve_row_combination(self.cycles_basis, chain)
        if y is None or any(x.denominator != 1 for x in y):
            raise OpenArcs("chain is not a closed cycle")
        return y

    @property
    def free_rank(self):
        return sum(1 for d in self.invariants if d == 0)

    def class_of(self, chain):
        """(free coordinates, torsion coordinates) of a 1-cycle."""
        y = [int(x) for x in self._coords(chain)]
        z = [sum(y[i] * self.v[i][j] for i in range(self.k)) for j in range(self.k)]
        free = tuple(z[j] for j, d in enumerate(self.invariants) if d == 0)
        tors = tuple(z[j] % d for j, d in enumerate(self.invariants) if d > 1)
        return free, tors

    def generator(self, j):
        """A 1-cycle representing the j-th free basis class."""
        from .intlinalg import inverse_unimodular
        free_cols = [c for c, d in enumerate(self.invariants) if d == 0]
        vinv = inverse_unimodular(self.v)
        y = vinv[free_cols[j]]
        return [sum(y[i] * self.cycles_basis[i][a] for i in range(self.k))
                for a in range(len(self.arc_index))]


# -- intersections -----------------------------------------------------------------

def _depth_key(i, n, outer):
    """Order key along an edge: depth from the nearer end, the inner surface closest."""
    if 2 * i + 1 < n:
        return (0, i, outer)
    if 2 * i + 1 == n:
        return (1, 0, outer)
    return (2, -(n - 1 - i), -outer)


def _merged_ranks(s1, s2, outer):
    """Local rank of every point of both surfaces on each edge of each tet.

    Returns ``{(which, t, e, idx): rank}`` with ranks counted from the
    tet's lower edge vertex, and ``{(t, e): total}``.
    """
    tri = s1.tri
    rank, total = {}, {}
    for orbit in tri.skeleton.edge_orbits:
        t0, e0, _ = orbit[0]
        a, b = EDGES[e0]
        ns = [edge_crossings(s.vec, t0, a, b) for s in (s1, s2)]
        keys = sorted(_depth_key(i, ns[w], outer[w]) + (w, i)
                      for w in range(2) for i in range(ns[w]))
        rep = {(k[-2], k[-1]): r for r, k in enumerate(keys)}
        big = len(keys)
        for t, e, sign in orbit:
            total[(t, e)] = big
            for w in range(2):
                n = ns[w]
                for idx in range(n):
                    i = idx if sign > 0 else n - 1 - idx
                    r = rep[(w, i)]
                    rank[(w, t, e, idx)] = r if sign > 0 else big - 1 - r
    return rank, total


def _boundary_param(f, e_local, r, big):
    """Position on the boundary circle of face f as a comparable tuple."""
    x, y, z = face_vertices(f)
    edge = EDGES[e_local]
    if edge == (x, y):
        return (0, r)
    if edge == (y, z):
        return (1, r)
    return (2, big - 1 - r)


def _between(p, lo, hi):
    return lo < p < hi


@dataclass
class DoubleCurve:
    index: int
    pair: tuple                  # (i, j) surface indices
    nodes: list                  # crossing node ids in order
    segments: list               # (tet, piece_i, piece_j) per segment
    components: tuple = ()       # component of each surface it lies in
    classes: dict = field(default_factory=dict)


@dataclass
class IntersectionReport:
    double_curve_count: int
    triple_points: int
    raw: tuple
    reduced: bool
    curves: list

    @property
    def complexity(self):
        return (self.triple_points, self.double_curve_count)

    def to_json(self):
        return {"double_curve_count": self.double_curve_count,
                "triple_points": self.triple_points,
                "complexity": list(self.complexity),
                "raw_complexity": list(self.raw),
                "reduced": self.reduced,
                "triple_point_count": "conservative",
                "per_curve": [
                    {"index": c.index, "surfaces": list(c.pair),
                     "components": list(c.components),
                     "length": len(c.nodes),
                     "classes": {str(k): v for k, v in sorted(c.classes.items())},
                     "meridian": "unknown"} for c in self.curves]}


class PairIntersection:
    """Double curves of two carried surfaces under the stacking convention.

    Points of both surfaces on an edge are merged by depth from the nearer
    end of the edge; at equal depth the canonically smaller surface sits
    closer to the end.  Arcs in a face cross when their endpoints alternate
    around the face boundary.
    """

    def __init__(self, s1, s2):
        self.s = (s1, s2)
        from .hilbert import canonical_key
        k1, k2 = canonical_key(s1.vec), canonical_key(s2.vec)
        outer = (0, 1) if k1 <= k2 else (1, 0)
        self.rank, self.total = _merged_ranks(s1, s2, outer)
        self._crossings()
        self._trace()

    def _param(self, which, arc):
        out = []
        for t, e, idx in arc.points:
            out.append(_boundary_param(arc.face, e, self.rank[(which, t, e, idx)],
                                       self.total[(t, e)]))
        return out

    def _crossings(self):
        s1, s2 = self.s
        by_face = ({}, {})
        for w, s in enumerate(self.s):
            for i, arc in enumerate(s.arcs):
                by_face[w].setdefault((arc.tet, arc.face), []).append(i)
        self.node_ids = {}
        self.tet_hits = {}     # (tet, piece1, piece2) -> list of (node, arc1, arc2)
        for key, arcs1 in sorted(by_face[0].items()):
            arcs2 = by_face[1].get(key)
            if not arcs2:
                continue
            t, f = key
            for i in arcs1:
                p1 = sorted(self._param(0, s1.arcs[i]))
                for j in arcs2:
                    q = self._param(1, s2.arcs[j])
                    inside = sum(1 for x in q if _between(x, p1[0], p1[1]))
                    if inside != 1:
                        continue
                    c1, c2 = s1.arc_class[i], s2.arc_class[j]
                    node = self.node_ids.setdefault((c1, c2), len(self.node_ids))
                    hk = (t, s1.arcs[i].piece, s2.arcs[j].piece)
                    self.tet_hits.setdefault(hk, []).append((node, i, j))

    def _order_along(self, which, piece, hits):
        s = self.s[which]
        cyc = s.cycles[piece]
        rank = {a: n for n, (a, _) in enumerate(cyc)}
        dirs = dict(cyc)

        def key(h):
            node, i, j = h
            a = i if which == 0 else j
            other = j if which == 0 else i
            # order along the arc: compare with the other hits on the same arc
            sub = 0
            for h2 in hits:
                a2 = h2[1] if which == 0 else h2[2]
                o2 = h2[2] if which == 0 else h2[1]
                if a2 == a and o2 != other and self._first_on(which, a, o2, other, dirs[a]):
                    sub += 1
            return (rank[a], sub)
        return sorted(hits, key=key)

    def _first_on(self, which, a, b1, b2, d):
        """True if, walking arc a in direction d, chord b1 is met before chord b2."""
        pa = self._param(which, self.s[which].arcs[a])
        if d < 0:
            pa = pa[::-1]
        ob = 1 - which
        q2 = self._param(ob, self.s[ob].arcs[b2])
        q1 = self._param(ob, self.s[ob].arcs[b1])
        # b1 is first iff the start of a and chord b2 lie on opposite sides of b1
        lo, hi = sorted(q1)
        start_in = _between(pa[0], lo, hi)
        b2_in = _between(q2[0], lo, hi)
        return start_in != b2_in

    def _trace(self):
        edges = []
        for (t, p1, p2), hits in sorted(self.tet_hits.items()):
            if len(hits) % 2:
                raise AssertionError("odd number of crossings between two disks")
            seq = self._order_along(0, p1, hits)
            pairs = [(seq[i][0], seq[i + 1][0]) for i in range(0, len(seq), 2)]
            if len(seq) > 2:
                alt = [(seq[i][0], seq[(i + 1) % len(seq)][0])
                       for i in range(1, len(seq), 2)]
                seq2 = [h[0] for h in self._order_along(1, p2, hits)]
                if _crossing_pairing(pairs, seq2) and not _crossing_pairing(alt, seq2):
                    pairs = alt
            for a, b in pairs:
                edges.append((a, b, (t, p1, p2)))
        self.curves = []
        at = {}
        for eid, (a, b, _) in enumerate(edges):
            at.setdefault(a, []).append(eid)
            at.setdefault(b, []).append(eid)
        for node, es in at.items():
            if len(es) != 2:
                raise AssertionError("double curve node without degree 2")
        used = set()
        for start in sorted(at):
            if at[start][0] in used:
                continue
            nodes, segs = [], []
            cur, eid = start, at[start][0]
            while eid not in used:
                used.add(eid)
                a, b, seg = edges[eid]
                nodes.append(cur)
                segs.append(seg)
                cur = b if a == cur else a
                e0, e1 = at[cur]
                eid = e1 if e0 == eid else e0
            self.curves.append((nodes, segs))

    def chain_in(self, which, curve):
        """The curve pushed onto the 1-skeleton of surface ``which``."""
        s = self.s[which]
        nodes, segs = curve
        inv = {v: k for k, v in self.node_ids.items()}
        chain = {}
        n = len(nodes)
        for idx, seg in enumerate(segs):
            a_node, b_node = nodes[idx], nodes[(idx + 1) % n]
            t = seg[0]
            piece = seg[1] if which == 0 else seg[2]
            ca, cb = inv[a_node][which], inv[b_node][which]
            la = self._local_in(s, piece, ca)
            lb = self._local_in(s, piece, cb)
            for arc, sign in self._path(s, piece, la, lb):
                cid = s.arc_class[arc]
                chain[cid] = chain.get(cid, 0) + sign
        return chain

    @staticmethod
    def _local_in(s, piece, cid):
        for i in s.piece_arcs[piece]:
            if s.arc_class[i] == cid:
                return i
        raise AssertionError("arc class not on piece")

    @staticmethod
    def _path(s, piece, la, lb):
        """Arcs walked along the piece boundary from tail(la) to tail(lb)."""
        cyc = s.cycles[piece]
        idx = {a: n for n, (a, _) in enumerate(cyc)}

        def tail_local_index(arc):
            # position in the cycle where the class tail is reached
            n = idx[arc]
            _, d = cyc[n]
            forward_is_tail_first = s.class_direction(arc, d) > 0
            return n if forward_is_tail_first else (n + 1) % len(cyc)

        start, stop = tail_local_index(la), tail_local_index(lb)
        out = []
        k = start
        while k != stop:
            arc, d = cyc[k]
            out.append((arc, s.class_direction(arc, d)))
            k = (k + 1) % len(cyc)
        return out


def _crossing_pairing(pairs, cyclic):
    rank = {x: n for n, x in enumerate(cyclic)}
    iv = [tuple(sorted((rank[a], rank[b]))) for a, b in pairs]
    for i in range(len(iv)):
        for j in range(i + 1, len(iv)):
            a, b = iv[i]
            c, d = iv[j]
            if (a < c < b) != (a < d < b):
                return True
    return False


def triple_point_count(vecs):
    """Sum over tetrahedra of multiplicity products of three pairwise distinct quad/oct types."""
    if len(vecs) < 3:
        return 0
    a, b, c = vecs
    total = 0
    for t in range(a.num_tets):
        for i in range(6):
            for j in range(6):
                for k in range(6):
                    if len({i % 3, j % 3, k % 3}) == 3:
                        total += a[10 * t + 4 + i] * b[10 * t + 4 + j] * c[10 * t + 4 + k]
    return total


def intersection_complexity(tri, vecs, with_classes=True):
    vecs = [SurfaceVector(v) for v in vecs]
    if not 2 <= len(vecs) <= 3:
        raise Unsupported("intersection_complexity takes 2 or 3 surfaces", count=len(vecs))
    surfaces = [reconstruct(tri, v) for v in vecs]
    curves = []
    raw_d = 0
    red_d = 0
    reduced = False
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            from .hilbert import canonical_key
            lo, hi = (i, j) if canonical_key(vecs[i]) <= canonical_key(vecs[j]) else (j, i)
            pi = PairIntersection(surfaces[lo], surfaces[hi])
            raw_d += len(pi.curves)
            if vecs[i] == vecs[j]:
                reduced = reduced or bool(pi.curves)
                continue
            red_d += len(pi.curves)
            for cv in pi.curves:
                dc = DoubleCurve(len(curves), (i, j), cv[0], cv[1])
                comps = {}
                for w, si in ((0, lo), (1, hi)):
                    s = surfaces[si]
                    piece = cv[1][0][1 + w]
                    comp = s.component_map[piece]
                    comps[si] = comp
                    if with_classes:
                        h = _homology(s, comp)
                        chain = pi.chain_in(w, cv)
                        free, tors = h.class_of(_dense(chain, h))
                        free = _unsigned(free)
                        dc.classes[si] = {"free": list(free), "torsion": list(tors),
                                          "essential": any(free) or any(tors)}
                comps = [comps[i], comps[j]]
                dc.components = tuple(comps)
                curves.append(dc)
    t = triple_point_count(vecs) if len(vecs) == 3 else 0
    return IntersectionReport(red_d, t, (t, raw_d), reduced, curves)


def _unsigned(cls):
    """Classes of unoriented curves: first nonzero coordinate made positive."""
    for x in cls:
        if x:
            return tuple(-y for y in cls) if x < 0 else tuple(cls)
    return tuple(cls)


def _homology(surface, comp):
    cache = surface.__dict__.setdefault("_homology_cache", {})
    if comp not in cache:
        cache[comp] = ComponentHomology(surface, comp)
    return cache[comp]


def _dense(chain, h):
    row = [0] * len(h.arc_index)
    for cid, v in chain.items():
        row[h.arc_index[cid]] += v
    return row


@dataclass
class CurveClass:
    p: int
    q: int
    essential: bool
    meridian: str = "unknown"

    def to_json(self):
        return {"class": [self.p, self.q], "essential": self.essential,
                "meridian": self.meridian}


def curve_class(surface, component, chain):
    """Homology class of a closed 1-chain in a torus component.

    ``chain`` maps arc-class ids to integer multiplicities (as produced by
    :meth:`PairIntersection.chain_in`) or is a dense list over the
    component's arcs.
    """
    reps = classify_components(surface)
    if reps[component].kind != "torus":
        raise NotATorus(f"component {component} is {reps[component].kind}",
                        component=component)
    h = _homology(surface, component)
    row = _dense(chain, h) if isinstance(chain, dict) else list(chain)
    free, _ = h.class_of(row)
    p, q = free
    return CurveClass(p, q, (p, q) != (0, 0))
