"""Branched surfaces built from a set of supported disk types.

A carrier is a set of coordinate slots (its *sectors*).  Across every glued
face and for every arc type, the arcs contributed by the sectors on one side
merge with those on the other side.  Introducing one variable per face arc,
each side reads ``x_arc = x_i`` or ``x_arc = x_i + x_j``; the second form is
a branch: two sheets merge into one.  The side with two contributors is
where the locus arc's branch direction points.

Vertical boundary circles are modelled combinatorially: locus arcs are
edges of a graph whose nodes are edge-orbit ends, and each connected
component is one circuit.  A disk search along a circuit asks for carried
surfaces whose face counts miss the matching equations by exactly one arc
on each of the circuit's locus arcs (``+1`` on the split side for an
inward disk of contact, ``-1`` for an outward flare base).
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .coords import OCT, QUAD, SurfaceVector, arc_contributors, is_admissible, matching_system
from .errors import EmptySupport, NotCarried, UnknownComponent
from .hilbert import DEFAULT_LIMITS, canonical_key, hilbert_basis
from .topology import classify_components, reconstruct
from .triangulation import EDGE_INDEX, EDGES, face_vertices

SLOT_NAMES = ("t0", "t1", "t2", "t3", "q0", "q1", "q2", "o0", "o1", "o2")


def slot_name(col):
    t, j = divmod(col, 10)
    return f"{t}.{SLOT_NAMES[j]}"


def parse_support(text, num_tets):
    """``"0.t0,0.q1,1.t2"`` (or ``"all-tri"``) to a frozenset of columns."""
    cols = set()
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        if item == "all-tri":
            cols.update(10 * t + v for t in range(num_tets) for v in range(4))
            continue
        try:
            t, name = item.split(".")
            t = int(t)
            j = SLOT_NAMES.index(name)
        except ValueError:
            raise EmptySupport(f"bad support item {item!r}", item=item) from None
        if not 0 <= t < num_tets:
            raise EmptySupport(f"support item {item!r} names a missing tetrahedron", item=item)
        cols.add(10 * t + j)
    return frozenset(cols)


@dataclass(frozen=True)
class LocusArc:
    gluing: int          # index into tri.canonical_gluings()
    corner: int          # arc type on the gluing's first side
    side: int            # 0 = first side, 1 = second side; branch direction points here
    contributors: tuple  # sector columns merging on that side

    def to_json(self):
        return {"gluing": self.gluing, "corner": self.corner, "side": self.side,
                "sectors": [slot_name(c) for c in self.contributors]}


@dataclass
class Circuit:
    index: int
    arcs: tuple          # indices into carrier.locus, in walking order
    nodes: tuple         # edge-orbit ends visited
    closed: bool

    def to_json(self):
        return {"index": self.index, "arcs": list(self.arcs),
                "nodes": [list(n) for n in self.nodes], "closed": self.closed}


class BranchedCarrier:
    def __init__(self, tri, support):
        self.tri = tri
        support = frozenset(support)
        if not support:
            raise EmptySupport("carrier support is empty")
        n = tri.num_tets
        if any(not 0 <= c < 10 * n for c in support):
            raise EmptySupport("support column out of range")
        oct_tets = set()
        for t in range(n):
            used = [c for c in support if 10 * t + QUAD <= c < 10 * t + 10]
            if len(used) > 1:
                raise EmptySupport(f"support uses {len(used)} quad/octagon types in tet {t}",
                                   tet=t, reason="incompatible")
            if any(c >= 10 * t + OCT for c in used):
                oct_tets.add(t)
        if len(oct_tets) > 1:
            raise EmptySupport("octagons supported in more than one tetrahedron",
                               reason="incompatible")
        self.support = support
        self.sectors = tuple(sorted(support))
        self.gluings = tri.canonical_gluings()
        self.face_arcs = []       # (gluing, corner, side0 contributors, side1 contributors)
        self.locus = []
        for gi, g in enumerate(self.gluings):
            for v in face_vertices(g.face):
                c0 = tuple(10 * g.tet + j for j in arc_contributors(g.face, v)
                           if 10 * g.tet + j in support)
                w = g.perm[v]
                c1 = tuple(10 * g.to_tet + j for j in arc_contributors(g.to_face, w)
                           if 10 * g.to_tet + j in support)
                if not c0 and not c1:
                    continue
                self.face_arcs.append((gi, v, c0, c1))
                for side, cs in ((0, c0), (1, c1)):
                    if len(cs) >= 2:
                        self.locus.append(LocusArc(gi, v, side, cs))
        self._circuits = None

    # -- equations ---------------------------------------------------------
    def branch_equations(self):
        """Rows over ``sectors + face arcs``: ``x_arc - sum(side) = 0`` per side."""
        ns = len(self.sectors)
        col = {c: i for i, c in enumerate(self.sectors)}
        rows = []
        for ai, (_, _, c0, c1) in enumerate(self.face_arcs):
            for cs in (c0, c1):
                row = [0] * (ns + len(self.face_arcs))
                row[ns + ai] = 1
                for c in cs:
                    row[col[c]] -= 1
                rows.append(row)
        return rows

    def restricted_rows(self):
        """Matching equations on sector columns only (face-arc variables eliminated)."""
        col = {c: i for i, c in enumerate(self.sectors)}
        rows = []
        for _, _, c0, c1 in self.face_arcs:
            row = [0] * len(self.sectors)
            for c in c0:
                row[col[c]] += 1
            for c in c1:
                row[col[c]] -= 1
            if any(row):
                rows.append(row)
        return rows

    def lift(self, values):
        out = [0] * (10 * self.tri.num_tets)
        for c, x in zip(self.sectors, values):
            out[c] = x
        return SurfaceVector(out)

    # -- circuits ----------------------------------------------------------
    def _arc_nodes(self, la):
        g = self.gluings[la.gluing]
        v = la.corner
        sk = self.tri.skeleton
        nodes = []
        for a in face_vertices(g.face):
            if a == v:
                continue
            e = EDGE_INDEX[(v, a)]
            orbit, sign = sk.edge_of[(g.tet, e)]
            lo = EDGES[e][0]
            end = 0 if (v == lo) == (sign > 0) else 1
            nodes.append((orbit, end))
        return tuple(nodes)

    def vertical_boundary_components(self):
        if self._circuits is not None:
            return self._circuits
        adj = {}
        ends = []
        for i, la in enumerate(self.locus):
            a, b = self._arc_nodes(la)
            ends.append((a, b))
            adj.setdefault(a, []).append(i)
            adj.setdefault(b, []).append(i)
        for k in adj:
            adj[k].sort()
        used = set()
        circuits = []
        for i in range(len(self.locus)):
            if i in used:
                continue
            # component arcs
            comp, stack = set(), [i]
            while stack:
                j = stack.pop()
                if j in comp:
                    continue
                comp.add(j)
                for nd in ends[j]:
                    stack.extend(adj[nd])
            nodes = {nd for j in comp for nd in ends[j]}
            closed = all(sum(1 for j in adj[nd] if j in comp) % 2 == 0 for nd in nodes)
            arcs, visited = _euler_walk(comp, ends, adj) if closed else (sorted(comp), None)
            used |= comp
            circuits.append(Circuit(len(circuits), tuple(arcs),
                                    tuple(visited) if visited else tuple(sorted(nodes)), closed))
        self._circuits = circuits
        return circuits

    def to_json(self):
        return {"sectors": [slot_name(c) for c in self.sectors],
                "face_arcs": [{"gluing": g, "corner": v,
                               "side0": [slot_name(c) for c in c0],
                               "side1": [slot_name(c) for c in c1]}
                              for g, v, c0, c1 in self.face_arcs],
                "branch_equations": self.branch_equations(),
                "branch_locus": [la.to_json() for la in self.locus],
                "circuits": [c.to_json() for c in self.vertical_boundary_components()]}


def _euler_walk(comp, ends, adj):
    """Deterministic Hierholzer walk over a component with all degrees even."""
    first = min(comp)
    start = min(ends[first])
    used = set()
    stack = [(start, None)]
    path = []
    while stack:
        node, via = stack[-1]
        nxt = next((j for j in adj[node] if j in comp and j not in used), None)
        if nxt is None:
            stack.pop()
            path.append((node, via))
            continue
        used.add(nxt)
        a, b = ends[nxt]
        stack.append((b if a == node else a, nxt))
    path.reverse()
    arcs = [via for _, via in path if via is not None]
    nodes = [node for node, _ in path]
    return arcs, nodes


def build_carrier(tri, support):
    if isinstance(support, str):
        support = parse_support(support, tri.num_tets)
    elif isinstance(support, SurfaceVector):
        support = support.support()
    return BranchedCarrier(tri, support)


def carried_cone(carrier):
    """The matching system plus ``x_c = 0`` rows for every unsupported column."""
    base = matching_system(carrier.tri)
    from .coords import MatchingSystem
    extra = []
    labels = list(base.labels)
    for c in range(base.ncols):
        if c not in carrier.support:
            row = [0] * base.ncols
            row[c] = 1
            extra.append(tuple(row))
            labels.append(("unsupported", c))
    return MatchingSystem(base.num_tets, base.equations + tuple(extra), tuple(labels))


def is_carried(carrier, vec):
    vec = SurfaceVector(vec)
    if not vec.support() <= carrier.support:
        return False
    return bool(is_admissible(vec, matching_system(carrier.tri)))


def fully_carries(carrier, vec):
    return is_carried(carrier, vec) and all(vec[c] > 0 for c in carrier.sectors)


def sub_branched(carrier, vec):
    if not is_carried(carrier, vec):
        raise NotCarried("vector is not carried by the carrier")
    return BranchedCarrier(carrier.tri, SurfaceVector(vec).support())


def carried_basis(carrier, limits=DEFAULT_LIMITS):
    """Hilbert basis of the carried monoid (at most one octagon)."""
    hb = hilbert_basis(carrier.restricted_rows(), len(carrier.sectors), limits)
    out = [carrier.lift(h) for h in hb]
    return sorted((v for v in out if v.octagons() <= 1), key=canonical_key)


def carried_vectors(carrier, max_weight, limits=DEFAULT_LIMITS):
    """All nonzero carried vectors of weight <= max_weight, canonical order."""
    hb = hilbert_basis(carrier.restricted_rows(), len(carrier.sectors), limits)
    found = set()
    _combos(tuple(hb), 0, [0] * len(carrier.sectors), max_weight, found)
    out = [carrier.lift(v) for v in found if any(v)]
    return sorted((v for v in out if v.octagons() <= 1), key=canonical_key)


def _combos(gens, start, cur, budget, found):
    found.add(tuple(cur))
    for i in range(start, len(gens)):
        w = sum(gens[i])
        if w <= budget:
            nxt = [a + b for a, b in zip(cur, gens[i])]
            _combos(gens, i, nxt, budget - w, found)


def carries_sphere(carrier, limits=DEFAULT_LIMITS):
    for v in carried_basis(carrier, limits):
        if any(r.kind == "sphere" for r in classify_components(reconstruct(carrier.tri, v))):
            return True
    return False


# -- disk search ---------------------------------------------------------------

@dataclass
class DiskSearchResult:
    status: str              # "found" | "not_found" | "inconclusive"
    direction: str
    component: int
    vector: SurfaceVector = None
    bound: int = None
    searched: int = 0
    notes: list = field(default_factory=list)

    def to_json(self):
        out = {"status": self.status, "direction": self.direction,
               "component": self.component, "searched": self.searched}
        if self.vector is not None:
            out["coords"] = self.vector.rows()
            out["weight"] = sum(self.vector)
        if self.bound is not None:
            out["bound"] = self.bound
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def expected_residuals(carrier, circuit, direction):
    """Required ``side0 - side1`` arc surplus per (gluing, corner)."""
    eps = 1 if direction == "inward" else -1
    res = {}
    for i in circuit.arcs:
        la = carrier.locus[i]
        key = (la.gluing, la.corner)
        res[key] = res.get(key, 0) + (eps if la.side == 0 else -eps)
    return res


def _search_rows(carrier, circuit, direction):
    res = expected_residuals(carrier, circuit, direction)
    col = {c: i for i, c in enumerate(carrier.sectors)}
    ns = len(carrier.sectors)
    rows = []
    for g, v, c0, c1 in carrier.face_arcs:
        row = [0] * (ns + 1)
        for c in c0:
            row[col[c]] += 1
        for c in c1:
            row[col[c]] -= 1
        row[ns] = -res.get((g, v), 0)
        if any(row):
            rows.append(row)
    for key in res:
        if res[key] and not any((g, v) == key for g, v, _, _ in carrier.face_arcs):
            row = [0] * (ns + 1)
            row[ns] = -res[key]
            rows.append(row)
    return rows


def verify_disk(tri, carrier, circuit, direction, vec):
    """Independent check of a disk-search answer; returns a list of failures."""
    vec = SurfaceVector(vec)
    problems = []
    if not vec.support() <= carrier.support:
        problems.append("support outside carrier")
    if vec.octagons() > 1:
        problems.append("more than one octagon")
    want = expected_residuals(carrier, circuit, direction)
    for gi, g in enumerate(tri.canonical_gluings()):
        for v in face_vertices(g.face):
            left = sum(vec[10 * g.tet + j] for j in arc_contributors(g.face, v))
            right = sum(vec[10 * g.to_tet + j] for j in arc_contributors(g.to_face, g.perm[v]))
            if left - right != want.get((gi, v), 0):
                problems.append(f"branch equation at gluing {gi} corner {v}")
    if problems:
        return problems
    surf = reconstruct(tri, vec, allow_boundary=True)
    if surf.num_components != 1:
        problems.append(f"{surf.num_components} components")
        return problems
    if surf.component_euler(0) != 1:
        problems.append(f"euler characteristic {surf.component_euler(0)}")
    curves = surf.boundary_curves()
    if len(curves) != 1:
        problems.append(f"{len(curves)} boundary curves")
    gl = tri.canonical_gluings()
    seen = {}
    for i in surf.boundary_arcs:
        a = surf.arcs[i]
        for gi, g in enumerate(gl):
            if (g.tet, g.face) == (a.tet, a.face):
                key = (gi, a.corner)
                break
            if (g.to_tet, g.to_face) == (a.tet, a.face):
                inv = {w: u for u, w in enumerate(g.perm)}
                key = (gi, inv[a.corner])
                break
        seen[key] = seen.get(key, 0) + 1
    if set(seen) != {k for k, x in want.items() if x} or any(x != 1 for x in seen.values()):
        problems.append("boundary does not run once along the circuit")
    return problems


def _check_chunk(args):
    tri, support, cidx, direction, cands = args
    carrier = BranchedCarrier(tri, support)
    circuit = carrier.vertical_boundary_components()[cidx]
    for n, v in enumerate(cands):
        if not verify_disk(tri, carrier, circuit, direction, v):
            return n
    return None


def disk_search(carrier, component, direction, max_weight, workers=1, limits=DEFAULT_LIMITS):
    if direction not in ("inward", "outward"):
        raise ValueError("direction must be 'inward' or 'outward'")
    if not carrier.locus:
        return DiskSearchResult("not_found", direction, component,
                                notes=["empty branch locus"])
    circuits = carrier.vertical_boundary_components()
    if not 0 <= component < len(circuits):
        raise UnknownComponent(f"no vertical boundary component {component}",
                               component=component, count=len(circuits))
    if max_weight <= 0:
        return DiskSearchResult("inconclusive", direction, component, bound=0)
    circuit = circuits[component]
    ns = len(carrier.sectors)
    hb = hilbert_basis(_search_rows(carrier, circuit, direction), ns + 1, limits)
    h1 = [h[:ns] for h in hb if h[ns] == 1]
    h0 = [h[:ns] for h in hb if h[ns] == 0]
    if not h1:
        return DiskSearchResult("not_found", direction, component,
                                notes=["deficit system has no solution"])
    found = set()
    truncated = bool(h0)
    for base in h1:
        w = sum(base)
        if w > max_weight:
            truncated = True
            continue
        _combos(tuple(h0), 0, list(base), max_weight - w, found)
    cands = sorted((carrier.lift(v) for v in found), key=canonical_key)
    cands = [v for v in cands if v.octagons() <= 1]
    hit = None
    if workers > 1 and len(cands) > 1:
        size = -(-len(cands) // workers)
        chunks = [cands[i:i + size] for i in range(0, len(cands), size)]
        args = [(carrier.tri, carrier.support, component, direction, ch) for ch in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for k, r in enumerate(pool.map(_check_chunk, args)):
                if r is not None:
                    hit = cands[k * size + r]
                    break
    else:
        for v in cands:
            if not verify_disk(carrier.tri, carrier, circuit, direction, v):
                hit = v
                break
    if hit is not None:
        return DiskSearchResult("found", direction, component, vector=hit, searched=len(cands))
    if truncated:
        return DiskSearchResult("inconclusive", direction, component, bound=max_weight,
                                searched=len(cands))
    return DiskSearchResult("not_found", direction, component, searched=len(cands))
