"""Candidate generation for small-genus splitting surfaces.

A candidate is ``S = H + sum(c_i T_i)`` with ``T_i`` normal tori from the
fundamental set and ``H`` a sum of the remaining members.  Coefficients of
negative-Euler members are bounded by the genus budget; torus coefficients
by a caller-supplied bound, later shrunk by Dehn-twist normalization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

from .coords import SurfaceVector, type_violations
from .errors import NotBalanced, NotIsolated, OpenArcs
from .hilbert import FundamentalSet, canonical_key
from .topology import (ComponentHomology, PairIntersection, classify_components, euler_linear,
                       intersection_complexity, reconstruct, triple_point_count)


# -- classification of the fundamental set -----------------------------------

def classify_fundamental(tri, fund):
    reports = {}
    tori, non_tori = [], []
    for m in fund.members:
        reps = classify_components(reconstruct(tri, m))
        reports[m] = reps
        if m.octagons() == 0 and len(reps) == 1 and reps[0].kind == "torus":
            tori.append(m)
        else:
            non_tori.append(m)
    return FundamentalSet(fund.members, tuple(tori), tuple(non_tori), (), True, reports)


def split_fundamentals(fund, tri=None):
    """(tori, non_tori); octagon-carrying members always land in non_tori."""
    if not fund.classified:
        if tri is None:
            raise ValueError("unclassified fundamental set needs the triangulation")
        fund = classify_fundamental(tri, fund)
    return list(fund.tori), list(fund.non_tori)


# -- decompositions ------------------------------------------------------------

@dataclass
class Decomposition:
    base: SurfaceVector
    torus_terms: list                      # [(member, coefficient)]
    base_terms: list = field(default_factory=list)
    audit: list = field(default_factory=list)
    genus: int = 0
    euler: int = None
    arc_budget: int = None

    def vector(self):
        out = self.base
        for m, c in self.torus_terms:
            out = out + c * m
        return out

    def to_json(self):
        out = {"coords": self.vector().rows(),
               "base": self.base.rows(),
               "base_terms": [{"coefficient": c, "member": m.rows()} for m, c in self.base_terms],
               "torus_terms": [{"coefficient": c, "member": m.rows()}
                               for m, c in self.torus_terms],
               "euler": self.euler, "genus_bound": self.genus, "audit": list(self.audit)}
        if self.arc_budget is not None:
            out["arc_budget"] = self.arc_budget
        return out


def coefficient_bounds(tri, fund, genus_bound, coeff_bound):
    """Per-member (max coefficient, chi, is_torus) in canonical member order."""
    tori, _ = split_fundamentals(fund, tri)
    tset = set(tori)
    out = []
    for m in fund.members:
        chi = euler_linear(tri, m)
        if m in tset:
            hi = coeff_bound
        elif chi < 0:
            hi = max(0, (2 * genus_bound - 2) // (-chi))
        else:
            hi = coeff_bound
        out.append((hi, chi, m in tset))
    return out


def accept_candidate(vec, chi, genus_bound):
    """Shared filters: nonzero, admissible types, even chi in [2 - 2g, 2]."""
    return (any(vec) and not type_violations(vec)
            and chi % 2 == 0 and 2 - 2 * genus_bound <= chi <= 2)


def candidate_stream(tri, fund, genus_bound, coeff_bound, arc_budget=None):
    """Decompositions in lexicographic order of coefficient tuples."""
    if not fund.classified:
        fund = classify_fundamental(tri, fund)
    members = list(fund.members)
    bounds = coefficient_bounds(tri, fund, genus_bound, coeff_bound)
    n = len(members)
    zero = SurfaceVector.zero(tri.num_tets)

    def go(i, coeffs, vec, chi):
        if type_violations(vec):
            return
        if i == n:
            if accept_candidate(vec, chi, genus_bound):
                yield _make(coeffs, chi)
            return
        hi, mchi, _ = bounds[i]
        for c in range(hi + 1):
            yield from go(i + 1, coeffs + [c], vec + c * members[i] if c else vec,
                          chi + c * mchi)

    def _make(coeffs, chi):
        base = zero
        bterms, tterms = [], []
        for m, c, (_, _, is_t) in zip(members, coeffs, bounds):
            if not c:
                continue
            if is_t:
                tterms.append((m, c))
            else:
                bterms.append((m, c))
                base = base + c * m
        return Decomposition(base, tterms, bterms, [], genus_bound, chi, arc_budget)

    yield from go(0, [], zero, 0)


# -- balanced sequences --------------------------------------------------------

@dataclass(frozen=True)
class BalancedSequence:
    signs: str

    def __post_init__(self):
        if any(c not in "+-" for c in self.signs):
            raise NotBalanced("signs must be '+' or '-'", signs=self.signs)
        if self.signs.count("+") != self.signs.count("-"):
            raise NotBalanced("unequal numbers of positive and negative arcs",
                              positive=self.signs.count("+"), negative=self.signs.count("-"))


def balanced_reduce(seq):
    """Rounds of bottom-arc extraction until nothing is left.

    Each round deletes every cyclically adjacent (+, -) pair of the surviving
    sequence at once.
    """
    if isinstance(seq, str):
        seq = BalancedSequence(seq)
    s = list(seq.signs)
    k = 0
    while s:
        n = len(s)
        kill = set()
        for i in range(n):
            j = (i + 1) % n
            if s[i] == "+" and s[j] == "-":
                kill.update((i, j))
        s = [c for i, c in enumerate(s) if i not in kill]
        k += 1
    return k


# -- twist normalization -------------------------------------------------------

def _trivial_curves(tri, f, lam):
    f, lam = SurfaceVector(f), SurfaceVector(lam)
    if f == lam:
        return 0, 0, []
    sf, sl = reconstruct(tri, f), reconstruct(tri, lam)
    swap = canonical_key(lam) < canonical_key(f)
    pi = PairIntersection(sl, sf) if swap else PairIntersection(sf, sl)
    w = 1 if swap else 0
    trivial, flagged = 0, []
    cache = {}
    for cv in pi.curves:
        piece = cv[1][0][1 + w]
        comp = sf.component_map[piece]
        if comp not in cache:
            cache[comp] = ComponentHomology(sf, comp)
        h = cache[comp]
        chain = pi.chain_in(w, cv)
        row = [0] * len(h.arc_index)
        for cid, x in chain.items():
            if cid not in h.arc_index:
                raise OpenArcs("traced curve leaves its component")
            row[h.arc_index[cid]] += x
        free, tors = h.class_of(row)
        if not any(free) and not any(tors):
            trivial += 1
            flagged.append("null-homologous (homotopy not checked)")
    return trivial, len(pi.node_ids), flagged


def trivial_curve_bound(tri, f, lam):
    """Number of double curves of F and Lambda that are null-homologous in F."""
    return _trivial_curves(tri, f, lam)[0]


def twist_cap(tri, torus, base, genus):
    """max(1, trivial curves + ceil(face crossings / 2) + 2g)."""
    trivial, crossings, _ = _trivial_curves(tri, torus, base) if any(base) else (0, 0, [])
    return max(1, trivial + ceil(crossings / 2) + 2 * genus)


def twist_normalize(tri, decomp, isolated):
    isolated = {SurfaceVector(t) for t in isolated}
    terms = [m for m, _ in decomp.torus_terms]
    for t in sorted(isolated, key=canonical_key):
        for other in terms:
            if other == t:
                continue
            rep = intersection_complexity(tri, [t, other], with_classes=False)
            if rep.complexity != (0, 0):
                raise NotIsolated("torus meets another torus term",
                                  torus=t.rows(), other=other.rows(),
                                  complexity=list(rep.complexity))
    new_terms, audit = [], list(decomp.audit)
    for m, c in decomp.torus_terms:
        if m in isolated:
            cap = twist_cap(tri, m, decomp.base, decomp.genus)
            if c > cap:
                audit.append({"event": "dehn_twist", "torus": m.rows(), "from": c,
                              "to": cap, "twists": c - cap,
                              "claim": "isotopic via Dehn twists along the torus"})
                c = cap
        new_terms.append((m, c))
    return Decomposition(decomp.base, new_terms, list(decomp.base_terms), audit,
                         decomp.genus, decomp.euler, decomp.arc_budget)


# -- regular sets --------------------------------------------------------------

@dataclass
class RegularSetReport:
    triple_points: int
    curves: list
    verdict: str
    conservative: bool = False

    def to_json(self):
        return {"triple_points": self.triple_points, "curves": self.curves,
                "verdict": self.verdict, "conservative": self.conservative,
                "meridian": "unknown", "solid_torus_check": "not_performed"}


def regular_set_check(tri, tori):
    tori = sorted((SurfaceVector(t) for t in tori), key=canonical_key)
    triples = 0
    for i in range(len(tori)):
        for j in range(i + 1, len(tori)):
            for k in range(j + 1, len(tori)):
                triples += triple_point_count([tori[i], tori[j], tori[k]])
    curves = []
    all_essential = True
    for i in range(len(tori)):
        for j in range(i + 1, len(tori)):
            rep = intersection_complexity(tri, [tori[i], tori[j]])
            for c in rep.curves:
                ess = all(v["essential"] for v in c.classes.values())
                all_essential = all_essential and ess
                curves.append({"pair": [i, j],
                               "classes": {str(k): v for k, v in sorted(c.classes.items())},
                               "essential": ess})
    if triples or not all_essential:
        return RegularSetReport(triples, curves, "not_regular", True)
    return RegularSetReport(triples, curves, "regular_modulo_meridian")
