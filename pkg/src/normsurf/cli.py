"""``normsurf`` command line.

Every command prints one JSON document (or JSON lines with ``--emit jsonl``
for streams).  Exit status: 0 success, 1 domain error (an error object is
printed), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import carrier as car
from . import pipeline as pl
from .coords import (SurfaceVector, haken_sum, is_admissible, load_vector, matching_system,
                     vertex_link)
from .errors import NormSurfError, NotAdmissible, ParseError
from .hilbert import (FundamentalSet, Limits, cache_key, decompose, enumerate_fundamental,
                      enumerate_vertex_solutions)
from .topology import classify_components, euler_linear, intersection_complexity, reconstruct
from .triangulation import is_connected, is_orientable, load_triangulation

COMMANDS = ("validate", "skeleton", "vertex-link", "match-eqs", "enum", "classify", "sum",
            "decompose", "carrier", "flare-check", "intersect", "balanced-reduce",
            "regular-check", "genus-scan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(name, minimum=1):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}")
        return v
    return conv


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--cache", default=None, help="enumeration cache directory")
    common.add_argument("--workers", type=_positive("--workers"), default=1)
    common.add_argument("--max-weight", type=_positive("--max-weight", 0), default=12)
    common.add_argument("--max-rays", type=_positive("--max-rays"), default=50_000)
    common.add_argument("--emit", choices=("json", "jsonl"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = _Parser(prog="normsurf", description="Normal surface enumeration and analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    for name, h in (("validate", "check a triangulation"),
                    ("skeleton", "vertex/edge/face orbits"),
                    ("vertex-link", "the vertex-linking sphere"),
                    ("match-eqs", "matching equations")):
        add(name, h).add_argument("tri")
    e = add("enum", "vertex or fundamental solutions")
    e.add_argument("tri")
    e.add_argument("--mode", choices=("vertex", "fundamental"), default="fundamental")
    e.add_argument("--no-octagons", action="store_true")
    c = add("classify", "components of a surface")
    c.add_argument("tri")
    c.add_argument("vec")
    s = add("sum", "Haken sum of two vectors")
    s.add_argument("tri")
    s.add_argument("a")
    s.add_argument("b")
    d = add("decompose", "decompose over the fundamental set")
    d.add_argument("tri")
    d.add_argument("vec")
    b = add("carrier", "branched surface of a support")
    b.add_argument("tri")
    b.add_argument("--support", required=True)
    f = add("flare-check", "disk search along a vertical boundary circuit")
    f.add_argument("tri")
    f.add_argument("--support", required=True)
    f.add_argument("--component", type=_positive("--component", 0), required=True)
    f.add_argument("--direction", choices=("outward", "inward"), default="outward")
    i = add("intersect", "double curves and triple points")
    i.add_argument("tri")
    i.add_argument("vecs", nargs="+")
    r = add("balanced-reduce", "reduction constant of a balanced sign sequence")
    r.add_argument("--signs", required=True)
    g = add("regular-check", "regular-set verdict for tori")
    g.add_argument("tri")
    g.add_argument("vecs", nargs="+")
    n = add("genus-scan", "stream candidate decompositions")
    n.add_argument("tri")
    n.add_argument("--genus", type=_positive("--genus", 0), required=True)
    n.add_argument("--coeff-bound", type=_positive("--coeff-bound", 0), required=True)
    n.add_argument("--arc-budget", type=_positive("--arc-budget", 0), default=None)
    return p


# -- helpers -------------------------------------------------------------------

def _limits(args):
    return Limits(max_rays=args.max_rays, workers=args.workers)


def _support(tri, text):
    if os.path.exists(text):
        return load_vector(text, tri.num_tets).support()
    return car.parse_support(text, tri.num_tets)


def _admissible_vector(path, tri):
    vec = load_vector(path, tri.num_tets)
    adm = is_admissible(vec, matching_system(tri))
    if not adm:
        raise NotAdmissible(f"{path} is not admissible", path=path, violations=adm.violations)
    return vec


def _members(tri, mode, args, octagons=True):
    limits = _limits(args)
    cache_dir = args.cache or os.environ.get("NORMSURF_CACHE")
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, cache_key(tri, mode, limits, octagons) + ".json")
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
            return [SurfaceVector.from_rows(r) for r in doc["members"]]
    sys_ = matching_system(tri)
    if mode == "vertex":
        members = enumerate_vertex_solutions(tri, sys_, limits, octagons)
    else:
        members = list(enumerate_fundamental(tri, sys_, limits, octagons).members)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        doc = {"mode": mode, "octagons": octagons, "members": [m.rows() for m in members]}
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, path)
    return members


def _fundamental(tri, args):
    return FundamentalSet(tuple(_members(tri, "fundamental", args)))


# -- commands ------------------------------------------------------------------

def cmd_validate(args):
    tri = load_triangulation(args.tri)
    sk = tri.skeleton
    return {"valid": True, "tets": tri.num_tets, "vertices": sk.V, "edges": sk.E,
            "faces": sk.F, "orientable": is_orientable(tri), "connected": is_connected(tri),
            "one_vertex": sk.V == 1}


def cmd_skeleton(args):
    return load_triangulation(args.tri).skeleton.to_json()


def cmd_vertex_link(args):
    return vertex_link(load_triangulation(args.tri)).to_json()


def cmd_match_eqs(args):
    return matching_system(load_triangulation(args.tri)).to_json()


def cmd_enum(args):
    tri = load_triangulation(args.tri)
    members = _members(tri, args.mode, args, not args.no_octagons)
    if args.emit == "jsonl":
        return [m.to_json() for m in members]
    return {"mode": args.mode, "count": len(members), "members": [m.rows() for m in members]}


def cmd_classify(args):
    tri = load_triangulation(args.tri)
    vec = _admissible_vector(args.vec, tri)
    reps = classify_components(reconstruct(tri, vec))
    chi = euler_linear(tri, vec)
    return {"components": [r.to_json() for r in reps], "euler": sum(r.euler for r in reps),
            "euler_linear": chi, "weight": sum(vec), "octagons": vec.octagons()}


def cmd_sum(args):
    tri = load_triangulation(args.tri)
    a = _admissible_vector(args.a, tri)
    b = _admissible_vector(args.b, tri)
    return haken_sum(a, b).to_json()


def cmd_decompose(args):
    tri = load_triangulation(args.tri)
    vec = _admissible_vector(args.vec, tri)
    terms = decompose(vec, _fundamental(tri, args))
    return {"coords": vec.rows(),
            "terms": [{"coefficient": c, "member": m.rows()} for c, m in terms]}


def cmd_carrier(args):
    tri = load_triangulation(args.tri)
    return car.build_carrier(tri, _support(tri, args.support)).to_json()


def cmd_flare_check(args):
    tri = load_triangulation(args.tri)
    c = car.build_carrier(tri, _support(tri, args.support))
    res = car.disk_search(c, args.component, args.direction, args.max_weight,
                          workers=args.workers, limits=_limits(args))
    out = res.to_json()
    if res.status == "inconclusive":
        out["policy"] = "undecided: caller chooses how to treat an exhausted bound"
    return out


def cmd_intersect(args):
    tri = load_triangulation(args.tri)
    vecs = [_admissible_vector(p, tri) for p in args.vecs]
    return intersection_complexity(tri, vecs).to_json()


def cmd_balanced_reduce(args):
    seq = pl.BalancedSequence(args.signs)
    return {"signs": seq.signs, "k": pl.balanced_reduce(seq), "length": len(seq.signs)}


def cmd_regular_check(args):
    tri = load_triangulation(args.tri)
    vecs = [_admissible_vector(p, tri) for p in args.vecs]
    return pl.regular_set_check(tri, vecs).to_json()


def cmd_genus_scan(args):
    tri = load_triangulation(args.tri)
    fund = _fundamental(tri, args)
    stream = pl.candidate_stream(tri, fund, args.genus, args.coeff_bound, args.arc_budget)
    docs = [d.to_json() for d in stream]
    if args.emit == "jsonl":
        return docs
    return {"genus_bound": args.genus, "coeff_bound": args.coeff_bound,
            "count": len(docs), "candidates": docs}


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


def _dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(result, args, out):
    if isinstance(result, list):
        text = "".join(_dump(x) + "\n" for x in result)
    else:
        text = _dump(result) + "\n"
    if args is not None and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except SystemExit as exc:          # --help
        return 0 if exc.code in (0, None) else 2
    try:
        result = HANDLERS[args.command](args)
    except NormSurfError as exc:
        doc = exc.to_json()
        doc["command"] = args.command
        _emit(doc, args, out)
        return 1
    except FileNotFoundError as exc:
        doc = ParseError(f"cannot read {exc.filename}", path=exc.filename).to_json()
        doc["command"] = args.command
        _emit(doc, args, out)
        return 1
    _emit(result, args, out)
    return 0


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
