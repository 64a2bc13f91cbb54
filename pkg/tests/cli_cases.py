"""Representative invocations of every CLI command."""
import os

from conftest import FIXTURES


def fx(name):
    return os.path.join(FIXTURES, name + ".json")


def cases():
    tt, a, b = fx("two_tet_tori"), fx("torus_a"), fx("torus_b")
    return [
        ["validate", fx("three_tet")],
        ["skeleton", fx("two_tet")],
        ["vertex-link", fx("three_tet")],
        ["match-eqs", fx("two_tet")],
        ["enum", fx("two_tet_s3")],
        ["enum", fx("three_tet"), "--mode", "vertex"],
        ["enum", fx("two_tet_s2xs1"), "--emit", "jsonl", "--no-octagons"],
        ["classify", tt, a],
        ["sum", tt, a, a],
        ["decompose", tt, b],
        ["carrier", fx("three_tet"), "--support", "all-tri,2.q2"],
        ["flare-check", fx("three_tet"), "--support", "all-tri,2.q2", "--component", "0",
         "--max-weight", "6"],
        ["flare-check", fx("three_tet"), "--support", "all-tri,0.q1", "--component", "1",
         "--direction", "inward", "--max-weight", "9"],
        ["intersect", tt, a, b],
        ["balanced-reduce", "--signs", "++-+--"],
        ["regular-check", tt, a, b],
        ["genus-scan", fx("two_tet_s2xs1"), "--genus", "1", "--coeff-bound", "2",
         "--emit", "jsonl"],
    ]
