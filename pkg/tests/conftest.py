import functools
import os
import sys

import pytest

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)
FIXTURES = os.path.join(os.path.dirname(HERE), "fixtures")

from normsurf.coords import matching_system  # noqa: E402
from normsurf.hilbert import enumerate_fundamental  # noqa: E402
from normsurf.triangulation import load_triangulation  # noqa: E402

ALL = ["one_tet", "one_tet_s3", "two_tet", "two_tet_s2xs1", "two_tet_s3", "two_tet_tori",
       "three_tet"]


def fixture_path(name):
    return os.path.join(FIXTURES, name if name.endswith(".json") else name + ".json")


@functools.lru_cache(maxsize=None)
def tri(name):
    return load_triangulation(fixture_path(name))


@functools.lru_cache(maxsize=None)
def fund(name):
    t = tri(name)
    return enumerate_fundamental(t, matching_system(t))


@functools.lru_cache(maxsize=None)
def lattice(name, weight=20):
    from oracles import admissible_lattice
    return admissible_lattice(tri(name), weight)


@pytest.fixture(params=ALL)
def name(request):
    return request.param
