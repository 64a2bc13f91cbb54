import random

from hypothesis import given, settings
from hypothesis import strategies as st

from normsurf.intlinalg import (determinant, integer_kernel, inverse_unimodular, matmul,
                                quotient_map, smith_normal_form, solve_row_combination)

matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(a):
    d, u, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    for i in range(len(d)):
        for j in range(len(d[0])):
            if i != j:
                assert d[i][j] == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    for x, y in zip(nz, nz[1:]):
        assert y % x == 0


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_is_saturated_basis(a):
    n = len(a[0])
    k = integer_kernel(a, n)
    for row in k:
        assert all(sum(x * y for x, y in zip(r, row)) == 0 for r in a)
    # every small integer kernel vector is an integer combination of the basis
    rng = random.Random(0)
    for _ in range(20):
        x = [rng.randint(-3, 3) for _ in range(n)]
        if all(sum(p * q for p, q in zip(r, x)) == 0 for r in a) and k:
            y = solve_row_combination(k, x)
            assert y is not None and all(c.denominator == 1 for c in y)


def test_inverse_unimodular():
    v = [[2, 1], [1, 1]]
    assert matmul(v, inverse_unimodular(v)) == [[1, 0], [0, 1]]


def test_quotient_map_torus_and_torsion():
    # Z^2 / <(2, 0)> = Z/2 + Z
    v, inv = quotient_map([[2, 0]], 2)
    assert sorted(inv) == [0, 2]
    assert quotient_map([], 3) == ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0])
