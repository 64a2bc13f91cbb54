"""Exact integer / rational linear algebra on lists of Python ints.

Matrices are lists of row lists.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(r) for r in zip(*a)]


def primitive(v):
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return list(v)
    return [x // g for x in v]


def smith_normal_form(a):
    """Return ``(D, U, V)`` with ``U @ a @ V == D`` diagonal, U and V unimodular.

    The diagonal entries are non-negative and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(r) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            rs, rd = d[src], d[dst]
            for c in range(n):
                rd[c] += k * rs[c]
            us, ud = u[src], u[dst]
            for c in range(m):
                ud[c] += k * us[c]

    def add_col(src, dst, k):  # col_dst += k * col_src
        if k:
            for row in d:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    if d[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot slot and retry
                best = None
                for i in range(t, m):
                    if d[i][t] and (best is None or abs(d[i][t]) < best[0]):
                        best = (abs(d[i][t]), i, "r")
                for j in range(t, n):
                    if d[t][j] and (best is None or abs(d[t][j]) < best[0]):
                        best = (abs(d[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def rank(a):
    d, _, _ = smith_normal_form(a)
    return sum(1 for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])


def integer_kernel(a, ncols=None):
    """Lattice basis (rows) of ``{x in Z^n : a x = 0}``; the lattice is saturated."""
    n = len(a[0]) if a else ncols
    if not a:
        return identity(n)
    d, _, v = smith_normal_form(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def inverse_unimodular(v):
    """Exact inverse of a unimodular integer matrix."""
    inv = rational_inverse(v)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def rational_inverse(a):
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def solve_row_combination(basis, target):
    """Rational ``y`` with ``y @ basis == target``, or None."""
    k = len(basis)
    n = len(target)
    # solve basis^T y = target by elimination on the augmented system
    rows = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(target[j])]
            for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if rows[i][k] != 0:
            return None
    y = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        y[c] = rows[i][k]
    return y


def determinant(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return int(det)


def quotient_map(relations, n):
    """Describe ``Z^n / rowspace(relations)``.

    Returns ``(v, invariants)``: a class of ``y`` is read off as
    ``(y @ v)[j]`` for each column ``j`` with invariant ``d_j != 1``;
    free coordinates have ``d_j == 0`` and torsion ones are taken mod ``d_j``.
    """
    if not relations:
        return identity(n), [0] * n
    d, _, v = smith_normal_form(relations)
    inv = [d[i][i] if i < len(d) else 0 for i in range(n)]
    return v, inv
