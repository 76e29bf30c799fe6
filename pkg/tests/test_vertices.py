from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from cfprob.errors import ModelTooLargeError
from cfprob.vertices import enumerate_vertices, independent_rows


def _solve_square(M, rhs):
    """Gauss-Jordan on a square system; None when singular."""
    n = len(M)
    aug = [list(r) + [b] for r, b in zip(M, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if aug[r][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        aug[c] = [x / aug[c][c] for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n] for row in aug]


def brute_vertices(A, b):
    """Every basic feasible solution, by trying all column subsets."""
    n = len(A[0])
    red = independent_rows(A, b)
    if red is None:
        return set()
    A, b = red
    if not A:
        return {tuple(Fraction(0) for _ in range(n))}
    m = len(A)
    out = set()
    for cols in combinations(range(n), m):
        sol = _solve_square([[row[j] for j in cols] for row in A], b)
        if sol is None or any(x < 0 for x in sol):
            continue
        x = [Fraction(0)] * n
        for j, v in zip(cols, sol):
            x[j] = v
        out.add(tuple(x))
    return out


def test_simplex_triangle():
    A = [[1, 1, 1]]
    b = [1]
    assert set(enumerate_vertices(A, b)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_square():
    # x1 + s1 = 1, x2 + s2 = 1: the unit square has four vertices.
    A = [[1, 0, 1, 0], [0, 1, 0, 1]]
    vs = {v[:2] for v in enumerate_vertices(A, [1, 1])}
    assert vs == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_infeasible_and_inconsistent():
    assert enumerate_vertices([[1, 1]], [-1]) == []
    assert enumerate_vertices([[1, 1], [2, 2]], [1, 3]) == []


def test_redundant_rows_dropped():
    A = [[1, 1, 0], [2, 2, 0], [0, 0, 1]]
    b = [1, 2, Fraction(1, 2)]
    assert set(enumerate_vertices(A, b)) == {(1, 0, Fraction(1, 2)), (0, 1, Fraction(1, 2))}


def test_forced_zero_columns():
    A = [[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0]]
    b = [0, 1, Fraction(1, 3)]
    assert set(enumerate_vertices(A, b)) == {(0, 0, Fraction(1, 3), Fraction(2, 3))}


def test_degenerate_vertex_reported_once():
    # Pyramid apex is degenerate: several bases describe it.
    A = [[1, 1, 1, 1, 0], [1, 0, 1, 0, 1]]
    vs = enumerate_vertices(A, [1, 1])
    assert len(vs) == len(set(vs))
    assert set(vs) == brute_vertices([[Fraction(a) for a in r] for r in A], [Fraction(1), Fraction(1)])


def test_base_cap():
    A = [[1] * 8]
    with pytest.raises(ModelTooLargeError):
        enumerate_vertices(A, [1], max_bases=3)


small = st.fractions(min_value=0, max_value=3, max_denominator=4)


@given(st.integers(1, 3), st.integers(3, 6), st.data())
def test_matches_brute_force(m, n, data):
    A = [[Fraction(data.draw(st.integers(-1, 2))) for _ in range(n)] for _ in range(m)]
    # A point with nonnegative coordinates keeps most instances feasible.
    x0 = [data.draw(small) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    assert set(enumerate_vertices(A, b)) == brute_vertices(A, b)


@given(st.integers(2, 3), st.data())
def test_response_like_polytopes(configs, data):
    """0/1 rows grouped by configuration, like a response polytope."""
    n = 2 ** configs
    outputs = [[(j >> c) & 1 for c in range(configs)] for j in range(n)]
    probs = [data.draw(st.fractions(0, 1, max_denominator=6)) for _ in range(configs)]
    A = [[Fraction(o[c]) for o in outputs] for c in range(configs)] + [[Fraction(1)] * n]
    b = probs + [Fraction(1)]
    vs = enumerate_vertices(A, b)
    assert set(vs) == brute_vertices(A, b)
    for v in vs:
        assert all(x >= 0 for x in v)
        assert [sum(a * x for a, x in zip(row, v)) for row in A] == b
