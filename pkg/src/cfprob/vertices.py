"""Exact vertex enumeration for ``{x >= 0 : A x = b}``.

Vertices are basic feasible solutions.  One feasible basis is found with an
exact phase-one simplex (Bland's rule); the rest are reached by a breadth-first
walk over every feasible basis adjacent by a single pivot.  The feasible-basis
graph is connected even for degenerate polytopes, so the walk is complete.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Sequence

from .errors import ModelTooLargeError

Matrix = list[list[Fraction]]

DEFAULT_MAX_BASES = 200_000


def independent_rows(A: Matrix, b: Sequence[Fraction]) -> tuple[Matrix, list[Fraction]] | None:
    """Drop linearly dependent rows of ``[A | b]``; None if the system is inconsistent."""
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    n = len(A[0]) if A else 0
    keep: list[int] = []
    work = [r[:] for r in rows]
    pivots: list[tuple[int, int]] = []
    for i, row in enumerate(work):
        for (pi, pc) in pivots:
            f = row[pc]
            if f:
                prow = work[pi]
                for k in range(n + 1):
                    row[k] -= f * prow[k]
        col = next((c for c in range(n) if row[c]), None)
        if col is None:
            if row[n]:
                return None
            continue
        inv = 1 / row[col]
        for k in range(n + 1):
            row[k] *= inv
        pivots.append((i, col))
        keep.append(i)
    return [list(A[i]) for i in keep], [b[i] for i in keep]


def _inverse(M: Matrix) -> Matrix | None:
    m = len(M)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(m)] for i, r in enumerate(M)]
    for c in range(m):
        p = next((r for r in range(c, m) if aug[r][c]), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(m):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[m:] for row in aug]


def _matvec(M: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in M]


def _column(A: Matrix, j: int) -> list[Fraction]:
    return [row[j] for row in A]


def _phase_one(A: Matrix, b: list[Fraction]) -> list[int] | None:
    """A feasible basis of ``A x = b, x >= 0`` (rows independent), or None."""
    m, n = len(A), len(A[0])
    sign = [(-1 if bi < 0 else 1) for bi in b]
    Aa = [[sign[i] * a for a in A[i]] + [Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    ba = [sign[i] * b[i] for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    basis = list(range(n, n + m))
    while True:
        Binv = _inverse([[Aa[i][j] for j in basis] for i in range(m)])
        xb = _matvec(Binv, ba)
        cb = [cost[j] for j in basis]
        y = [sum((cb[i] * Binv[i][k] for i in range(m)), Fraction(0)) for k in range(m)]
        entering = None
        for j in range(n + m):
            if j in basis:
                continue
            reduced = cost[j] - sum((y[i] * Aa[i][j] for i in range(m)), Fraction(0))
            if reduced < 0:
                entering = j
                break
        if entering is None:
            break
        d = _matvec(Binv, _column(Aa, entering))
        best = None
        for i in range(m):
            if d[i] > 0:
                r = xb[i] / d[i]
                if best is None or r < best[0] or (r == best[0] and basis[i] < basis[best[1]]):
                    best = (r, i)
        basis[best[1]] = entering
    if sum((x for x, j in zip(xb, basis) if j >= n), Fraction(0)) != 0:
        return None
    # Drive zero-level artificials out of the basis with degenerate pivots.
    while any(j >= n for j in basis):
        Binv = _inverse([[Aa[i][j] for j in basis] for i in range(m)])
        i = next(i for i, j in enumerate(basis) if j >= n)
        for j in range(n):
            if j not in basis and _matvec(Binv, _column(Aa, j))[i] != 0:
                basis[i] = j
                break
        else:  # pragma: no cover - rows are independent
            raise AssertionError("redundant row survived elimination")
    return sorted(basis)


def _forced_zero(A: Matrix, b: Sequence[Fraction]) -> set[int]:
    """Columns forced to 0 by rows ``a.x = 0`` whose coefficients share one sign."""
    zero: set[int] = set()
    changed = True
    while changed:
        changed = False
        for row, bi in zip(A, b):
            if bi:
                continue
            live = [j for j, a in enumerate(row) if a and j not in zero]
            if live and (all(row[j] > 0 for j in live) or all(row[j] < 0 for j in live)):
                zero.update(live)
                changed = True
    return zero


def enumerate_vertices(A: Matrix, b: Sequence[Fraction], *, max_bases: int | None = None) -> list[tuple[Fraction, ...]]:
    """All vertices of ``{x >= 0 : A x = b}`` in discovery order (deduplicated)."""
    A = [[Fraction(a) for a in row] for row in A]
    b = [Fraction(x) for x in b]
    n = len(A[0]) if A else 0
    zero = _forced_zero(A, b)
    if zero:
        keep = [j for j in range(n) if j not in zero]
        if not keep:
            return [tuple(Fraction(0) for _ in range(n))] if not any(b) else []
        out = []
        for v in enumerate_vertices([[row[j] for j in keep] for row in A], b, max_bases=max_bases):
            x = [Fraction(0)] * n
            for j, val in zip(keep, v):
                x[j] = val
            out.append(tuple(x))
        return out
    reduced = independent_rows(A, b)
    if reduced is None:
        return []
    A, b = reduced
    if not A:
        return [tuple(Fraction(0) for _ in range(n))]
    m = len(A)
    cap = DEFAULT_MAX_BASES if max_bases is None else max_bases
    start = _phase_one(A, b)
    if start is None:
        return []
    seen = {tuple(start)}
    queue = deque([start])
    vertices: dict[tuple[Fraction, ...], None] = {}
    while queue:
        basis = queue.popleft()
        Binv = _inverse([[A[i][j] for j in basis] for i in range(m)])
        xb = _matvec(Binv, b)
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            x[j] = xb[i]
        vertices.setdefault(tuple(x), None)
        in_basis = set(basis)
        for j in range(n):
            if j in in_basis:
                continue
            d = _matvec(Binv, _column(A, j))
            ratios = [(xb[i] / d[i], i) for i in range(m) if d[i] > 0]
            if not ratios:
                continue
            low = min(r for r, _ in ratios)
            for r, i in ratios:
                if r != low:
                    continue
                nb = sorted(basis[:i] + basis[i + 1:] + [j])
                key = tuple(nb)
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise ModelTooLargeError(f"more than {cap} feasible bases")
                    queue.append(nb)
    return list(vertices)
