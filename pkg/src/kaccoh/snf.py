"""Exact Smith normal form of sparse integer matrices.

The reduction works on a list of sparse rows (``dict`` column -> int) and
runs in three stages:

1. unit pivots, chosen column by column in order of increasing column
   length (a Markowitz-style heuristic that keeps fill-in low on coboundary
   matrices, whose entries are mostly ±1);
2. the leftover rows, eliminated with the smallest-magnitude entry as pivot
   and Euclidean remainders until each pivot is alone in its row and column;
3. a gcd/lcm pass that turns the pivot values into a divisibility chain.

Row operations can be recorded as a unimodular ``P`` (together with its
inverse) and column operations as ``Q`` so that ``P A Q`` is diagonal.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


def csr_to_rows(m):
    """Rows of a scipy sparse matrix as dicts of Python ints."""
    m = sp.csr_matrix(m)
    m.sum_duplicates()
    indptr, indices, data = m.indptr, m.indices.tolist(), m.data.tolist()
    rows = []
    for i in range(m.shape[0]):
        a, b = indptr[i], indptr[i + 1]
        rows.append({c: v for c, v in zip(indices[a:b], data[a:b]) if v})
    return rows


def dense_to_rows(a):
    return [{j: int(v) for j, v in enumerate(row) if v} for row in a]


def _axpy(target, f, source):
    """target -= f * source, dropping zeros."""
    if not f:
        return
    for k, v in source.items():
        nv = target.get(k, 0) - f * v
        if nv:
            target[k] = nv
        else:
            del target[k]


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass
class Reduction:
    """Result of :func:`reduce_rows`.

    ``diag[k]`` sits at ``(row_order[k], col_order[k])`` of the original
    matrix's row and column numbering.  When recorded, ``P[i]`` is the row of
    the transform for original row i, ``Pinv[i]`` the matching column of its
    inverse, and ``Q[c]`` the column of the column transform for column c.
    """

    shape: tuple
    diag: list
    row_order: list
    col_order: list
    P: list | None = None
    Pinv: list | None = None
    Q: list | None = None

    @property
    def rank(self):
        return len(self.diag)

    def P_row(self, k):
        return self.P[self.row_order[k]]

    def Pinv_col(self, k):
        return self.Pinv[self.row_order[k]]

    def Q_col(self, k):
        return self.Q[self.col_order[k]]


def reduce_rows(rows, ncols, track_rows=False, track_cols=False) -> Reduction:
    """Diagonalise the matrix given by sparse ``rows`` (consumed in place)."""
    m = len(rows)
    P = [{i: 1} for i in range(m)] if track_rows else None
    Pinv = [{i: 1} for i in range(m)] if track_rows else None
    Q = [{c: 1} for c in range(ncols)] if track_cols else None
    cols = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)

    def row_op(k, f, i):
        # row k -= f * row i
        if not f:
            return
        rk = rows[k]
        for cc, vv in rows[i].items():
            nv = rk.get(cc, 0) - f * vv
            if nv:
                if cc not in rk:
                    cols.setdefault(cc, set()).add(k)
                rk[cc] = nv
            else:
                del rk[cc]
                cols[cc].discard(k)
        if track_rows:
            _axpy(P[k], f, P[i])
            _axpy(Pinv[i], -f, Pinv[k])

    def col_op(l, f, c):
        # column l -= f * column c
        if not f:
            return
        for k in list(cols.get(c, ())):
            rk = rows[k]
            nv = rk.get(l, 0) - f * rk[c]
            if nv:
                if l not in rk:
                    cols.setdefault(l, set()).add(k)
                rk[l] = nv
            else:
                del rk[l]
                cols[l].discard(k)
        if track_cols:
            _axpy(Q[l], f, Q[c])

    pivots = []  # [row, col, value]

    # stage 1: unit pivots
    heap = [(len(s), c) for c, s in cols.items()]
    heapq.heapify(heap)
    stuck = set()
    while heap:
        count, c = heapq.heappop(heap)
        rs = cols.get(c)
        if not rs or c in stuck:
            continue
        if len(rs) != count:
            heapq.heappush(heap, (len(rs), c))
            continue
        cand = [i for i in rs if rows[i][c] in (1, -1)]
        if not cand:
            stuck.add(c)
            continue
        i = min(cand, key=lambda k: (len(rows[k]), k))
        pr = rows[i]
        u = pr[c]
        touched = set(pr)
        for k in sorted(rs - {i}):
            before = set(rows[k])
            row_op(k, rows[k][c] * u, i)
            touched |= before ^ set(rows[k])
        if track_cols:
            for cc, vv in list(pr.items()):
                if cc != c:
                    _axpy(Q[cc], vv * u, Q[c])
        for cc in pr:
            cols[cc].discard(i)
        del cols[c]
        rows[i] = {}
        pivots.append([i, c, u])
        for cc in touched:
            if cols.get(cc) and cc not in stuck:
                heapq.heappush(heap, (len(cols[cc]), cc))

    # stage 2: general pivots on what is left
    active = {i for i, r in enumerate(rows) if r}
    while active:
        i, c = min(((k, cc) for k in active for cc in rows[k]),
                   key=lambda kc: (abs(rows[kc[0]][kc[1]]), len(rows[kc[0]]), kc))
        while True:
            a = rows[i][c]
            for k in sorted(cols[c] - {i}):
                row_op(k, rows[k][c] // a, i)
            for cc in sorted(set(rows[i]) - {c}):
                col_op(cc, rows[i][cc] // a, c)
            rest = [(abs(rows[k][c]), k, c) for k in cols[c] if k != i]
            rest += [(abs(v), i, cc) for cc, v in rows[i].items() if cc != c]
            if not rest:
                break
            _, i, c = min(rest)
        pivots.append([i, c, rows[i][c]])
        del cols[c]
        rows[i] = {}
        active.discard(i)
        active = {k for k in active if rows[k]}

    # signs: make every pivot positive
    for piv in pivots:
        if piv[2] < 0:
            i, c = piv[0], piv[1]
            if track_cols:
                Q[c] = {k: -v for k, v in Q[c].items()}
            elif track_rows:
                P[i] = {k: -v for k, v in P[i].items()}
                Pinv[i] = {k: -v for k, v in Pinv[i].items()}
            piv[2] = -piv[2]

    # stage 3: divisibility chain among the non-unit pivots
    big = [piv for piv in pivots if piv[2] != 1]
    for x in range(len(big)):
        for y in range(x + 1, len(big)):
            r1, c1, a = big[x]
            r2, c2, b = big[y]
            if b % a == 0:
                continue
            g, s, t = _xgcd(a, b)
            if track_rows:
                _axpy(P[r1], -1, P[r2])
                _axpy(Pinv[r2], 1, Pinv[r1])
            if track_cols:
                q1, q2 = Q[c1], Q[c2]
                n1 = {}
                _axpy(n1, -s, q1)
                _axpy(n1, -t, q2)
                n2 = {}
                _axpy(n2, b // g, q1)
                _axpy(n2, -(a // g), q2)
                Q[c1], Q[c2] = n1, n2
            f = t * b // g
            if track_rows:
                _axpy(P[r2], f, P[r1])
                _axpy(Pinv[r1], -f, Pinv[r2])
            big[x][2], big[y][2] = g, a * b // g
    pivots.sort(key=lambda piv: piv[2])
    pr = [piv[0] for piv in pivots]
    pc = [piv[1] for piv in pivots]
    used_r, used_c = set(pr), set(pc)
    row_order = pr + [i for i in range(m) if i not in used_r]
    col_order = pc + [c for c in range(ncols) if c not in used_c]
    return Reduction((m, ncols), [piv[2] for piv in pivots], row_order, col_order, P, Pinv, Q)


def invariant_factors(matrix):
    """Nonzero invariant factors of a scipy sparse or dense integer matrix."""
    if sp.issparse(matrix):
        m = sp.csr_matrix(matrix)
        if m.shape[0] > m.shape[1]:
            m = sp.csr_matrix(m.T)
        return reduce_rows(csr_to_rows(m), m.shape[1]).diag
    a = np.asarray(matrix, dtype=object)
    return reduce_rows(dense_to_rows(a), a.shape[1]).diag


def smith_normal_form(M):
    """Return ``(U, S, V)`` with ``U @ M @ V == S`` exactly.

    ``U`` and ``V`` are unimodular and ``S`` is diagonal with each diagonal
    entry dividing the next.  All three are numpy object arrays of Python
    ints.
    """
    A = np.asarray(M, dtype=object)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = A.shape
    red = reduce_rows(dense_to_rows(A), n, track_rows=True, track_cols=True)
    U = np.zeros((m, m), dtype=object)
    V = np.zeros((n, n), dtype=object)
    for k in range(m):
        for j, v in red.P_row(k).items():
            U[k, j] = v
    for k in range(n):
        for j, v in red.Q_col(k).items():
            V[j, k] = v
    S = np.zeros((m, n), dtype=object)
    for k, d in enumerate(red.diag):
        S[k, k] = d
    return U, S, V
