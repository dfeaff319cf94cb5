"""Grid spaces Γ_pq of a matched pair and their face maps.

A grid in Γ_pq is a p-by-q lattice of commuting squares: vertical edges carry
G1 labels, horizontal edges carry G2 labels, and each unit square satisfies
``top * right == left * bottom``.  Two encodings are used.

* :class:`Grid` holds the edge labels and is convenient for single grids.
* Vertex arrays hold, for every grid at once, the products ``x[i, j]`` of the
  edges along any monotone path from the top-left corner to vertex (i, j), so
  that ``x[0, 0] = e``.  Then ``g_ij = x[i-1, j]^-1 x[i, j]`` and
  ``s_ij = x[i, j-1]^-1 x[i, j]``.  Faces become "delete a vertex row/column
  and renormalise", which vectorises well.

Grids of Γ_pq are numbered in mixed radix by their left column (most
significant, top to bottom, radix |G1|) followed by their top row (left to
right, radix |G2|); a digit is the position of the label in the sorted
subgroup list.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .matched_pair import MatchedPair, complete_square


class GridError(ValueError):
    pass


class RankOutOfRange(GridError):
    pass


class FaceIndexOutOfRange(GridError):
    pass


@dataclass(frozen=True)
class Grid:
    """``vertical[i-1][j]`` is g_ij (1 <= i <= p) and ``horizontal[i][j-1]`` is s_ij."""

    p: int
    q: int
    vertical: tuple
    horizontal: tuple

    def g(self, i, j):
        return self.vertical[i - 1][j]

    def s(self, i, j):
        return self.horizontal[i][j - 1]

    @property
    def left_col(self):
        return tuple(row[0] for row in self.vertical)

    @property
    def top_row(self):
        return tuple(self.horizontal[0]) if self.horizontal else ()


def grid_count(mp: MatchedPair, p, q) -> int:
    return mp.n1 ** p * mp.n2 ** q


def grid_is_valid(mp: MatchedPair, grid: Grid) -> bool:
    t = mp.group.table
    for i in range(1, grid.p + 1):
        for j in range(grid.q + 1):
            if mp.pos1[grid.g(i, j)] < 0:
                return False
    for i in range(grid.p + 1):
        for j in range(1, grid.q + 1):
            if mp.pos2[grid.s(i, j)] < 0:
                return False
    for i in range(1, grid.p + 1):
        for j in range(1, grid.q + 1):
            if t[grid.s(i - 1, j), grid.g(i, j)] != t[grid.g(i, j - 1), grid.s(i, j)]:
                return False
    return True


def grid_from_seed(mp: MatchedPair, left_col, top_row) -> Grid:
    """Fill squares left to right, top to bottom from the left column and top row."""
    p, q = len(left_col), len(top_row)
    g = [[None] * (q + 1) for _ in range(p)]
    s = [[None] * q for _ in range(p + 1)]
    for i in range(p):
        g[i][0] = int(left_col[i])
    for j in range(q):
        s[0][j] = int(top_row[j])
    for i in range(1, p + 1):
        for j in range(1, q + 1):
            right, bottom = complete_square(mp, s[i - 1][j - 1], g[i - 1][j - 1])
            g[i - 1][j] = right
            s[i][j - 1] = bottom
    return Grid(p, q, tuple(map(tuple, g)), tuple(map(tuple, s)))


# --------------------------------------------------------------------------
# vertex arrays

def _normalise(mp, V):
    grp = mp.group
    return grp.table[grp.inverse[V[:, :1, :1]], V]


def grid_to_vertices(mp: MatchedPair, grid: Grid) -> np.ndarray:
    t = mp.group.table
    V = np.empty((grid.p + 1, grid.q + 1), dtype=np.int64)
    V[0, 0] = mp.e
    for i in range(1, grid.p + 1):
        V[i, 0] = t[V[i - 1, 0], grid.g(i, 0)]
    for i in range(grid.p + 1):
        for j in range(1, grid.q + 1):
            V[i, j] = t[V[i, j - 1], grid.s(i, j)]
    return V


def vertices_to_grid(mp: MatchedPair, V) -> Grid:
    t, inv = mp.group.table, mp.group.inverse
    V = np.asarray(V)
    p, q = V.shape[0] - 1, V.shape[1] - 1
    vert = tuple(tuple(int(t[inv[V[i - 1, j]], V[i, j]]) for j in range(q + 1))
                 for i in range(1, p + 1))
    hor = tuple(tuple(int(t[inv[V[i, j - 1]], V[i, j]]) for j in range(1, q + 1))
                for i in range(p + 1))
    return Grid(p, q, vert, hor)


def vertices_from_seed(mp: MatchedPair, left, top) -> np.ndarray:
    """Vertex arrays for seeds given as (N, p) G1 labels and (N, q) G2 labels.

    The vertex in row i and column j is the unique element of
    ``x[i,0] G2 ∩ x[0,j] G1``, namely ``c * p1(c^-1 r)`` for ``r = x[i,0]``
    and ``c = x[0,j]``.
    """
    t, inv = mp.group.table, mp.group.inverse
    left = np.asarray(left, dtype=np.int64)
    top = np.asarray(top, dtype=np.int64)
    N = left.shape[0]
    p, q = left.shape[1], top.shape[1]
    rows = np.empty((N, p + 1), dtype=np.int64)
    cols = np.empty((N, q + 1), dtype=np.int64)
    rows[:, 0] = mp.e
    cols[:, 0] = mp.e
    for i in range(p):
        rows[:, i + 1] = t[rows[:, i], left[:, i]]
    for j in range(q):
        cols[:, j + 1] = t[cols[:, j], top[:, j]]
    c = cols[:, None, :]
    r = rows[:, :, None]
    return t[c, mp.p1[t[inv[c], r]]]


@lru_cache(maxsize=256)
def _grid_vertices(mp: MatchedPair, p, q):
    N = grid_count(mp, p, q)
    digits = np.indices((mp.n1,) * p + (mp.n2,) * q).reshape(p + q, N).T
    left = mp.G1[digits[:, :p]]
    top = mp.G2[digits[:, p:]]
    V = vertices_from_seed(mp, left, top)
    V.flags.writeable = False
    return V


def grid_vertices(mp: MatchedPair, p, q) -> np.ndarray:
    """Vertex arrays of all grids of Γ_pq in rank order, shape (N, p+1, q+1)."""
    return _grid_vertices(mp, p, q)


def rank_vertices(mp: MatchedPair, V) -> np.ndarray:
    """Ranks of normalised vertex arrays of shape (N, p+1, q+1)."""
    t, inv = mp.group.table, mp.group.inverse
    p, q = V.shape[1] - 1, V.shape[2] - 1
    rank = np.zeros(V.shape[0], dtype=np.int64)
    for i in range(1, p + 1):
        rank = rank * mp.n1 + mp.pos1[t[inv[V[:, i - 1, 0]], V[:, i, 0]]]
    for j in range(1, q + 1):
        rank = rank * mp.n2 + mp.pos2[t[inv[V[:, 0, j - 1]], V[:, 0, j]]]
    return rank


def face_h_vertices(mp: MatchedPair, V, i) -> np.ndarray:
    """∂h_i on vertex arrays: delete vertex column i."""
    keep = [j for j in range(V.shape[2]) if j != i]
    return _normalise(mp, V[:, :, keep])


def face_v_vertices(mp: MatchedPair, V, j) -> np.ndarray:
    """∂v_j on vertex arrays: delete vertex row j."""
    keep = [i for i in range(V.shape[1]) if i != j]
    return _normalise(mp, V[:, keep, :])


# --------------------------------------------------------------------------
# single-grid API

def grid_rank(mp: MatchedPair, grid: Grid) -> int:
    k = 0
    for g in grid.left_col:
        k = k * mp.n1 + int(mp.pos1[g])
    for s in grid.top_row:
        k = k * mp.n2 + int(mp.pos2[s])
    return k


def grid_unrank(mp: MatchedPair, p, q, k) -> Grid:
    N = grid_count(mp, p, q)
    if not 0 <= k < N:
        raise RankOutOfRange(f"rank {k} outside 0..{N - 1} for Γ_{p}{q}")
    digits = np.unravel_index(k, (mp.n1,) * p + (mp.n2,) * q) if p + q else ()
    digits = [int(d) for d in digits]
    return grid_from_seed(mp, [mp.g1.elements[d] for d in digits[:p]],
                          [mp.g2.elements[d] for d in digits[p:]])


def face_horizontal(mp: MatchedPair, grid: Grid, i) -> Grid:
    """Contract vertex column i: merge the two adjacent horizontal edges."""
    if grid.q < 1 or not 0 <= i <= grid.q:
        raise FaceIndexOutOfRange(f"horizontal face {i} on Γ_{grid.p}{grid.q}")
    V = grid_to_vertices(mp, grid)[None]
    return vertices_to_grid(mp, face_h_vertices(mp, V, i)[0])


def face_vertical(mp: MatchedPair, grid: Grid, j) -> Grid:
    """Contract vertex row j: merge the two adjacent vertical edges."""
    if grid.p < 1 or not 0 <= j <= grid.p:
        raise FaceIndexOutOfRange(f"vertical face {j} on Γ_{grid.p}{grid.q}")
    V = grid_to_vertices(mp, grid)[None]
    return vertices_to_grid(mp, face_v_vertices(mp, V, j)[0])


def diagonal_vertices(mp: MatchedPair, xs) -> np.ndarray:
    """Vertex arrays of X(x_1..x_n) in Γ_nn for tuples ``xs`` of shape (N, n).

    The k-th diagonal square is the square whose product is x_k, so the
    diagonal vertices are the partial products x_1...x_k; every other vertex
    is forced by the row and column cosets.
    """
    t, inv = mp.group.table, mp.group.inverse
    xs = np.asarray(xs, dtype=np.int64)
    N, n = xs.shape
    diag = np.empty((N, n + 1), dtype=np.int64)
    diag[:, 0] = mp.e
    for k in range(n):
        diag[:, k + 1] = t[diag[:, k], xs[:, k]]
    r = diag[:, :, None]
    c = diag[:, None, :]
    return t[c, mp.p1[t[inv[c], r]]]
