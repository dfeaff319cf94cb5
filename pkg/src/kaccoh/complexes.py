"""Cochain complexes of a matched pair as sparse integer matrices.

Every complex is stored by its coboundary matrices ``d[n]`` of shape
``(rank[n+1], rank[n])`` acting on column vectors of cochain values.  Cochains
on Γ_pq are indexed by grid rank, cochains on tuples by mixed radix with the
first entry most significant.  Coefficients act trivially throughout, so every
coboundary is a signed sum of pullbacks along face maps.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .grids import (diagonal_vertices, face_h_vertices, face_v_vertices, grid_count,
                    grid_vertices, rank_vertices)
from .matched_pair import MatchedPair

DEFAULT_BUDGET = 50000

KINDS = ("bar_G", "bar_G1", "bar_G2", "big_total_D", "kac_C", "pentagonal_E",
         "mapping_cone_M", "pair_K")

ALIASES = {"bar": "bar_G", "D": "big_total_D", "kac": "kac_C", "C": "kac_C",
           "pentagonal": "pentagonal_E", "E": "pentagonal_E", "cone": "mapping_cone_M",
           "M": "mapping_cone_M", "K": "pair_K"}


class ComplexError(ValueError):
    pass


class BudgetExceeded(ComplexError):
    def __init__(self, size, where, budget):
        self.size = size
        super().__init__(f"{where} has {size} basis elements, above the budget {budget}")


class DegreeUnavailable(ComplexError):
    pass


@dataclass(frozen=True)
class Block:
    label: tuple
    offset: int
    size: int


@dataclass(frozen=True, eq=False)
class CochainComplex:
    kind: str
    degrees: tuple
    ranks: dict
    matrices: dict
    blocks: dict
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_min(self):
        return self.degrees[0]

    @property
    def n_max(self):
        return self.degrees[-1]

    def d(self, n):
        """Coboundary from degree n to n+1; zero maps at the ends of the range."""
        if n == self.n_min - 1:
            return sp.csr_matrix((self.ranks[n + 1], 0), dtype=np.int64)
        if n not in self.matrices:
            raise DegreeUnavailable(f"{self.kind}: no coboundary out of degree {n}")
        return self.matrices[n]

    def rank(self, n):
        if n < self.n_min:
            return 0
        if n not in self.ranks:
            raise DegreeUnavailable(f"{self.kind}: degree {n} not built")
        return self.ranks[n]

    def block(self, n, label):
        for b in self.blocks[n]:
            if b.label == label:
                return b
        raise KeyError(label)


@dataclass(frozen=True)
class CoefficientModule:
    variant: str
    modulus: int = 0

    def __post_init__(self):
        if self.variant not in ("Z", "Zm", "T"):
            raise ValueError(f"unknown coefficient variant {self.variant!r}")
        if self.variant == "Zm" and self.modulus < 2:
            raise ValueError("IntegersMod needs m >= 2")

    @property
    def label(self):
        return f"Z/{self.modulus}" if self.variant == "Zm" else self.variant

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text in ("Z", "Integers"):
            return cls("Z")
        if text in ("T", "Torus"):
            return cls("T")
        for prefix in ("Zm:", "Z/", "Zm"):
            if text.startswith(prefix):
                return cls("Zm", int(text[len(prefix):]))
        raise ValueError(f"unknown coefficient selector {text!r}")


INTEGERS = CoefficientModule("Z")
TORUS = CoefficientModule("T")


def integers_mod(m):
    return CoefficientModule("Zm", m)


# --------------------------------------------------------------------------
# sparse helpers

def pullback(images, ncols):
    """0/1 matrix of F -> F∘φ where ``images[k]`` is φ of basis point k."""
    images = np.asarray(images, dtype=np.int64)
    n = images.shape[0]
    return sp.csr_matrix((np.ones(n, dtype=np.int64), (np.arange(n), images)),
                         shape=(n, ncols))


def signed_sum(rows, cols, signs, shape):
    m = sp.coo_matrix((np.asarray(signs, dtype=np.int64), (rows, cols)), shape=shape).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return m


def is_zero(m):
    m = sp.csr_matrix(m)
    m.eliminate_zeros()
    return m.nnz == 0


def assemble(target_blocks, source_blocks, parts):
    """Block matrix from ``parts[(ti, si)]`` placed at the block offsets."""
    nrows = sum(b.size for b in target_blocks)
    ncols = sum(b.size for b in source_blocks)
    rows, cols, vals = [], [], []
    for (ti, si), m in parts.items():
        m = sp.coo_matrix(m)
        rows.append(m.row + target_blocks[ti].offset)
        cols.append(m.col + source_blocks[si].offset)
        vals.append(m.data.astype(np.int64))
    if not rows:
        return sp.csr_matrix((nrows, ncols), dtype=np.int64)
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.concatenate(vals),
                      (nrows, ncols))


def _blocks(pairs):
    out, off = [], 0
    for label, size in pairs:
        out.append(Block(label, off, size))
        off += size
    return out


def _check_budget(size, where, budget):
    if size > budget:
        raise BudgetExceeded(size, where, budget)


# --------------------------------------------------------------------------
# grid coboundaries

@lru_cache(maxsize=512)
def face_images(mp: MatchedPair, p, q, direction, i):
    """Ranks of ∂_i Y for all Y in the target space of the coboundary out of Γ_pq."""
    if direction == "horizontal":
        V = grid_vertices(mp, p, q + 1)
        out = rank_vertices(mp, face_h_vertices(mp, V, i))
    else:
        V = grid_vertices(mp, p + 1, q)
        out = rank_vertices(mp, face_v_vertices(mp, V, i))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=256)
def coboundary_matrix(mp: MatchedPair, p, q, direction):
    """d^h: L(Γ_pq) -> L(Γ_p,q+1) or d^v: L(Γ_pq) -> L(Γ_p+1,q); alternating face sum."""
    if direction not in ("horizontal", "vertical"):
        raise ValueError(direction)
    nfaces = q + 2 if direction == "horizontal" else p + 2
    ncols = grid_count(mp, p, q)
    rows, cols, signs = [], [], []
    for i in range(nfaces):
        img = face_images(mp, p, q, direction, i)
        rows.append(np.arange(img.shape[0]))
        cols.append(img)
        signs.append(np.full(img.shape[0], (-1) ** i))
    nrows = rows[0].shape[0]
    m = signed_sum(np.concatenate(rows), np.concatenate(cols), np.concatenate(signs),
                   (nrows, ncols))
    return m


# --------------------------------------------------------------------------
# bar complexes

def _tuple_digits(m, n):
    N = m ** n
    return np.indices((m,) * n).reshape(n, N).T if n else np.zeros((1, 0), dtype=np.int64)


def _digits_rank(digits, m):
    r = np.zeros(digits.shape[0], dtype=np.int64)
    for k in range(digits.shape[1]):
        r = r * m + digits[:, k]
    return r


def bar_coboundary(table, elements, n):
    """Bar coboundary L(H^n) -> L(H^(n+1)) with trivial action.

    ``elements`` lists H inside the ambient table; tuples are indexed by the
    positions of their entries in that list.
    """
    elements = np.asarray(elements, dtype=np.int64)
    m = len(elements)
    pos = np.full(table.shape[0], -1, dtype=np.int64)
    pos[elements] = np.arange(m)
    dig = _tuple_digits(m, n + 1)
    x = elements[dig]
    N = dig.shape[0]
    rows, cols, signs = [], [], []
    for i in range(n + 2):
        if i == 0:
            face = dig[:, 1:]
        elif i == n + 1:
            face = dig[:, :-1]
        else:
            merged = pos[table[x[:, i - 1], x[:, i]]]
            face = np.concatenate([dig[:, :i - 1], merged[:, None], dig[:, i + 1:]], axis=1)
        rows.append(np.arange(N))
        cols.append(_digits_rank(face, m))
        signs.append(np.full(N, (-1) ** i))
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.concatenate(signs),
                      (N, m ** n))


def _bar_elements(mp, which):
    if which == "G":
        return np.arange(mp.group.order)
    return mp.G1 if which == "G1" else mp.G2


def _bar(mp, which, max_degree, budget):
    elems = _bar_elements(mp, which)
    m = len(elems)
    top = max_degree + 1
    ranks, blocks, mats = {}, {}, {}
    for n in range(top + 1):
        _check_budget(m ** n, f"{which}^{n}", budget)
        ranks[n] = m ** n
        blocks[n] = _blocks([((which, n), m ** n)])
    for n in range(top):
        mats[n] = bar_coboundary(mp.group.table, elems, n)
    return ranks, blocks, mats


# --------------------------------------------------------------------------
# total complexes

def _grid_sizes(mp, cells, budget):
    for p, q in cells:
        _check_budget(grid_count(mp, p, q), f"Γ_{p}{q}", budget)
    return [((p, q), grid_count(mp, p, q)) for p, q in cells]


def _total_differential(mp, src_blocks, tgt_blocks):
    """d = d^h + (-1)^q d^v between lists of Γ blocks."""
    index = {b.label: k for k, b in enumerate(tgt_blocks)}
    parts = {}
    for si, b in enumerate(src_blocks):
        p, q = b.label
        if (p, q + 1) in index:
            parts[(index[(p, q + 1)], si)] = coboundary_matrix(mp, p, q, "horizontal")
        if (p + 1, q) in index:
            parts[(index[(p + 1, q)], si)] = (-1) ** q * coboundary_matrix(mp, p, q, "vertical")
    return assemble(tgt_blocks, src_blocks, parts)


def d_cells(n):
    return [(p, n - p) for p in range(n + 1)]


def c_cells(n):
    return [(p, n + 1 - p) for p in range(1, n + 1)]


def _total_D(mp, top, budget):
    ranks, blocks, mats = {}, {}, {}
    for n in range(top + 1):
        blocks[n] = _blocks(_grid_sizes(mp, d_cells(n), budget))
        ranks[n] = sum(b.size for b in blocks[n])
    for n in range(top):
        mats[n] = _total_differential(mp, blocks[n], blocks[n + 1])
    return ranks, blocks, mats


def _kac_C(mp, top, budget):
    ranks, blocks, mats = {0: 1}, {0: _blocks([(("A",), 1)])}, {}
    for n in range(1, top + 1):
        blocks[n] = _blocks(_grid_sizes(mp, c_cells(n), budget))
        ranks[n] = sum(b.size for b in blocks[n])
    if top >= 1:
        mats[0] = sp.csr_matrix((ranks[1], 1), dtype=np.int64)
    for n in range(1, top):
        mats[n] = _total_differential(mp, blocks[n], blocks[n + 1])
    return ranks, blocks, mats


def _pair_K(mp, top, budget):
    r1, _, m1 = _bar(mp, "G1", top - 1, budget)
    r2, _, m2 = _bar(mp, "G2", top - 1, budget)
    ranks, blocks, mats = {}, {}, {}
    for n in range(top + 1):
        blocks[n] = _blocks([(("G1", n), r1[n]), (("G2", n), r2[n])])
        ranks[n] = r1[n] + r2[n]
    for n in range(top):
        mats[n] = sp.block_diag([m1[n], m2[n]], format="csr", dtype=np.int64)
    return ranks, blocks, mats


@lru_cache(maxsize=512)
def pent_face_images(mp: MatchedPair, n, i):
    """Ranks in Γ_nn of ∂v_j ∂h_i' Y for Y in Γ_n+1,n+1, with the clipped indices."""
    V = grid_vertices(mp, n + 1, n + 1)
    hi = min(i, n + 1)
    vj = max(i - 1, 0)
    out = rank_vertices(mp, face_v_vertices(mp, face_h_vertices(mp, V, hi), vj))
    out.flags.writeable = False
    return out


def pentagonal_coboundary_matrix(mp: MatchedPair, n):
    """d_pent: L(Γ_nn) -> L(Γ_n+1,n+1), the alternating sum of d^h_i d^v_(i-1)."""
    N = grid_count(mp, n + 1, n + 1)
    rows, cols, signs = [], [], []
    for i in range(n + 3):
        rows.append(np.arange(N))
        cols.append(pent_face_images(mp, n, i))
        signs.append(np.full(N, (-1) ** i))
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.concatenate(signs),
                      (N, grid_count(mp, n, n)))


def _pentagonal_E(mp, top, budget):
    ranks, blocks, mats = {0: 2}, {0: _blocks([(("A",), 1), (("A'",), 1)])}, {}
    for n in range(1, top + 1):
        blocks[n] = _blocks(_grid_sizes(mp, [(n, n)], budget))
        ranks[n] = blocks[n][0].size
    if top >= 1:
        n11 = ranks[1]
        mats[0] = sp.csr_matrix((np.ones(n11, dtype=np.int64),
                                 (np.arange(n11), np.ones(n11, dtype=np.int64))),
                                shape=(n11, 2))
    for n in range(1, top):
        mats[n] = pentagonal_coboundary_matrix(mp, n)
    return ranks, blocks, mats


def _mapping_cone(mp, top, budget):
    dr, db, dm = _total_D(mp, top + 1, budget)
    kr, kb, km = _pair_K(mp, top, budget)
    ranks, blocks, mats = {}, {}, {}
    for n in range(-1, top + 1):
        pairs = [(("D",) + b.label, b.size) for b in db[n + 1]]
        if n >= 0:
            pairs += [(b.label, b.size) for b in kb[n]]
        blocks[n] = _blocks(pairs)
        ranks[n] = dr[n + 1] + (kr[n] if n >= 0 else 0)
    for n in range(-1, top):
        top_left = dm[n + 1]
        jmat = transform_J(mp, n + 1)
        if n >= 0:
            kd = km[n]
            mats[n] = sp.bmat([[top_left, None], [jmat, -kd]], format="csr", dtype=np.int64)
        else:
            mats[n] = sp.vstack([top_left, jmat], format="csr", dtype=np.int64)
    return ranks, blocks, mats


def build_complex(mp: MatchedPair, kind: str, max_degree: int = 3,
                  budget: int = DEFAULT_BUDGET) -> CochainComplex:
    """Build a complex with cochains through degree ``max_degree + 1``.

    The extra degree makes H^n computable for every n <= max_degree.
    """
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ComplexError(f"unknown complex kind {kind!r}")
    if max_degree < 1:
        raise ComplexError("max_degree must be at least 1")
    top = max_degree + 1
    if kind.startswith("bar_"):
        ranks, blocks, mats = _bar(mp, kind[4:], max_degree, budget)
    elif kind == "big_total_D":
        ranks, blocks, mats = _total_D(mp, top, budget)
    elif kind == "kac_C":
        ranks, blocks, mats = _kac_C(mp, top, budget)
    elif kind == "pair_K":
        ranks, blocks, mats = _pair_K(mp, top, budget)
    elif kind == "pentagonal_E":
        ranks, blocks, mats = _pentagonal_E(mp, top, budget)
    else:
        ranks, blocks, mats = _mapping_cone(mp, top, budget)
    degrees = tuple(sorted(ranks))
    for n in degrees[:-2]:
        if not is_zero(mats[n + 1] @ mats[n]):
            raise ComplexError(f"{kind}: d∘d != 0 out of degree {n}")
    return CochainComplex(kind, degrees, ranks, mats, blocks)


# --------------------------------------------------------------------------
# cochain transformations

def _tuple_rank(elems_pos, xs, m):
    return _digits_rank(elems_pos[xs], m)


def _path_moves(p, q):
    """All monotone paths as move strings of 'D' (down) and 'R' (right)."""
    for downs in combinations(range(p + q), p):
        moves = ["R"] * (p + q)
        for k in downs:
            moves[k] = "D"
        yield moves


def transform_I(mp: MatchedPair, n):
    """I: L(G^n) -> D^n, a signed sum over the monotone paths through each grid.

    The tuple read along a path lists its edges from the top-left corner; the
    sign is (-1) to the number of squares above the path.
    """
    grp = mp.group
    t, inv = grp.table, grp.inverse
    order = grp.order
    blocks = _blocks([((p, q), grid_count(mp, p, q)) for p, q in d_cells(n)])
    rows, cols, signs = [], [], []
    for b in blocks:
        p, q = b.label
        V = grid_vertices(mp, p, q)
        N = V.shape[0]
        for moves in _path_moves(p, q):
            i = j = 0
            rank = np.zeros(N, dtype=np.int64)
            above = 0
            for mv in moves:
                prev = V[:, i, j]
                if mv == "D":
                    i += 1
                    above += q - j
                else:
                    j += 1
                rank = rank * order + t[inv[prev], V[:, i, j]]
            rows.append(np.arange(N) + b.offset)
            cols.append(rank)
            signs.append(np.full(N, (-1) ** above))
    shape = (sum(b.size for b in blocks), order ** n)
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.concatenate(signs), shape)


def corner_vertices(V, i, n):
    """P_i: the lower-left corner of a vertex array, vertex rows i..n and columns 0..i."""
    return V[:, i:n + 1, :i + 1]


def _renorm(mp, V):
    grp = mp.group
    return grp.table[grp.inverse[V[:, :1, :1]], V]


def all_tuples(order, n):
    return _tuple_digits(order, n)


def transform_Iprime(mp: MatchedPair, n):
    """I': D^n -> L(G^n), F |-> sum over i of F(P_i X(x_1..x_n))."""
    order = mp.group.order
    xs = all_tuples(order, n)
    X = diagonal_vertices(mp, xs)
    blocks = _blocks([((p, q), grid_count(mp, p, q)) for p, q in d_cells(n)])
    offset = {b.label: b.offset for b in blocks}
    rows, cols = [], []
    N = xs.shape[0]
    for i in range(n + 1):
        corner = _renorm(mp, corner_vertices(X, i, n))
        rows.append(np.arange(N))
        cols.append(rank_vertices(mp, corner) + offset[(n - i, i)])
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.ones(N * (n + 1)),
                      (N, sum(b.size for b in blocks)))


def transform_J(mp: MatchedPair, n):
    """J: D^n -> K^n, projection onto the Γ_n0 and Γ_0n blocks."""
    n1, n2 = mp.n1 ** n, mp.n2 ** n
    if n == 0:
        return sp.csr_matrix(np.ones((2, 1), dtype=np.int64))
    blocks = _blocks([((p, q), grid_count(mp, p, q)) for p, q in d_cells(n)])
    ncols = sum(b.size for b in blocks)
    first = blocks[-1].offset   # Γ_n0
    second = blocks[0].offset   # Γ_0n
    rows = np.concatenate([np.arange(n1), n1 + np.arange(n2)])
    cols = np.concatenate([first + np.arange(n1), second + np.arange(n2)])
    return signed_sum(rows, cols, np.ones(n1 + n2), (n1 + n2, ncols))


def sigma_vertices(V):
    """Append an identity top row and an identity last column."""
    V = np.concatenate([V[:, :1, :], V], axis=1)
    return np.concatenate([V, V[:, :, -1:]], axis=2)


def transform_T(mp: MatchedPair, n):
    """T: C^n -> E^n; for n >= 1, F |-> sum over i = 1..n of F(P_i σ(Z))."""
    if n == 0:
        return sp.csr_matrix(np.array([[1], [0]], dtype=np.int64))
    Z = grid_vertices(mp, n, n)
    S = sigma_vertices(Z)
    N = Z.shape[0]
    blocks = _blocks([((p, q), grid_count(mp, p, q)) for p, q in c_cells(n)])
    offset = {b.label: b.offset for b in blocks}
    rows, cols = [], []
    for i in range(1, n + 1):
        corner = _renorm(mp, corner_vertices(S, i, n + 1))
        rows.append(np.arange(N))
        cols.append(rank_vertices(mp, corner) + offset[(n + 1 - i, i)])
    return signed_sum(np.concatenate(rows), np.concatenate(cols), np.ones(N * n),
                      (N, sum(b.size for b in blocks)))


def restriction(mp: MatchedPair, n):
    """L(G^n) -> K^n, restriction of functions to G1^n and G2^n."""
    order = mp.group.order
    out = []
    for elems in (mp.G1, mp.G2):
        xs = elems[all_tuples(len(elems), n)]
        out.append(_digits_rank(xs, order))
    cols = np.concatenate(out)
    return pullback(cols, order ** n)


def diagonal_ranks(mp: MatchedPair, n):
    """Rank in Γ_nn of X(x_1..x_n) for every tuple, in tuple order."""
    X = diagonal_vertices(mp, all_tuples(mp.group.order, n))
    return rank_vertices(mp, X)


def kac_to_cone(mp: MatchedPair, C: CochainComplex, M: CochainComplex, n):
    """C^n -> M^n; inclusion of the inner blocks for n >= 1, a |-> (0, (a, 0)) at n = 0."""
    if n == 0:
        g1 = M.block(0, ("G1", 0)).offset
        return sp.csr_matrix(([1], ([g1], [0])), shape=(M.ranks[0], 1), dtype=np.int64)
    rows, cols = [], []
    for b in C.blocks[n]:
        tb = M.block(n, ("D",) + b.label)
        rows.append(tb.offset + np.arange(b.size))
        cols.append(b.offset + np.arange(b.size))
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    return signed_sum(rows, cols, np.ones(rows.size), (M.ranks[n], C.ranks[n]))


def cone_inclusion(K: CochainComplex, M: CochainComplex, n):
    """K^n -> M^n, G |-> (0, (-1)^n G)."""
    off = M.rank(n) - K.rank(n)
    k = K.rank(n)
    return signed_sum(off + np.arange(k), np.arange(k), np.full(k, (-1) ** n),
                      (M.rank(n), k))


def cone_projection(mp: MatchedPair, M: CochainComplex, n):
    """M^n -> L(G^(n+1)), (F, G) |-> I'(F)."""
    ip = transform_Iprime(mp, n + 1)
    pad = sp.csr_matrix((ip.shape[0], M.rank(n) - ip.shape[1]), dtype=np.int64)
    return sp.hstack([ip, pad], format="csr", dtype=np.int64)


# --------------------------------------------------------------------------
# export

def export_complex(complex_: CochainComplex, out_dir):
    """Write each coboundary in coordinate format; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for n in sorted(complex_.matrices):
        m = sp.coo_matrix(complex_.matrices[n])
        order = np.lexsort((m.col, m.row))
        path = os.path.join(out_dir, f"{complex_.kind}_d{n}.mtx")
        with open(path, "w") as fh:
            fh.write(f"{m.shape[0]} {m.shape[1]} {m.nnz}\n")
            for k in order:
                fh.write(f"{m.row[k]} {m.col[k]} {m.data[k]}\n")
        paths.append(path)
    return paths
