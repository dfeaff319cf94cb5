"""Cohomology of integer cochain complexes with ℤ, ℤ/m and 𝕋 coefficients.

The basic computation takes an incoming matrix X (r x a) and an outgoing
matrix Y (b x r) with YX = 0 and describes ker(Y)/im(X) with explicit
generators and a coordinate map:

* reduce X with recorded row operations, P X Q = diag(d_0, ..., d_(k-1));
  in the coordinates w = P z, im X is spanned by d_i e_i (i < k);
* Y vanishes on e_i for i < k, so only Y'' = Y P^-1 restricted to the last
  r - k coordinates matters; reducing Y''^T with recorded row operations
  gives a basis of ker Y'' adapted to Y''.

ℤ and ℤ/m cochains use X = d_(n-1), Y = d_n.  For 𝕋 the complex is
transposed (X = d_n^T, Y = d_(n-1)^T), and the cohomology is the character
group of that homology, since 𝕋 is divisible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod

import numpy as np
import scipy.sparse as sp

from .complexes import CochainComplex, CoefficientModule, DegreeUnavailable
from .snf import csr_to_rows, dense_to_rows, reduce_rows


class NotAChainMap(ValueError):
    def __init__(self, degree, violation):
        self.degree = degree
        self.violation = violation
        super().__init__(f"not a chain map at degree {degree}: max |violation| = {violation}")


class CoordinateError(ValueError):
    pass


# --------------------------------------------------------------------------
# abelian group descriptions

@dataclass(frozen=True)
class AbelianGroupInfo:
    free_rank: int = 0
    torsion: tuple = ()
    torus_rank: int = 0

    @classmethod
    def from_orders(cls, orders, torus=False):
        """Canonical form of the direct sum of cyclic groups of the given orders (0 = ℤ)."""
        free = sum(1 for o in orders if o == 0)
        finite = [o for o in orders if o > 1]
        factors = invariant_factors_of_orders(finite)
        if torus:
            return cls(0, tuple(factors), free)
        return cls(free, tuple(factors), 0)

    @property
    def is_trivial(self):
        return self.free_rank == 0 and self.torus_rank == 0 and not self.torsion

    @property
    def order(self):
        if self.free_rank or self.torus_rank:
            return None
        return prod(self.torsion)

    def to_json(self, degree=None, coeff=None):
        out = {}
        if degree is not None:
            out["degree"] = degree
        if coeff is not None:
            out["coeff"] = coeff
        out.update({"free_rank": self.free_rank, "torus_rank": self.torus_rank,
                    "torsion": list(self.torsion)})
        return out

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        if self.torus_rank:
            parts.append("T" if self.torus_rank == 1 else f"T^{self.torus_rank}")
        return " + ".join(parts) if parts else "0"


def _factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_of_orders(orders):
    """Invariant factors d_1 | d_2 | ... of a sum of finite cyclic groups."""
    per_prime = {}
    for o in orders:
        for p, e in _factorize(o).items():
            per_prime.setdefault(p, []).append(e)
    length = max((len(v) for v in per_prime.values()), default=0)
    factors = [1] * length
    for p, exps in per_prime.items():
        exps = sorted(exps, reverse=True)
        for k, e in enumerate(exps):
            factors[length - 1 - k] *= p ** e
    return [d for d in factors if d > 1]


# --------------------------------------------------------------------------
# exact vector helpers

def to_object(vec):
    out = np.empty(len(vec), dtype=object)
    out[:] = list(vec)
    return out


def apply_exact(matrix, vec):
    """matrix @ vec without overflow; ``vec`` may hold ints or Fractions."""
    m = sp.csr_matrix(matrix)
    vec = to_object(vec)
    out = np.zeros(m.shape[0], dtype=object)
    if m.nnz == 0:
        return out
    contrib = m.data.astype(object) * vec[m.indices]
    counts = np.diff(m.indptr)
    nonempty = np.flatnonzero(counts)
    out[nonempty] = np.add.reduceat(contrib, m.indptr[nonempty])
    return out


def frac_mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def _dot(sparse_vec, dense):
    return sum(v * dense[k] for k, v in sparse_vec.items())


def _column_dicts(matrix):
    m = sp.csc_matrix(matrix)
    m.sum_duplicates()
    out = []
    ind, data = m.indices.tolist(), m.data.tolist()
    for j in range(m.shape[1]):
        a, b = m.indptr[j], m.indptr[j + 1]
        out.append({r: v for r, v in zip(ind[a:b], data[a:b]) if v})
    return out


# --------------------------------------------------------------------------
# the core subquotient computation

class Subquotient:
    """ker(Y) / im(X) (m = 0) or its analogue for cochains mod m."""

    def __init__(self, X, Y, modulus=0):
        X = sp.csr_matrix(X)
        Y = sp.csr_matrix(Y)
        r = X.shape[0]
        if Y.shape[1] != r:
            raise ValueError("incompatible matrices")
        self.r = r
        self.modulus = modulus
        red = reduce_rows(csr_to_rows(X), X.shape[1], track_rows=True)
        self.red1 = red
        k = red.rank
        self.k = k
        ycols = _column_dicts(Y)
        tail = []
        for j in range(k, r):
            acc = {}
            for l, v in red.Pinv_col(j).items():
                for row, yv in ycols[l].items():
                    nv = acc.get(row, 0) + v * yv
                    if nv:
                        acc[row] = nv
                    else:
                        del acc[row]
            tail.append(acc)
        red2 = reduce_rows(tail, Y.shape[0], track_rows=True)
        self.red2 = red2
        # coordinate slots: (kind, index, order)
        slots = []
        for i, d in enumerate(red.diag):
            o = d if modulus == 0 else gcd(d, modulus)
            if o > 1:
                slots.append(("im", i, o))
        for j in range(r - k):
            if j < red2.rank:
                if modulus:
                    o = gcd(red2.diag[j], modulus)
                    if o > 1:
                        slots.append(("ker", j, o))
            else:
                slots.append(("ker", j, modulus))
        self.slots = slots

    @property
    def orders(self):
        return [o for _, _, o in self.slots]

    def _tail_vector(self, j, scale=1):
        """Σ_l scale * P2[j][l] * Pinv[k + l] as a dict over the r coordinates."""
        out = {}
        for l, c in self.red2.P_row(j).items():
            for idx, v in self.red1.Pinv_col(self.k + l).items():
                nv = out.get(idx, 0) + scale * c * v
                if nv:
                    out[idx] = nv
                else:
                    del out[idx]
        return out

    def generators(self):
        """Generating cycles, one per slot, as dicts."""
        gens = []
        for kind, idx, o in self.slots:
            if kind == "im":
                gens.append(dict(self.red1.Pinv_col(idx)))
            else:
                scale = 1
                if self.modulus and idx < self.red2.rank:
                    scale = self.modulus // o
                gens.append(self._tail_vector(idx, scale))
        return gens

    def coordinates(self, z):
        """Coordinates of a cycle (dense integer vector), reduced mod the orders."""
        z = to_object(z)
        coords = []
        tail = None
        for kind, idx, o in self.slots:
            if kind == "im":
                w = _dot(self.red1.P_row(idx), z)
            else:
                if tail is None:
                    tail = [_dot(self.red1.P_row(self.k + l), z) for l in range(self.r - self.k)]
                w = sum(v * tail[l] for l, v in self.red2.Pinv_col(idx).items())
                if self.modulus and idx < self.red2.rank:
                    step = self.modulus // o
                    if w % step:
                        raise CoordinateError("vector is not a cycle")
                    w //= step
            coords.append(w % o if o else w)
        return coords

    def coordinate_functionals(self):
        """Integer covectors c with c·z = coordinate of z before reduction (ℤ case)."""
        out = []
        for kind, idx, o in self.slots:
            if kind == "im":
                out.append(dict(self.red1.P_row(idx)))
            else:
                acc = {}
                for l, v in self.red2.Pinv_col(idx).items():
                    for col, pv in self.red1.P_row(self.k + l).items():
                        nv = acc.get(col, 0) + v * pv
                        if nv:
                            acc[col] = nv
                        else:
                            del acc[col]
                out.append(acc)
        return out


# --------------------------------------------------------------------------
# cohomology groups

@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    coordinates: tuple
    representative: np.ndarray


@dataclass(eq=False)
class CohomologyGroup:
    """H^n of a complex with explicit generators and coordinates.

    For ℤ and ℤ/m the coordinates of a class are the multiples of the
    generators.  For 𝕋 a class is a character of the homology of the
    transposed complex and its coordinates are its values (rationals mod 1)
    on the homology generators; torsion slots take values in (1/o)ℤ/ℤ.
    """

    complex: CochainComplex
    degree: int
    coeff: CoefficientModule
    info: AbelianGroupInfo
    orders: list
    sub: Subquotient = field(repr=False)

    def __iter__(self):
        yield self.info
        yield self.generators

    @property
    def rank(self):
        return len(self.orders)

    @property
    def generators(self):
        """Representative cochains of the generator classes.

        For 𝕋 the free slots are circle families; their entry is the integer
        covector whose multiples by t in ℝ/ℤ give the class with value t.
        """
        if self.coeff.variant != "T":
            size = self.complex.rank(self.degree)
            out = []
            for g in self.sub.generators():
                v = np.zeros(size, dtype=object)
                for k, c in g.items():
                    v[k] = c % self.coeff.modulus if self.coeff.modulus else c
                out.append(v)
            return out
        size = self.complex.rank(self.degree)
        out = []
        for o, cov in zip(self.orders, self._dual_covectors()):
            vec = _covector_dense(cov, size)
            out.append(_reduce_cochain(vec * Fraction(1, o), self.coeff) if o else vec)
        return out

    def _dual_covectors(self):
        return self.sub.coordinate_functionals()

    def coordinates(self, cochain):
        """Coordinates of the class of a cocycle."""
        cochain = to_object(cochain)
        d = self.complex.d(self.degree)
        if not is_cocycle(d, cochain, self.coeff):
            raise CoordinateError("cochain is not a cocycle")
        if self.coeff.variant == "T":
            gens = self.sub.generators()
            return [frac_mod1(sum(cochain[k] * v for k, v in g.items())) for g in gens]
        return self.sub.coordinates(cochain)

    def is_coboundary(self, cochain):
        return all(c == 0 for c in self.coordinates(cochain))

    def representative(self, coords):
        """A cocycle whose class has the given coordinates."""
        if len(coords) != self.rank:
            raise CoordinateError(f"expected {self.rank} coordinates")
        size = self.complex.rank(self.degree)
        if self.coeff.variant == "T":
            out = np.zeros(size, dtype=object)
            for c, o, cov in zip(coords, self.orders, self._dual_covectors()):
                c = Fraction(c)
                if o and (c * o).denominator != 1:
                    raise CoordinateError(f"value {c} is not of order dividing {o}")
                for k, v in cov.items():
                    out[k] += c * v
            out = _reduce_cochain(out, self.coeff)
        else:
            out = np.zeros(size, dtype=object)
            for c, g in zip(coords, self.sub.generators()):
                for k, v in g.items():
                    out[k] += int(c) * v
            out = _reduce_cochain(out, self.coeff)
        assert is_cocycle(self.complex.d(self.degree), out, self.coeff)
        return out

    def class_of(self, cochain):
        return CohomologyClass(self.degree, tuple(self.coordinates(cochain)), to_object(cochain))

    def equal_maps(self, A, B, side="target"):
        """Whether two coordinate matrices agree as maps into/out of this group."""
        return _equal_mod(A, B, self.orders, columns=(self.coeff.variant == "T"), side=side)


def _covector_dense(cov, size):
    v = np.zeros(size, dtype=object)
    for k, c in cov.items():
        v[k] = c
    return v


def _reduce_cochain(vec, coeff):
    vec = to_object(vec)
    if coeff.variant == "T":
        return to_object([frac_mod1(x) for x in vec])
    if coeff.variant == "Zm":
        return to_object([int(x) % coeff.modulus for x in vec])
    return vec


def is_cocycle(d, cochain, coeff):
    image = apply_exact(d, cochain)
    if coeff.variant == "T":
        return all(Fraction(x).denominator == 1 for x in image)
    if coeff.variant == "Zm":
        return all(int(x) % coeff.modulus == 0 for x in image)
    return all(x == 0 for x in image)


def cohomology(complex_: CochainComplex, n: int, coeff: CoefficientModule) -> CohomologyGroup:
    """H^n(complex; coeff) with generators and coordinates; cached on the complex."""
    key = ("H", n, coeff)
    if key in complex_.cache:
        return complex_.cache[key]
    if n < complex_.n_min or n + 1 > complex_.n_max:
        raise DegreeUnavailable(f"{complex_.kind}: H^{n} needs degrees {n - 1}..{n + 1}")
    d_in = complex_.d(n - 1)
    d_out = complex_.d(n)
    if coeff.variant == "T":
        sub = Subquotient(d_out.T, d_in.T, 0)
        info = AbelianGroupInfo.from_orders(sub.orders, torus=True)
    else:
        sub = Subquotient(d_in, d_out, coeff.modulus if coeff.variant == "Zm" else 0)
        info = AbelianGroupInfo.from_orders(sub.orders)
    group = CohomologyGroup(complex_, n, coeff, info, sub.orders, sub)
    complex_.cache[key] = group
    return group


def cocycle_representative(complex_, n, class_coordinates, coeff):
    return cohomology(complex_, n, coeff).representative(class_coordinates)


# --------------------------------------------------------------------------
# induced maps

def _max_violation(m):
    m = sp.csr_matrix(m)
    m.eliminate_zeros()
    return int(abs(m.data).max()) if m.nnz else 0


def check_chain_map(f, source, target, degrees, shift=0):
    for n in degrees:
        if n in f and n + 1 in f:
            lhs = target.d(n + shift) @ f[n]
            rhs = f[n + 1] @ source.d(n)
            bad = _max_violation(lhs - rhs)
            if bad:
                raise NotAChainMap(n, bad)


def induced_map(f, source, target, n, coeff, shift=0):
    """Matrix of H^n(f) in generator coordinates (rows: target slots, columns: source slots).

    ``f`` maps a source degree k to the sparse matrix from source cochains of
    degree k to target cochains of degree k + shift.
    For 𝕋 the matrix acts on value coordinates and is the transpose of the
    map induced on the homology of the transposed complexes.
    """
    if n not in f:
        raise DegreeUnavailable(f"chain map has no component in degree {n}")
    check_chain_map(f, source, target, (n - 1, n), shift)
    hs = cohomology(source, n, coeff)
    ht = cohomology(target, n + shift, coeff)
    fn = sp.csr_matrix(f[n])
    M = np.zeros((ht.rank, hs.rank), dtype=object)
    if coeff.variant == "T":
        ft = sp.csr_matrix(fn.T)
        for j, g in enumerate(ht.sub.generators()):
            image = apply_exact(ft, _covector_dense(g, ft.shape[1]))
            coords = hs.sub.coordinates(image)
            for i, c in enumerate(coords):
                M[j, i] = c
    else:
        for i, g in enumerate(hs.generators):
            coords = ht.sub.coordinates(apply_exact(fn, g))
            for j, c in enumerate(coords):
                M[j, i] = c
    return M


def _equal_mod(A, B, orders, columns, side="target"):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape != B.shape:
        return False
    D = A - B
    for idx in np.ndindex(D.shape):
        o = orders[idx[1]] if columns else orders[idx[0]]
        v = D[idx]
        if (v % o if o else v) != 0:
            return False
    return True


def is_identity_map(group: CohomologyGroup, M):
    """Whether M is the identity endomorphism of ``group`` in its coordinates."""
    eye = np.eye(group.rank, dtype=np.int64).astype(object)
    return _equal_mod(M, eye, group.orders, columns=(group.coeff.variant == "T"))


def compose(A, B):
    """Coordinate matrix of (map A) after (map B)."""
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape[1] == 0 or B.shape[0] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=object)
    return A.dot(B)


# --------------------------------------------------------------------------
# exactness

@dataclass
class NodeResult:
    index: int
    status: str
    witness: object = None
    image_order: int | None = None
    kernel_order: int | None = None

    def to_json(self):
        return {"node": self.index, "status": self.status, "witness": self.witness,
                "image_order": self.image_order, "kernel_order": self.kernel_order}


def _node_orders(node):
    if isinstance(node, CohomologyGroup):
        return list(node.orders)
    if isinstance(node, AbelianGroupInfo):
        return list(node.torsion) + [0] * (node.free_rank + node.torus_rank)
    return list(node)


def _kernel_basis(N, ncols):
    """Integer basis of {x : N x = 0} for a dense object matrix N."""
    NT = [[N[i][j] for i in range(len(N))] for j in range(ncols)]
    red = reduce_rows(dense_to_rows(NT), len(N), track_rows=True)
    out = []
    for k in range(red.rank, ncols):
        row = red.P_row(k)
        out.append([row.get(j, 0) for j in range(ncols)])
    return out


def _lattice_reduction(gens, dim):
    """Row-tracked reduction of the matrix whose columns are ``gens``."""
    rows = [{j: int(g[i]) for j, g in enumerate(gens) if g[i]} for i in range(dim)]
    return reduce_rows(rows, len(gens), track_rows=True)


def _in_lattice(red, v):
    for k in range(red.shape[0]):
        w = sum(c * int(v[j]) for j, c in red.P_row(k).items())
        if k < red.rank:
            if w % red.diag[k]:
                return False
        elif w:
            return False
    return True


def _index_product(red):
    """|ℤ^dim / L| for a full-rank lattice, or None if L has lower rank."""
    if red.rank < red.shape[0]:
        return None
    return prod(red.diag)


def _exact_at(ob, f, g, oa, oc):
    """Exactness of A -f-> B -g-> C where the nodes are ℤ^k / diag(orders)."""
    b = len(ob)
    f = np.asarray(f, dtype=object).reshape(b, len(oa))
    g = np.asarray(g, dtype=object).reshape(len(oc), b)
    gf = compose(g, f)
    for i in range(len(oc)):
        for j in range(len(oa)):
            v = gf[i, j]
            if (v % oc[i] if oc[i] else v) != 0:
                return "FAIL", {"reason": "composite not zero", "source_generator": j}, None, None
    relB = [[o if i == j else 0 for i in range(b)] for j, o in enumerate(ob) if o]
    image_gens = [list(f[:, j]) for j in range(len(oa))] + relB
    # kernel of x -> g x modulo the relations of C
    c = len(oc)
    N = [[g[i, j] for j in range(b)] + [oc[i] if i == jj else 0 for jj in range(c)]
         for i in range(c)]
    if c:
        ker = [vec[:b] for vec in _kernel_basis(N, b + c)]
    else:
        ker = [[1 if i == j else 0 for i in range(b)] for j in range(b)]
    red_im = _lattice_reduction(image_gens, b) if image_gens else None
    for vec in ker:
        if red_im is None:
            if any(vec):
                return "FAIL", {"reason": "kernel element outside image", "element": [int(x) for x in vec]}, None, None
            continue
        if not _in_lattice(red_im, vec):
            return "FAIL", {"reason": "kernel element outside image", "element": [int(x) for x in vec]}, None, None
    image_order = kernel_order = None
    if all(ob):
        total = prod(ob)
        im_index = _index_product(red_im) if red_im is not None else None
        red_ker = _lattice_reduction(ker + relB, b) if (ker or relB) else None
        ker_index = _index_product(red_ker) if red_ker is not None else None
        if b == 0:
            image_order = kernel_order = 1
        else:
            image_order = total // im_index if im_index else None
            kernel_order = total // ker_index if ker_index else None
        if image_order != kernel_order:
            return "FAIL", {"reason": "orders differ"}, image_order, kernel_order
    return "PASS", None, image_order, kernel_order


def check_exact(nodes, maps, coeff="Z"):
    """Check exactness at every interior node of nodes[0] -> nodes[1] -> ...

    ``maps[k]`` is the coordinate matrix from node k to node k+1.  With
    ``coeff = "T"`` nodes are character groups and the matrices act on value
    coordinates; exactness is checked on the dual sequence, which is exact
    exactly when the original one is.
    """
    orders = [_node_orders(nd) for nd in nodes]
    mats = [np.asarray(m, dtype=object).reshape(len(orders[k + 1]), len(orders[k]))
            for k, m in enumerate(maps)]
    label = getattr(coeff, "variant", coeff)
    n = len(nodes)
    if label == "T":
        orders = orders[::-1]
        mats = [m.T for m in mats[::-1]]
    results = []
    for k in range(1, n - 1):
        status, witness, io, ko = _exact_at(orders[k], mats[k - 1], mats[k],
                                            orders[k - 1], orders[k + 1])
        index = n - 1 - k if label == "T" else k
        results.append(NodeResult(index, status, witness, io, ko))
    results.sort(key=lambda r: r.index)
    return results
