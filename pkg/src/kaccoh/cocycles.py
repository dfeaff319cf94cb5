"""Pointwise cocycle identities, conversions to Kac cochains, and pentagon checks.

Everything is written additively.  Tables are numpy object arrays holding
ints (ℤ, ℤ/m) or Fractions (𝕋 = ℚ/ℤ inside ℝ/ℤ).  Pair tables are indexed
by positions in the sorted subgroup lists:

* ``U[s, g, h]`` over G2 x G1 x G1, ``V[s, t, g]`` over G2 x G2 x G1,
* ``R[s, g]`` over G2 x G1,

while ``theta[x, y]`` and ``a[x]`` use element indices of G.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complexes import TORUS, CoefficientModule, diagonal_ranks
from .grids import grid_count, grid_vertices
from .homology import frac_mod1
from .matched_pair import MatchedPair


class ShapeMismatch(ValueError):
    pass


def reduce_values(arr, coeff: CoefficientModule = TORUS):
    arr = np.asarray(arr, dtype=object)
    flat = arr.ravel()
    if coeff.variant == "T":
        out = [frac_mod1(v) for v in flat]
    elif coeff.variant == "Zm":
        out = [int(v) % coeff.modulus for v in flat]
    else:
        out = [int(v) for v in flat]
    res = np.empty(arr.shape, dtype=object)
    res.ravel()[:] = out if res.size else []
    return res


def zeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


@dataclass
class CocyclePair:
    U: np.ndarray
    V: np.ndarray
    coeff: CoefficientModule = TORUS


@dataclass
class Violation:
    identity: int
    indices: tuple


def _nonzero(res, coeff):
    red = reduce_values(res, coeff)
    return [idx for idx in np.ndindex(red.shape) if red[idx] != 0]


# --------------------------------------------------------------------------
# pair cocycles

def _pair_index(mp: MatchedPair):
    t = mp.group.table
    return t, mp.G1, mp.G2, mp.pos1, mp.pos2


def pair_residuals(mp: MatchedPair, U, V):
    """Left-hand sides of the three pair identities over their full ranges."""
    t, G1, G2, pos1, pos2 = _pair_index(mp)
    U = np.asarray(U, dtype=object)
    V = np.asarray(V, dtype=object)
    n1, n2 = mp.n1, mp.n2
    # identity 1: s in G2; g, h, k in G1
    a, b, c, d = np.indices((n2, n1, n1, n1))
    s, g, h, k = G2[a], G1[b], G1[c], G1[d]
    sg = t[s, g]
    r1 = (U[pos2[mp.p2[sg]], c, d] - U[a, pos1[t[g, h]], d]
          + U[a, b, pos1[t[h, k]]] - U[a, b, c])
    # identity 2: s, t, r in G2; g in G1
    a, b, c, d = np.indices((n2, n2, n2, n1))
    s, tt, r, g = G2[a], G2[b], G2[c], G1[d]
    r2 = (V[b, c, d] - V[pos2[t[s, tt]], c, d] + V[a, pos2[t[tt, r]], d]
          - V[a, b, pos1[mp.p1[t[r, g]]]])
    # identity 3: s, t in G2; g, h in G1
    a, b, c, d = np.indices((n2, n2, n1, n1))
    s, tt, g, h = G2[a], G2[b], G1[c], G1[d]
    tg = t[tt, g]
    g_new = mp.p1[tg]
    t_new = mp.p2[tg]
    r3 = (U[b, c, d] - U[pos2[t[s, tt]], c, d]
          + U[a, pos1[g_new], pos1[mp.p1[t[t_new, h]]]]
          + V[pos2[mp.p2[t[s, g_new]]], pos2[t_new], d]
          - V[a, b, pos1[t[g, h]]] + V[a, b, c])
    return r1, r2, r3


def _element_tuple(mp, identity, idx):
    G1, G2 = mp.G1, mp.G2
    kinds = {1: "2111", 2: "2221", 3: "2211"}[identity]
    return tuple(int((G2 if kd == "2" else G1)[i]) for kd, i in zip(kinds, idx))


def check_pair_cocycle(mp: MatchedPair, pair: CocyclePair):
    """All violated instances of the three pair identities (element indices)."""
    out = []
    for k, res in enumerate(pair_residuals(mp, pair.U, pair.V), start=1):
        for idx in _nonzero(res, pair.coeff):
            out.append(Violation(k, _element_tuple(mp, k, idx)))
    return out


def coboundary_pair(mp: MatchedPair, R, coeff: CoefficientModule = TORUS) -> CocyclePair:
    """(U_R, V_R) for R over G2 x G1."""
    t, G1, G2, pos1, pos2 = _pair_index(mp)
    R = np.asarray(R, dtype=object)
    n1, n2 = mp.n1, mp.n2
    a, b, c = np.indices((n2, n1, n1))
    s, g, h = G2[a], G1[b], G1[c]
    U = -R[pos2[mp.p2[t[s, g]]], c] + R[a, pos1[t[g, h]]] - R[a, b]
    a, b, c = np.indices((n2, n2, n1))
    s, tt, g = G2[a], G2[b], G1[c]
    V = R[b, c] - R[pos2[t[s, tt]], c] + R[a, pos1[mp.p1[t[tt, g]]]]
    return CocyclePair(reduce_values(U, coeff), reduce_values(V, coeff), coeff)


def one_cocycle_residuals(mp: MatchedPair, R):
    t, G1, G2, pos1, pos2 = _pair_index(mp)
    R = np.asarray(R, dtype=object)
    n1, n2 = mp.n1, mp.n2
    a, b, c = np.indices((n2, n1, n1))
    s, g, h = G2[a], G1[b], G1[c]
    r1 = -R[pos2[mp.p2[t[s, g]]], c] + R[a, pos1[t[g, h]]] - R[a, b]
    a, b, c = np.indices((n2, n2, n1))
    s, tt, g = G2[a], G2[b], G1[c]
    r2 = R[b, c] - R[pos2[t[s, tt]], c] + R[a, pos1[mp.p1[t[tt, g]]]]
    return r1, r2


def check_one_cocycle(mp: MatchedPair, R, coeff: CoefficientModule = TORUS) -> bool:
    return all(not _nonzero(res, coeff) for res in one_cocycle_residuals(mp, R))


# --------------------------------------------------------------------------
# pair <-> Kac cochains

def _edges(mp, V, i0, j0, i1, j1):
    t, inv = mp.group.table, mp.group.inverse
    return t[inv[V[:, i0, j0]], V[:, i1, j1]]


def _r_index(mp):
    """Position indices (s, g) of the top and right edges of every Γ_11 square."""
    V = grid_vertices(mp, 1, 1)
    return mp.pos2[_edges(mp, V, 0, 0, 0, 1)], mp.pos1[_edges(mp, V, 0, 1, 1, 1)]


def _v_index(mp):
    V = grid_vertices(mp, 1, 2)
    return (mp.pos2[_edges(mp, V, 0, 0, 0, 1)], mp.pos2[_edges(mp, V, 0, 1, 0, 2)],
            mp.pos1[_edges(mp, V, 0, 2, 1, 2)])


def _u_index(mp):
    V = grid_vertices(mp, 2, 1)
    return (mp.pos2[_edges(mp, V, 0, 0, 0, 1)], mp.pos1[_edges(mp, V, 0, 1, 1, 1)],
            mp.pos1[_edges(mp, V, 1, 1, 2, 1)])


def _check_shape(arr, shape, name):
    if tuple(np.shape(arr)) != tuple(shape):
        raise ShapeMismatch(f"{name} has shape {np.shape(arr)}, expected {tuple(shape)}")


def r_to_kac_cochain(mp: MatchedPair, R):
    """Γ_11 cochain of R: the square with top s and right g carries R(s, g)."""
    _check_shape(R, (mp.n2, mp.n1), "R")
    s, g = _r_index(mp)
    return np.asarray(R, dtype=object)[s, g]


def kac_cochain_to_r(mp: MatchedPair, v):
    _check_shape(v, (grid_count(mp, 1, 1),), "cochain")
    R = zeros((mp.n2, mp.n1))
    s, g = _r_index(mp)
    R[s, g] = np.asarray(v, dtype=object)
    return R


def pair_to_kac_cochain(mp: MatchedPair, pair: CocyclePair):
    """C^2 vector: V on the Γ_12 block, then U on the Γ_21 block.

    A Γ_12 grid with top edges s, t and right edge g carries V(s, t, g); a
    Γ_21 grid with top edge s and right edges g (upper), h (lower) carries
    U(s, g, h).
    """
    _check_shape(pair.U, (mp.n2, mp.n1, mp.n1), "U")
    _check_shape(pair.V, (mp.n2, mp.n2, mp.n1), "V")
    v_part = np.asarray(pair.V, dtype=object)[_v_index(mp)]
    u_part = np.asarray(pair.U, dtype=object)[_u_index(mp)]
    return np.concatenate([v_part, u_part])


def kac_cochain_to_pair(mp: MatchedPair, v, coeff: CoefficientModule = TORUS) -> CocyclePair:
    n12, n21 = grid_count(mp, 1, 2), grid_count(mp, 2, 1)
    _check_shape(v, (n12 + n21,), "cochain")
    v = np.asarray(v, dtype=object)
    U = zeros((mp.n2, mp.n1, mp.n1))
    V = zeros((mp.n2, mp.n2, mp.n1))
    V[_v_index(mp)] = v[:n12]
    U[_u_index(mp)] = v[n12:]
    return CocyclePair(U, V, coeff)


# --------------------------------------------------------------------------
# pentagonal cocycles

def pentagonal_residuals(mp: MatchedPair, theta):
    """θ(x,y) + θ(x p1(y), p2(y) z) + θ(y,z) - θ(p2(x) y, z) - θ(x, y p1(z))."""
    t = mp.group.table
    theta = np.asarray(theta, dtype=object)
    n = mp.group.order
    x, y, z = np.indices((n, n, n))
    return (theta[x, y] + theta[t[x, mp.p1[y]], t[mp.p2[y], z]] + theta[y, z]
            - theta[t[mp.p2[x], y], z] - theta[x, t[y, mp.p1[z]]])


def check_pentagonal_cocycle(mp: MatchedPair, theta, coeff: CoefficientModule = TORUS):
    """Violated (x, y, z), in lexicographic order."""
    _check_shape(theta, (mp.group.order,) * 2, "theta")
    return [tuple(int(v) for v in idx)
            for idx in _nonzero(pentagonal_residuals(mp, theta), coeff)]


def pentagonal_coboundary(mp: MatchedPair, a, coeff: CoefficientModule = TORUS):
    """θ(x,y) = a(x) + a(p2(x) y) - a(x p1(y)) - a(y)."""
    t = mp.group.table
    a = np.asarray(a, dtype=object)
    n = mp.group.order
    x, y = np.indices((n, n))
    return reduce_values(a[x] + a[t[mp.p2[x], y]] - a[t[x, mp.p1[y]]] - a[y], coeff)


def theta_to_thetatilde(mp: MatchedPair, theta):
    """θ̃(x, y) = θ(x, p2(x)^-1 y)."""
    t, inv = mp.group.table, mp.group.inverse
    theta = np.asarray(theta, dtype=object)
    n = mp.group.order
    x, y = np.indices((n, n))
    return theta[x, t[inv[mp.p2[x]], y]]


def theta_to_pent_cochain(mp: MatchedPair, theta):
    """E^2 cochain α with α(X(x, y)) = θ(x, y)."""
    n = mp.group.order
    _check_shape(theta, (n, n), "theta")
    out = zeros(grid_count(mp, 2, 2))
    out[diagonal_ranks(mp, 2)] = np.asarray(theta, dtype=object).ravel()
    return out


def pent_cochain_to_theta(mp: MatchedPair, v):
    n = mp.group.order
    _check_shape(v, (grid_count(mp, 2, 2),), "cochain")
    return np.asarray(v, dtype=object)[diagonal_ranks(mp, 2)].reshape(n, n)


def a_to_pent_cochain(mp: MatchedPair, a):
    out = zeros(grid_count(mp, 1, 1))
    out[diagonal_ranks(mp, 1)] = np.asarray(a, dtype=object)
    return out


# --------------------------------------------------------------------------
# monomial operators

class NotBijective(ValueError):
    pass


@dataclass
class MonomialOperator:
    """(M ξ)(pt) = exp(2πi phase[pt]) ξ(perm[pt]) on functions of |G|^arity points."""

    base: int
    arity: int
    perm: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        n = self.base ** self.arity
        if self.perm.shape != (n,) or self.phase.shape != (n,):
            raise ShapeMismatch("permutation and phase must cover every point")
        if not np.array_equal(np.sort(self.perm), np.arange(n)):
            raise NotBijective("permutation table is not a bijection")

    def __matmul__(self, other):
        """Operator product: (A @ B) ξ = A (B ξ)."""
        if (self.base, self.arity) != (other.base, other.arity):
            raise ShapeMismatch("operators act on different spaces")
        perm = other.perm[self.perm]
        phase = reduce_values(self.phase + other.phase[self.perm])
        return MonomialOperator(self.base, self.arity, perm, phase)

    def equals(self, other):
        return (np.array_equal(self.perm, other.perm)
                and all(v == 0 for v in reduce_values(self.phase - other.phase)))


def monomial_from_map(base, arity, images, phase=None):
    n = base ** arity
    if phase is None:
        phase = zeros(n)
    return MonomialOperator(base, arity, np.asarray(images, dtype=np.int64),
                            reduce_values(phase))


def build_W(mp: MatchedPair, theta=None) -> MonomialOperator:
    """W_θ = W_2 θ W_1 on functions of G x G.

    W_1 and W_2 are the pullbacks along w_1(x, y) = (x p1(y), y) and
    w_2(x, y) = (x, p2(x)^-1 y); their product pulls back along w = w_1∘w_2.
    The phase at (x, y) is θ(w_2(x, y)).  The Radon-Nikodym factor of a
    bijection under counting measure is 1.
    """
    grp = mp.group
    t, inv = grp.table, grp.inverse
    n = grp.order
    if theta is None:
        theta = zeros((n, n))
    _check_shape(theta, (n, n), "theta")
    x, y = (a.ravel() for a in np.indices((n, n)))
    w1 = t[x, mp.p1[y]] * n + y
    w2 = x * n + t[inv[mp.p2[x]], y]
    W1 = monomial_from_map(n, 2, w1)
    W2 = monomial_from_map(n, 2, w2)
    Th = monomial_from_map(n, 2, np.arange(n * n), np.asarray(theta, dtype=object).ravel())
    return W2 @ Th @ W1


def leg(op: MonomialOperator, legs, arity=3):
    """Embed an arity-2 operator on the given legs of G^arity (identity elsewhere)."""
    n = op.base
    coords = np.indices((n,) * arity).reshape(arity, -1)
    i, j = legs
    pair_pt = coords[i] * n + coords[j]
    img = op.perm[pair_pt]
    new = coords.copy()
    new[i], new[j] = img // n, img % n
    flat = np.zeros(coords.shape[1], dtype=np.int64)
    for k in range(arity):
        flat = flat * n + new[k]
    return MonomialOperator(n, arity, flat, op.phase[pair_pt])


def check_pentagon(W: MonomialOperator) -> bool:
    """W_12 W_13 W_23 == W_23 W_12 exactly."""
    if W.arity != 2:
        raise ShapeMismatch("pentagon check needs an arity-2 operator")
    W12, W13, W23 = leg(W, (0, 1)), leg(W, (0, 2)), leg(W, (1, 2))
    return (W12 @ W13 @ W23).equals(W23 @ W12)


# --------------------------------------------------------------------------
# JSON files

def _encode(arr):
    arr = np.asarray(arr, dtype=object)
    return {"shape": list(arr.shape), "values": [str(Fraction(v)) for v in arr.ravel()]}


def _decode(obj, coeff):
    shape = tuple(obj["shape"])
    vals = [Fraction(v) for v in obj["values"]]
    if len(vals) != int(np.prod(shape)):
        raise ShapeMismatch("values do not fill the shape")
    arr = np.empty(shape, dtype=object)
    arr.ravel()[:] = vals
    return reduce_values(arr, coeff) if coeff.variant != "Z" else arr


def pair_to_json(pair: CocyclePair):
    return {"coeff": pair.coeff.label, "U": _encode(pair.U), "V": _encode(pair.V)}


def pair_from_json(doc) -> CocyclePair:
    coeff = CoefficientModule.parse(doc.get("coeff", "T"))
    return CocyclePair(_decode(doc["U"], coeff), _decode(doc["V"], coeff), coeff)


def theta_to_json(theta, coeff: CoefficientModule = TORUS):
    return {"coeff": coeff.label, "theta": _encode(theta)}


def theta_from_json(doc):
    coeff = CoefficientModule.parse(doc.get("coeff", "T"))
    return _decode(doc["theta"], coeff), coeff


def load_theta(path):
    with open(path) as fh:
        return theta_from_json(json.load(fh))
