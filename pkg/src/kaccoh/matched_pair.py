"""Exact factorizations G = G1*G2 of a finite group and their coordinate maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, SubgroupSpec, is_subgroup


class MatchedPairError(ValueError):
    pass


class NotASubgroup(MatchedPairError):
    def __init__(self, name):
        super().__init__(f"{name} is not a subgroup")


class IntersectionNotTrivial(MatchedPairError):
    def __init__(self, witness):
        self.witness = int(witness)
        super().__init__(f"G1 and G2 share the non-identity element {self.witness}")


class NotExactFactorization(MatchedPairError):
    def __init__(self, detail):
        super().__init__(f"not an exact factorization: {detail}")


@dataclass(frozen=True, eq=False)
class MatchedPair:
    """A group with subgroups G1, G2 such that every x is uniquely g*s and s'*g'.

    ``p1[x] * p2[x] == x`` and ``q2[x] * q1[x] == x`` with ``p1, q1`` in G1 and
    ``p2, q2`` in G2.  ``pos1``/``pos2`` give the position of an element in the
    sorted subgroup list (``-1`` outside the subgroup).
    """

    group: FiniteGroup
    g1: SubgroupSpec
    g2: SubgroupSpec
    p1: np.ndarray
    p2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    pos1: np.ndarray
    pos2: np.ndarray

    @property
    def e(self):
        return self.group.identity

    @property
    def G1(self):
        return np.array(self.g1.elements, dtype=np.int64)

    @property
    def G2(self):
        return np.array(self.g2.elements, dtype=np.int64)

    @property
    def n1(self):
        return len(self.g1)

    @property
    def n2(self):
        return len(self.g2)


def _ro(a):
    a = np.asarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


def build_matched_pair(group: FiniteGroup, g1_elements, g2_elements) -> MatchedPair:
    g1 = sorted(set(int(x) for x in g1_elements))
    g2 = sorted(set(int(x) for x in g2_elements))
    for name, elems in (("G1", g1), ("G2", g2)):
        if any(not 0 <= x < group.order for x in elems):
            raise NotASubgroup(name)
        if not is_subgroup(group, elems):
            raise NotASubgroup(name)
    common = sorted(set(g1) & set(g2) - {group.identity})
    if common:
        raise IntersectionNotTrivial(common[0])
    n = group.order
    if len(g1) * len(g2) != n:
        raise NotExactFactorization(f"|G1|*|G2| = {len(g1) * len(g2)} but |G| = {n}")
    a1 = np.array(g1)
    a2 = np.array(g2)
    gs = group.table[np.ix_(a1, a2)]
    sg = group.table[np.ix_(a2, a1)]
    p1 = np.full(n, -1)
    p2 = np.full(n, -1)
    q1 = np.full(n, -1)
    q2 = np.full(n, -1)
    for i, g in enumerate(g1):
        for j, s in enumerate(g2):
            x = gs[i, j]
            if p1[x] >= 0:
                raise NotExactFactorization(f"{x} = g*s in two ways")
            p1[x], p2[x] = g, s
            y = sg[j, i]
            if q1[y] >= 0:
                raise NotExactFactorization(f"{y} = s*g in two ways")
            q2[y], q1[y] = s, g
    pos1 = np.full(n, -1)
    pos1[a1] = np.arange(len(g1))
    pos2 = np.full(n, -1)
    pos2[a2] = np.arange(len(g2))
    return MatchedPair(group, SubgroupSpec(tuple(g1)), SubgroupSpec(tuple(g2)),
                       _ro(p1), _ro(p2), _ro(q1), _ro(q2), _ro(pos1), _ro(pos2))


def p_factorize(mp: MatchedPair, x):
    """Return ``(g, s)`` with ``g*s == x``."""
    return int(mp.p1[x]), int(mp.p2[x])


def q_factorize(mp: MatchedPair, x):
    """Return ``(s, g)`` with ``s*g == x``."""
    return int(mp.q2[x]), int(mp.q1[x])


def complete_square(mp: MatchedPair, s, h):
    """Complete the square with top ``s`` and left ``h`` to ``(g, t)``, ``s*g == h*t``."""
    if mp.pos2[s] < 0 or mp.pos1[h] < 0:
        raise GroupError("top must lie in G2 and left in G1")
    grp = mp.group
    y = grp.table[grp.inverse[h], s]
    return int(grp.inverse[mp.q1[y]]), int(mp.q2[y])


def square_bijection_report(mp: MatchedPair) -> dict:
    """Check that every pair of adjacent edges determines a square.

    Squares are enumerated from (top, left); each of the four projections onto
    (right, top), (right, bottom), (left, top), (left, bottom) and the product
    ``s*g`` must be injective.
    """
    grp = mp.group
    s = np.repeat(mp.G2, mp.n1)
    h = np.tile(mp.G1, mp.n2)
    y = grp.table[grp.inverse[h], s]
    g = grp.inverse[mp.q1[y]]
    t = mp.q2[y]
    n = grp.order
    report = {}
    for name, a, b in (("g,s", g, s), ("g,t", g, t), ("h,s", h, s), ("h,t", h, t)):
        report[name] = len(set(zip(a.tolist(), b.tolist()))) == n
    prod = grp.table[s, g]
    report["commutes"] = bool((prod == grp.table[h, t]).all())
    report["product"] = len(set(prod.tolist())) == n
    return report
