"""Finite groups stored as dense Cayley tables.

Elements are the integers ``0..n-1``; ``table[a, b]`` is the index of ``a*b``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

DEFAULT_ORDER_LIMIT = 10000


class GroupError(ValueError):
    """Base class for invalid group input."""


class NotBijectiveRow(GroupError):
    def __init__(self, index, axis="row"):
        self.index = index
        self.axis = axis
        super().__init__(f"{axis} {index} of the table is not a permutation")


class NoIdentity(GroupError):
    def __init__(self):
        super().__init__("table has no two-sided identity element")


class NotAssociative(GroupError):
    def __init__(self, triple):
        self.triple = tuple(int(v) for v in triple)
        a, b, c = self.triple
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")


class NotAPermutation(GroupError):
    def __init__(self, index, perm):
        self.index = index
        super().__init__(f"generator {index} is not a permutation: {list(perm)}")


class OrderLimitExceeded(GroupError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"group closure exceeded the order limit {limit}")


def _readonly(arr):
    arr = np.array(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int
    inverse: np.ndarray

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def prod(self, *elems):
        out = self.identity
        for e in elems:
            out = int(self.table[out, e])
        return out


@dataclass(frozen=True, eq=False)
class SubgroupSpec:
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in set(self.elements)


def build_group_from_table(table) -> FiniteGroup:
    """Validate a Cayley table and derive identity and inverses."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise GroupError("table entries must be integers")
    t = t.astype(np.int64)
    if t.min() < 0 or t.max() >= n:
        raise GroupError(f"table entries must lie in 0..{n - 1}")
    target = np.arange(n)
    for axis, name in ((1, "row"), (0, "column")):
        srt = np.sort(t, axis=axis)
        ok = (srt == target[None, :]) if axis == 1 else (srt == target[:, None])
        bad = np.flatnonzero(~ok.all(axis=axis))
        if bad.size:
            raise NotBijectiveRow(int(bad[0]), name)
    left = np.flatnonzero((t == target[None, :]).all(axis=1))
    right = np.flatnonzero((t == target[:, None]).all(axis=0))
    common = np.intersect1d(left, right)
    if common.size == 0:
        raise NoIdentity()
    e = int(common[0])
    # (a*b)*c versus a*(b*c) over all triples, in slabs of a
    step = max(1, 4_000_000 // (n * n))
    cols = np.arange(n)[None, None, :]
    for a0 in range(0, n, step):
        a = np.arange(a0, min(n, a0 + step))
        lhs = t[t[a][:, :, None], cols]
        rhs = t[a[:, None, None], t[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            raise NotAssociative((bad[0][0] + a0, bad[0][1], bad[0][2]))
    inverse = np.argmax(t == e, axis=1)
    return FiniteGroup(_readonly(t), e, _readonly(inverse))


def _check_perm(index, perm, degree):
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise NotAPermutation(index, perm)


def build_group_from_permutations(degree, generators, max_order=DEFAULT_ORDER_LIMIT) -> FiniteGroup:
    """Close permutation generators under composition.

    The product ``a*b`` is the composition ``i -> a[b[i]]``.  Element 0 is the
    identity and the remaining elements appear in breadth-first order, where
    the neighbours of ``x`` are ``x*g`` for the generators in the given order.
    """
    if degree < 1:
        raise GroupError("degree must be positive")
    gens = [tuple(int(v) for v in g) for g in generators]
    for k, g in enumerate(gens):
        _check_perm(k, g, degree)
    ident = tuple(range(degree))
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(x[g[i]] for i in range(degree))
            if y not in index:
                if len(elems) >= max_order:
                    raise OrderLimitExceeded(max_order)
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    arr = np.array(elems, dtype=np.int64)
    n = len(elems)
    # comp[a, b] is the permutation a∘b; look each one up among the elements
    comp = arr[np.arange(n)[:, None, None], arr[None, :, :]]
    void = np.dtype((np.void, arr.dtype.itemsize * degree))
    keys = np.ascontiguousarray(arr).view(void).ravel()
    order = np.argsort(keys)
    probe = np.ascontiguousarray(comp.reshape(n * n, degree)).view(void).ravel()
    table = order[np.searchsorted(keys[order], probe)].reshape(n, n)
    return build_group_from_table(table)


def subgroup_closure(group: FiniteGroup, seed) -> SubgroupSpec:
    """Smallest subgroup of ``group`` containing ``seed``."""
    seed = [int(s) for s in seed]
    for s in seed:
        if not 0 <= s < group.order:
            raise IndexError(f"element index {s} out of range")
    found = {group.identity}
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        for s in seed:
            y = int(group.table[x, s])
            if y not in found:
                found.add(y)
                queue.append(y)
    return SubgroupSpec(tuple(sorted(found)))


def is_subgroup(group: FiniteGroup, elements) -> bool:
    elems = sorted(set(int(e) for e in elements))
    if group.identity not in elems:
        return False
    idx = np.array(elems)
    prods = group.table[np.ix_(idx, idx)]
    return bool(np.isin(prods, idx).all())


def cyclic_group(n) -> FiniteGroup:
    a = np.arange(n)
    return build_group_from_table((a[:, None] + a[None, :]) % n)
