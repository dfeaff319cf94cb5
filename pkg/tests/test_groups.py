import itertools

import numpy as np
import pytest

from kaccoh.groups import (NotAPermutation, NotAssociative, NotBijectiveRow, NoIdentity,
                           OrderLimitExceeded, build_group_from_permutations,
                           build_group_from_table, cyclic_group, is_subgroup, subgroup_closure)


def test_trivial_group():
    g = build_group_from_table([[0]])
    assert g.order == 1 and g.identity == 0


def test_z2_inverse():
    g = build_group_from_table([[0, 1], [1, 0]])
    assert g.order == 2
    assert g.inverse[1] == 1


def test_repeated_row_rejected():
    with pytest.raises(NotBijectiveRow) as exc:
        build_group_from_table([[0, 1], [1, 1]])
    assert exc.value.index == 1


def test_no_identity_rejected():
    # a Latin square (a - b mod 3) with a right identity but no left one
    with pytest.raises(NoIdentity):
        build_group_from_table([[0, 2, 1], [1, 0, 2], [2, 1, 0]])


def test_non_associative_latin_square():
    # a loop of order 5 that is not a group
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative) as exc:
        build_group_from_table(table)
    a, b, c = exc.value.triple
    t = np.array(table)
    assert t[t[a, b], c] != t[a, t[b, c]]


def test_permutation_groups():
    assert build_group_from_permutations(3, [(1, 2, 0)]).order == 3
    s3 = build_group_from_permutations(3, [(1, 0, 2), (1, 2, 0)])
    assert s3.order == 6
    assert s3.identity == 0


def test_not_a_permutation():
    with pytest.raises(NotAPermutation):
        build_group_from_permutations(2, [(0, 0)])


def test_order_limit():
    with pytest.raises(OrderLimitExceeded):
        build_group_from_permutations(5, [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], max_order=50)


def test_permutation_order_is_deterministic():
    a = build_group_from_permutations(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    b = build_group_from_permutations(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    assert np.array_equal(a.table, b.table)


def test_subgroup_closure_examples():
    z6 = cyclic_group(6)
    assert subgroup_closure(z6, [2]).elements == (0, 2, 4)
    assert subgroup_closure(z6, [3]).elements == (0, 3)
    assert subgroup_closure(z6, []).elements == (0,)


def test_subgroup_closure_idempotent():
    s4 = build_group_from_permutations(4, [(1, 0, 2, 3), (1, 2, 3, 0)])
    for seed in ([1], [2, 5], [7], list(range(3))):
        h = subgroup_closure(s4, seed)
        assert subgroup_closure(s4, h.elements).elements == h.elements
        assert is_subgroup(s4, h.elements)


def test_associativity_of_built_groups():
    for g in (cyclic_group(7), build_group_from_permutations(4, [(1, 2, 3, 0), (0, 3, 2, 1)])):
        t = g.table
        a, b, c = np.indices((g.order,) * 3)
        assert (t[t[a, b], c] == t[a, t[b, c]]).all()


def _isomorphic(t1, t2):
    n = len(t1)
    for perm in itertools.permutations(range(n)):
        perm = np.array(perm)
        if perm[0] != 0:
            continue
        if (perm[t1] == t2[perm[:, None], perm[None, :]]).all():
            return True
    return False


def test_permutation_build_matches_cayley_table():
    # D4 as a Cayley table, and again from its regular representation
    d4 = build_group_from_permutations(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    regular = [tuple(int(v) for v in d4.table[:, g].tolist()) for g in (1, 2)]
    # right-regular action x -> x*g realizes the group as permutations of its elements
    again = build_group_from_permutations(d4.order, regular)
    assert again.order == 8
    assert _isomorphic(d4.table, again.table)
