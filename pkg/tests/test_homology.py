from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp

from kaccoh.complexes import (INTEGERS, TORUS, DegreeUnavailable, build_complex, integers_mod,
                              restriction, transform_I, transform_Iprime, transform_J)
from kaccoh.fixtures import FIXTURES, d4, z6, z2xz2
from kaccoh.groups import cyclic_group
from kaccoh.homology import (AbelianGroupInfo, NotAChainMap, check_exact, cocycle_representative,
                             cohomology, compose, induced_map, is_cocycle, is_identity_map)
from kaccoh.matched_pair import build_matched_pair


def cyclic_pair(n):
    return build_matched_pair(cyclic_group(n), list(range(n)), [0])


def test_info_canonical_form():
    info = AbelianGroupInfo.from_orders([4, 2, 0, 1, 3])
    assert info.free_rank == 1 and info.torsion == (2, 12)
    assert str(AbelianGroupInfo.from_orders([2, 2])) == "Z/2 + Z/2"
    assert str(AbelianGroupInfo.from_orders([0], torus=True)) == "T"
    assert str(AbelianGroupInfo()) == "0"
    assert AbelianGroupInfo.from_orders([2, 4]).to_json(3, "T") == {
        "degree": 3, "coeff": "T", "free_rank": 0, "torus_rank": 0, "torsion": [2, 4]}


def test_degree_zero_is_constants():
    for make in FIXTURES.values():
        B = build_complex(make(), "bar_G", 1)
        assert cohomology(B, 0, INTEGERS).info == AbelianGroupInfo(1, (), 0)


def test_cyclic_regressions():
    B2 = build_complex(cyclic_pair(2), "bar_G", 2)
    assert cohomology(B2, 2, INTEGERS).info.torsion == (2,)
    assert cohomology(B2, 1, INTEGERS).info.is_trivial
    B3 = build_complex(cyclic_pair(3), "bar_G", 1)
    assert cohomology(B3, 1, TORUS).info.torsion == (3,)


def test_universal_coefficients_on_bar_complexes():
    for make in FIXTURES.values():
        B = build_complex(make(), "bar_G", 3)
        for n in range(1, 3):
            hz = cohomology(B, n + 1, INTEGERS).info
            ht = cohomology(B, n, TORUS).info
            assert ht.torsion == hz.torsion
            assert ht.torus_rank == 0 and hz.free_rank == 0


def test_mod_m_coefficients():
    B = build_complex(cyclic_pair(4), "bar_G", 2)
    assert cohomology(B, 1, integers_mod(2)).info.torsion == (2,)
    assert cohomology(B, 2, integers_mod(8)).info.torsion == (4,)


def test_degree_unavailable():
    B = build_complex(z6(), "bar_G", 1)
    with pytest.raises(DegreeUnavailable):
        cohomology(B, 2, INTEGERS)


def test_representatives_are_cocycles():
    for coeff in (INTEGERS, TORUS, integers_mod(2)):
        B = build_complex(d4(), "bar_G", 2)
        for n in (1, 2):
            grp = cohomology(B, n, coeff)
            for g in grp.generators:
                if coeff is TORUS:
                    assert all(Fraction(v).denominator in (1, 2, 4) for v in g)
                assert is_cocycle(B.d(n), g, coeff)
            zero = cocycle_representative(B, n, [0] * grp.rank, coeff)
            assert not any(zero)


def test_torus_coordinates_round_trip():
    B = build_complex(d4(), "bar_G", 3)
    grp = cohomology(B, 3, TORUS)
    rng = np.random.default_rng(0)
    for _ in range(5):
        coords = [Fraction(int(rng.integers(0, o)), o) for o in grp.orders]
        rep = grp.representative(coords)
        assert grp.coordinates(rep) == coords


def test_identity_and_zero_maps():
    mp = z6()
    B = build_complex(mp, "bar_G", 2)
    eye = {n: sp.identity(B.rank(n), dtype=np.int64, format="csr") for n in B.degrees}
    zero = {n: sp.csr_matrix((B.rank(n), B.rank(n)), dtype=np.int64) for n in B.degrees}
    for coeff in (INTEGERS, TORUS):
        for n in (1, 2):
            grp = cohomology(B, n, coeff)
            assert is_identity_map(grp, induced_map(eye, B, B, n, coeff))
            assert not induced_map(zero, B, B, n, coeff).any()


def test_not_a_chain_map():
    B = build_complex(z6(), "bar_G", 2)
    bad = {n: sp.identity(B.rank(n), dtype=np.int64, format="csr") for n in B.degrees}
    bad[1] = 2 * bad[1]
    with pytest.raises(NotAChainMap) as exc:
        induced_map(bad, B, B, 1, INTEGERS)
    assert exc.value.degree in (0, 1)


def test_restriction_to_subgroup_is_surjective():
    mp = z6()
    B = build_complex(mp, "bar_G", 1)
    B1 = build_complex(mp, "bar_G1", 1)
    res = {n: restriction(mp, n)[: mp.n1 ** n] for n in range(3)}
    M = induced_map(res, B, B1, 1, TORUS)
    assert cohomology(B, 1, TORUS).orders == [6]
    assert cohomology(B1, 1, TORUS).orders == [3]
    # the character of value 1/6 restricts to one of order 3 on ⟨2⟩
    assert (Fraction(int(M[0, 0]), 6) % 1).denominator == 3


def test_I_then_Iprime_is_identity_on_cohomology():
    for name in ("Z6", "S3"):
        mp = FIXTURES[name]()
        B = build_complex(mp, "bar_G", 3)
        D = build_complex(mp, "big_total_D", 3)
        I = {n: transform_I(mp, n) for n in range(5)}
        Ip = {n: transform_Iprime(mp, n) for n in range(5)}
        for coeff in (INTEGERS, TORUS):
            for n in (1, 2, 3):
                a = induced_map(I, B, D, n, coeff)
                b = induced_map(Ip, D, B, n, coeff)
                if coeff is TORUS:
                    assert is_identity_map(cohomology(B, n, coeff), compose(b, a))
                    assert is_identity_map(cohomology(D, n, coeff), compose(a, b))
                else:
                    assert is_identity_map(cohomology(B, n, coeff), compose(b, a))


def test_induced_maps_compose():
    mp = z2xz2()
    B = build_complex(mp, "bar_G", 2)
    D = build_complex(mp, "big_total_D", 2)
    K = build_complex(mp, "pair_K", 2)
    I = {n: transform_I(mp, n) for n in range(4)}
    res = {n: restriction(mp, n) for n in range(4)}
    J = {n: transform_J(mp, n) for n in range(4)}
    JI = {n: J[n] @ I[n] for n in range(4)}
    for coeff in (INTEGERS, TORUS):
        for n in (1, 2):
            lhs = induced_map(JI, B, K, n, coeff)
            rhs = compose(induced_map(J, D, K, n, coeff), induced_map(I, B, D, n, coeff))
            assert cohomology(K, n, coeff).equal_maps(lhs, rhs)
            assert cohomology(K, n, coeff).equal_maps(lhs, induced_map(res, B, K, n, coeff))


def test_check_exact_examples():
    z2 = AbelianGroupInfo.from_orders([2])
    res = check_exact([AbelianGroupInfo(), z2, z2, AbelianGroupInfo()],
                      [np.zeros((1, 0), dtype=object), np.array([[1]], dtype=object),
                       np.zeros((0, 1), dtype=object)])
    assert [r.status for r in res] == ["PASS", "PASS"]
    res = check_exact([AbelianGroupInfo(), z2, AbelianGroupInfo()],
                      [np.zeros((1, 0), dtype=object), np.zeros((0, 1), dtype=object)])
    assert res[0].status == "FAIL"


def test_check_exact_detects_non_exact_map():
    # Z/4 --(x2)--> Z/4 --(x2)--> Z/4 is exact; Z/4 --(x1)--> Z/4 --(x2)--> Z/4 is not
    z4 = AbelianGroupInfo.from_orders([4])
    one = lambda k: np.array([[k]], dtype=object)
    assert check_exact([z4, z4, z4], [one(2), one(2)])[0].status == "PASS"
    assert check_exact([z4, z4, z4], [one(1), one(2)])[0].status == "FAIL"
    assert check_exact([z4, z4, z4], [one(2), one(2)], coeff="T")[0].status == "PASS"
    assert check_exact([z4, z4, z4], [one(2), one(1)], coeff="T")[0].status == "FAIL"
