import numpy as np

from kaccoh.complexes import INTEGERS, TORUS, build_complex, integers_mod
from kaccoh.fixtures import FIXTURES, d4, z6
from kaccoh.homology import cohomology
from kaccoh.oracle import elementary_divisors, local_valuations, oracle_cohomology, rank_over_q
from kaccoh.snf import invariant_factors


def test_local_valuations_of_diagonal():
    M = np.diag([2, 4, 12, 3])
    assert sorted(local_valuations(M, 2, 4)) == [0, 1, 2, 2]
    assert sorted(local_valuations(M, 3, 2)) == [0, 0, 1, 1]


def test_rank_over_q():
    M = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank_over_q(M) == 2


def test_elementary_divisors_match_snf():
    rng = np.random.default_rng(21)
    for _ in range(30):
        M = rng.integers(-4, 5, (6, 7)) * rng.integers(1, 3, (6, 1))
        rank, divs = elementary_divisors(M, [2, 3, 5, 7])
        inv = invariant_factors(M)
        assert rank == len(inv)
        # torsion restricted to the primes 2, 3, 5 and 7
        restricted = []
        for d in inv:
            r = 1
            for p in (2, 3, 5, 7):
                while d % p == 0:
                    d //= p
                    r *= p
            restricted.append(r)
        assert divs == [d for d in restricted if d > 1]


def test_oracle_agrees_with_engine():
    for mp in (z6(), d4()):
        B = build_complex(mp, "bar_G", 3)
        for coeff in (INTEGERS, TORUS, integers_mod(4)):
            for n in range(0, 4):
                assert oracle_cohomology(B, n, coeff, mp.group.order) == cohomology(B, n, coeff).info


def test_oracle_on_kac_complexes():
    for mp in (make() for make in FIXTURES.values()):
        C = build_complex(mp, "kac_C", 2)
        for n in (1, 2):
            assert oracle_cohomology(C, n, TORUS, mp.group.order) == cohomology(C, n, TORUS).info
