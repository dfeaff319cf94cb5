"""Independent cross-check of cohomology by local elimination.

For a prime p the elementary divisors of an integer matrix are read off by
Gaussian elimination over ℤ/p^k: pivots are chosen with minimal p-adic
valuation and every pivot's valuation is one p-part of an invariant factor.
The rank over ℚ comes from elimination modulo large primes.  None of this
shares code with :mod:`kaccoh.snf`.
"""

from __future__ import annotations

from math import prod

import numpy as np
import scipy.sparse as sp

from .complexes import CochainComplex, CoefficientModule
from .homology import AbelianGroupInfo, invariant_factors_of_orders

LARGE_PRIMES = (2147483647, 2305843009213693951)


def _valuation(x, p, cap):
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def _sparse_rows(matrix, modulus):
    m = sp.csr_matrix(matrix)
    if m.shape[0] > m.shape[1]:
        m = sp.csr_matrix(m.T)
    m.sum_duplicates()
    rows = []
    for i in range(m.shape[0]):
        a, b = m.indptr[i], m.indptr[i + 1]
        r = {}
        for c, v in zip(m.indices[a:b].tolist(), m.data[a:b].tolist()):
            v %= modulus
            if v:
                r[c] = v
        if r:
            rows.append(r)
    return rows


def local_valuations(matrix, p, k):
    """Valuations (< k) of the pivots of ``matrix`` over ℤ/p^k, plus the count of none."""
    q = p ** k
    rows = _sparse_rows(matrix, q)
    found = []
    level = 0
    while rows and level < k:
        step = p ** level
        # rows holding an entry of the current valuation
        progress = True
        while progress:
            progress = False
            rows.sort(key=len)
            for idx, r in enumerate(rows):
                piv = None
                for c, v in r.items():
                    if (v // step) % p and v % step == 0:
                        piv = c
                        break
                if piv is None:
                    continue
                a = r[piv]
                unit_inv = pow(a // step, -1, q)
                rest = []
                for other in rows[:idx] + rows[idx + 1:]:
                    b = other.get(piv)
                    if b:
                        f = (b // step) * unit_inv % q
                        for c, v in r.items():
                            nv = (other.get(c, 0) - f * v) % q
                            if nv:
                                other[c] = nv
                            else:
                                other.pop(c, None)
                    if other:
                        rest.append(other)
                rows = rest
                found.append(level)
                progress = True
                break
        level += 1
    return found


def rank_over_q(matrix):
    best = 0
    for p in LARGE_PRIMES:
        best = max(best, len(local_valuations(matrix, p, 1)))
    return best


def elementary_divisors(matrix, primes, start_exponent=2):
    """(rank, invariant factors > 1 restricted to ``primes``)."""
    rank = rank_over_q(matrix)
    orders = []
    for p in primes:
        k = start_exponent
        while True:
            vals = local_valuations(matrix, p, k)
            if len(vals) == rank:
                orders += [p ** v for v in vals if v > 0]
                break
            k *= 2
            if k > 256:
                raise RuntimeError(f"valuation of a pivot exceeds {p}^256")
    return rank, invariant_factors_of_orders(orders)


def _primes_of(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def oracle_cohomology(complex_: CochainComplex, n, coeff: CoefficientModule, group_order):
    """H^n from elementary divisors of d_(n-1) and d_n.

    Torsion is searched at the primes dividing ``group_order`` (and the
    coefficient modulus), which annihilates the cohomology of every complex
    built from a matched pair.
    """
    primes = sorted(set(_primes_of(group_order)) | set(_primes_of(coeff.modulus or 1)))
    r = complex_.rank(n)
    rk_in, div_in = elementary_divisors(complex_.d(n - 1), primes)
    rk_out, div_out = elementary_divisors(complex_.d(n), primes)
    free = r - rk_in - rk_out
    if coeff.variant == "Z":
        return AbelianGroupInfo(free, tuple(div_in), 0)
    if coeff.variant == "T":
        return AbelianGroupInfo(0, tuple(div_out), free)
    m = coeff.modulus
    # H^n ⊗ ℤ/m plus Tor(H^(n+1), ℤ/m)
    orders = [np.gcd(d, m) for d in div_in] + [m] * free + [np.gcd(d, m) for d in div_out]
    return AbelianGroupInfo.from_orders([int(o) for o in orders if o > 1])


def group_size(info: AbelianGroupInfo):
    if info.free_rank or info.torus_rank:
        return None
    return prod(info.torsion)
