"""The Kac exact sequence and the three computations of the extension group.

The sequence is the long exact sequence of the mapping cone M of J: D -> K,
with H(D) replaced by H(G) through I and I':

    0 -> H^0(G) -> H^0(K) -> H^0(M) -> H^1(G) -> H^1(K) -> H^1(M) -> ...

where K = bar(G1) ⊕ bar(G2) and H(M) is the Kac cohomology of the pair.
The maps are restriction, K^n -> M^n, G |-> (0, (-1)^n G), and
M^n -> L(G^(n+1)), (F, G) |-> I'(F).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import (DEFAULT_BUDGET, TORUS, build_complex, cone_inclusion, cone_projection,
                        kac_to_cone, restriction, transform_T)
from .homology import AbelianGroupInfo, check_exact, cohomology, induced_map
from .matched_pair import MatchedPair


@dataclass
class KacSequence:
    labels: list
    nodes: list
    maps: list
    results: list = field(default_factory=list)

    @property
    def exact(self):
        return all(r.status == "PASS" for r in self.results)

    def infos(self):
        return [nd if isinstance(nd, AbelianGroupInfo) else nd.info for nd in self.nodes]


def kac_sequence(mp: MatchedPair, coeff=TORUS, through=3, budget=DEFAULT_BUDGET):
    """Nodes and coordinate maps of the sequence up to H^through(M), with exactness.

    Exactness is checked at every node except the final H^through(M).
    """
    B = build_complex(mp, "bar_G", through, budget)
    K = build_complex(mp, "pair_K", through, budget)
    M = build_complex(mp, "mapping_cone_M", through, budget)
    res = {n: restriction(mp, n) for n in range(0, through + 2)}
    inc = {n: cone_inclusion(K, M, n) for n in range(0, through + 2)}
    proj = {n: cone_projection(mp, M, n) for n in range(-1, through + 1)}
    labels = ["0"]
    nodes = [AbelianGroupInfo()]
    maps = []
    for n in range(through + 1):
        hg = cohomology(B, n, coeff)
        hk = cohomology(K, n, coeff)
        hm = cohomology(M, n, coeff)
        if n == 0:
            maps.append(np.zeros((hg.rank, 0), dtype=object))
        else:
            maps.append(induced_map(proj, M, B, n - 1, coeff, shift=1))
        maps.append(induced_map(res, B, K, n, coeff))
        maps.append(induced_map(inc, K, M, n, coeff))
        labels += [f"H^{n}(G)", f"H^{n}(G1)+H^{n}(G2)", f"H^{n}(m.p.)"]
        nodes += [hg, hk, hm]
    results = check_exact(nodes, maps, coeff)
    return KacSequence(labels, nodes, maps, results)


@dataclass
class ExtensionReport:
    kac: object
    cone: object
    pentagonal: object
    cone_iso: bool
    pentagonal_iso: bool

    @property
    def agree(self):
        return (self.kac.info == self.cone.info == self.pentagonal.info
                and self.cone_iso and self.pentagonal_iso)


def _is_iso(group_a, group_b, matrix, coeff):
    results = check_exact([AbelianGroupInfo(), group_a, group_b, AbelianGroupInfo()],
                          [np.zeros((group_a.rank, 0), dtype=object), matrix,
                           np.zeros((0, group_b.rank), dtype=object)], coeff)
    return all(r.status == "PASS" for r in results)


def extension_group(mp: MatchedPair, coeff=TORUS, degree=2, budget=DEFAULT_BUDGET):
    """H^degree of the Kac, mapping cone and pentagonal complexes, with comparison maps."""
    C = build_complex(mp, "kac_C", degree, budget)
    M = build_complex(mp, "mapping_cone_M", degree, budget)
    E = build_complex(mp, "pentagonal_E", degree, budget)
    hc = cohomology(C, degree, coeff)
    hm = cohomology(M, degree, coeff)
    he = cohomology(E, degree, coeff)
    to_cone = {n: kac_to_cone(mp, C, M, n) for n in range(0, degree + 2)}
    to_pent = {n: transform_T(mp, n) for n in range(0, degree + 2)}
    cone_map = induced_map(to_cone, C, M, degree, coeff)
    pent_map = induced_map(to_pent, C, E, degree, coeff)
    return ExtensionReport(hc, hm, he, _is_iso(hc, hm, cone_map, coeff),
                           _is_iso(hc, he, pent_map, coeff))
