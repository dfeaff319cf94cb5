"""The standard small matched pairs used in tests and examples."""

from __future__ import annotations

import numpy as np

from .groups import build_group_from_permutations, build_group_from_table, cyclic_group, subgroup_closure
from .matched_pair import build_matched_pair


def z6():
    """ℤ6 = ⟨2⟩·⟨3⟩."""
    g = cyclic_group(6)
    return build_matched_pair(g, [0, 2, 4], [0, 3])


def z2xz2():
    """Klein four group on bit pairs; G1 = first factor (bit 0), G2 = second (bit 1)."""
    a = np.arange(4)
    g = build_group_from_table(a[:, None] ^ a[None, :])
    return build_matched_pair(g, [0, 1], [0, 2])


def s3():
    """Symmetric group on three letters as ⟨c⟩·⟨τ⟩ with c a 3-cycle, τ a transposition."""
    g = build_group_from_permutations(3, [(1, 2, 0), (1, 0, 2)])
    return build_matched_pair(g, subgroup_closure(g, [1]).elements,
                              subgroup_closure(g, [2]).elements)


def d4():
    """Dihedral group of the square as ⟨r⟩·⟨reflection⟩."""
    g = build_group_from_permutations(4, [(1, 2, 3, 0), (0, 3, 2, 1)])
    return build_matched_pair(g, subgroup_closure(g, [1]).elements,
                              subgroup_closure(g, [2]).elements)


def z12():
    """ℤ12 = ⟨3⟩·⟨4⟩ ≅ ℤ4·ℤ3."""
    g = cyclic_group(12)
    return build_matched_pair(g, [0, 3, 6, 9], [0, 4, 8])


FIXTURES = {"Z6": z6, "Z2xZ2": z2xz2, "S3": s3, "D4": d4, "Z12": z12}


def fixture_document(name):
    """The JSON input document describing a fixture pair."""
    if name == "S3":
        return {"group": {"degree": 3, "permutation_generators": [[1, 2, 0], [1, 0, 2]]},
                "G1": [1], "G2": [2], "generators": True}
    if name == "D4":
        return {"group": {"degree": 4, "permutation_generators": [[1, 2, 3, 0], [0, 3, 2, 1]]},
                "G1": [1], "G2": [2], "generators": True}
    mp = FIXTURES[name]()
    return {"group": {"order": mp.group.order, "table": mp.group.table.tolist()},
            "G1": list(mp.g1.elements), "G2": list(mp.g2.elements), "generators": False}
