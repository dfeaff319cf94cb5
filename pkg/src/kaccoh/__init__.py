"""Cohomology of finite matched pairs of groups and the Kac exact sequence."""

__version__ = "0.1.0"

from .groups import FiniteGroup, build_group_from_permutations, build_group_from_table
from .matched_pair import MatchedPair, build_matched_pair
from .complexes import CoefficientModule, INTEGERS, TORUS, build_complex, integers_mod
from .homology import cohomology, induced_map, check_exact
from .sequence import kac_sequence, extension_group

__all__ = [
    "FiniteGroup", "build_group_from_permutations", "build_group_from_table",
    "MatchedPair", "build_matched_pair", "CoefficientModule", "INTEGERS", "TORUS",
    "build_complex", "integers_mod", "cohomology", "induced_map", "check_exact",
    "kac_sequence", "extension_group",
]
