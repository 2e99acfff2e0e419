from .certificate import EntropyCertificate, certify_gram, certify_lower_bound, find_admissible_a
from .covering import CoveringNet, build_covering_net, dictionary_net, lattice_points
from .packing import (RidgePacking, assemble_gram, build_ridge_packing, diagonal_lower_bound,
                      interacting_pairs)
from .profile import VanishingMomentProfile, build_vanishing_moment_profile, k1_profile_norm

__all__ = [
    "EntropyCertificate", "certify_gram", "certify_lower_bound", "find_admissible_a",
    "CoveringNet", "build_covering_net", "dictionary_net", "lattice_points",
    "RidgePacking", "assemble_gram", "build_ridge_packing", "diagonal_lower_bound", "interacting_pairs",
    "VanishingMomentProfile", "build_vanishing_moment_profile", "k1_profile_norm",
]
