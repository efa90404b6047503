"""Ranking patterns of the unidimensional unfolding model.

The package counts the ranking patterns an ascending configuration of m
objects can realize, by counting chambers of the mid-hyperplane
arrangement: point counts over finite fields determine the
characteristic polynomial, whose value at -1 is the chamber count
(divided by m!, the pattern count r(m)).  For five objects it also
computes the probability of each pattern under any spherical
distribution, via spherical tetrahedron volumes.
"""

from .arrangement import (
    Arrangement,
    Hyperplane,
    build_arrangement,
    coefficient_matrix,
    i4_tuples,
    prime_threshold,
    select_primes,
)
from .charpoly import (
    CharPoly,
    Factorization,
    RankingCount,
    a_sequence,
    chambers_and_r,
    factor_over_Z,
    h_from_moments,
    h_poly,
    interpolate_charpoly,
    mu2_formula,
    pipeline,
)
from .errors import MidhypError
from .ffcount import (
    CountJob,
    CountResult,
    checkpointed_count,
    count_m1,
    count_points,
    count_points_naive,
)
from .oracle import (
    intersection_lattice,
    lattice_charpoly,
    sample_patterns,
    saturate_patterns,
    thrall_count,
)
from .ranking import (
    MidpointOrder,
    ObjectConfig,
    Ranking,
    RankingPattern,
    apply_sigma,
    inversions,
    majority_ranking,
    midpoint_order,
    mirror_config,
    normalize_config,
    object_config,
    permute_config,
    rank_at,
    ranking_pattern,
)
from .spherical import (
    SphericalCone,
    chamber_cone,
    pattern_probabilities_m5,
    project_to_sphere,
    schlafli_volume,
    solid_angle_mc,
    tetra_volumes,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
