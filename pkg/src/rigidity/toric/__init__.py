"""Exact toric geometry for resolutions of cyclic quotient singularities."""

from .cohomology import cech_counts_p1, h1_projspace, hi_projspace
from .divisors import (
    DivisorPolyhedron,
    NotCartierError,
    TorusDivisor,
    canonical_divisor,
    cartier_data,
    class_in_basis,
    demazure_vanishing,
    div_of_character,
    divisor_polyhedron,
    linearly_equivalent,
    pullback,
    restrict_to_exceptional,
)
from .fan import (
    Fan,
    FanError,
    FanIsomorphism,
    StarFan,
    Subdivision,
    fan_isomorphic,
    hirzebruch_fan,
    meet_in_common_face,
    p1_times_p1_fan,
    projective_bundle_fan,
    projective_space_fan,
    single_cone_fan,
    star_fan,
    star_subdivision,
    truncated_volume,
    volume_conservation,
)
from .lattice import Cone, Lattice, cone_index, is_smooth_cone, lattice_index
from .lattice_points import DEFAULT_BRUTE_RADIUS, LatticePointResult, brute_force_witness, lattice_points_equal
from .resolution import (
    ALL_CHECKS,
    PROJECTIVE_BUNDLE,
    PROJECTIVE_SPACE,
    UNIDENTIFIED,
    ExceptionalReport,
    Resolution,
    ResolutionInputError,
    ResolutionReport,
    blowup_of_smooth_point,
    build_resolution,
    fan_script,
    parse_fan_script,
    resolution_report,
    resolution_report_for,
)
