"""Desk-scale laboratory for algebraic-geometry codes.

Exact constructions of evaluation codes, derivative-refined nonlinear
codes, rational-section codes over the projective alphabet, and their
ball-centered combination, together with brute-force verification of every
distance and counting guarantee and high-precision tables of the
asymptotic bound landscape.
"""

from .errors import PreconditionError, VerificationError
from .field import (
    INF,
    FieldElement,
    FieldSpec,
    LocalExpansion,
    Polynomial,
    RationalFunction,
    enumerate_irreducibles,
    local_expand,
    make_field,
    make_field_q,
    rational_valuation,
    reduce_fraction,
)
from .curves import (
    Divisor,
    HermitianCurve,
    Place,
    Point,
    ProjectiveLine,
    build_curve,
    default_eval_points,
    evaluate,
    riemann_roch_basis,
    uniformizer,
)
from .codes import Alphabet, Code, build_goppa, exact_min_distance, goppa_sum_check
from .xing import XingParams, ball_size, build_xing, optimal_sigma, search_centers
from .sections import (
    RationalSection,
    TwistFamily,
    build_section_code,
    canonical_twists,
    enumerate_sections,
    section_height,
    solution_multiplicity,
    total_multiplicity,
)
from .combined import CombinedParams, build_combined, optimal_sigma0, threshold_check
from . import bounds

__all__ = [name for name in dir() if not name.startswith("_")]
