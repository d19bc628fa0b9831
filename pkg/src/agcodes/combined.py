"""Ball-centered section codes over the base field: sections of height at
most h are filtered by one Hamming ball around a projective-valued center,
and the survivors are mapped through their first-order expansion data.

The order-r coordinate at a point P uses the expansion of the twisted
section when its value there is finite and of its inverse when the value is
infinite, so a point is a solution of f = f2 of multiplicity m exactly when
the coordinates agree through order m - 1 and split at order m. With the
integral radius s0 the distance guarantee is exact:

    2h <= 2N - 4*s0 - d0

forces the first-order map to be injective on the survivors and the image
code to have minimum distance at least d0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .codes import Alphabet, Code, exact_min_distance, make_code
from .curves import Divisor, ProjectiveLine
from .errors import PreconditionError, VerificationError
from .field import INF, local_expand
from .sections import (
    RationalSection,
    TwistFamily,
    canonical_twists,
    enumerate_sections,
    phi0_projective,
)
from .xing import ball_size


def optimal_sigma0(q: int) -> Fraction:
    """Closed-form optimal radius fraction over the projective alphabet:
    1 / (q^3 + 1)."""
    if q < 2:
        raise PreconditionError("need q >= 2")
    return Fraction(1, q ** 3 + 1)


def threshold_check(q: int, h: int, n: int) -> bool:
    """Whether h/N clears q/(q^2 - 1), the regime where the asymptotic
    section-count average applies. Informational at desk scale."""
    return Fraction(h, n) > Fraction(q, q * q - 1)


def radius_ok(n: int, s0: int, q: int) -> bool:
    """s0 < N * q / (q + 1), the projective-alphabet radius cap."""
    return 0 <= s0 and s0 * (q + 1) < n * q


def distance_budget_ok(n: int, h: int, s0: int, d0: int) -> bool:
    return 2 * h <= 2 * n - 4 * s0 - d0


def phi_r_projective(
    curve: ProjectiveLine,
    f: RationalSection,
    points,
    twists: TwistFamily,
    r: int,
) -> tuple[int, ...]:
    """Order-r expansion word over the base field (r >= 1): at each point,
    the t^r coefficient of the twisted section, or of its inverse when the
    twisted value is infinite."""
    if r < 1:
        raise PreconditionError("use the projective evaluation word for r = 0")
    word = []
    for p in points:
        g = twists.at_point(p) * f.f
        place = curve.place_of_point(p)
        desc = INF if place.kind == "inf" else place.poly
        v = curve.evaluate(g, p)
        target = g.inverse() if v is INF else g
        word.append(local_expand(target, desc, r).coeffs[r])
    return tuple(word)


def phi1_projective(curve, f, points, twists) -> tuple[int, ...]:
    return phi_r_projective(curve, f, points, twists, 1)


def averaging_census(curve: ProjectiveLine, D: Divisor, h: int, s0: int,
                     points=None, twists: TwistFamily | None = None):
    """Complete-enumeration check of the averaging identity: the sum over
    every projective center of the survivor count equals the section count
    times the projective ball size. Returns (census_total, expected).

    This is independent of the distance-budget preconditions; the identity
    is purely combinatorial.
    """
    if points is None:
        points = curve.points
    points = tuple(points)
    n = len(points)
    q = curve.field.q
    if twists is None:
        twists = canonical_twists(curve, D)
    if not 0 <= s0 <= n:
        raise PreconditionError("radius must lie in [0, N]")
    sections = enumerate_sections(curve, D, h)
    words0 = [phi0_projective(curve, s, points, twists) for s in sections]
    arr0 = kernels.words_array(words0, q + 1)
    outcome = kernels.center_search(
        [arr0], [s0], alphabet_size=q + 1, strategy="exhaustive", census=True
    )
    expected = len(sections) * ball_size(n, s0, q + 1)
    return outcome.census_total, expected


@dataclass(frozen=True)
class CombinedParams:
    """Degree-zero divisor, height bound, integral projective radius,
    distance target, and the center-search strategy."""

    h: int
    s0: int
    d0: int
    strategy: str = "exhaustive"
    seed: int = 0
    trials: int = 64

    def validate(self, n: int, q: int):
        if self.d0 < 1:
            raise PreconditionError("distance target must be positive")
        if not radius_ok(n, self.s0, q):
            raise PreconditionError("radius must satisfy 0 <= s0 < N q/(q+1)")
        if not distance_budget_ok(n, self.h, self.s0, self.d0):
            raise PreconditionError("need 2h <= 2N - 4 s0 - d0")


@dataclass
class CombinedResult:
    center: tuple[int, ...]
    survivors: tuple[RationalSection, ...]
    code: Code
    exact_average: Fraction
    claimed_distance: int
    points: tuple
    n_sections: int
    strategy: str
    census_total: int | None = None
    expected_census: int | None = None


def build_combined(
    curve: ProjectiveLine,
    D: Divisor,
    params: CombinedParams,
    points=None,
    twists: TwistFamily | None = None,
    measure: bool = True,
    census: bool = False,
) -> CombinedResult:
    """Enumerate the sections, pick the best projective ball center, and map
    the survivors through the first-order word."""
    if points is None:
        points = curve.points
    points = tuple(points)
    n = len(points)
    q = curve.field.q
    params.validate(n, q)
    if twists is None:
        twists = canonical_twists(curve, D)
    sections = enumerate_sections(curve, D, params.h)
    words0 = [phi0_projective(curve, s, points, twists) for s in sections]
    arr0 = kernels.words_array(words0, q + 1)
    outcome = kernels.center_search(
        [arr0],
        [params.s0],
        alphabet_size=q + 1,
        strategy=params.strategy,
        seed=params.seed,
        trials=params.trials,
        census=census,
    )
    average = Fraction(len(sections) * ball_size(n, params.s0, q + 1), (q + 1) ** n)
    if params.strategy == "exhaustive" and outcome.best_count < math.ceil(average):
        raise VerificationError("exhaustive maximum fell below the exact average")
    if outcome.best_count < 1:
        raise VerificationError("no survivors at the chosen center")
    survivors = tuple(sections[int(i)] for i in outcome.survivor_indices)
    words1 = [phi1_projective(curve, s, points, twists) for s in survivors]
    if len(set(words1)) != len(survivors):
        raise VerificationError("first-order map is not injective on the survivors")
    metadata = {
        "construction": "combined",
        "curve": curve.kind,
        "divisor": D.serialize(),
        "h": params.h,
        "s0": params.s0,
        "strategy": params.strategy,
        "seed": params.seed,
        "trials": params.trials,
        "center": ",".join(str(s) for s in outcome.centers[0]),
        "n_sections": len(sections),
        "n_survivors": outcome.best_count,
        "average": f"{average.numerator}/{average.denominator}",
        "claimed_distance": params.d0,
        "points": ";".join(p.serialize() for p in points),
        "linear": False,
        "threshold_exceeded": int(threshold_check(q, params.h, n)),
    }
    code = make_code(Alphabet("field", q), n, words1, field=curve.field, metadata=metadata)
    if measure:
        d = exact_min_distance(code)
        code.metadata["measured_distance"] = d
        if d is not None and d < params.d0:
            raise VerificationError(f"measured distance {d} below the target {params.d0}")
    expected = len(sections) * ball_size(n, params.s0, q + 1) if census else None
    return CombinedResult(
        center=outcome.centers[0],
        survivors=survivors,
        code=code,
        exact_average=average,
        claimed_distance=params.d0,
        points=points,
        n_sections=len(sections),
        strategy=params.strategy,
        census_total=outcome.census_total,
        expected_census=expected,
    )
