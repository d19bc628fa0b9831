"""Nonlinear codes from derivatives of Riemann-Roch sections: words are the
order-m expansion coefficients of the functions that stay inside chosen
Hamming balls at every lower order.

The divisor degree may exceed the code length here; the distance guarantee
comes from counting agreement multiplicities rather than zeros of a single
function. Radii are integers s_r (floors of the real optimizer targets), so
every claim in this module is exact:

    d0 = (m+1)N - 2 * sum_r (m+1-r) s_r - deg(D) > 0

guarantees the final-order map is injective on the survivor set and the
image code has minimum distance at least d0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .codes import Alphabet, Code, exact_min_distance, make_code
from .curves import Divisor, default_eval_points
from .errors import PreconditionError, VerificationError


def ball_size(n: int, radius: int, alphabet_size: int) -> int:
    """Exact size of the closed Hamming ball: sum_{i<=radius} C(n,i)(a-1)^i."""
    if not 0 <= radius <= n:
        raise PreconditionError("radius must lie in [0, n]")
    if alphabet_size < 2:
        raise PreconditionError("alphabet must have at least 2 symbols")
    return sum(math.comb(n, i) * (alphabet_size - 1) ** i for i in range(radius + 1))


def optimal_sigma(q: int, i: int) -> Fraction:
    """Closed-form optimal ball-radius fraction for the order-i term:
    (q-1) / (q^(2i) + q - 1)."""
    if q < 2 or i < 1:
        raise PreconditionError("need q >= 2 and i >= 1")
    return Fraction(q - 1, q ** (2 * i) + q - 1)


def distance_floor(n: int, m: int, radii, deg_d: int) -> int:
    """The guaranteed minimum distance d0 for integral radii."""
    return (m + 1) * n - 2 * sum((m + 1 - r) * s for r, s in enumerate(radii)) - deg_d


@dataclass(frozen=True)
class XingParams:
    """Build parameters: number of constrained orders m, integral radii
    s_0..s_{m-1}, center-search strategy and its seed/trial budget."""

    m: int
    radii: tuple[int, ...]
    strategy: str = "exhaustive"
    seed: int = 0
    trials: int = 64

    def validate(self, n: int, q: int):
        if self.m < 1:
            raise PreconditionError("m must be positive")
        if len(self.radii) != self.m:
            raise PreconditionError("need one radius per constrained order")
        for s in self.radii:
            if s < 0 or s * q >= n * (q - 1):
                raise PreconditionError("radius must satisfy 0 <= s_r < N(q-1)/q")


@dataclass
class CenterSearchResult:
    centers: tuple[tuple[int, ...], ...]
    survivor_indices: np.ndarray
    survivor_count: int
    exact_average: Fraction
    strategy: str
    n_candidates: int
    census_total: int | None = None
    expected_census: int | None = None


def phi_word(curve, f, points, r: int) -> tuple[int, ...]:
    """The order-r expansion word of a single function regular at every
    point: coordinate j is the t_j^r coefficient at point j."""
    return tuple(curve.local_expansion(f, p, r)[r] for p in points)


def phi_basis_rows(curve, basis, points, r: int) -> list[list[int]]:
    """Order-r expansion coefficients for each basis function; expansion is
    linear, so these rows span the full word set of L(D)."""
    rows = []
    for f in basis:
        coeffs = [curve.local_expansion(f, p, r) for p in points]
        rows.append([c[r] for c in coeffs])
    return rows


def _word_spaces(curve, D: Divisor, points, r_max: int):
    basis = curve.riemann_roch_basis(D)
    F = curve.field
    all_rows = []
    for r in range(r_max + 1):
        all_rows.append(phi_basis_rows(curve, basis, points, r))
    spaces = [kernels.linear_span_words(F, rows) for rows in all_rows]
    return basis, spaces


def search_centers(
    curve, D: Divisor, params: XingParams, points=None, census: bool = False
) -> CenterSearchResult:
    """Maximize the survivor set over center tuples.

    The exact average of the survivor count over ALL center tuples is
    #L(D) * prod_r ball(N, s_r, q) / q^(mN), recorded as a rational; the
    exhaustive strategy must return at least its ceiling.
    """
    if points is None:
        points = default_eval_points(curve, D)
    points = tuple(points)
    n = len(points)
    q = curve.field.q
    params.validate(n, q)
    supp = set(D.support)
    for p in points:
        if curve.place_of_point(p) in supp:
            raise PreconditionError("supp(D) meets the evaluation points")
    basis, spaces = _word_spaces(curve, D, points, params.m - 1)
    outcome = kernels.center_search(
        spaces,
        params.radii,
        alphabet_size=q,
        strategy=params.strategy,
        seed=params.seed,
        trials=params.trials,
        census=census,
    )
    n_l = q ** len(basis)
    prod = n_l
    for s in params.radii:
        prod *= ball_size(n, s, q)
    average = Fraction(prod, q ** (params.m * n))
    expected = prod if census else None
    if params.strategy == "exhaustive" and outcome.best_count < math.ceil(average):
        raise VerificationError("exhaustive maximum fell below the exact average")
    if outcome.best_count < 1:
        raise VerificationError("no survivors at the chosen centers")
    return CenterSearchResult(
        centers=outcome.centers,
        survivor_indices=outcome.survivor_indices,
        survivor_count=outcome.best_count,
        exact_average=average,
        strategy=params.strategy,
        n_candidates=outcome.n_candidates,
        census_total=outcome.census_total,
        expected_census=expected,
    )


def function_from_index(field, basis, index: int):
    """Rebuild the function at a span row index (little-endian digits)."""
    f = None
    for b in basis:
        index, c = divmod(index, field.q)
        if c:
            contrib = b.scale(c)
            f = contrib if f is None else f + contrib
    if f is None:
        return basis[0].scale(0)
    return f


@dataclass
class XingBuild:
    search: CenterSearchResult
    code: Code
    claimed_distance: int
    points: tuple


def build_xing(
    curve, D: Divisor, params: XingParams, points=None, measure: bool = True,
    census: bool = False,
) -> XingBuild:
    """Build the order-m code: survivors of the ball constraints mapped
    through the order-m expansion word."""
    if points is None:
        points = default_eval_points(curve, D)
    points = tuple(points)
    n = len(points)
    q = curve.field.q
    params.validate(n, q)
    d0 = distance_floor(n, params.m, params.radii, D.degree)
    if d0 <= 0:
        raise PreconditionError(
            f"divisor degree {D.degree} too large: distance floor {d0} <= 0"
        )
    search = search_centers(curve, D, params, points, census=census)
    basis, spaces = _word_spaces(curve, D, points, params.m)
    final = spaces[params.m]
    survivor_words = final[search.survivor_indices]
    uniq = np.unique(survivor_words, axis=0)
    if uniq.shape[0] != search.survivor_count:
        raise VerificationError("final-order map is not injective on the survivors")
    metadata = {
        "construction": "xing",
        "curve": curve.kind,
        "divisor": D.serialize(),
        "deg_divisor": D.degree,
        "m": params.m,
        "radii": ",".join(str(s) for s in params.radii),
        "strategy": params.strategy,
        "seed": params.seed,
        "trials": params.trials,
        "centers": "|".join(",".join(str(s) for s in c) for c in search.centers),
        "n_functions": q ** len(basis),
        "n_survivors": search.survivor_count,
        "average": f"{search.exact_average.numerator}/{search.exact_average.denominator}",
        "claimed_distance": d0,
        "points": ";".join(p.serialize() for p in points),
        "linear": False,
    }
    code = make_code(
        Alphabet("field", q), n, [tuple(int(s) for s in w) for w in uniq],
        field=curve.field, metadata=metadata,
    )
    if measure:
        d = exact_min_distance(code)
        code.metadata["measured_distance"] = d
        if d is not None and d < d0:
            raise VerificationError(f"measured distance {d} below the floor {d0}")
    return XingBuild(search=search, code=code, claimed_distance=d0, points=points)


def survivor_functions(curve, D: Divisor, search: CenterSearchResult):
    """The survivor functions themselves, for multiplicity audits."""
    basis = curve.riemann_roch_basis(D)
    field = curve.field
    out = []
    for idx in search.survivor_indices:
        out.append(function_from_index(field, basis, int(idx)))
    return out
