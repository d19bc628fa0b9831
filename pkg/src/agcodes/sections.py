"""Rational sections of a degree-zero divisor on the projective line, the
multiplicity of agreement between two sections, and the evaluation code over
the (q+1)-letter projective alphabet.

A nonzero function f is a section of height at most h (relative to a
degree-zero divisor D) when (f) + D = E with the positive and negative
parts of E each of degree at most h; since deg E = 0 the two parts always
have equal degree, called the height of f. The zero function is included
by convention with height 0.

Values of sections at a point P are read through a twist: a rational
function phi_P whose valuation at P matches the coefficient of D, making
phi_P * f regular (or honestly infinite) there. Away from supp(D) the twist
is 1. The agreement multiplicity of two sections at P is the valuation of
the difference of the twisted functions when both are finite at P, of the
difference of their inverses when both are infinite, and 0 otherwise; the
total over all geometric points is exactly the sum of the two heights.

The laboratory keeps sections on the projective line only: its Jacobian is
trivial, so every degree-zero divisor is principal and the section sets for
any D are the section sets for 0 twisted by one global function, which the
tests verify explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .codes import Alphabet, Code, exact_min_distance, make_code
from .curves import Divisor, Place, Point, ProjectiveLine
from .errors import PreconditionError, VerificationError
from .field import (
    INF,
    Polynomial,
    RationalFunction,
    ResidueField,
    factor_multiplicity,
    factorize,
    rational_valuation,
)

SECTION_ENUM_GUARD = 10 ** 6


@dataclass(frozen=True)
class RationalSection:
    """A section: the underlying function, its reference divisor, and its
    height (0 for the zero function)."""

    f: RationalFunction
    divisor: Divisor
    height: int

    @property
    def is_zero(self) -> bool:
        return self.f.is_zero


class TwistFamily:
    """Per-place twist functions for a degree-zero divisor on P^1.

    The canonical choice at a finite place pi with coefficient c is pi^c,
    and x^(-c) at infinity; any other family with the same local valuations
    gives the same multiplicities, which the tests check.
    """

    def __init__(self, curve: ProjectiveLine, divisor: Divisor, mapping=None):
        self.curve = curve
        self.divisor = divisor
        if mapping is None:
            mapping = {}
            F = curve.field
            inv_x = RationalFunction(Polynomial.one(F), Polynomial.x(F))
            for pl, c in divisor.items():
                if pl.kind == "inf":
                    mapping[pl] = inv_x ** c
                else:
                    mapping[pl] = RationalFunction.from_poly(pl.poly) ** c
        for pl, phi in mapping.items():
            if rational_valuation(phi, INF if pl.kind == "inf" else pl.poly) != divisor.coeff(pl):
                raise PreconditionError("twist valuation does not match the divisor")
        self._map = dict(mapping)

    def at_place(self, place: Place) -> RationalFunction:
        phi = self._map.get(place)
        if phi is None:
            return RationalFunction.one(self.curve.field)
        return phi

    def at_point(self, point: Point) -> RationalFunction:
        return self.at_place(self.curve.place_of_point(point))


def canonical_twists(curve: ProjectiveLine, divisor: Divisor) -> TwistFamily:
    return TwistFamily(curve, divisor)


def global_twist_function(curve: ProjectiveLine, divisor: Divisor) -> RationalFunction:
    """The principal realization of a degree-zero divisor: the product of
    pi^c over finite places; the order at infinity then matches
    automatically."""
    if divisor.degree != 0:
        raise PreconditionError("divisor must have degree zero")
    f = RationalFunction.one(curve.field)
    for pl, c in divisor.items():
        if pl.kind != "inf":
            f = f * (RationalFunction.from_poly(pl.poly) ** c)
    return f


# ---------------------------------------------------------------------------
# Heights and enumeration.

def section_height(curve: ProjectiveLine, D: Divisor, f: RationalFunction) -> int:
    """Exact height of a nonzero section: the degree of the positive part of
    (f) + D, computed from a full factorization. Audit-grade."""
    if f.is_zero:
        return 0
    E = curve.divisor_of(f) + D
    if E.degree != 0:
        raise VerificationError("(f) + D must have degree zero")
    return E.pos_part().degree


def _height_fast(curve: ProjectiveLine, D_items, w_pos, f: RationalFunction) -> int:
    """Height without full factorization: only supp(D) and infinity need
    explicit valuations; zeros elsewhere are counted by degree bookkeeping."""
    u, v = f.numer, f.denom
    du, dv = u.degree, v.degree
    height = max(du, dv)  # total degree of the zero divisor of f
    for pl, c in D_items:
        if pl.kind == "inf":
            val = dv - du
        else:
            val = factor_multiplicity(u, pl.poly) - factor_multiplicity(v, pl.poly)
        height += (max(val + c, 0) - max(val, 0)) * pl.degree
    return height


def enumerate_sections(curve: ProjectiveLine, D: Divisor, h: int):
    """The zero function plus every section of height at most h, as a
    canonically sorted tuple.

    Enumerates reduced pairs u/v up to degree h + deg(D_+) and filters by
    exact height, so the result is complete and duplicate-free.
    """
    if not isinstance(curve, ProjectiveLine):
        raise PreconditionError("sections are restricted to the projective line")
    if D.curve is not curve:
        raise PreconditionError("divisor lives on a different curve")
    if D.degree != 0:
        raise PreconditionError("reference divisor must have degree zero")
    if h < 0:
        raise PreconditionError("height bound must be nonnegative")
    q = curve.field.q
    if q ** (2 * h + 1) > SECTION_ENUM_GUARD:
        raise PreconditionError("section enumeration guard exceeded")
    w_pos = D.pos_part().degree
    max_deg = h + w_pos
    if q ** (2 * max_deg + 1) > 8 * SECTION_ENUM_GUARD:
        raise PreconditionError("twisted enumeration too large for this divisor")
    F = curve.field
    D_items = D.items()
    out = [RationalSection(RationalFunction.zero(F), D, 0)]
    monics = [
        Polynomial(F, tail + (1,))
        for dv in range(max_deg + 1)
        for tail in itertools.product(range(q), repeat=dv)
    ]
    nonzero_u = [
        Polynomial(F, tail + (lead,))
        for du in range(max_deg + 1)
        for tail in itertools.product(range(q), repeat=du)
        for lead in range(1, q)
    ]
    for v in monics:
        for u in nonzero_u:
            if u.gcd(v).degree != 0:
                continue
            f = RationalFunction(u, v)
            ht = _height_fast(curve, D_items, w_pos, f)
            if ht <= h:
                out.append(RationalSection(f, D, ht))
    out.sort(key=lambda s: (s.f.denom.key(), s.f.numer.key()))
    return tuple(out)


# ---------------------------------------------------------------------------
# Agreement multiplicities.

def _branch_multiplicity_rational(g: RationalFunction, g2: RationalFunction, place_desc) -> int:
    """Multiplicity at a rational place (descriptor: linear poly or INF)
    given the two twisted functions."""
    if place_desc is INF:
        v1 = g.evaluate_at_infinity() if not g.is_zero else 0
        v2 = g2.evaluate_at_infinity() if not g2.is_zero else 0
    else:
        a = g.field.neg(place_desc.coeffs[0])
        v1 = g.evaluate(a) if not g.is_zero else 0
        v2 = g2.evaluate(a) if not g2.is_zero else 0
    inf1 = v1 is INF
    inf2 = v2 is INF
    if inf1 != inf2:
        return 0
    if inf1:
        diff = g.inverse() - g2.inverse()
    else:
        diff = g - g2
        if v1 != v2:
            return 0
    if diff.is_zero:
        raise PreconditionError("sections must be distinct")
    return max(rational_valuation(diff, place_desc), 0)


def _branch_multiplicity_residue(g: RationalFunction, g2: RationalFunction, pi: Polynomial) -> int:
    """Multiplicity at a higher-degree place, computed at the canonical
    representative geometric point over the residue field k[x]/pi."""
    K = ResidueField(pi)
    point = K.xbar()

    def val(f: RationalFunction) -> int:
        return K.root_multiplicity(f.numer, point) - K.root_multiplicity(f.denom, point)

    def value_is_infinite(f: RationalFunction) -> bool:
        return val(f) < 0

    inf1 = (not g.is_zero) and value_is_infinite(g)
    inf2 = (not g2.is_zero) and value_is_infinite(g2)
    if inf1 != inf2:
        return 0
    if inf1:
        diff = g.inverse() - g2.inverse()
    else:
        diff = g - g2
    if diff.is_zero:
        raise PreconditionError("sections must be distinct")
    return max(
        K.root_multiplicity(diff.numer, point) - K.root_multiplicity(diff.denom, point),
        0,
    )


def solution_multiplicity(
    curve: ProjectiveLine,
    f: RationalSection,
    f2: RationalSection,
    place: Place,
    twists: TwistFamily,
) -> int:
    """Multiplicity of the place as a solution of f = f2 (per geometric
    point; every point over the place carries the same value)."""
    if f.f == f2.f:
        raise PreconditionError("sections must be distinct")
    phi = twists.at_place(place)
    g, g2 = phi * f.f, phi * f2.f
    if place.kind == "inf":
        return _branch_multiplicity_rational(g, g2, INF)
    if place.degree == 1:
        return _branch_multiplicity_rational(g, g2, place.poly)
    return _branch_multiplicity_residue(g, g2, place.poly)


def _candidate_places(curve: ProjectiveLine, D: Divisor, f: RationalFunction, f2: RationalFunction):
    """Places that can carry nonzero multiplicity: zeros of the difference,
    common poles, supp(D), and infinity."""
    places = {Place("inf")}
    places.update(D.support)
    diff = f - f2
    if not diff.is_zero and not diff.numer.is_zero and diff.numer.degree > 0:
        for pi in factorize(diff.numer):
            places.add(curve.place_of_poly(pi))
    if not f.is_zero and not f2.is_zero:
        common = f.denom.gcd(f2.denom)
        if common.degree and common.degree > 0:
            for pi in factorize(common):
                places.add(curve.place_of_poly(pi))
    return sorted(places, key=Place.sort_key)


def total_multiplicity(
    curve: ProjectiveLine,
    f: RationalSection,
    f2: RationalSection,
    twists: TwistFamily | None = None,
) -> int:
    """Total multiplicity of solutions of f = f2 over all geometric points:
    the sum over closed places of degree times multiplicity. Equals the sum
    of the two heights."""
    if f.f == f2.f:
        raise PreconditionError("sections must be distinct")
    D = f.divisor
    if twists is None:
        twists = canonical_twists(curve, D)
    total = 0
    for pl in _candidate_places(curve, D, f.f, f2.f):
        m = solution_multiplicity(curve, f, f2, pl, twists)
        total += m * pl.degree
    return total


def multiplicity_census(
    curve: ProjectiveLine,
    f: RationalSection,
    f2: RationalSection,
    twists: TwistFamily | None = None,
):
    """Per-place rows (place, m, mu, mu2, v(phi f - phi f2)) over every place
    where any of the quantities can be nonzero, for the conservation
    identities:

        sum deg * (m - mu - mu2) = 0   and   sum deg * (mu + mu2) = h + h2.
    """
    if f.f == f2.f:
        raise PreconditionError("sections must be distinct")
    D = f.divisor
    if twists is None:
        twists = canonical_twists(curve, D)
    places = set(_candidate_places(curve, D, f.f, f2.f))
    for g in (f.f, f2.f):
        if not g.is_zero and g.denom.degree > 0:
            for pi in factorize(g.denom):
                places.add(curve.place_of_poly(pi))
            # twisted poles can also sit at zeros of the twist denominators,
            # which lie inside supp(D), already included
    rows = []
    for pl in sorted(places, key=Place.sort_key):
        desc = INF if pl.kind == "inf" else pl.poly
        phi = twists.at_place(pl)
        g, g2 = phi * f.f, phi * f2.f
        mu = max(-rational_valuation(g, desc), 0) if not g.is_zero else 0
        mu2 = max(-rational_valuation(g2, desc), 0) if not g2.is_zero else 0
        m = solution_multiplicity(curve, f, f2, pl, twists)
        diff = g - g2
        vdiff = rational_valuation(diff, desc) if not diff.is_zero else None
        rows.append({"place": pl, "m": m, "mu": mu, "mu2": mu2, "v_diff": vdiff})
    return rows


# ---------------------------------------------------------------------------
# The code over the projective alphabet.

def phi0_projective(
    curve: ProjectiveLine, f: RationalSection, points, twists: TwistFamily
) -> tuple[int, ...]:
    """Twisted evaluation word over P^1(k): field encodings for finite
    values, symbol q for infinity."""
    q = curve.field.q
    word = []
    for p in points:
        g = twists.at_point(p) * f.f
        v = curve.evaluate(g, p)
        word.append(q if v is INF else int(v))
    return tuple(word)


def build_section_code(
    curve: ProjectiveLine,
    D: Divisor,
    h: int,
    points=None,
    twists: TwistFamily | None = None,
    measure: bool = True,
) -> Code:
    """Evaluation code of the height-h sections over the projective
    alphabet; needs 2h < N, which makes evaluation injective and forces
    minimum distance at least N - 2h."""
    if points is None:
        points = curve.points
    points = tuple(points)
    n = len(points)
    if 2 * h >= n:
        raise PreconditionError("need 2h < N for the plain section code")
    if twists is None:
        twists = canonical_twists(curve, D)
    sections = enumerate_sections(curve, D, h)
    words = [phi0_projective(curve, s, points, twists) for s in sections]
    if len(set(words)) != len(sections):
        raise VerificationError("evaluation is not injective on the sections")
    q = curve.field.q
    ratio_reference = ((q + 1) / q) ** n * q ** (2 * h)  # genus 0 reference count
    metadata = {
        "construction": "section",
        "curve": curve.kind,
        "divisor": D.serialize(),
        "h": h,
        "n_sections": len(sections),
        "count_reference": f"{ratio_reference:.6g}",
        "count_ratio": f"{len(sections) / ratio_reference:.6g}",
        "claimed_distance": n - 2 * h,
        "points": ";".join(p.serialize() for p in points),
        "linear": False,
        "threshold_exceeded": int(Fraction(h, n) > Fraction(q, q * q - 1)),
    }
    code = make_code(Alphabet("p1", q), n, words, field=curve.field, metadata=metadata)
    if measure:
        d = exact_min_distance(code)
        code.metadata["measured_distance"] = d
        if d is not None and d < n - 2 * h:
            raise VerificationError("measured distance below N - 2h")
    return code
