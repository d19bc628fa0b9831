import random

import pytest

from agcodes.curves import build_curve
from agcodes.errors import PreconditionError
from agcodes.field import (
    Polynomial,
    RationalFunction,
    enumerate_irreducibles,
    make_field_q,
)
from agcodes.sections import (
    RationalSection,
    TwistFamily,
    build_section_code,
    canonical_twists,
    enumerate_sections,
    global_twist_function,
    multiplicity_census,
    section_height,
    solution_multiplicity,
    total_multiplicity,
)
from conftest import naive_min_distance, oracle_total_multiplicity


def _p1(q):
    return build_curve("p1", make_field_q(q))


def _nontrivial_divisor_gf2(curve):
    """(x^2+x+1) - 2*(inf): a degree-zero divisor with nonempty support."""
    pi = Polynomial(curve.field, (1, 1, 1))
    return curve.divisor({curve.place_of_poly(pi): 1, curve.place_inf(): -2})


# ---------------------------------------------------------------------------
# enumeration


@pytest.mark.parametrize("q", [2, 3, 5])
def test_height_zero_sections_are_constants(q):
    curve = _p1(q)
    secs = enumerate_sections(curve, curve.zero_divisor(), 0)
    assert len(secs) == q
    values = sorted(s.f.numer.coeffs[0] if not s.f.is_zero else 0 for s in secs)
    assert values == list(range(q))


def test_height_one_sections_gf2():
    curve = _p1(2)
    secs = enumerate_sections(curve, curve.zero_divisor(), 1)
    assert len(secs) == 8  # 2 constants + the 6 fractional linear maps


def test_section_heights_audited_by_full_factorization():
    curve = _p1(3)
    D = curve.zero_divisor()
    for s in enumerate_sections(curve, D, 2):
        assert s.height == section_height(curve, D, s.f)
        assert s.height <= 2


def test_sections_nontrivial_divisor_shape():
    # every section's divisor plus D splits into parts of equal degree <= h
    curve = _p1(2)
    D = _nontrivial_divisor_gf2(curve)
    secs = enumerate_sections(curve, D, 1)
    for s in secs:
        if s.is_zero:
            continue
        E = curve.divisor_of(s.f) + D
        assert E.degree == 0
        assert E.pos_part().degree == E.neg_part().degree == s.height <= 1
    assert any(not s.is_zero for s in secs)


def test_sections_match_union_of_function_spaces():
    # dual route: the height-h sections are the union of L(D + B) over the
    # effective divisors B of degree exactly h on small places
    curve = _p1(2)
    D = curve.zero_divisor()
    h = 1
    from agcodes.xing import function_from_index

    direct = {s.f for s in enumerate_sections(curve, D, h)}
    places = [curve.place_inf()] + [
        curve.place_of_poly(pi)
        for pi in enumerate_irreducibles(curve.field, max(h, 1))
        if pi.degree <= h
    ]
    spanned = set()
    q = curve.field.q
    for pl in places:
        B = curve.divisor({pl: h})
        basis = curve.riemann_roch_basis(D + B)
        for idx in range(q ** len(basis)):
            spanned.add(function_from_index(curve.field, basis, idx))
    assert spanned == direct


def test_sections_guard():
    curve = _p1(5)
    with pytest.raises(PreconditionError):
        enumerate_sections(curve, curve.zero_divisor(), 5)


def test_sections_require_degree_zero():
    curve = _p1(2)
    with pytest.raises(PreconditionError):
        enumerate_sections(curve, curve.divisor({curve.place_inf(): 1}), 1)


def test_sections_equal_twist_of_reference_sections():
    # with g realizing D, the height-h sections for D are exactly the
    # height-h reference sections divided by g
    curve = _p1(2)
    D = _nontrivial_divisor_gf2(curve)
    g = global_twist_function(curve, D)
    assert curve.divisor_of(g) == D
    with_d = {s.f for s in enumerate_sections(curve, D, 1)}
    base = {s.f for s in enumerate_sections(curve, curve.zero_divisor(), 1)}
    mapped = set()
    for f in base:
        if f.is_zero:
            mapped.add(f)
        else:
            mapped.add(f / g)
    assert mapped == with_d


# ---------------------------------------------------------------------------
# multiplicities


def _section_by_serial(curve, D, h, serial):
    for s in enumerate_sections(curve, D, h):
        if s.f.serialize() == serial:
            return s
    raise AssertionError(f"section {serial} not found")


def test_multiplicity_example_gf3():
    curve = _p1(3)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    fx = _section_by_serial(curve, D, 2, "0,1/1")
    fxx = _section_by_serial(curve, D, 2, "0,1,1/1")
    assert fx.height == 1 and fxx.height == 2
    assert solution_multiplicity(curve, fx, fxx, curve.place_of_point(curve.points[0]), tw) == 2
    assert solution_multiplicity(curve, fx, fxx, curve.place_inf(), tw) == 1
    assert total_multiplicity(curve, fx, fxx, tw) == 3


def test_multiplicity_example_unit_difference():
    curve = _p1(3)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    fx = _section_by_serial(curve, D, 1, "0,1/1")
    fx1 = _section_by_serial(curve, D, 1, "1,1/1")
    for pt in curve.points[:-1]:
        assert solution_multiplicity(curve, fx, fx1, curve.place_of_point(pt), tw) == 0
    assert solution_multiplicity(curve, fx, fx1, curve.place_inf(), tw) == 2
    assert total_multiplicity(curve, fx, fx1, tw) == 2


def test_multiplicity_at_higher_degree_place():
    # x^2 and x^2 + x^2+x+1 agree exactly at the quadratic place
    curve = _p1(2)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    f = RationalSection(
        RationalFunction(Polynomial(curve.field, (0, 0, 1)), Polynomial.one(curve.field)),
        D, 2,
    )
    f2 = RationalSection(
        RationalFunction(Polynomial(curve.field, (1, 1)), Polynomial.one(curve.field)),
        D, 1,
    )
    pi = Polynomial(curve.field, (1, 1, 1))
    place = curve.place_of_poly(pi)
    assert solution_multiplicity(curve, f, f2, place, tw) == 1
    assert total_multiplicity(curve, f, f2, tw) == 3


def test_multiplicity_distinct_constants():
    curve = _p1(4)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    c1 = RationalSection(RationalFunction.constant(curve.field, 1), D, 0)
    c2 = RationalSection(RationalFunction.constant(curve.field, 2), D, 0)
    assert total_multiplicity(curve, c1, c2, tw) == 0


def test_multiplicity_rejects_equal_sections():
    curve = _p1(2)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    s = _section_by_serial(curve, D, 1, "0,1/1")
    with pytest.raises(PreconditionError):
        total_multiplicity(curve, s, s, tw)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_proposition_total_equals_height_sum(q):
    curve = _p1(q)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    h_cap = 3 if q < 4 else 2
    secs = enumerate_sections(curve, D, h_cap)
    rng = random.Random(100 + q)
    checked = 0
    while checked < 40:
        a = secs[rng.randrange(len(secs))]
        b = secs[rng.randrange(len(secs))]
        if a.f == b.f:
            continue
        total = total_multiplicity(curve, a, b, tw)
        assert total == a.height + b.height
        # the independent full-place-enumeration oracle agrees
        assert total == oracle_total_multiplicity(curve, a, b, tw, a.height + b.height)
        checked += 1


def test_proposition_with_nontrivial_divisor():
    curve = _p1(2)
    D = _nontrivial_divisor_gf2(curve)
    tw = canonical_twists(curve, D)
    secs = enumerate_sections(curve, D, 2)
    rng = random.Random(55)
    checked = 0
    while checked < 25:
        a = secs[rng.randrange(len(secs))]
        b = secs[rng.randrange(len(secs))]
        if a.f == b.f:
            continue
        total = total_multiplicity(curve, a, b, tw)
        assert total == a.height + b.height
        assert total == oracle_total_multiplicity(curve, a, b, tw, a.height + b.height + D.pos_part().degree)
        checked += 1


def test_proof_identity_rows():
    curve = _p1(3)
    D = curve.zero_divisor()
    tw = canonical_twists(curve, D)
    secs = enumerate_sections(curve, D, 2)
    rng = random.Random(77)
    checked = 0
    while checked < 20:
        a = secs[rng.randrange(len(secs))]
        b = secs[rng.randrange(len(secs))]
        if a.f == b.f:
            continue
        rows = multiplicity_census(curve, a, b, tw)
        assert sum((r["m"] - r["mu"] - r["mu2"]) * r["place"].degree for r in rows) == 0
        assert sum((r["mu"] + r["mu2"]) * r["place"].degree for r in rows) == a.height + b.height
        checked += 1


def test_twist_independence():
    # canonical per-place twists and the single global realization give the
    # same multiplicities everywhere
    curve = _p1(2)
    D = _nontrivial_divisor_gf2(curve)
    tw_canon = canonical_twists(curve, D)
    g = global_twist_function(curve, D)
    tw_global = TwistFamily(curve, D, {pl: g for pl in D.support})
    secs = enumerate_sections(curve, D, 1)
    places = [curve.place_inf()] + [
        curve.place_of_poly(pi) for pi in enumerate_irreducibles(curve.field, 3)
    ]
    rng = random.Random(31)
    for _ in range(15):
        a = secs[rng.randrange(len(secs))]
        b = secs[rng.randrange(len(secs))]
        if a.f == b.f:
            continue
        for pl in places:
            assert solution_multiplicity(curve, a, b, pl, tw_canon) == \
                solution_multiplicity(curve, a, b, pl, tw_global)


# ---------------------------------------------------------------------------
# the code over the projective alphabet


def test_section_code_height_zero_is_repetition():
    curve = _p1(4)
    code = build_section_code(curve, curve.zero_divisor(), 0)
    assert code.length == 5 and code.size == 4
    assert all(len(set(w)) == 1 for w in code.words)
    assert all(4 not in w for w in code.words)  # no infinity symbol
    assert code.metadata["measured_distance"] == 5


def test_section_code_gf2_h1():
    curve = _p1(2)
    code = build_section_code(curve, curve.zero_divisor(), 1)
    assert code.length == 3
    assert code.size == 8
    assert code.alphabet.size == 3
    assert code.metadata["claimed_distance"] == 1
    assert code.metadata["measured_distance"] >= 1
    assert naive_min_distance(code.words) == code.metadata["measured_distance"]


def test_section_code_gf5_h2():
    curve = _p1(5)
    code = build_section_code(curve, curve.zero_divisor(), 2)
    assert code.length == 6
    assert code.metadata["claimed_distance"] == 2
    assert code.metadata["measured_distance"] >= 2


def test_section_code_rejects_large_height():
    curve = _p1(2)
    with pytest.raises(PreconditionError):
        build_section_code(curve, curve.zero_divisor(), 2)  # 2h = 4 >= N = 3


def test_section_code_nontrivial_divisor_parameters_match_twist_choice():
    curve = _p1(2)
    D = _nontrivial_divisor_gf2(curve)
    tw_canon = canonical_twists(curve, D)
    g = global_twist_function(curve, D)
    tw_global = TwistFamily(curve, D, {pl: g for pl in D.support})
    c1 = build_section_code(curve, D, 1, twists=tw_canon)
    c2 = build_section_code(curve, D, 1, twists=tw_global)
    assert c1.size == c2.size
    assert c1.metadata["measured_distance"] == c2.metadata["measured_distance"]


def test_section_count_reference_reported():
    curve = _p1(2)
    code = build_section_code(curve, curve.zero_divisor(), 1)
    assert "count_reference" in code.metadata
    assert "count_ratio" in code.metadata
