import math
import random
from fractions import Fraction

import pytest

from agcodes.codes import build_goppa
from agcodes.curves import build_curve, default_eval_points
from agcodes.errors import PreconditionError
from agcodes.field import Polynomial, RationalFunction, make_field
from agcodes.xing import (
    XingParams,
    ball_size,
    build_xing,
    distance_floor,
    function_from_index,
    optimal_sigma,
    phi_word,
    search_centers,
    survivor_functions,
)
from conftest import brute_ball_count, naive_min_distance


def _deg1_divisor_gf2(curve):
    """(irreducible cubic) - (irreducible quadratic): degree 1, support
    disjoint from every rational point."""
    F = curve.field
    cubic = Polynomial(F, (1, 1, 0, 1))
    quad = Polynomial(F, (1, 1, 1))
    return curve.divisor({curve.place_of_poly(cubic): 1, curve.place_of_poly(quad): -1})


# ---------------------------------------------------------------------------
# expansion words


def test_phi0_is_plain_evaluation():
    curve = build_curve("p1", make_field(2, 2))
    D = curve.divisor({curve.place_inf(): 3})
    points = default_eval_points(curve, D)
    basis = curve.riemann_roch_basis(D)
    for f in basis:
        assert phi_word(curve, f, points, 0) == tuple(
            curve.evaluate(f, p) for p in points
        )


def test_phi_r_monomial_coefficients():
    F = make_field(2, 1)
    curve = build_curve("p1", F)
    xsq = RationalFunction(Polynomial(F, (0, 0, 1)), Polynomial.one(F))
    origin = curve.points[0]
    assert curve.local_expansion(xsq, origin, 2)[2] == 1
    assert curve.local_expansion(xsq, origin, 1)[1] == 0


def test_phi_1_series_division():
    F = make_field(2, 2)
    curve = build_curve("p1", F)
    f = RationalFunction(Polynomial.x(F), Polynomial(F, (1, 1)))
    assert curve.local_expansion(f, curve.points[0], 1)[1] == 1


# ---------------------------------------------------------------------------
# ball sizes


def test_ball_size_examples():
    assert ball_size(3, 1, 2) == 4
    assert ball_size(5, 0, 4) == 1
    assert ball_size(5, 2, 3) == 51


def test_ball_size_matches_brute_force():
    assert ball_size(5, 2, 3) == brute_ball_count(5, 2, 3)
    assert ball_size(4, 3, 4) == brute_ball_count(4, 3, 4)


def test_ball_size_bounds():
    with pytest.raises(PreconditionError):
        ball_size(3, 4, 2)
    with pytest.raises(PreconditionError):
        ball_size(3, -1, 2)


# ---------------------------------------------------------------------------
# center search


def test_search_centers_exhaustive_beats_average():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    params = XingParams(m=1, radii=(1,), strategy="exhaustive")
    res = search_centers(curve, D, params, census=True)
    assert res.exact_average == Fraction(2)  # 4 functions * ball(3,1,2)=4 over 2^3
    assert res.survivor_count >= math.ceil(res.exact_average)
    assert res.survivor_count == 3  # frozen exhaustive maximum
    assert res.census_total == res.expected_census == 16


def test_search_centers_averaging_identity_m2():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    params = XingParams(m=2, radii=(1, 1), strategy="exhaustive")
    res = search_centers(curve, D, params, census=True)
    assert res.expected_census == 4 * 4 * 4
    assert res.census_total == res.expected_census


def test_search_radius_zero_survivors_are_fibers():
    # radius 0 balls are points: survivors share every constrained word
    curve = build_curve("p1", make_field(2, 2))
    D = curve.divisor({curve.place_inf(): 7})
    params = XingParams(m=1, radii=(0,), strategy="exhaustive")
    res = search_centers(curve, D, params)
    points = default_eval_points(curve, D)
    basis = curve.riemann_roch_basis(D)
    for idx in res.survivor_indices:
        f = function_from_index(curve.field, basis, int(idx))
        assert phi_word(curve, f, points, 0) == res.centers[0]


def test_random_strategy_is_reproducible():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    params = XingParams(m=1, radii=(1,), strategy="random", seed=42, trials=16)
    r1 = search_centers(curve, D, params)
    r2 = search_centers(curve, D, params)
    assert r1.centers == r2.centers
    assert r1.survivor_count == r2.survivor_count
    assert r1.survivor_count >= 1


def test_greedy_strategy_deterministic_and_nonempty():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    params = XingParams(m=1, radii=(1,), strategy="greedy", seed=9)
    r1 = search_centers(curve, D, params)
    r2 = search_centers(curve, D, params)
    assert r1.centers == r2.centers and r1.survivor_count == r2.survivor_count
    assert r1.survivor_count >= 1


def test_exhaustive_outperforms_random_and_greedy():
    from agcodes.field import enumerate_irreducibles

    curve = build_curve("p1", make_field(3, 1))
    F = curve.field
    quad = next(p for p in enumerate_irreducibles(F, 2) if p.degree == 2)
    D = curve.divisor({curve.place_of_poly(quad): 1})
    best = search_centers(curve, D, XingParams(m=1, radii=(1,), strategy="exhaustive"))
    for strategy in ("random", "greedy"):
        other = search_centers(curve, D, XingParams(m=1, radii=(1,), strategy=strategy, seed=3))
        assert other.survivor_count <= best.survivor_count


def test_monotonicity_in_radius():
    # enlarging a radius never shrinks the survivor set at fixed centers
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    points = default_eval_points(curve, D)
    basis = curve.riemann_roch_basis(D)
    words = [phi_word(curve, function_from_index(curve.field, basis, i), points, 0)
             for i in range(curve.field.q ** len(basis))]
    center = (0, 1, 0)
    for s in range(0, 3):
        small = {i for i, w in enumerate(words)
                 if sum(1 for a, b in zip(w, center) if a != b) <= s}
        big = {i for i, w in enumerate(words)
              if sum(1 for a, b in zip(w, center) if a != b) <= s + 1}
        assert small <= big


def test_search_guard_on_center_space():
    from agcodes.field import enumerate_irreducibles

    curve = build_curve("p1", make_field(5, 1))
    quad = next(p for p in enumerate_irreducibles(curve.field, 2) if p.degree == 2)
    D = curve.divisor({curve.place_of_poly(quad): 1})
    # all six rational points stay in play, so the tuple space is 5^12
    params = XingParams(m=2, radii=(1, 1), strategy="exhaustive")
    with pytest.raises(PreconditionError):
        search_centers(curve, D, params)


# ---------------------------------------------------------------------------
# builds


def test_build_xing_gf2_instance():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    params = XingParams(m=1, radii=(1,), strategy="exhaustive")
    assert distance_floor(3, 1, (1,), 1) == 1
    build = build_xing(curve, D, params)
    assert build.claimed_distance == 1
    assert build.code.size == build.search.survivor_count
    assert build.code.metadata["measured_distance"] >= 1
    assert naive_min_distance(build.code.words) == build.code.metadata["measured_distance"]


def test_build_xing_m2_instance():
    curve = build_curve("p1", make_field(2, 1))
    F = curve.field
    quad = Polynomial(F, (1, 1, 1))
    D = curve.divisor({curve.place_of_poly(quad): 1})
    params = XingParams(m=2, radii=(1, 0), strategy="exhaustive")
    assert distance_floor(3, 2, (1, 0), 2) == 9 - 6 - 2
    build = build_xing(curve, D, params)
    assert build.claimed_distance == 1
    assert build.code.size == build.search.survivor_count
    measured = build.code.metadata["measured_distance"]
    if measured is None:
        assert build.code.size == 1  # tight radii leave a single survivor
    else:
        assert measured >= 1


def test_build_xing_all_zero_radii():
    curve = build_curve("p1", make_field(2, 2))
    D = curve.divisor({curve.place_inf(): 7})
    params = XingParams(m=1, radii=(0,), strategy="exhaustive")
    build = build_xing(curve, D, params)
    assert build.claimed_distance == 2 * 4 - 7
    assert build.code.metadata["measured_distance"] >= build.claimed_distance


def test_build_xing_rejects_nonpositive_floor():
    from agcodes.field import enumerate_irreducibles

    curve = build_curve("p1", make_field(2, 1))
    F = curve.field
    quintic = next(p for p in enumerate_irreducibles(F, 5) if p.degree == 5)
    D = curve.divisor({curve.place_of_poly(quintic): 1})
    params = XingParams(m=1, radii=(1,), strategy="exhaustive")
    with pytest.raises(PreconditionError):
        build_xing(curve, D, params)


def test_radius_bound_validation():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    with pytest.raises(PreconditionError):
        build_xing(curve, D, XingParams(m=1, radii=(2,)))  # 2*2 >= 3*1


# ---------------------------------------------------------------------------
# degeneration to the evaluation code


def test_zero_radius_zero_center_reduces_to_goppa():
    curve = build_curve("p1", make_field(2, 2))
    F = curve.field
    D = curve.divisor({curve.place_inf(): 7})
    points = default_eval_points(curve, D)
    n = len(points)
    params = XingParams(m=1, radii=(0,), strategy="exhaustive")
    build = build_xing(curve, D, params)
    # ties are broken to the lexicographically least center: the zero word
    assert build.search.centers == ((0,) * n,)
    survivors = survivor_functions(curve, D, build.search)
    # survivors are exactly the functions vanishing at every point
    assert len(survivors) == F.q ** 4
    for f in survivors:
        assert all(curve.evaluate(f, p) == 0 for p in points)
    # and the final-order words are the scaled words of the small Goppa code
    goppa = build_goppa(curve, curve.divisor({curve.place_inf(): 3}), points=points)
    scale = []
    for j, pj in enumerate(points):
        w = 1
        for i, pi in enumerate(points):
            if i != j:
                w = F.mul(w, F.sub(pj.coords[0], pi.coords[0]))
        scale.append(w)
    mapped = {tuple(F.mul(word[j], scale[j]) for j in range(n)) for word in goppa.words}
    assert mapped == set(build.code.words)
    assert goppa.size == build.code.size
    d_goppa = goppa.metadata["measured_distance"]
    d_xing = build.code.metadata["measured_distance"]
    assert d_goppa == d_xing


# ---------------------------------------------------------------------------
# multiplicity accounting


def _agreement_multiplicity(curve, f, f2, point, depth):
    diff = f - f2
    series = curve.local_expansion(diff, point, depth)
    for r, c in enumerate(series):
        if c:
            return r
    return depth + 1


def test_multiplicity_chain_bounds():
    curve = build_curve("p1", make_field(2, 1))
    D = _deg1_divisor_gf2(curve)
    points = default_eval_points(curve, D)
    params = XingParams(m=1, radii=(1,), strategy="exhaustive")
    build = build_xing(curve, D, params)
    survivors = survivor_functions(curve, D, build.search)
    n = len(points)
    d0 = build.claimed_distance
    deg_d = D.degree
    for i in range(len(survivors)):
        for j in range(i + 1, len(survivors)):
            f, f2 = survivors[i], survivors[j]
            total = sum(
                _agreement_multiplicity(curve, f, f2, p, deg_d) for p in points
            )
            assert total <= deg_d
            w_m = phi_word(curve, f, points, params.m)
            w2_m = phi_word(curve, f2, points, params.m)
            agree_m = sum(1 for a, b in zip(w_m, w2_m) if a == b)
            assert agree_m <= n - d0


def test_multiplicity_chain_on_hermitian_survivors():
    # richer survivor set: agreement multiplicities at the points stay within
    # deg(D), and the final-order agreement set within N - d0
    curve = build_curve("hermitian", make_field(2, 2))
    D = curve.one_point_divisor(7)
    params = XingParams(m=1, radii=(1,), strategy="random", seed=7, trials=48)
    build = build_xing(curve, D, params)
    survivors = survivor_functions(curve, D, build.search)
    points = build.points
    n = len(points)
    d0 = build.claimed_distance
    deg_d = D.degree
    assert len(survivors) >= 2
    for i in range(len(survivors)):
        for j in range(i + 1, len(survivors)):
            f, f2 = survivors[i], survivors[j]
            diff = f - f2
            total = 0
            for p in points:
                series = curve.local_expansion(diff, p, deg_d)
                mult = next((r for r, c in enumerate(series) if c), deg_d + 1)
                assert mult <= deg_d
                total += mult
            assert total <= deg_d
            w_m = phi_word(curve, f, points, params.m)
            w2_m = phi_word(curve, f2, points, params.m)
            assert sum(1 for a, b in zip(w_m, w2_m) if a == b) <= n - d0


def test_phi_m_injective_on_survivors():
    curve = build_curve("p1", make_field(3, 1))
    from agcodes.field import enumerate_irreducibles

    quad = next(p for p in enumerate_irreducibles(curve.field, 2) if p.degree == 2)
    D = curve.divisor({curve.place_of_poly(quad): 1})
    params = XingParams(m=1, radii=(1,), strategy="exhaustive")
    build = build_xing(curve, D, params)
    survivors = survivor_functions(curve, D, build.search)
    points = build.points
    words = [phi_word(curve, f, points, 1) for f in survivors]
    assert len(set(words)) == len(words)


# ---------------------------------------------------------------------------
# the closed-form radius optimizer


def test_optimal_sigma_values():
    assert optimal_sigma(4, 2) == Fraction(3, 259)
    assert optimal_sigma(2, 1) == Fraction(1, 5)
    assert optimal_sigma(9, 3) == Fraction(8, 9 ** 6 + 8)


def test_optimal_sigma_value_identity():
    # the objective at the optimum equals log_q(1 + (q-1) q^(-2i))
    from mpmath import mp, mpf, log

    from agcodes.bounds import entropy

    with mp.workdps(60):
        sigma = optimal_sigma(2, 1)
        lhs = entropy(2, sigma) - 2 * mpf(sigma.numerator) / sigma.denominator
        rhs = log(1 + mpf(1) / 4) / log(2)
        assert abs(lhs - rhs) < mpf("1e-12")


def test_optimal_sigma_against_golden_section():
    from mpmath import mp, mpf

    from agcodes.bounds import entropy
    from conftest import golden_section_max

    q, i = 9, 3
    with mp.workdps(60):
        loc = golden_section_max(
            lambda s: entropy(q, s) - 2 * i * s, mpf("1e-30"), mpf(q - 1) / q - mpf("1e-6")
        )
        target = optimal_sigma(q, i)
        assert abs(loc - mpf(target.numerator) / target.denominator) < mpf("1e-9")
