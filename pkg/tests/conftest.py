"""Shared independent oracles for the test suite.

These deliberately avoid the library's own search kernels and candidate
bookkeeping: distances are measured by plain Python loops, optimizer
locations by golden-section search, irreducible counts by the divisor-sum
formula, and multiplicity totals by enumerating every place up to a degree
bound.
"""

from __future__ import annotations

import itertools

import mpmath
from mpmath import mp, mpf

from agcodes.curves import Place
from agcodes.field import INF, enumerate_irreducibles, rational_valuation


def naive_min_distance(words):
    """Pairwise Hamming minimum by direct iteration; None below two words."""
    ws = list(words)
    if len(ws) < 2:
        return None
    best = None
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            d = sum(1 for a, b in zip(ws[i], ws[j]) if a != b)
            if best is None or d < best:
                best = d
    return best


def brute_ball_count(n, radius, alphabet_size):
    """Count words within the radius of the zero word by full enumeration."""
    count = 0
    for w in itertools.product(range(alphabet_size), repeat=n):
        if sum(1 for s in w if s != 0) <= radius:
            count += 1
    return count


def mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def irreducible_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree exactly n over GF(q)."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    return sum(mobius(d) * q ** (n // d) for d in divisors) // n


def golden_section_max(fn, lo, hi, tol="1e-13", dps=60):
    """Location of the maximum of a unimodal function on [lo, hi]."""
    with mp.workdps(dps):
        lo, hi = mpf(lo), mpf(hi)
        invphi = (mpf(5) ** 0.5 - 1) / 2
        a, b = lo, hi
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = fn(c), fn(d)
        while b - a > mpf(tol):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = fn(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = fn(d)
        return (a + b) / 2


def oracle_total_multiplicity(curve, sec_a, sec_b, twists, max_degree):
    """Degree-weighted multiplicity total by scanning every place of degree
    at most max_degree plus infinity, with base-field valuations only."""
    total = 0
    places = [Place("inf")] + [
        curve.place_of_poly(pi)
        for pi in enumerate_irreducibles(curve.field, max_degree)
    ]
    for pl in places:
        desc = INF if pl.kind == "inf" else pl.poly
        phi = twists.at_place(pl)
        g, g2 = phi * sec_a.f, phi * sec_b.f
        v1 = rational_valuation(g, desc) if not g.is_zero else None
        v2 = rational_valuation(g2, desc) if not g2.is_zero else None
        inf1 = v1 is not None and v1 < 0
        inf2 = v2 is not None and v2 < 0
        if inf1 != inf2:
            continue
        diff = (g.inverse() - g2.inverse()) if inf1 else (g - g2)
        if diff.is_zero:
            raise AssertionError("oracle needs distinct sections")
        m = max(rational_valuation(diff, desc), 0)
        total += m * pl.degree
    return total
