import math
import random
from fractions import Fraction as F

import pytest

from splitrad.dynamics import conjugate, parse_poly, preperiodic_points
from splitrad.exact import (DomainError, LogValue, UndeterminedError,
                            valuation)
from splitrad.localheights import (analyze, canonical_height,
                                   critical_height_global,
                                   critical_height_local, escape_exponent,
                                   escape_rate_arch, escape_rate_nonarch,
                                   newton_polygon, splitting_radius)
from splitrad.places import Place
from splitrad.qpoly import QPoly

F5 = parse_poly("z^3 + (1/5)*z^2")
PCF = parse_poly("-(2/9)*z^3 - z^2")


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

def test_newton_polygon_examples():
    np1 = newton_polygon(F5, 5)
    assert np1.vertices == ((2, F(-1)), (3, F(0)))
    assert np1.segments == ((F(1), 1),)
    assert np1.ord_zero == 2

    np2 = newton_polygon(parse_poly("z^3"), 7)
    assert np2.vertices == ((3, F(0)),) and np2.segments == ()

    np3 = newton_polygon(parse_poly("z^3 - z + (1/5)"), 5)
    assert np3.vertices == ((0, F(-1)), (3, F(0)))
    assert np3.segments == ((F(1, 3), 3),)


def test_newton_polygon_matches_root_multiset():
    rng = random.Random(41)
    for _ in range(60):
        p = rng.choice([2, 3, 5, 7])
        roots = [F(rng.randint(-60, 60), rng.randint(1, 60)) for _ in range(rng.randint(2, 5))]
        poly = QPoly([1])
        for r in roots:
            poly = poly * QPoly([-r, 1])
        np_ = newton_polygon(poly, p)
        expected = {}
        for r in roots:
            s = F(-valuation(r, p)) if r != 0 else None
            expected[s] = expected.get(s, 0) + 1
        got = {s: l for s, l in np_.segments}
        if np_.ord_zero:
            got[None] = np_.ord_zero
        assert got == expected


def test_newton_polygon_slopes_increase():
    rng = random.Random(42)
    for _ in range(50):
        coeffs = [F(rng.randint(-400, 400), rng.randint(1, 400)) for _ in range(5)] + [F(1)]
        np_ = newton_polygon(QPoly(coeffs), 3)
        slopes = [s for s, _ in np_.segments]
        assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
        assert sum(l for _, l in np_.segments) == 5 - np_.ord_zero


# ---------------------------------------------------------------------------
# splitting radius
# ---------------------------------------------------------------------------

def test_splitting_radius_examples():
    assert splitting_radius(F5, 5) == LogValue.from_log(5, 1)
    assert splitting_radius(F5, 2) is None
    with pytest.raises(DomainError):
        splitting_radius(F5, 3)  # 3 divides d = 3: no verdict claimed
    assert splitting_radius(parse_poly("z^3 + 5*z^2"), 7) is None
    with pytest.raises(DomainError):
        splitting_radius(parse_poly("2*z^3 + z"), 5)  # non-monic


# ---------------------------------------------------------------------------
# non-archimedean escape rates
# ---------------------------------------------------------------------------

def test_escape_rate_nonarch_examples():
    assert escape_rate_nonarch(F5, 5, 1) == LogValue.from_log(5, F(1, 3))
    assert escape_rate_nonarch(F5, 5, 0).is_exactly_zero()
    assert escape_rate_nonarch(F5, 3, F(-2, 15)) == LogValue.from_log(3, 1)


def test_escape_rate_nonarch_transformation_rule():
    rng = random.Random(43)
    maps = [F5, PCF, parse_poly("z^2 - 1"), parse_poly("z^3 - (7/4)*z")]
    checked = 0
    while checked < 50:
        f = rng.choice(maps)
        p = rng.choice([2, 3, 5, 7])
        z = F(rng.randint(-50, 50), rng.randint(1, 30))
        lam = escape_rate_nonarch(f, p, z)
        lam_next = escape_rate_nonarch(f, p, f(z))
        assert lam_next.formal_equal(lam * f.degree)
        checked += 1


def test_gauss_norm_bound():
    # |f(z)|_p <= max_i |a_i|_p * p^(t*i) for |z|_p = p^t, with generic equality
    rng = random.Random(44)
    p = 5
    equal = 0
    for _ in range(100):
        t = rng.randint(-3, 3)  # log_p of |z|_p
        u = rng.choice([1, 2, 3, 4, 6, 7])  # p-unit numerator
        z = F(u) * F(p) ** (-t)
        assert -valuation(z, p) == t
        fz = F5(z)
        bound = max(F(-valuation(c, p)) + i * t for i, c in enumerate(F5.coeffs) if c != 0)
        got = F(-valuation(fz, p)) if fz != 0 else None
        assert got is None or got <= bound
        if got == bound:
            equal += 1
    assert equal > 50  # generic equality


# ---------------------------------------------------------------------------
# archimedean escape rate
# ---------------------------------------------------------------------------

def _float_escape_rate(f, z, iters=64):
    # independent plain-float oracle with the closed-form finish
    d = f.degree
    z = float(z)
    coeffs = [float(c) for c in f.coeffs]
    c_ad = math.log(abs(coeffs[-1])) / (d - 1)
    for n in range(iters):
        if abs(z) > 1e15:
            return (math.log(abs(z)) + c_ad) / d ** n
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * z + c
        z = acc
    return 0.0


def test_escape_rate_arch_example():
    lam = escape_rate_arch(F5, 1, 1e-6)
    assert lam.err.width <= 1e-6
    oracle = _float_escape_rate(F5, 1)
    assert abs(lam.err.mid - oracle) < 1e-9
    assert abs(lam.err.mid - 0.08168) < 1e-4
    lam5 = escape_rate_arch(F5, 1, 1e-6, extra_steps=5)
    assert lam5.err.width <= 1e-6
    assert lam.err.overlaps(lam5.err)


def test_escape_rate_arch_basin_is_exact_zero():
    assert escape_rate_arch(F5, F(1, 10), 1e-8).is_exactly_zero()
    assert escape_rate_arch(F5, F(-2, 15), 1e-8).is_exactly_zero()


def test_escape_rate_arch_transformation_within_tolerance():
    tol = 1e-9
    rng = random.Random(45)
    for _ in range(10):
        z = F(rng.randint(2, 40), rng.randint(1, 7))
        lam = escape_rate_arch(F5, z, tol)
        lam_next = escape_rate_arch(F5, F5(z), tol)
        lo = 3 * lam.err.lo - 2 * tol
        hi = 3 * lam.err.hi + 2 * tol
        assert lo <= lam_next.err.lo <= lam_next.err.hi <= hi


def test_escape_rate_arch_rejects_bad_tol():
    with pytest.raises(DomainError):
        escape_rate_arch(F5, 1, 0.0)


# ---------------------------------------------------------------------------
# critical heights
# ---------------------------------------------------------------------------

def test_critical_height_local_examples():
    assert critical_height_local(F5, Place.finite(5)) == LogValue.from_log(5, 1)
    assert critical_height_local(F5, Place.finite(3)) == LogValue.from_log(3, 1)
    arch = critical_height_local(F5, Place.arch(), 1e-8)
    assert arch.is_exactly_zero()


def test_critical_height_global_examples():
    hc = critical_height_global(F5, 1e-8)
    assert hc == LogValue.from_log(3, 1) + LogValue.from_log(5, 1)  # log 15, exact
    assert critical_height_global(PCF, 1e-8).is_exactly_zero()
    assert critical_height_global(parse_poly("z^3")).is_exactly_zero()


def test_critical_height_with_escaping_complex_critical_points():
    # f' = 3z^2 + 4 has roots +-2i/sqrt(3); their orbits escape to infinity
    f = parse_poly("z^3 + 4*z")
    lam = critical_height_local(f, Place.arch(), 1e-6)
    assert lam.err.width <= 2e-6
    # oracle: float orbit of the critical point with the closed-form finish
    w = complex(0, 2 / math.sqrt(3))
    n = 0
    while abs(w) < 1e15:
        w = w ** 3 + 4 * w
        n += 1
    oracle = math.log(abs(w)) / 3 ** n
    assert abs(lam.err.mid - oracle) < 1e-6


def test_critical_height_with_bounded_irrational_critical_points():
    # f' = 3z^2 + 2z + 1/5: irrational real critical points in the basin of 0
    f = parse_poly("z^3 + z^2 + (1/5)*z")
    lam = critical_height_local(f, Place.arch(), 1e-6)
    assert lam.is_exactly_zero()


def test_parabolic_critical_orbit_is_undetermined():
    # z^3 + z has a neutral fixed point at 0; no certificate can fire
    f = parse_poly("z^3 + z")
    with pytest.raises(UndeterminedError):
        critical_height_local(f, Place.arch(), 1e-6)


def test_analyze_profiles():
    profiles, hc = analyze(F5, 1e-8)
    by_label = {pr.place.label(): pr for pr in profiles}
    assert by_label["5"].is_bad is True
    assert by_label["5"].g_v == LogValue.from_log(5, 1)
    assert by_label["2"].is_bad is False and by_label["2"].g_v is None
    assert by_label["3"].is_bad is None  # 3 divides d: no verdict claimed
    assert by_label["3"].lambda_crit == LogValue.from_log(3, 1)
    assert hc == LogValue.from_log(3, 1) + LogValue.from_log(5, 1)
    # monic f away from p | d: g_v agrees with lambda_crit when bad
    assert by_label["5"].g_v == by_label["5"].lambda_crit


def test_analyze_workers_deterministic():
    a1, h1 = analyze(F5, 1e-8, workers=1)
    a4, h4 = analyze(F5, 1e-8, workers=4)
    assert [pr.place for pr in a1] == [pr.place for pr in a4]
    assert h1 == h4


# ---------------------------------------------------------------------------
# canonical heights
# ---------------------------------------------------------------------------

def test_canonical_height_examples():
    assert canonical_height(F5, 0).is_exactly_zero()
    assert canonical_height(F5, F(-1, 5)).is_exactly_zero()
    h = canonical_height(F5, 1, 1e-8)
    assert h.logs == {5: F(1, 3)}
    assert abs(h.approx() - 0.6181) < 2e-4


def test_canonical_height_vanishes_on_preperiodic():
    for text in ("z^3 + (1/5)*z^2", "-(2/9)*z^3 - z^2", "z^2 - 1"):
        f = parse_poly(text)
        for pp in preperiodic_points(f):
            assert canonical_height(f, pp.value, 1e-8).is_exactly_zero()


def test_canonical_height_positive_off_preperiodic():
    # every non-preperiodic point of the search box has strictly positive height
    f = parse_poly("z^2 - 1")
    preper = {pp.value for pp in preperiodic_points(f)}
    box = {F(a) for a in range(-3, 4)}  # denominator bound 1, |z| <= 3 for this map
    for z in sorted(box - preper) + [F(1, 2), F(-3, 2), F(5, 4)]:
        h = canonical_height(f, z, 1e-9)
        assert h.compare(LogValue.zero()) == 1


def test_canonical_height_functional_equation():
    rng = random.Random(46)
    tol = 1e-8
    for f in (F5, PCF, parse_poly("z^2 - 1")):
        d = f.degree
        for _ in range(20):
            z = F(rng.randint(-30, 30), rng.choice([1, 2, 3, 5, 10, 15]))
            h = canonical_height(f, z, tol)
            h_next = canonical_height(f, f(z), tol)
            diff = h_next - h * d
            assert diff.is_formally_zero()
            iv = diff.to_interval()
            assert iv.lo <= 0 <= iv.hi or min(abs(iv.lo), abs(iv.hi)) <= 2 * tol


def test_canonical_height_conjugation_invariance():
    # mu(z) = z + 3 has unit denominator: finite parts match exactly
    f = parse_poly("z^2 - 1")
    g = conjugate(f, 1, 3)
    rng = random.Random(47)
    for _ in range(10):
        z = F(rng.randint(-20, 20), rng.choice([1, 2, 5]))
        a = canonical_height(f, z, 1e-9)
        b = canonical_height(g, z + 3, 1e-9)
        assert a.formal_equal(b)


def test_undetermined_surfaces_with_tiny_cap():
    with pytest.raises(UndeterminedError):
        escape_rate_nonarch(F5, 5, 1, maxiter=1)


def test_escape_exponent_values():
    assert escape_exponent(F5, 5) == F(1)
    assert escape_exponent(F5, 3) == F(0)
    assert escape_exponent(PCF, 3) == F(-1)
    assert escape_exponent(PCF, 2) == F(1)
