#!/usr/bin/env python3
"""Escape rates, critical heights, canonical heights.

The map z^3 + (1/5) z^2 has a superattracting fixed point at 0 and bad
reduction at 5.  All its finite-place escape rates come out as exact
multiples of log p; the archimedean one is a certified interval.
"""

from fractions import Fraction as F

from splitrad import (Place, analyze, canonical_height,
                      critical_height_global, escape_rate_arch,
                      escape_rate_nonarch, parse_poly, preperiodic_points,
                      splitting_radius)

f = parse_poly("z^3 + (1/5)*z^2")
print("f(z) =", "z^3 + (1/5)*z^2")

print("\nSplitting radius (bad-reduction certificate):")
print("  at p=5:", splitting_radius(f, 5), "   at p=2:", splitting_radius(f, 2))

print("\nLocal escape rates of the point z = 1:")
print("  lambda_5(1) =", escape_rate_nonarch(f, 5, 1), " (exact)")
lam = escape_rate_arch(f, 1, 1e-8)
print(f"  lambda_inf(1) in [{lam.err.lo:.10f}, {lam.err.hi:.10f}]")

print("\nCanonical height = sum of the local rates:")
h1 = canonical_height(f, 1, 1e-8)
print("  h(1) =", h1, " ~", round(h1.approx(), 6))
print("  h(0) =", canonical_height(f, 0), " (fixed point)")
print("  h(-1/5) =", canonical_height(f, F(-1, 5)), " (maps to 0)")

print("\nFunctional equation h(f(z)) = 3 h(z), checked at z = 1:")
h_f1 = canonical_height(f, f(F(1)), 1e-8)
print("  h(f(1)) =", h_f1, " ~", round(h_f1.approx(), 6))
print("  3 h(1)  ~", round(3 * h1.approx(), 6))

print("\nPer-place profile and the critical height:")
profiles, hcrit = analyze(f, 1e-8)
for pr in profiles:
    print(f"  v = {pr.place.label():>4}: bad = {pr.is_bad}, lambda_crit = {pr.lambda_crit}")
print("  h_crit(f) =", hcrit, " = log 15 exactly")

print("\nA postcritically finite map (h_crit = 0) that is far from integral at 3:")
g = parse_poly("-(2/9)*z^3 - z^2")
print("  h_crit(-(2/9)z^3 - z^2) =", critical_height_global(g, 1e-8))
print("  its preperiodic points:", sorted(str(pp.value) for pp in preperiodic_points(g)))
print("  lambda_crit at v=3:", analyze(g, 1e-8)[0][1].lambda_crit,
      "(both critical points are fixed)")
