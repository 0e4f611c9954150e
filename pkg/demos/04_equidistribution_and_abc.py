#!/usr/bin/env python3
"""Equidistribution verdicts, eps-good differences, pair moments, abc quality."""

import random
from fractions import Fraction as F

from splitrad import (FIELD_QT, AbcTriple, QPoly, RatFunc, abc_quality,
                      epsilon_good_fraction, equidistribution_report,
                      pair_moment, parse_poly, theorem_experiment)
from splitrad.stats import rows_to_csv

f = parse_poly("z^3 + (1/5)*z^2")

print("=" * 72)
print("Annulus/wing equidistribution verdicts at the bad place 5")
print("=" * 72)
T = [1, 2, 5, 10, 15, 0, F(-1, 5), F(24, 5), F(-26, 5)]
rep = equidistribution_report(f, T, F(1, 2), 1)
for pr in rep.places:
    print(f"  p = {pr.place.p}: {pr.annulus_count}/{rep.n_points} points in the annulus "
          f"(mass {pr.annulus_mass}), wings {dict(pr.wing_counts)} -> verdict {pr.verdict}")
print("  achieved delta-slice weight:", rep.achieved_delta)

print()
print("=" * 72)
print("eps-good differences (small outside the bad places)")
print("=" * 72)
res = epsilon_good_fraction(f, [0, F(-1, 5)], F(3, 5))
for w in res.witnesses:
    print(f"  alpha = {w.alpha}: size sum {w.size_sum} -> eps-good: {w.is_good}")
print("  threshold sits at eps = log5/log15 = 0.5943...; at eps = 3/5 all pass")

pm = pair_moment(f, [0, F(-1, 5)], F(1, 10))
print("\npair moment of {0, -1/5}:", pm.average, f"({pm.count_above}/{pm.n_pairs} pairs above threshold)")

print()
print("=" * 72)
print("abc quality of triples")
print("=" * 72)
for coords in ([1, 8, -9], [3, 5, -8], [32, 49, -81]):
    q = abc_quality(AbcTriple(coords))
    sign = ">" if q.quality.approx() > 0 else "<"
    print(f"  {tuple(coords)}: h = {q.h}, rad = {q.rad}, quality {sign} 0")

t = RatFunc.t()
one = RatFunc.const(1)
qt = abc_quality(AbcTriple([t ** 2, -((t - one) ** 2), RatFunc.const(-2) * t + one], FIELD_QT))
print(f"  (t^2, -(t-1)^2, -2t+1) over Q(t): h = {qt.h}, rad = {qt.rad}, quality = {qt.quality}")
print("  the function-field abc theorem makes quality <= -1 for every")
print("  nonconstant coprime triple; spot check on random triples:")
rng = random.Random(4)
shown = 0
while shown < 3:
    a = QPoly([F(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))] + [F(rng.randint(1, 5))])
    b = QPoly([F(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))] + [F(rng.randint(1, 5))])
    if a.gcd(b).degree() > 0 or (a + b).is_zero():
        continue
    q = abc_quality(AbcTriple([RatFunc(a), RatFunc(b), RatFunc(-(a + b))], FIELD_QT))
    print(f"    quality = {q.quality.const}")
    shown += 1

print()
print("=" * 72)
print("A one-parameter family experiment (CSV)")
print("=" * 72)
rows, skips = theorem_experiment("z^3 + (1/a)*z^2", "a", [5, 7, 11, 1], 1, F(1, 2))
for label, reason in skips:
    print(f"  skipped a = {label}: {reason}")
print(rows_to_csv(rows))
