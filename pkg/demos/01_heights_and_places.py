#!/usr/bin/env python3
"""Places, heights and radicals over Q and Q(t).

Every height in splitrad is a LogValue: an exact rational constant plus an
exact formal sum of rational multiples of log p, plus a certified float
interval for anything genuinely transcendental.  For rational data nothing
is transcendental, so identities like the product formula hold *exactly*.
"""

from fractions import Fraction as F

from splitrad import (FIELD_QT, ProjectivePoint, RatFunc, naive_height,
                      product_formula_check, radical, support)

print("=" * 72)
print("The product formula, exactly")
print("=" * 72)

x = F(6, 5)
total = product_formula_check(x)
print(f"sum over all places of log|{x}|_v  =  {total!r}")
print("formal part is exactly zero:", total.is_formally_zero())

t = RatFunc.t()
one = RatFunc.const(1)
total_t = product_formula_check(t - one)
print(f"same over Q(t) for t-1: {total_t!r} (exactly zero: {total_t.is_exactly_zero()})")

print()
print("=" * 72)
print("Heights and radicals of projective tuples")
print("=" * 72)

P = ProjectivePoint([1, 8, -9])
print("P = (1, 8, -9) over Q")
print("  support:", sorted(v.label() for v in support(P)))
print("  height :", naive_height(P), " =", naive_height(P).approx())
print("  radical:", radical(P), " =", radical(P).approx())

# the same quantities over the function field Q(t), where weights are degrees
Q = ProjectivePoint([t ** 2, -((t - one) ** 2), RatFunc.const(-2) * t + one], FIELD_QT)
print("\nQ = (t^2, -(t-1)^2, -2t+1) over Q(t)")
print("  support:", sorted(v.label() for v in support(Q)))
print("  height :", naive_height(Q))
print("  radical:", radical(Q))

print()
print("Scaling the tuple changes nothing (heights live on projective space):")
P2 = ProjectivePoint([F(7, 3), F(56, 3), -21])
print("  (7/3)*P has height", naive_height(P2), "and radical", radical(P2))
