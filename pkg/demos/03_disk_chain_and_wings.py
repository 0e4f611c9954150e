#!/usr/bin/env python3
"""The descending disk chain and wing clusters at a bad place.

Around the superattracting point 0 of z^3 + (1/5) z^2 at p = 5, the
component of the iterated preimage of the outer disk shrinks with exactly
computable log_5 radii t_i.  Their denominators q_i double at every level:
the radii leave the value group of Q_5 faster than any fixed ramification
could catch, which is the engine behind the uniformity statements this
library measures.
"""

from fractions import Fraction as F

from splitrad import (annulus_mass, annulus_membership, hsia_energy,
                      inner_disk_chain, parse_poly, wing_clusters)

f = parse_poly("z^3 + (1/5)*z^2")
chain = inner_disk_chain(f, 5, 8)

print("level   t_i      k_i   mass_i      q_i   modulus")
for i, lv in enumerate(chain.levels, start=1):
    mod = chain.moduli[i - 1] if i - 1 < len(chain.moduli) else ""
    print(f"{i:>4}   {str(lv.t):>7}  {lv.k:>3}   {str(lv.mass):>8}  {lv.q:>5}   {mod}")

print("\nModulus bounds g/(d-1)^i <= mod_i <= (d-1) g / 2^(i+1):")
for i, m in enumerate(chain.moduli, start=1):
    lo, hi = chain.modulus_bounds(i)
    tag = "equality on both sides" if lo == m == hi else "strict"
    print(f"  i={i}: {lo} <= {m} <= {hi}   ({tag})")

print("\nWing clusters of the level-1 preimage:")
w = wing_clusters(f, 5)
for c in w.clusters:
    print(f"  center {str(c.center):>5}: {c.count} of {w.degree} preimages, "
          f"mass {c.mass}, components {c.n_components}")
print("  cross-distance between clusters: log_5 distance =", w.g)

print("\nWhere do sample points sit relative to the level-1 annulus?")
for z in (1, 5, F(1, 5), F(-1, 5), F(24, 5)):
    print(f"  z = {str(z):>5}: {annulus_membership(f, 5, z, 1).value}")
print("  equilibrium mass of the annulus:", annulus_mass(chain, 1))

print("\nHsia energy of the preperiodic set {0, -1/5, 1}:")
print("  d_5 energy =", hsia_energy([0, F(-1, 5), 1], 5))
