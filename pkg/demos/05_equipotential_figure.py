#!/usr/bin/env python3
"""Render the equipotential picture of (1/5) z^3 - z^2 at the archimedean place.

The filled Julia set of this map has a 'splash': the immediate basin of the
superattracting fixed point 0 hangs off the main body, and its preimage
components form satellite basins (z = 5 maps straight to 0).  Writes
splash.svg next to this script.
"""

import pathlib

from splitrad import contour_polylines, equipotential_svg, parse_poly

f = parse_poly("(1/5)*z^3 - z^2")
window = (-7, 7, -6, 6)
levels = (0.02, 0.1, 0.5, 1, 2)

contours = contour_polylines(f, window, levels, grid=600)
print("closed contour loops per level:")
for level, polys in sorted(contours.items()):
    closed = sum(1 for _, c in polys if c)
    open_ = len(polys) - closed
    print(f"  level {level:<5}: {closed} closed, {open_} clipped at the window edge")

svg = equipotential_svg(f, window, levels, grid=600)
out = pathlib.Path(__file__).with_name("splash.svg")
out.write_text(svg)
print(f"\nwrote {out} ({len(svg)} bytes; rerenders are byte-identical)")
