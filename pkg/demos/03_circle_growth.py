#!/usr/bin/env python3
"""Exact circle lengths around the cone point of the L surface.

The circle of radius R is a union of arcs; its total length is pi times
an algebraic number as long as every path length reachable within R is.
Small radii give clean closed forms, and dividing out e^{hR} shows the
exponential growth settling onto a constant prefactor.
"""

import math

import numpy as np

import tsurf

S = tsurf.builtin_surface("lshape")
G = tsurf.build_concat_graph(S, 36)

print("radius   paths   length / pi")
for R in (0.5, 1.0, 1.4, 1.5, 2.0):
    census = tsurf.path_length_census(G, 0, R)
    ell = tsurf.circle_length(G, 0, R, census)
    print(f"{R:>6}   {census.count(R):>5}   {ell / math.pi:.12f}")

print()
print("closed forms for the first few rows:")
print("  R=0.5  3        =", 3.0)
print("  R=1.4  138/5    =", 138 / 5)
print("  R=1.5  105-48*sqrt(2) =", 105 - 48 * math.sqrt(2))

# volume of the ball is the integral of circle length in R
R = 2.0
census = tsurf.path_length_census(G, 0, R)
vol = tsurf.ball_volume_closed(G, 0, R, census)
rs = np.linspace(0.0, R, 4001)
quad = np.trapezoid(tsurf.circle_length_grid(G, 0, rs, census), rs)
print(f"\nball volume at R=2: closed form {vol:.10f}, "
      f"integrated circle length {quad:.10f}")

# growth: l(R) e^{-hR} flattens out over the last decade of radii
h = tsurf.solve_entropy(G).h
census = tsurf.path_length_census(G, 0, 6.0)
print(f"\nvolume entropy h = {h:.6f}")
print("radius   length * exp(-hR)")
for R in np.linspace(6.0 - math.log(10) / h, 6.0, 8):
    ell = tsurf.circle_length(G, 0, R, census)
    print(f"{R:6.3f}   {ell * math.exp(-h * R):.6f}")
