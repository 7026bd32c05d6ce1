#!/usr/bin/env python3
# Enumerate saddle connections on the L surface and compare the census
# against the primitive-lattice-point picture: every holonomy is a
# primitive integer vector, and each one is hit by exactly 3 connections.

import math
from collections import Counter
from fractions import Fraction

import tsurf
from tsurf.unfold import TracePoint

S = tsurf.builtin_surface("lshape")

conns = tsurf.enumerate_saddle_connections(S, max_length_sq=25)
print(f"{len(conns)} saddle connections with length^2 <= 25")

by_sq = Counter(c.length_sq for c in conns)
print("\n length^2   count   example holonomy")
for sq in sorted(by_sq):
    ex = next(c for c in conns if c.length_sq == sq)
    print(f" {str(sq):>8}   {by_sq[sq]:>5}   {tuple(map(str, ex.holonomy))}")

# primitive vectors (m, n) with m^2 + n^2 <= 25, counted once per direction
prim = sum(
    1
    for m in range(-5, 6)
    for n in range(-5, 6)
    if (m or n) and m * m + n * n <= 25 and math.gcd(abs(m), abs(n)) == 1
)
print(f"\nprimitive lattice vectors in the disk: {prim}")
print(f"3 per vector = {3 * prim}  (census says {len(conns)})")

# a connection and its reverse carry opposite holonomy
c = conns[0]
rev = next(
    d for d in conns
    if d.holonomy == (-c.holonomy[0], -c.holonomy[1]) and d.start == c.end
)
print("\nshortest connection:", tuple(map(str, c.holonomy)),
      "reversed by", tuple(map(str, rev.holonomy)))

# straight-line flow: the horizontal cylinder through (1/2, 1/2) closes
# up after length 2 without meeting a cone point
res = tsurf.trace_ray(S, TracePoint(0, (Fraction(1, 2), Fraction(1, 2))),
                      (1, 0), 4)
print("\nhorizontal ray from (1/2,1/2), length^2 budget 4:",
      "ran into a cone point" if res.hit_cone else "never met a cone point,",
      f"{len(res.segments)} straight segments,",
      f"ends at {tuple(map(str, res.end.position))}")
