#!/usr/bin/env python3
"""Build the two bundled surfaces, inspect their invariants, and round-trip
one of them through the JSON format.

Run: python3 demos/01_surfaces.py
"""

import json

import tsurf

for name in ("lshape", "slit_tori"):
    S = tsurf.builtin_surface(name)
    print(f"{name}:")
    print(f"  polygons      {len(S.polygons)}")
    print(f"  gluing pairs  {len(S.gluing_pairs)}")
    print(f"  area          {S.area}")
    print(f"  genus         {S.genus}")
    for cp in S.cone_points:
        print(f"  cone point    k={cp.k}  angle {2 * (cp.k + 1)}*pi")
    print()

# the L parameters are rational; a 3 x 5/2 arm pair is a different surface
wide = tsurf.builtin_surface("lshape", params=("3", "5/2"))
print("lshape(3, 5/2): area", wide.area, " genus", wide.genus)

double = tsurf.scale_surface(wide, 2)
print("scaled by 2:    area", double.area)
print()

# serialize, reload, and confirm nothing drifted
blob = tsurf.builtin_surface("slit_tori").dumps()
back = tsurf.load_surface(blob)
print("slit_tori survives a JSON round trip:",
      back.dumps() == blob)
print()
doc = json.loads(blob)
print("file format keys:", sorted(doc))
print("first polygon:   ", json.dumps(doc["polygons"][0]))
