"""General boxes and semigroup weights.

Rectangles (and higher-dimensional boxes) are answered by splitting each
two-sided axis once at a tree node and recursing into two one-sided
queries, so a query with t two-sided axes costs at most 2^t inner
dominance queries.  Nothing is ever subtracted, which is why weights only
need a commutative semigroup; here: max over integer weights.
"""

import numpy as np

import colorfreq as cf

ps = cf.generate_points(500, 2, 12, seed=3)
box = cf.build_box(ps, s=4, bounded_axes=(0, 1))
session = box.new_session()

print("rectangle queries on 500 points, 12 colors")
for bounds in [
    [(100.0, 400.0), (200.0, 800.0)],
    [(0.0, 999.0), (0.0, 999.0)],
    [(-np.inf, 500.0), (250.0, 750.0)],
]:
    q = cf.BoxQuery(bounds)
    entries = box.query(q, session)
    oracle = cf.brute_force(ps, q)
    assert sorted(entries) == sorted(oracle)
    print(f"  {q}: k={len(entries)}, fan-out={session.fanout} "
          f"(<= {2 ** len(q.two_sided_axes())})")

# Max-weights: report the heaviest point per color inside the box.
wps = cf.generate_points(300, 2, 8, seed=5, mode=cf.MAX_SEMIGROUP)
wbox = cf.build_box(wps, s=4, bounded_axes=(0, 1), mode=cf.MAX_SEMIGROUP)
q = cf.BoxQuery([(100.0, 900.0), (100.0, 900.0)])
print("\nmax weight per color in the box:")
for color, w in sorted(wbox.query(q)):
    print(f"  color {color}: {w}")
assert sorted(wbox.query(q)) == sorted(cf.brute_force(wps, q))
print("matches the brute-force max oracle")
