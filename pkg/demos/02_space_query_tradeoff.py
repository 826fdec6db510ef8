"""The fanout knob: space versus per-color query cost.

The strip tree takes a fanout parameter s.  Larger s makes the tree
shallower, so each reported color is touched at fewer levels, but every
level stores more prefix copies of the points.  The counters below make the
tradeoff visible; no wall-clock involved.
"""

import numpy as np

import colorfreq as cf

n, phi = 4000, 50
ps = cf.generate_points(n, 2, phi, seed=42)
rng = np.random.default_rng(7)
corners = [cf.BoxQuery.dominance(c) for c in rng.uniform(0, 1000, (200, 2))]

print(f"n={n}, phi={phi}, 200 dominance queries")
print(f"{'s':>4} {'height':>7} {'storedEntries':>14} {'probes/query':>13} {'touches/color':>14}")
for s in (2, 4, 16, 64):
    tree = cf.build_dominance(ps, 2, s=s)
    session = tree.new_session()
    probes = touches = k_total = 0
    for q in corners:
        before = session.accumulator.touch_ops
        k_total += len(tree.query(q, session))
        probes += session.probes
        touches += session.accumulator.touch_ops - before
    st = tree.stats()
    print(f"{s:>4} {st.height:>7} {st.stored_entries:>14} "
          f"{probes / len(corners):>13.1f} {touches / max(k_total, 1):>14.2f}")

print("\nstored entries stay within n*(s-1)*(ceil_log_s(n)+1):")
for s in (2, 4, 16, 64):
    tree = cf.build_dominance(ps, 2, s=s)
    print(f"  s={s:<3} {tree.stored_entries} <= {cf.dominance_space_bound(n, s, 2)}")
