"""The 1-D frequency structure: chains, quadrant queries, intervals, probes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import colorfreq as cf
from _util import canon

# Pinned probe-counter constants (recorded by this suite; measured worst
# cases were ~1.3 and ~2.3 with the same per-k charges).
PREFIX_C1, PREFIX_C2 = 3.0, 4.0
INTERVAL_C1, INTERVAL_C2 = 4.0, 8.0
BUILD_C = 8.0

RED, BLUE = 0, 1
FIVE_POINTS = [(1.0, RED), (2.0, BLUE), (3.0, RED), (5.0, RED), (7.0, BLUE)]


def oracle_1d(points, lo, hi):
    acc = {}
    for x, c, *w in points:
        if lo <= x <= hi:
            acc[c] = acc.get(c, 0) + (w[0] if w else 1)
    return tuple(sorted(acc.items()))


def test_chain_example():
    f = cf.build_1d([(1.0, RED), (3.0, RED), (5.0, RED), (2.0, BLUE), (7.0, BLUE)])
    assert f.chain_of(RED) == [(1.0, 3.0, 1), (3.0, 5.0, 2), (5.0, math.inf, 3)]
    assert f.chain_of(BLUE) == [(2.0, 7.0, 1), (7.0, math.inf, 2)]


def test_singleton_chain():
    f = cf.build_1d([(4.0, RED)])
    assert f.chain_of(RED) == [(4.0, math.inf, 1)]


def test_empty_structure():
    f = cf.build_1d([])
    assert f.size == 0
    assert f.query_prefix(10.0) == []


def test_prefix_examples():
    f = cf.build_1d(FIVE_POINTS)
    assert canon(f.query_prefix(5.0)) == ((RED, 3), (BLUE, 1))
    assert f.query_prefix(0.0) == []
    assert canon(f.query_prefix(7.0)) == ((RED, 3), (BLUE, 2))


def test_interval_examples():
    f = cf.build_1d(FIVE_POINTS)
    assert canon(f.query_interval(2.0, 6.0)) == ((RED, 2), (BLUE, 1))
    assert f.query_interval(4.0, 4.0) == []
    assert canon(f.query_interval(-10.0, 10.0)) == canon(f.query_prefix(math.inf))


def test_interval_rejected_without_group_weights():
    f = cf.build_1d([(1.0, 0, 5), (2.0, 0, 9)], mode=cf.MAX_SEMIGROUP)
    with pytest.raises(cf.UnsupportedOperationError):
        f.query_interval(0.0, 3.0)


def test_inverted_interval_rejected():
    f = cf.build_1d(FIVE_POINTS)
    with pytest.raises(cf.MalformedQueryError):
        f.query_interval(5.0, 2.0)


def test_quadrant_hits_at_most_one_point_per_color():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = int(rng.integers(1, 120))
        f = cf.Frequency1D(
            rng.integers(0, 30, m).astype(float), rng.integers(0, 8, m)
        )
        rq = int(rng.integers(0, m + 1))
        hits, _ = f._succ_index.report(0, rq, rq)
        colors = [f.colors[i] for i in hits]
        assert len(colors) == len(set(colors))


def test_chain_completeness_recovers_sorted_sequences():
    rng = np.random.default_rng(4)
    for _ in range(30):
        m = int(rng.integers(1, 150))
        vals = rng.integers(0, 40, m).astype(float)
        cols = rng.integers(0, 6, m)
        f = cf.Frequency1D(vals, cols)
        for c in set(cols.tolist()):
            chain = f.chain_of(c)
            assert [x for x, _, _ in chain] == sorted(vals[cols == c].tolist())
            # links: successor of one mapped point is the next point
            for (x1, nxt, _), (x2, _, _) in zip(chain, chain[1:]):
                assert nxt == x2
            assert chain[-1][1] == math.inf
            assert [w for _, _, w in chain] == list(range(1, len(chain) + 1))


def test_oracle_equivalence_1000_random_instances():
    rng = np.random.default_rng(1234)
    session = cf.QuerySession()
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(0, 501))
        grid = int(rng.integers(2, max(3, n + 2)))
        phi = int(rng.integers(1, max(n, 1) + 1))
        pts = [
            (float(x), int(c))
            for x, c in zip(rng.integers(0, grid, n), rng.integers(0, phi, n))
        ]
        f = cf.build_1d(pts)
        m = f.size
        for _ in range(2):
            q = float(rng.uniform(-1, grid + 1))
            session.reset()
            got = f.query_prefix(q, session)
            assert canon(got) == oracle_1d(pts, -math.inf, q)
            k = len(got)
            assert session.probes <= PREFIX_C1 * math.log2(m + 1) + PREFIX_C2 * k
            assert all(w > 0 for _, w in got)

            lo, hi = sorted(rng.uniform(-1, grid + 1, 2))
            session.reset()
            got = f.query_interval(float(lo), float(hi), session)
            assert canon(got) == oracle_1d(pts, lo, hi)
            k = len(got)
            assert session.probes <= INTERVAL_C1 * math.log2(m + 1) + INTERVAL_C2 * k
            checked += 1
    assert checked == 2000


def test_prefix_difference_identity():
    # count in [lo,hi] = prefix(hi) - prefix just below lo, per color
    rng = np.random.default_rng(6)
    for _ in range(40):
        n = int(rng.integers(1, 200))
        grid = int(rng.integers(2, 60))
        pts = [
            (float(x), int(c))
            for x, c in zip(rng.integers(0, grid, n), rng.integers(0, 7, n))
        ]
        f = cf.build_1d(pts)
        lo, hi = sorted(rng.uniform(-1, grid, 2))
        upper = dict(f.query_prefix(hi))
        below = dict(f.query_prefix(math.nextafter(lo, -math.inf)))
        diff = {
            c: upper[c] - below.get(c, 0)
            for c in upper
            if upper[c] - below.get(c, 0) > 0
        }
        assert tuple(sorted(diff.items())) == canon(f.query_interval(lo, hi))


def test_build_ops_linearithmic():
    rng = np.random.default_rng(8)
    for n in (1, 10, 100, 1000, 5000):
        vals = rng.integers(0, n + 1, n).astype(float)
        cols = rng.integers(0, max(1, n // 3), n)
        f = cf.Frequency1D(vals, cols, interval_index=True)
        assert f.build_ops <= BUILD_C * n * math.log2(n + 1)


def test_weighted_prefix_weights_accumulate():
    f = cf.build_1d([(1.0, 0, 5), (2.0, 0, 2), (3.0, 1, 9)])
    assert f.chain_of(0) == [(1.0, 2.0, 5), (2.0, math.inf, 7)]
    assert canon(f.query_prefix(2.5)) == ((0, 7),)
    assert canon(f.query_prefix(3.0)) == ((0, 7), (1, 9))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(0, 30), st.integers(0, 5)), min_size=0, max_size=60
    ),
    st.integers(-1, 31),
)
def test_prefix_matches_oracle_property(pairs, q):
    pts = [(float(x), c) for x, c in pairs]
    f = cf.build_1d(pts) if pts else cf.build_1d([])
    assert canon(f.query_prefix(float(q))) == oracle_1d(pts, -math.inf, q)
