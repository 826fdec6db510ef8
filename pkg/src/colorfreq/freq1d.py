"""One-dimensional color frequency reporting via the successor transform.

Every point of a color chain is mapped to (own rank, rank of the next point
of the same color), carrying the combined weight of the chain prefix.  The
quadrant ``rank < q and successor-rank >= q`` then contains at most one
mapped point per color: the rightmost point of that color below the query
bound, whose prefix weight is exactly the answer for the color.

The quadrant reports go through a heap-ordered binary index over the rank
axis (a static priority search tree), giving O(log n + k) index probes per
query.  Two-sided intervals additionally use the mirrored transform on
predecessor ranks to find the leftmost in-range point per color; the count
is the rank difference, which needs group (count) weights.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    COUNT,
    CountMode,
    MalformedInputError,
    MalformedQueryError,
    PointSet,
    QuerySession,
    UnsupportedOperationError,
)

_SMALL = 8  # below this size a linear scan beats any index


def _sort_charge(n: int) -> int:
    """Comparison charge we book for an n-element sort."""
    return n * max(1, (max(n, 1) - 1).bit_length())


class _PrioIndex:
    """Static max-heap over priorities, searchable by position.

    Positions are the integers [0, m).  The implicit skeleton is the
    balanced binary split of that range; each point descends from the root
    toward its position and occupies the first free node, in decreasing
    priority order.  A node's occupant therefore has priority >= everything
    below it, and an empty node has an empty subtree.

    ``report(a, b, t)`` returns all positions in [a, b) with priority >= t,
    visiting O(log m + output) nodes.
    """

    __slots__ = ("m", "pri", "occ", "build_steps")

    def __init__(self, pri: list[int]):
        self.m = m = len(pri)
        self.pri = pri
        self.build_steps = 0
        if m <= _SMALL:
            self.occ = None
            return
        occ: dict[int, int] = {}
        steps = 0
        order = sorted(range(m), key=pri.__getitem__, reverse=True)
        for i in order:
            node, lo, hi = 1, 0, m
            while node in occ:
                mid = (lo + hi) >> 1
                if i < mid:
                    node, hi = 2 * node, mid
                else:
                    node, lo = 2 * node + 1, mid
                steps += 1
            occ[node] = i
        self.occ = occ
        self.build_steps = steps + _sort_charge(m)

    def report(self, a: int, b: int, t: int) -> tuple[list[int], int]:
        """(hits, probes) for positions in [a, b) with priority >= t."""
        if a >= b or self.m == 0:
            return [], 0
        pri = self.pri
        if self.occ is None:
            hits = [i for i in range(a, b) if pri[i] >= t]
            return hits, b - a
        hits: list[int] = []
        probes = 0
        stack = [(1, 0, self.m)]
        occ = self.occ
        while stack:
            node, lo, hi = stack.pop()
            probes += 1
            i = occ.get(node)
            if i is None or pri[i] < t:
                continue
            if a <= i < b:
                hits.append(i)
            mid = (lo + hi) >> 1
            if lo < mid and a < mid and lo < b:
                stack.append((2 * node, lo, mid))
            if mid < hi and a < hi and mid < b:
                stack.append((2 * node + 1, mid, hi))
        return hits, probes


class Frequency1D:
    """The 1-D structure: mapped chain points plus quadrant indexes."""

    __slots__ = (
        "mode",
        "m",
        "sorted_values",
        "colors",
        "succ",
        "pred",
        "prefix_weight",
        "prefix_below",
        "_succ_index",
        "_pred_index",
        "build_ops",
    )

    def __init__(self, values, colors, weights=None, mode=COUNT, interval_index: bool = False):
        values = np.asarray(values, dtype=np.float64)
        colors_arr = np.asarray(colors, dtype=np.int64)
        m = len(values)
        if colors_arr.shape != (m,):
            raise MalformedInputError("need one color per value")
        self.mode = mode
        self.m = m
        self.build_ops = 0
        is_count = isinstance(mode, CountMode)
        if weights is None:
            wlist = [1] * m
        elif is_count:
            wlist = [int(w) for w in weights]
        else:
            wlist = list(weights)
        if len(wlist) != m:
            raise MalformedInputError("need one weight per value")

        order = np.lexsort((np.arange(m), values))
        self.sorted_values = values[order]
        self.sorted_values.setflags(write=False)
        cols = colors_arr[order].tolist()
        w_by_rank = [wlist[i] for i in order]

        succ = [m] * m
        pred = [-1] * m
        pref: list = [None] * m
        below: list = [None] * m
        last: dict[int, int] = {}
        running: dict[int, object] = {}
        combine = mode.combine
        for r in range(m):
            c = cols[r]
            p = last.get(c, -1)
            if p >= 0:
                succ[p] = r
                pred[r] = p
            last[c] = r
            prev = running.get(c)
            cur = w_by_rank[r] if prev is None else combine(prev, w_by_rank[r])
            running[c] = cur
            pref[r] = cur
            below[r] = 0 if prev is None else prev  # count mode only uses this
        self.colors = cols
        self.succ = succ
        self.pred = pred
        self.prefix_weight = pref
        self.prefix_below = below if is_count else None

        self._succ_index = _PrioIndex(succ)
        self.build_ops = 2 * m + _sort_charge(m) + self._succ_index.build_steps
        if interval_index and is_count:
            self._pred_index = _PrioIndex([-p for p in pred])
            self.build_ops += m + self._pred_index.build_steps
        else:
            self._pred_index = None

    # -- rank space ----------------------------------------------------------

    @property
    def size(self) -> int:
        return self.m

    @property
    def entries(self) -> int:
        """Number of stored mapped points (space instrumentation)."""
        return self.m

    def count_le(self, v: float) -> int:
        return int(np.searchsorted(self.sorted_values, v, side="right"))

    def count_lt(self, v: float) -> int:
        return int(np.searchsorted(self.sorted_values, v, side="left"))

    # -- queries ---------------------------------------------------------------

    def query_prefix(self, q: float, session: QuerySession | None = None) -> list:
        """Per-color total weight of the points with coordinate <= q."""
        rq = self.count_le(q)
        if rq == 0:
            return []
        hits, probes = self._succ_index.report(0, rq, rq)
        if session is not None:
            session.probes += probes
        cols, pref = self.colors, self.prefix_weight
        return [(cols[i], pref[i]) for i in hits]

    def query_interval(self, lo: float, hi: float, session: QuerySession | None = None) -> list:
        """Per-color count of the points with coordinate in [lo, hi].

        Computed as a rank difference between the rightmost and leftmost
        in-range point of each color, which requires group weights.
        """
        if self._pred_index is None:
            raise UnsupportedOperationError(
                "interval queries need group weights and an interval index"
            )
        if lo > hi:
            raise MalformedQueryError(f"interval [{lo}, {hi}] is inverted")
        rlo = self.count_lt(lo)
        rhi = self.count_le(hi)
        if rlo >= rhi:
            return []
        right, p1 = self._succ_index.report(rlo, rhi, rhi)
        left, p2 = self._pred_index.report(rlo, rhi, 1 - rlo)
        if session is not None:
            session.probes += p1 + p2
        cols, pref, below = self.colors, self.prefix_weight, self.prefix_below
        out: dict[int, int] = {}
        for i in right:
            out[cols[i]] = pref[i]
        for i in left:
            out[cols[i]] -= below[i]
        return [(c, w) for c, w in out.items() if w != 0]

    # -- introspection (tests, demos) -----------------------------------------

    def chain_of(self, color: int) -> list[tuple[float, float, object]]:
        """(value, successor value or +inf, prefix weight) triples for one color."""
        out = []
        for r in range(self.m):
            if self.colors[r] == color:
                s = self.succ[r]
                nxt = float(self.sorted_values[s]) if s < self.m else math.inf
                out.append((float(self.sorted_values[r]), nxt, self.prefix_weight[r]))
        return out

    def color_ids(self) -> set[int]:
        return set(self.colors)


def build_1d(points, mode=COUNT, interval_index: bool | None = None) -> Frequency1D:
    """Build the 1-D structure from 1-D points.

    Accepts a ``PointSet`` with d == 1 or an iterable of ``(x, color[, weight])``
    tuples / ColoredPoints.  The interval index is built by default whenever
    the weight mode supports it.
    """
    if isinstance(points, PointSet):
        ps = points
    else:
        points = list(points)
        if not points:
            if interval_index is None:
                interval_index = mode.is_group
            return Frequency1D(
                np.zeros(0), np.zeros(0, dtype=np.int64), mode=mode,
                interval_index=interval_index,
            )
        ps = PointSet.from_points(points, mode=mode)
    if ps.d != 1:
        raise MalformedInputError(f"build_1d needs 1-D points, got d={ps.d}")
    if interval_index is None:
        interval_index = ps.mode.is_group
    return Frequency1D(
        ps.coords[:, 0], ps.colors, ps.weight_list(), mode=ps.mode, interval_index=interval_index
    )


def query_prefix(s: Frequency1D, q: float, session: QuerySession | None = None) -> list:
    return s.query_prefix(q, session)


def query_interval(
    s: Frequency1D, lo: float, hi: float, session: QuerySession | None = None
) -> list:
    return s.query_interval(lo, hi, session)
