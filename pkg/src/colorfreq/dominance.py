"""Dominance frequency reporting via a recursive s-ary strip tree.

The first coordinate axis is rank-reduced and partitioned into s strips
per node.  Each node stores, for every strip, a substructure over the
points left of that strip projected onto the remaining axes: a 1-D
frequency structure when one axis remains, otherwise a recursive tree.

A dominance query walks the root-to-leaf path of the strip holding the
query corner, queries one substructure per node with the remaining
coordinates, and merges the partial answers through a color accumulator:
an array of phi weight cells plus a touched-list, so merging costs O(1)
per reported entry and draining costs O(k) regardless of phi.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .core import (
    BoxQuery,
    COUNT,
    ContractViolationError,
    CountMode,
    MalformedInputError,
    MalformedQueryError,
    ParameterError,
    PointSet,
    QuerySession,
)
from .freq1d import Frequency1D, _sort_charge


class ColorAccumulator:
    """phi weight cells with a touched-list for O(k) drain and reset.

    Cells start at the identity (represented as None so no semigroup
    identity element is required).  ``add`` is O(1); ``drain_and_reset``
    visits only the touched cells.
    """

    __slots__ = ("phi", "mode", "slots", "touched", "touch_ops", "drain_ops", "_count_mode")

    def __init__(self, phi: int, mode=COUNT):
        self.phi = phi
        self.mode = mode
        self.slots: list = [None] * phi
        self.touched: list[int] = []
        self.touch_ops = 0
        self.drain_ops = 0
        self._count_mode = isinstance(mode, CountMode)

    def add(self, color: int, weight) -> None:
        if not 0 <= color < self.phi:
            raise ContractViolationError(f"color {color} outside [0, {self.phi})")
        cur = self.slots[color]
        if cur is None:
            self.slots[color] = weight
            self.touched.append(color)
        else:
            self.slots[color] = self.mode.combine(cur, weight)
        self.touch_ops += 1

    def add_entries(self, entries) -> None:
        for c, w in entries:
            self.add(c, w)

    def drain_and_reset(self) -> list:
        out = []
        slots = self.slots
        for c in self.touched:
            self.drain_ops += 1
            w = slots[c]
            slots[c] = None
            if self._count_mode and w == 0:
                continue  # exact cancellation; never reported
            out.append((c, w))
        self.touched = []
        return out

    def is_fully_reset(self) -> bool:
        """Full phi-length scan; test helper only, never on the query path."""
        return not self.touched and all(s is None for s in self.slots)


def accumulate(acc: ColorAccumulator, partial) -> None:
    acc.add_entries(partial)


def drain_and_reset(acc: ColorAccumulator) -> list:
    return acc.drain_and_reset()


@dataclass
class TreeStats:
    stored_entries: int
    height: int
    node_count: int
    build_ops: int


class _StripNode:
    __slots__ = ("lo", "hi", "starts", "ends", "children", "prefix_structs")

    def __init__(self, lo, hi, starts=None, ends=None, children=None, prefix_structs=None):
        self.lo = lo
        self.hi = hi
        self.starts = starts
        self.ends = ends
        self.children = children
        self.prefix_structs = prefix_structs

    @property
    def is_leaf(self) -> bool:
        return self.children is None


class DominanceTree:
    """Static structure answering d-dimensional dominance frequency queries."""

    __slots__ = (
        "d",
        "s",
        "phi",
        "mode",
        "coords_r",
        "colors_r",
        "weights_r",
        "sorted0",
        "root",
        "base",
        "stored_entries",
        "build_ops",
        "node_count",
        "height",
        "lazy",
        "_session",
    )

    def __init__(self, points: PointSet, s: int, lazy: bool = False):
        _check_fanout(s, points.n)
        self._init_from_parts(
            points.coords,
            points.colors,
            points.weight_list(),
            s=s,
            phi=points.phi,
            mode=points.mode,
            lazy=lazy,
        )

    @classmethod
    def _from_parts(cls, coords, colors, weights, s, phi, mode, lazy=False):
        self = cls.__new__(cls)
        self._init_from_parts(coords, colors, weights, s=s, phi=phi, mode=mode, lazy=lazy)
        return self

    def _init_from_parts(self, coords, colors, weights, s, phi, mode, lazy):
        coords = np.asarray(coords, dtype=np.float64)
        n, d = coords.shape
        self.d = d
        self.s = s
        self.phi = phi
        self.mode = mode
        self.lazy = lazy
        self.stored_entries = 0
        self.build_ops = 0
        self.node_count = 0
        self.height = 0
        self._session = None
        if d == 1:
            self.base = Frequency1D(coords[:, 0], colors, weights, mode=mode)
            self.root = None
            self.coords_r = self.colors_r = self.weights_r = self.sorted0 = None
            self.stored_entries = self.base.entries
            self.build_ops = self.base.build_ops
            self.node_count = 1 if n else 0
            return
        self.base = None
        order = np.lexsort((np.arange(n), coords[:, 0]))
        self.coords_r = coords[order]
        self.colors_r = np.asarray(colors, dtype=np.int64)[order]
        self.weights_r = [weights[i] for i in order]
        self.sorted0 = self.coords_r[:, 0]
        if n == 0:
            self.root = None
            return
        self.build_ops += _sort_charge(n)
        self.root = self._build_node(0, n, 0)

    # -- construction ----------------------------------------------------------

    def _build_node(self, lo: int, hi: int, depth: int) -> _StripNode:
        self.node_count += 1
        m = hi - lo
        if m <= 1:
            if depth > self.height:
                self.height = depth
            self.build_ops += 1
            return _StripNode(lo, hi)
        q, r = divmod(m, self.s)
        starts, ends = [], []
        pos = lo
        for i in range(self.s):
            sz = q + 1 if i < r else q
            if sz == 0:
                break
            starts.append(pos)
            ends.append(pos + sz)
            pos += sz
        prefix_structs = None
        if not self.lazy:
            prefix_structs = [None]
            for i in range(1, len(starts)):
                prefix_structs.append(self._build_substructure(lo, starts[i]))
        children = [self._build_node(a, b, depth + 1) for a, b in zip(starts, ends)]
        self.build_ops += len(starts)
        return _StripNode(lo, hi, starts, ends, children, prefix_structs)

    def _build_substructure(self, lo: int, cut: int):
        """Structure over the remaining axes of the points with rank in [lo, cut)."""
        if cut <= lo:
            return None
        if self.d == 2:
            sub = Frequency1D(
                self.coords_r[lo:cut, 1],
                self.colors_r[lo:cut],
                self.weights_r[lo:cut],
                mode=self.mode,
            )
            self.stored_entries += sub.entries
            self.build_ops += sub.build_ops
            return sub
        sub = DominanceTree._from_parts(
            self.coords_r[lo:cut, 1:],
            self.colors_r[lo:cut],
            self.weights_r[lo:cut],
            s=self.s,
            phi=self.phi,
            mode=self.mode,
        )
        self.stored_entries += sub.stored_entries
        self.build_ops += sub.build_ops
        return sub

    # -- queries -----------------------------------------------------------------

    def new_session(self, track_partials: bool = False) -> QuerySession:
        return QuerySession(ColorAccumulator(self.phi, self.mode), track_partials)

    def query(self, q, session: QuerySession | None = None) -> list:
        """Per-color totals inside the dominance range ``q``.

        ``q`` may be a dominance BoxQuery or a plain upper-bound corner
        sequence.  Returns a frequency list; probe counters land on the
        session.
        """
        corner = self._corner_of(q)
        if session is None:
            if self._session is None:
                self._session = self.new_session()
            session = self._session
        if session.accumulator is None:
            session.accumulator = ColorAccumulator(self.phi, self.mode)
        session.reset()
        self._query_into(corner, session)
        return session.accumulator.drain_and_reset()

    def _corner_of(self, q) -> tuple:
        if isinstance(q, BoxQuery):
            if q.dimension != self.d:
                raise MalformedQueryError(
                    f"query dimension {q.dimension} != structure dimension {self.d}"
                )
            if q.has_lower_bounds():
                raise MalformedQueryError("dominance structure cannot take lower bounds")
            return q.corner()
        corner = tuple(float(c) for c in q)
        if len(corner) != self.d:
            raise MalformedQueryError(
                f"corner dimension {len(corner)} != structure dimension {self.d}"
            )
        if any(c != c for c in corner):
            raise MalformedQueryError("corner has NaN coordinates")
        return corner

    def _query_into(self, corner, session: QuerySession) -> int:
        """Accumulate the answer into the session; returns the count total added.

        The returned total is only meaningful in count mode (used by the
        decomposition diagnostics); other modes return 0.
        """
        if self.lazy:
            raise ParameterError("lazy skeleton cannot answer online queries")
        acc = session.accumulator
        count_mode = isinstance(self.mode, CountMode)
        if self.d == 1:
            part = self.base.query_prefix(corner[0], session)
            session.substructure_queries += 1
            acc.add_entries(part)
            total = sum(w for _, w in part) if count_mode else 0
            if session.partial_counts is not None:
                session.partial_counts.append(total)
            return total
        rq = int(np.searchsorted(self.sorted0, corner[0], side="right"))
        if rq == 0:
            return 0
        rest = corner[1:]
        node = self.root
        grand = 0
        while not node.is_leaf:
            i = bisect_left(node.ends, rq)
            struct = node.prefix_structs[i]
            if struct is not None:
                session.substructure_queries += 1
                if isinstance(struct, Frequency1D):
                    part = struct.query_prefix(rest[0], session)
                    acc.add_entries(part)
                    total = sum(w for _, w in part) if count_mode else 0
                else:
                    total = struct._query_into(rest, session)
                if session.partial_counts is not None:
                    session.partial_counts.append(total)
                grand += total
            node = node.children[i]
        # leaf: the surviving rank range, filtered by the remaining axes
        session.substructure_queries += 1
        total = 0
        coords = self.coords_r
        for pos in range(node.lo, min(node.hi, rq)):
            ok = True
            for j in range(1, self.d):
                if coords[pos, j] > rest[j - 1]:
                    ok = False
                    break
            if ok:
                w = self.weights_r[pos]
                acc.add(int(self.colors_r[pos]), w)
                if count_mode:
                    total += w
        if session.partial_counts is not None:
            session.partial_counts.append(total)
        return grand + total

    # -- instrumentation ---------------------------------------------------------

    def stats(self) -> TreeStats:
        return TreeStats(self.stored_entries, self.height, self.node_count, self.build_ops)


def ceil_log(base: int, n: int) -> int:
    """Smallest L with base**L >= n (0 for n <= 1); exact integer arithmetic."""
    if n <= 1:
        return 0
    level, power = 0, 1
    while power < n:
        power *= base
        level += 1
    return level


def dominance_space_bound(n: int, s: int, d: int) -> int:
    """Worst-case stored mapped points: n * ((s-1) * (ceil_log_s(n)+1))^(d-1)."""
    if d <= 1:
        return n
    return n * ((s - 1) * (ceil_log(s, n) + 1)) ** (d - 1)


def dominance_path_bound(n: int, s: int) -> int:
    """Per-query substructure-query bound for one tree level: ceil_log_s(n)+1."""
    return ceil_log(s, n) + 1


def _check_fanout(s: int, n: int) -> None:
    if not 2 <= s <= max(2, n):
        raise ParameterError(f"fanout s={s} outside [2, {max(2, n)}] for n={n}")


def _coerce_points(points, mode=COUNT) -> PointSet:
    if isinstance(points, PointSet):
        return points
    return PointSet.from_points(points, mode=mode)


def build_dominance(points, d: int | None = None, s: int = 2, mode=COUNT) -> DominanceTree:
    """Build the dominance structure; d (when given) must match the data."""
    ps = _coerce_points(points, mode=mode)
    if d is not None and d != ps.d:
        raise MalformedInputError(f"requested d={d} but points have d={ps.d}")
    return DominanceTree(ps, s)


def query_dominance(t: DominanceTree, q, session: QuerySession | None = None) -> list:
    return t.query(q, session)


def stats(t: DominanceTree) -> TreeStats:
    return t.stats()
