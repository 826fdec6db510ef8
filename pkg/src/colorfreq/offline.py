"""Batched offline queries with low peak working space.

Dominance batches: the strip-tree skeleton is built up front, but the
per-strip substructures are built only when the sweep enters their strip
and destroyed when it leaves, so each point sits in at most one live
substructure at any time.  Queries are pinned to the leaf strip holding
their corner and answered the moment the sweep reaches it, which makes the
answer stream non-decreasing in the sweep coordinate.

Three-sided batches in the plane ([x1,x2] x (-inf,y]) place each query at
the highest node of a binary tree on x whose splitter falls in its x-range,
split it into two dominance queries over the node's children (the left one
x-reflected), run both child batches as sweeps along y, and merge the two
y-ordered answer streams pairwise through one accumulator — no subtraction
anywhere, so semigroup weights work.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .core import (
    BoxQuery,
    INF,
    MalformedInputError,
    PointSet,
    QuerySession,
    UnsupportedShapeError,
)
from .dominance import ColorAccumulator, DominanceTree, _check_fanout
from .freq1d import Frequency1D

_XTREE_LEAF = 2


@dataclass
class OfflineJob:
    """A batch of dominance queries plus the sink receiving each answer once."""

    points: PointSet
    queries: list  # (query id, BoxQuery) pairs
    sweep_axis: int = 0
    s: int = 2
    sink: Callable[[Any, list], None] | None = None


@dataclass
class SweepSummary:
    """Counters describing one completed offline job."""

    n: int
    m: int
    d: int
    s: int
    sweep_axis: int
    peak_live_entries: int = 0
    total_built: int = 0
    total_destroyed: int = 0
    entries_built: int = 0
    emitted: int = 0
    emit_order_violations: int = 0
    skeleton_nodes: int = 0
    merge_entry_touches: int = 0
    merge_touches_per_query: list = field(default_factory=list)


def peak_space_report(summary: SweepSummary) -> dict:
    """Read-only snapshot of the working-space and stream-order counters."""
    return {
        "peakLiveEntries": summary.peak_live_entries,
        "totalBuilt": summary.total_built,
        "totalDestroyed": summary.total_destroyed,
        "emitOrderViolations": summary.emit_order_violations,
    }


class _LiveMeter:
    """Tracks currently live substructure entries and their peak."""

    __slots__ = ("live", "peak")

    def __init__(self):
        self.live = 0
        self.peak = 0

    def add(self, entries: int):
        self.live += entries
        if self.live > self.peak:
            self.peak = self.live

    def remove(self, entries: int):
        self.live -= entries


def _struct_entries(struct) -> int:
    if struct is None:
        return 0
    if isinstance(struct, Frequency1D):
        return struct.entries
    return struct.stored_entries


def _sweep_dominance(
    coords,
    colors,
    weights,
    mode,
    phi,
    corner_queries,
    sweep_axis,
    s,
    summary,
    meter,
    check_disjoint=False,
):
    """Generator over (qid, sweep coordinate, frequency list), sweep-ordered.

    ``corner_queries`` holds (qid, corner) with corners in original axis
    order; the sweep permutes the sweep axis to the front internally.
    """
    coords = np.asarray(coords, dtype=np.float64)
    n, d = coords.shape
    axes = [sweep_axis] + [a for a in range(d) if a != sweep_axis]
    jobs = sorted(
        ((tuple(corner[a] for a in axes), qid) for qid, corner in corner_queries),
        key=lambda t: (t[0][0], t[1]),
    )

    if d == 1:
        struct = Frequency1D(coords[:, 0], colors, weights, mode=mode)
        if n:
            summary.total_built += 1
            summary.entries_built += struct.entries
            meter.add(struct.entries)
        session = QuerySession(ColorAccumulator(phi, mode))
        for corner, qid in jobs:
            session.reset()
            yield qid, corner[0], struct.query_prefix(corner[0], session)
        if n:
            meter.remove(struct.entries)
            summary.total_destroyed += 1
        return

    skel = DominanceTree._from_parts(
        coords[:, axes], colors, weights, s=s, phi=phi, mode=mode, lazy=True
    )
    summary.skeleton_nodes += skel.node_count

    if skel.root is None:
        for corner, qid in jobs:
            yield qid, corner[0], []
        return

    # pin each query to its leaf strip
    by_leaf: dict[int, list] = {}
    leaf_of: dict[int, Any] = {}
    for corner, qid in jobs:
        rq = int(np.searchsorted(skel.sorted0, corner[0], side="right"))
        node = skel.root
        while not node.is_leaf:
            node = node.children[bisect_left(node.ends, rq)]
        key = node.lo
        leaf_of[key] = node
        by_leaf.setdefault(key, []).append((corner, qid, rq))

    session = QuerySession(ColorAccumulator(phi, mode))
    acc = session.accumulator
    path: list = []  # (node, child index, live substructure)
    live_ranges: list = []  # rank intervals of live substructures (debug only)

    def pop_level():
        _, _, struct = path.pop()
        if struct is not None:
            meter.remove(_struct_entries(struct))
            summary.total_destroyed += 1
        if check_disjoint:
            live_ranges.pop()

    try:
        for key in sorted(by_leaf):
            leaf = leaf_of[key]
            # chain of (node, child index) leading to this leaf
            target = []
            node = skel.root
            while not node.is_leaf:
                i = bisect_left(node.ends, leaf.lo + 1)
                if node.ends[i] < leaf.hi:  # guard: hi within chosen child
                    raise AssertionError("leaf outside child range")
                target.append((node, i))
                node = node.children[i]
            keep = 0
            while (
                keep < len(path)
                and keep < len(target)
                and path[keep][0] is target[keep][0]
                and path[keep][1] == target[keep][1]
            ):
                keep += 1
            while len(path) > keep:
                pop_level()
            for node, i in target[keep:]:
                cut = node.starts[i]
                struct = skel._build_substructure(node.lo, cut)
                if struct is not None:
                    entries = _struct_entries(struct)
                    summary.total_built += 1
                    summary.entries_built += entries
                    meter.add(entries)
                if check_disjoint:
                    span = (node.lo, cut)
                    for a, b in live_ranges:
                        if a < span[1] and span[0] < b and span[0] < span[1]:
                            raise AssertionError(f"live ranges overlap: {(a, b)} vs {span}")
                    live_ranges.append(span)
                path.append((node, i, struct))

            for corner, qid, rq in by_leaf[key]:
                session.reset()
                rest = corner[1:]
                for _, _, struct in path:
                    if struct is None:
                        continue
                    session.substructure_queries += 1
                    if isinstance(struct, Frequency1D):
                        acc.add_entries(struct.query_prefix(rest[0], session))
                    else:
                        struct._query_into(rest, session)
                for pos in range(leaf.lo, min(leaf.hi, rq)):
                    ok = True
                    for j in range(1, d):
                        if skel.coords_r[pos, j] > rest[j - 1]:
                            ok = False
                            break
                    if ok:
                        acc.add(int(skel.colors_r[pos]), skel.weights_r[pos])
                yield qid, corner[0], acc.drain_and_reset()
    finally:
        while path:
            pop_level()


def _dominance_corners(queries, d) -> list:
    corners = []
    for qid, q in queries:
        if not isinstance(q, BoxQuery):
            raise UnsupportedShapeError("offline batches take BoxQuery objects")
        if q.dimension != d:
            raise UnsupportedShapeError(
                f"query {qid!r} has dimension {q.dimension}, dataset has {d}"
            )
        if q.has_lower_bounds():
            raise UnsupportedShapeError(f"query {qid!r} is not a dominance query")
        corners.append((qid, q.corner()))
    return corners


def answer_offline_dominance(job: OfflineJob) -> SweepSummary:
    """Answer a dominance batch with a lazy build-and-destroy sweep.

    Emits (query id, frequency list) to the job sink in non-decreasing
    order of the corner's sweep-axis coordinate; returns the space and
    stream counters.
    """
    ps = job.points
    if not 0 <= job.sweep_axis < max(ps.d, 1):
        raise MalformedInputError(f"sweep axis {job.sweep_axis} outside [0, {ps.d})")
    _check_fanout(job.s, ps.n)
    corners = _dominance_corners(job.queries, ps.d)
    summary = SweepSummary(ps.n, len(job.queries), ps.d, job.s, job.sweep_axis)
    meter = _LiveMeter()
    sink = job.sink or (lambda qid, entries: None)
    last = -INF
    for qid, coord, entries in _sweep_dominance(
        ps.coords, ps.colors, ps.weight_list(), ps.mode, ps.phi,
        corners, job.sweep_axis, job.s, summary, meter,
    ):
        if coord < last:
            summary.emit_order_violations += 1
        last = coord
        summary.emitted += 1
        sink(qid, entries)
    summary.peak_live_entries = meter.peak
    return summary


class _XNode:
    __slots__ = ("lo", "hi", "mid", "left", "right", "queries")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi
        self.mid = None
        self.left = None
        self.right = None
        self.queries = []

    @property
    def is_leaf(self):
        return self.left is None


def answer_offline_3sided(points: PointSet, queries, s: int, sink=None) -> SweepSummary:
    """Answer a batch of [x1,x2] x (-inf,y] queries in the plane.

    Each query is answered exactly once; the per-node two-stream merge
    touches every partial entry exactly once (``merge_entry_touches``).
    """
    ps = points
    if ps.d != 2:
        raise MalformedInputError(f"3-sided batches need planar data, got d={ps.d}")
    _check_fanout(s, ps.n)
    sink = sink or (lambda qid, entries: None)
    shaped = []
    for qid, q in queries:
        if not isinstance(q, BoxQuery) or q.dimension != 2:
            raise UnsupportedShapeError(f"query {qid!r} is not a planar box")
        (x1, x2), (ylo, y) = q.bounds
        if ylo != -INF:
            raise UnsupportedShapeError(f"query {qid!r} has a lower y bound")
        shaped.append((qid, x1, x2, y))

    summary = SweepSummary(ps.n, len(queries), 2, s, 1)
    meter = _LiveMeter()

    order = np.lexsort((np.arange(ps.n), ps.coords[:, 0]))
    coords_x = ps.coords[order]
    colors_x = ps.colors[order]
    weights_all = ps.weight_list()
    weights_x = [weights_all[i] for i in order]
    sorted_x = coords_x[:, 0]

    def emit(qid, entries):
        summary.emitted += 1
        sink(qid, entries)

    # place queries: empty x-slabs answer immediately, the rest go to the
    # highest node whose splitter rank falls strictly inside their x-range
    root = _XNode(0, ps.n)
    nodes = [root]
    i = 0
    while i < len(nodes):
        node = nodes[i]
        i += 1
        if node.hi - node.lo > _XTREE_LEAF:
            node.mid = (node.lo + node.hi) // 2
            node.left = _XNode(node.lo, node.mid)
            node.right = _XNode(node.mid, node.hi)
            nodes.append(node.left)
            nodes.append(node.right)
    summary.skeleton_nodes += len(nodes)

    empties = []
    for qid, x1, x2, y in shaped:
        rlo = int(np.searchsorted(sorted_x, x1, side="left"))
        rhi = int(np.searchsorted(sorted_x, x2, side="right"))
        if rlo >= rhi:
            empties.append((y, qid))
            continue
        node = root
        while not node.is_leaf:
            if rhi <= node.mid:
                node = node.left
            elif rlo >= node.mid:
                node = node.right
            else:
                break
        node.queries.append((qid, x1, x2, y))

    for y, qid in sorted(empties, key=lambda t: (t[0], str(t[1]))):
        emit(qid, [])

    acc = ColorAccumulator(ps.phi, ps.mode)
    for node in nodes:
        if not node.queries:
            continue
        if node.is_leaf:
            for qid, x1, x2, y in sorted(node.queries, key=lambda t: (t[3], str(t[0]))):
                for pos in range(node.lo, node.hi):
                    if x1 <= coords_x[pos, 0] <= x2 and coords_x[pos, 1] <= y:
                        acc.add(int(colors_x[pos]), weights_x[pos])
                emit(qid, acc.drain_and_reset())
            continue
        lo, mid, hi = node.lo, node.mid, node.hi
        left_coords = coords_x[lo:mid].copy()
        left_coords[:, 0] = -left_coords[:, 0]
        corners_left = [(qid, (-x1, y)) for qid, x1, x2, y in node.queries]
        corners_right = [(qid, (x2, y)) for qid, x1, x2, y in node.queries]
        gen_left = _sweep_dominance(
            left_coords, colors_x[lo:mid], weights_x[lo:mid], ps.mode, ps.phi,
            corners_left, 1, s, summary, meter,
        )
        gen_right = _sweep_dominance(
            coords_x[mid:hi], colors_x[mid:hi], weights_x[mid:hi], ps.mode, ps.phi,
            corners_right, 1, s, summary, meter,
        )
        last_y = -INF
        while True:
            a = next(gen_left, None)
            b = next(gen_right, None)
            if a is None and b is None:
                break
            if a is None or b is None or a[0] != b[0]:
                raise AssertionError("child answer streams fell out of step")
            qid, y, part_left = a
            part_right = b[2]
            if y < last_y:
                summary.emit_order_violations += 1
            last_y = y
            acc.add_entries(part_left)
            acc.add_entries(part_right)
            touches = len(part_left) + len(part_right)
            summary.merge_entry_touches += touches
            summary.merge_touches_per_query.append(
                (qid, touches, len(part_left), len(part_right))
            )
            emit(qid, acc.drain_and_reset())
    summary.peak_live_entries = meter.peak
    return summary
