"""Core domain types for colored range-frequency reporting.

Colored point sets, axis-aligned box queries, rank reduction, weight
algebra, and the text formats shared between the library and the CLI.

Everything defined here is immutable after construction and safe to
share across concurrent readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

INF = math.inf


class MalformedInputError(ValueError):
    """Point data violates a structural precondition (mixed dimensions, non-finite coords, ...)."""


class MalformedQueryError(ValueError):
    """Query bounds are inconsistent (lower bound above upper bound, NaN, ...)."""


class ParameterError(ValueError):
    """A tuning parameter is outside its legal range."""


class UnsupportedShapeError(ValueError):
    """The query shape is not supported by the structure it was sent to."""


class UnsupportedOperationError(ValueError):
    """The operation needs capabilities the chosen weight mode does not provide."""


class ContractViolationError(ValueError):
    """A caller-side contract was broken (e.g. color id outside [0, phi))."""


# ---------------------------------------------------------------------------
# Weight algebra
# ---------------------------------------------------------------------------


class CountMode:
    """Integer counts under addition.

    Addition over the integers is a group, so this mode also supports the
    rank-difference interval path that needs subtraction.
    """

    is_group = True
    name = "count"

    @staticmethod
    def combine(a, b):
        return a + b

    def __repr__(self):  # pragma: no cover - debugging aid
        return "CountMode()"


class SemigroupMode:
    """A user-supplied commutative semigroup.

    No inverse is assumed, so any query path that would subtract partial
    answers is rejected in this mode.
    """

    is_group = False

    def __init__(self, combine: Callable[[Any, Any], Any], name: str = "semigroup"):
        self._combine = combine
        self.name = name

    def combine(self, a, b):
        return self._combine(a, b)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"SemigroupMode({self.name})"


COUNT = CountMode()
MAX_SEMIGROUP = SemigroupMode(max, name="max")


# ---------------------------------------------------------------------------
# Points and queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColoredPoint:
    """A point in R^d with a dense color id and an optional weight."""

    coords: tuple[float, ...]
    color: int
    weight: Any = 1


class BoxQuery:
    """An axis-aligned box, closed on every finite side.

    Each axis carries a ``(lower, upper)`` pair where ``-inf`` / ``+inf``
    mark missing sides.  A dominance query is bounded from above on every
    axis and is identified with its corner point.
    """

    __slots__ = ("bounds",)

    def __init__(self, bounds: Iterable[tuple[float, float]]):
        checked = []
        for axis, (lo, hi) in enumerate(bounds):
            lo = float(lo)
            hi = float(hi)
            if math.isnan(lo) or math.isnan(hi):
                raise MalformedQueryError(f"axis {axis}: NaN bound")
            if lo > hi:
                raise MalformedQueryError(f"axis {axis}: lower bound {lo} above upper bound {hi}")
            checked.append((lo, hi))
        if not checked:
            raise MalformedQueryError("query needs at least one dimension")
        object.__setattr__(self, "bounds", tuple(checked))

    def __setattr__(self, name, value):
        raise AttributeError("BoxQuery is immutable")

    @classmethod
    def dominance(cls, corner: Sequence[float]) -> "BoxQuery":
        return cls([(-INF, c) for c in corner])

    @classmethod
    def interval(cls, lo: float, hi: float) -> "BoxQuery":
        return cls([(lo, hi)])

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    @property
    def sidedness(self) -> int:
        return sum(math.isfinite(lo) + math.isfinite(hi) for lo, hi in self.bounds)

    @property
    def is_dominance(self) -> bool:
        return all(lo == -INF and math.isfinite(hi) for lo, hi in self.bounds)

    def has_lower_bounds(self) -> bool:
        return any(lo != -INF for lo, _ in self.bounds)

    def two_sided_axes(self) -> tuple[int, ...]:
        return tuple(
            i for i, (lo, hi) in enumerate(self.bounds) if lo != -INF and hi != INF
        )

    def corner(self) -> tuple[float, ...]:
        """Upper-bound vector; only meaningful when there are no lower bounds."""
        if self.has_lower_bounds():
            raise UnsupportedShapeError("query has lower bounds; not a dominance corner")
        return tuple(hi for _, hi in self.bounds)

    def mask(self, coords: np.ndarray) -> np.ndarray:
        """Boolean mask of the rows of ``coords`` inside the box (closed sides)."""
        coords = np.asarray(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != self.dimension:
            raise MalformedQueryError(
                f"coords have dimension {coords.shape}, query has {self.dimension}"
            )
        out = np.ones(len(coords), dtype=bool)
        for axis, (lo, hi) in enumerate(self.bounds):
            col = coords[:, axis]
            if lo != -INF:
                out &= col >= lo
            if hi != INF:
                out &= col <= hi
        return out

    def __eq__(self, other):
        return isinstance(other, BoxQuery) and self.bounds == other.bounds

    def __hash__(self):
        return hash(self.bounds)

    def __repr__(self):
        parts = ", ".join(f"[{lo}, {hi}]" for lo, hi in self.bounds)
        return f"BoxQuery({parts})"


def normalize_query(q: BoxQuery, reflect: Sequence[bool]) -> BoxQuery:
    """Rewrite ``q`` for data whose listed axes were negated.

    A reflected axis turns ``[lo, hi]`` into ``[-hi, -lo]``, so a bound that
    was finite from below becomes finite from above.  Answers on reflected
    data with the normalized query equal answers on the original data.
    """
    if len(reflect) != q.dimension:
        raise ParameterError("reflection flags must match query dimension")
    bounds = []
    for (lo, hi), flip in zip(q.bounds, reflect):
        bounds.append((-hi, -lo) if flip else (lo, hi))
    return BoxQuery(bounds)


# ---------------------------------------------------------------------------
# Rank reduction
# ---------------------------------------------------------------------------


class RankMap:
    """Total order on one coordinate axis with index tie-break.

    Equal coordinates receive distinct ranks ordered by original index, so
    ranks are a permutation of ``[0, n)``.  ``count_le(v)`` is the number of
    points with coordinate <= v: the points with rank < ``count_le(v)`` are
    exactly those inside the closed upper bound v.
    """

    __slots__ = ("order", "sorted_values")

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1:
            raise MalformedInputError("RankMap needs a 1-D coordinate array")
        order = np.lexsort((np.arange(len(values)), values))
        self.order = order  # rank -> original index
        self.sorted_values = values[order]
        self.order.setflags(write=False)
        self.sorted_values.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.order)

    def count_le(self, v: float) -> int:
        return int(np.searchsorted(self.sorted_values, v, side="right"))

    def count_lt(self, v: float) -> int:
        return int(np.searchsorted(self.sorted_values, v, side="left"))


def rank_reduce(points, axis: int = 0) -> RankMap:
    """Rank map for one coordinate axis of a point set (or a plain value array)."""
    if isinstance(points, PointSet):
        values = points.coords[:, axis]
    else:
        arr = np.asarray(points, dtype=np.float64)
        values = arr[:, axis] if arr.ndim == 2 else arr
    return RankMap(values)


# ---------------------------------------------------------------------------
# Point sets
# ---------------------------------------------------------------------------


class PointSet:
    """A fixed set of colored, weighted points in R^d.

    Color ids are dense: ``phi`` equals one plus the largest id present.
    Weights default to the integer 1 in count mode.
    """

    __slots__ = ("coords", "colors", "weights", "mode", "phi", "labels")

    def __init__(self, coords, colors, weights=None, mode=COUNT, labels=None):
        coords = np.array(coords, dtype=np.float64)
        if coords.ndim != 2:
            raise MalformedInputError("coords must be a 2-D (n, d) array")
        if coords.size and not np.all(np.isfinite(coords)):
            raise MalformedInputError("coordinates must be finite")
        colors = np.asarray(colors, dtype=np.int64).copy()
        if colors.shape != (len(coords),):
            raise MalformedInputError("colors must be one id per point")
        if colors.size and colors.min() < 0:
            raise MalformedInputError("color ids must be non-negative")
        self.coords = coords
        self.colors = colors
        self.mode = mode
        self.phi = int(colors.max()) + 1 if colors.size else 0
        if isinstance(mode, CountMode):
            if weights is None:
                w = np.ones(len(coords), dtype=np.int64)
            else:
                w = np.asarray(weights)
                if w.shape != (len(coords),):
                    raise MalformedInputError("weights must be one per point")
                if not np.issubdtype(w.dtype, np.integer):
                    raise MalformedInputError("count-mode weights must be integers")
                w = w.astype(np.int64)
            w.setflags(write=False)
            self.weights = w
        else:
            if weights is None:
                self.weights = tuple([1] * len(coords))
            else:
                seq = list(weights)
                if len(seq) != len(coords):
                    raise MalformedInputError("weights must be one per point")
                self.weights = tuple(seq)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) < self.phi:
                raise MalformedInputError("need one label per color id")
        self.labels = labels
        self.coords.setflags(write=False)
        self.colors.setflags(write=False)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_points(cls, points, mode=COUNT, labels=None) -> "PointSet":
        """Build from ColoredPoint objects or ``(coords, color[, weight])`` tuples.

        For 1-D data a flat ``(x, color[, weight])`` form is also accepted.
        """
        coords, colors, weights = [], [], []
        d = None
        for p in points:
            if isinstance(p, ColoredPoint):
                c, col, w = p.coords, p.color, p.weight
            else:
                first = p[0]
                if isinstance(first, (Sequence, np.ndarray)) and not isinstance(first, str):
                    c = tuple(first)
                else:
                    c = (first,)
                col = p[1]
                w = p[2] if len(p) > 2 else 1
            if d is None:
                d = len(c)
            elif len(c) != d:
                raise MalformedInputError(f"mixed dimensions: {len(c)} vs {d}")
            coords.append(c)
            colors.append(col)
            weights.append(w)
        if d is None:
            raise MalformedInputError("cannot infer dimension of an empty point list")
        arr = np.asarray(coords, dtype=np.float64).reshape(len(coords), d)
        return cls(arr, colors, weights, mode=mode, labels=labels)

    @classmethod
    def empty(cls, d: int, mode=COUNT) -> "PointSet":
        return cls(np.zeros((0, d)), np.zeros(0, dtype=np.int64), mode=mode)

    # -- views ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def weight_at(self, i: int):
        if isinstance(self.mode, CountMode):
            return int(self.weights[i])
        return self.weights[i]

    def weight_list(self) -> list:
        if isinstance(self.mode, CountMode):
            return self.weights.tolist()
        return list(self.weights)

    def subset(self, indices) -> "PointSet":
        indices = np.asarray(indices)
        w = (
            self.weights[indices]
            if isinstance(self.mode, CountMode)
            else [self.weights[i] for i in indices]
        )
        return PointSet(self.coords[indices], self.colors[indices], w, self.mode, self.labels)

    def reflected(self, axes: Iterable[int]) -> "PointSet":
        """Copy with the listed coordinate axes negated."""
        coords = self.coords.copy()
        for a in axes:
            coords[:, a] = -coords[:, a]
        w = self.weights if isinstance(self.mode, CountMode) else list(self.weights)
        return PointSet(coords, self.colors, w, self.mode, self.labels)

    def label_of(self, color: int) -> str:
        if self.labels is not None:
            return self.labels[color]
        return f"c{color}"

    def row(self, i: int) -> ColoredPoint:
        return ColoredPoint(tuple(self.coords[i]), int(self.colors[i]), self.weight_at(i))


# ---------------------------------------------------------------------------
# Frequency lists
# ---------------------------------------------------------------------------

# A frequency list is a plain list of (color, weight) pairs with distinct
# colors and non-identity weights.  Comparisons are always by multiset.


def canonical_freq(entries) -> tuple:
    """Order-free canonical form used for multiset comparisons."""
    return tuple(sorted((int(c), w) for c, w in entries))


def freq_total(entries) -> int:
    """Sum of reported counts (count mode only)."""
    return sum(int(w) for _, w in entries)


# ---------------------------------------------------------------------------
# Query sessions
# ---------------------------------------------------------------------------


class QuerySession:
    """Per-query scratch state: an accumulator plus probe counters.

    Structures are immutable and may be queried concurrently as long as each
    concurrent caller owns its own session.  Counters are reset at the start
    of every query and describe the last query only.
    """

    __slots__ = ("accumulator", "probes", "substructure_queries", "fanout", "partial_counts")

    def __init__(self, accumulator=None, track_partials: bool = False):
        self.accumulator = accumulator
        self.probes = 0
        self.substructure_queries = 0
        self.fanout = 0
        self.partial_counts: list | None = [] if track_partials else None

    def reset(self):
        self.probes = 0
        self.substructure_queries = 0
        self.fanout = 0
        if self.partial_counts is not None:
            self.partial_counts = []


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------
#
# Dataset, one point per line:   x1 x2 ... xd <color-label> [weight]
# Queries, one box per line:     lo1 hi1 lo2 hi2 ... (tokens -inf / inf)
# '#' starts a comment, blank lines are skipped.


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                yield line


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def read_dataset(path, d: int | None = None, mode=COUNT) -> PointSet:
    """Parse the dataset text format.

    When ``d`` is omitted it is inferred from the first line: the first
    token that does not parse as a number is taken to be the color label.
    """
    rows = [line.split() for line in _data_lines(path)]
    if not rows:
        raise MalformedInputError(f"{path}: empty dataset")
    if d is None:
        d = 0
        while d < len(rows[0]) and _is_number(rows[0][d]):
            d += 1
        if d == len(rows[0]):
            raise MalformedInputError(
                f"{path}: all tokens numeric; pass the dimension explicitly"
            )
    coords, raw_labels, weights = [], [], []
    for lineno, toks in enumerate(rows, start=1):
        if len(toks) not in (d + 1, d + 2):
            raise MalformedInputError(
                f"{path}:{lineno}: expected {d} coords + label [+ weight], got {len(toks)} tokens"
            )
        coords.append([float(t) for t in toks[:d]])
        raw_labels.append(toks[d])
        weights.append(int(toks[d + 1]) if len(toks) == d + 2 else 1)
    # densify labels in first-appearance order
    ids: dict[str, int] = {}
    colors = []
    for lab in raw_labels:
        if lab not in ids:
            ids[lab] = len(ids)
        colors.append(ids[lab])
    labels = list(ids)
    w = np.asarray(weights) if isinstance(mode, CountMode) else weights
    return PointSet(np.asarray(coords).reshape(len(coords), d), colors, w, mode, labels)


def write_dataset(ps: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(ps.n):
            coords = " ".join(repr(float(x)) for x in ps.coords[i])
            w = ps.weight_at(i)
            tail = f" {w}" if w != 1 else ""
            fh.write(f"{coords} {ps.label_of(int(ps.colors[i]))}{tail}\n")


def read_queries(path, d: int | None = None) -> list[BoxQuery]:
    out = []
    for lineno, line in enumerate(_data_lines(path), start=1):
        toks = line.split()
        if d is None:
            if len(toks) % 2:
                raise MalformedQueryError(f"{path}:{lineno}: odd token count")
            d = len(toks) // 2
        if len(toks) != 2 * d:
            raise MalformedQueryError(
                f"{path}:{lineno}: expected {2 * d} tokens, got {len(toks)}"
            )
        vals = [float(t) for t in toks]
        out.append(BoxQuery(list(zip(vals[0::2], vals[1::2]))))
    return out


def write_queries(queries: Iterable[BoxQuery], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for q in queries:
            fh.write(" ".join(f"{repr(lo)} {repr(hi)}" for lo, hi in q.bounds) + "\n")
