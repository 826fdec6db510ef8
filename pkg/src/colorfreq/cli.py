"""Command-line front end.

Subcommands:
  gen          write a seeded random dataset and query file
  build-query  build a structure, answer a query file, stream the answers
  offline      answer a batch with the low-space sweep, stream the answers
  verify       cross-check structure answers against the brute-force scan
               and the space/probe counters against their bounds
  bench        counter and timing table (CSV) for one configuration
  stats        build-only instrumentation report

All bound checks are operation counters, never wall-clock, so verify output
is reproducible bit for bit for a fixed seed and configuration.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .boxes import BoxTree
from .core import (
    COUNT,
    CountMode,
    INF,
    MAX_SEMIGROUP,
    PointSet,
    canonical_freq,
    freq_total,
    read_dataset,
    read_queries,
    write_dataset,
    write_queries,
)
from .datagen import generate_points, generate_queries
from .dominance import (
    DominanceTree,
    ceil_log,
    dominance_path_bound,
    dominance_space_bound,
)
from .offline import OfflineJob, answer_offline_3sided, answer_offline_dominance
from .oracle import brute_force

BENCH_HEADER = (
    "n,m,d,s,phi,build_ms,query_us_p50,query_us_p99,"
    "k_total,storedEntries,peakLiveEntries,probes"
)


def _mode_of(name: str):
    return COUNT if name == "count" else MAX_SEMIGROUP


def _parse_sides(text: str | None, d: int) -> tuple[int, ...] | None:
    if text is None:
        return None
    parts = [int(t) for t in text.split(",")]
    if len(parts) != d or any(p not in (1, 2) for p in parts):
        raise SystemExit(f"--sides needs {d} comma-separated values from {{1,2}}")
    return tuple(parts)


def _bounded_axes(queries, sides) -> tuple[int, ...]:
    if sides is not None:
        return tuple(i for i, v in enumerate(sides) if v == 2)
    axes = set()
    for q in queries:
        for i, (lo, _) in enumerate(q.bounds):
            if lo != -INF:
                axes.add(i)
    return tuple(sorted(axes))


def _build_structure(ps: PointSet, s: int, bounded_axes):
    if bounded_axes:
        return BoxTree(ps, s, bounded_axes)
    return DominanceTree(ps, s)


def _answer_line(ps: PointSet, qid, entries) -> str:
    parts = [f"{ps.label_of(c)}:{w}" for c, w in sorted(entries)]
    return " ".join([str(qid), str(len(entries))] + parts)


def _load(args):
    mode = _mode_of(args.weights)
    ps = read_dataset(args.dataset, d=args.dims, mode=mode)
    queries = read_queries(args.queries_file, d=ps.d)
    return ps, queries


def cmd_gen(args) -> int:
    mode = _mode_of(args.weights)
    ps = generate_points(
        args.points, args.dims, args.colors, args.seed,
        mode=mode, equal_classes=args.equal_classes, grid=args.grid,
    )
    sides = _parse_sides(args.sides, args.dims) or tuple([1] * args.dims)
    queries = generate_queries(args.queries, args.dims, args.seed + 1, sides)
    write_dataset(ps, f"{args.out}.points.txt")
    write_queries(queries, f"{args.out}.queries.txt")
    print(f"wrote {args.out}.points.txt ({ps.n} points, phi={ps.phi}) "
          f"and {args.out}.queries.txt ({len(queries)} queries)")
    return 0


def cmd_build_query(args) -> int:
    ps, queries = _load(args)
    sides = _parse_sides(args.sides, ps.d)
    struct = _build_structure(ps, args.fanout, _bounded_axes(queries, sides))
    session = struct.new_session()
    lines = []
    for qid, q in enumerate(queries):
        entries = struct.query(q, session)
        lines.append(_answer_line(ps, qid, entries))
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    ps, queries = _load(args)
    sides = _parse_sides(args.sides, ps.d)
    bounded = _bounded_axes(queries, sides)
    struct = _build_structure(ps, args.fanout, bounded)
    session = struct.new_session()
    acc = session.accumulator

    mismatches = 0
    probe_violations = 0
    first_diff = None
    count_mode = isinstance(ps.mode, CountMode)
    path_bound = dominance_path_bound(ps.n, args.fanout) ** max(ps.d - 1, 1)
    for qid, q in enumerate(queries):
        touch_before = acc.touch_ops
        entries = struct.query(q, session)
        if args.corrupt and qid == 0 and entries:
            c0, w0 = entries[0]
            entries = [(c0, w0 + 1)] + entries[1:]
        expected = brute_force(ps, q)
        if canonical_freq(entries) != canonical_freq(expected):
            mismatches += 1
            if first_diff is None:
                first_diff = (qid, q, entries, expected)
        if count_mode and freq_total(entries) != int(q.mask(ps.coords).sum()):
            mismatches += 1
            if first_diff is None:
                first_diff = (qid, q, entries, expected)
        k = len(entries)
        if isinstance(struct, DominanceTree):
            if session.substructure_queries > path_bound:
                probe_violations += 1
            if acc.touch_ops - touch_before > max(k, 0) * path_bound:
                probe_violations += 1
        else:
            if session.fanout > 2 ** len(struct.bounded_axes):
                probe_violations += 1

    stored = struct.stored_entries
    if isinstance(struct, DominanceTree):
        space_bound = dominance_space_bound(ps.n, args.fanout, ps.d)
    else:
        space_bound = dominance_space_bound(ps.n, args.fanout, ps.d) * (
            (ceil_log(2, max(ps.n, 1)) + 1) ** len(struct.bounded_axes)
        )
    space_ok = stored <= space_bound

    print(f"dataset: n={ps.n} d={ps.d} phi={ps.phi} mode={ps.mode.name}")
    print(f"structure: {'box' if bounded else 'dominance'} s={args.fanout} "
          f"boundedAxes={list(bounded)}")
    print(f"queries: {len(queries)}")
    print(f"{mismatches} mismatches")
    print(f"probe-bound violations: {probe_violations}")
    print(f"space: storedEntries={stored} bound={space_bound} "
          f"{'OK' if space_ok else 'EXCEEDED'}")
    if first_diff is not None:
        qid, q, got, want = first_diff
        print(f"first differing query #{qid}: {q}")
        print(f"  structure: {sorted(got)}")
        print(f"  oracle:    {sorted(want)}")
    ok = mismatches == 0 and probe_violations == 0 and space_ok
    return 0 if ok else 1


def cmd_offline(args) -> int:
    ps, queries = _load(args)
    sides = _parse_sides(args.sides, ps.d)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout

    def sink(qid, entries):
        # written as each answer is produced, not after the batch
        out.write(_answer_line(ps, qid, entries) + "\n")

    three_sided = ps.d == 2 and (
        sides == (2, 1) or (sides is None and any(q.bounds[0][0] != -INF for q in queries))
    )
    try:
        if three_sided:
            summary = answer_offline_3sided(ps, list(enumerate(queries)), args.fanout, sink)
        else:
            job = OfflineJob(ps, list(enumerate(queries)), args.sweep_axis, args.fanout, sink)
            summary = answer_offline_dominance(job)
    finally:
        if out is not sys.stdout:
            out.close()
    print(
        f"emitted={summary.emitted} peakLiveEntries={summary.peak_live_entries} "
        f"totalBuilt={summary.total_built} totalDestroyed={summary.total_destroyed} "
        f"emitOrderViolations={summary.emit_order_violations}",
        file=sys.stderr,
    )
    return 0 if summary.emit_order_violations == 0 else 1


def cmd_bench(args) -> int:
    mode = _mode_of(args.weights)
    ps = generate_points(args.points, args.dims, args.colors, args.seed, mode=mode)
    sides = _parse_sides(args.sides, args.dims) or tuple([1] * args.dims)
    queries = generate_queries(args.queries, args.dims, args.seed + 1, sides)
    bounded = tuple(i for i, v in enumerate(sides) if v == 2)

    t0 = time.perf_counter()
    struct = _build_structure(ps, args.fanout, bounded)
    build_ms = (time.perf_counter() - t0) * 1e3

    session = struct.new_session()
    k_total = 0
    probes = 0
    online = {}
    times = []
    for qid, q in enumerate(queries):
        t1 = time.perf_counter()
        entries = struct.query(q, session)
        times.append((time.perf_counter() - t1) * 1e6)
        k_total += len(entries)
        probes += session.probes
        online[qid] = canonical_freq(entries)

    peak = ""
    if not bounded:
        got = {}
        job = OfflineJob(
            ps, list(enumerate(queries)), 0, args.fanout,
            lambda qid, entries: got.__setitem__(qid, canonical_freq(entries)),
        )
        summary = answer_offline_dominance(job)
        peak = summary.peak_live_entries
        if got != online:
            print("offline/online disagreement", file=sys.stderr)
            return 1
    p50 = float(np.percentile(times, 50)) if times else 0.0
    p99 = float(np.percentile(times, 99)) if times else 0.0
    row = (
        f"{ps.n},{len(queries)},{ps.d},{args.fanout},{ps.phi},"
        f"{build_ms:.3f},{p50:.2f},{p99:.2f},"
        f"{k_total},{struct.stored_entries},{peak},{probes}"
    )
    text = BENCH_HEADER + "\n" + row + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    mode = _mode_of(args.weights)
    ps = read_dataset(args.dataset, d=args.dims, mode=mode)
    sides = _parse_sides(args.sides, ps.d)
    bounded = tuple(i for i, v in enumerate(sides or ()) if v == 2)
    struct = _build_structure(ps, args.fanout, bounded)
    if isinstance(struct, DominanceTree):
        st = struct.stats()
        print(f"storedEntries {st.stored_entries}")
        print(f"height {st.height}")
        print(f"nodeCount {st.node_count}")
        print(f"buildOps {st.build_ops}")
    else:
        print(f"storedEntries {struct.stored_entries}")
        print(f"boundedAxes {list(struct.bounded_axes)}")
        print(f"buildOps {struct.build_ops}")
    return 0


def _add_common(p, with_fanout=True):
    p.add_argument("--dims", type=int, default=None, help="dimension d")
    p.add_argument("--weights", choices=("count", "semigroup"), default="count",
                   help="weight mode (semigroup = max over integer weights)")
    p.add_argument("--sides", default=None,
                   help="per-axis sidedness, e.g. 2,1 (2 = bounded on both sides)")
    if with_fanout:
        p.add_argument("--fanout", "-s", dest="fanout", type=int, default=4,
                       help="strip-tree fanout s")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="colorfreq", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a dataset and query file")
    p.add_argument("--points", type=int, required=True, help="number of points n")
    p.add_argument("--queries", type=int, required=True, help="number of queries m")
    p.add_argument("--colors", type=int, default=8, help="color palette size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--equal-classes", action="store_true",
                   help="deal colors evenly across points")
    p.add_argument("--grid", type=int, default=None,
                   help="snap coordinates to integers in [0, grid)")
    p.add_argument("--out", required=True, help="output path prefix")
    _add_common(p, with_fanout=False)
    p.set_defaults(func=cmd_gen, dims=2)

    for name, fn, needs_queries in (
        ("build-query", cmd_build_query, True),
        ("verify", cmd_verify, True),
        ("offline", cmd_offline, True),
    ):
        p = sub.add_parser(name)
        p.add_argument("dataset")
        p.add_argument("queries_file")
        _add_common(p)
        p.add_argument("--out", default=None)
        if name == "offline":
            p.add_argument("--sweep-axis", type=int, default=0)
        if name == "verify":
            p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
        p.set_defaults(func=fn)

    p = sub.add_parser("bench", help="one-row CSV of counters and timings")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--queries", type=int, required=True)
    p.add_argument("--colors", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_bench, dims=2)

    p = sub.add_parser("stats", help="build-only instrumentation")
    p.add_argument("dataset")
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
