"""Core types: queries, rank maps, weight algebra, text formats."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import colorfreq as cf
from _util import canon

INF = float("inf")


# -- query normalization -------------------------------------------------------


def test_normalize_lower_bound_becomes_upper():
    q = cf.BoxQuery([(5.0, INF)])
    r = cf.normalize_query(q, [True])
    assert r.bounds == ((-INF, -5.0),)


def test_normalize_identity_without_reflection():
    q = cf.BoxQuery([(-INF, 3.0)])
    assert cf.normalize_query(q, [False]).bounds == ((-INF, 3.0),)


def test_normalize_interval_reverses_order():
    q = cf.BoxQuery([(1.0, 4.0)])
    assert cf.normalize_query(q, [True]).bounds == ((-4.0, -1.0),)


def test_malformed_query_rejected():
    with pytest.raises(cf.MalformedQueryError):
        cf.BoxQuery([(4.0, 1.0)])
    with pytest.raises(cf.MalformedQueryError):
        cf.BoxQuery([(float("nan"), 1.0)])


def test_sidedness_counts():
    q = cf.BoxQuery([(1.0, 2.0), (-INF, 3.0), (-INF, INF)])
    assert q.sidedness == 3
    assert q.two_sided_axes() == (0,)
    assert not q.is_dominance
    assert cf.BoxQuery.dominance((1.0, 2.0)).is_dominance


def test_reflection_soundness_against_oracle():
    rng = np.random.default_rng(30)
    for trial in range(60):
        d = int(rng.integers(1, 4))
        ps = cf.generate_points(int(rng.integers(1, 150)), d, 6, seed=trial, grid=25)
        flags = [bool(b) for b in rng.integers(0, 2, d)]
        flipped = ps.reflected([i for i, f in enumerate(flags) if f])
        bounds = []
        for axis in range(d):
            if rng.random() < 0.5:
                bounds.append((-INF, float(rng.uniform(-1, 26))))
            else:
                bounds.append((float(rng.uniform(-1, 26)), INF))
        q = cf.BoxQuery(bounds)
        assert canon(cf.brute_force(flipped, cf.normalize_query(q, flags))) == canon(
            cf.brute_force(ps, q)
        )


# -- rank reduction -------------------------------------------------------------


def test_rank_counts_with_duplicates():
    rm = cf.rank_reduce([2.0, 2.0, 5.0])
    assert rm.count_le(2) == 2
    assert rm.count_le(1) == 0
    assert rm.count_le(7) == 3
    assert rm.count_lt(2) == 0
    assert rm.count_lt(5) == 2


def test_rank_permutation_breaks_ties_by_index():
    rm = cf.rank_reduce([3.0, 1.0, 3.0])
    assert list(rm.order) == [1, 0, 2]
    assert sorted(rm.order) == [0, 1, 2]


def test_rank_reduce_on_pointset_axis():
    ps = cf.PointSet.from_points([((1.0, 9.0), 0), ((2.0, 4.0), 0)])
    assert cf.rank_reduce(ps, axis=1).count_le(5.0) == 1


# -- weight modes ----------------------------------------------------------------


@given(st.lists(st.integers(-100, 100), min_size=3, max_size=3))
def test_count_mode_associative_commutative(vals):
    a, b, c = vals
    m = cf.COUNT
    assert m.combine(m.combine(a, b), c) == m.combine(a, m.combine(b, c))
    assert m.combine(a, b) == m.combine(b, a)
    assert m.combine(a, 0) == a


@given(st.lists(st.integers(-100, 100), min_size=3, max_size=3))
def test_max_semigroup_associative_commutative(vals):
    a, b, c = vals
    m = cf.MAX_SEMIGROUP
    assert m.combine(m.combine(a, b), c) == m.combine(a, m.combine(b, c))
    assert m.combine(a, b) == m.combine(b, a)


# -- point sets ------------------------------------------------------------------


def test_mixed_dimension_rejected():
    with pytest.raises(cf.MalformedInputError):
        cf.PointSet.from_points([((1.0, 2.0), 0), ((1.0,), 1)])


def test_nonfinite_coords_rejected():
    with pytest.raises(cf.MalformedInputError):
        cf.PointSet(np.array([[np.nan, 1.0]]), [0])
    with pytest.raises(cf.MalformedInputError):
        cf.PointSet(np.array([[np.inf, 1.0]]), [0])


def test_negative_color_rejected():
    with pytest.raises(cf.MalformedInputError):
        cf.PointSet(np.zeros((1, 1)), [-1])


def test_phi_is_one_plus_max_id():
    ps = cf.PointSet(np.zeros((3, 1)), [0, 4, 2])
    assert ps.phi == 5
    assert cf.PointSet.empty(2).phi == 0


def test_pointset_immutable():
    ps = cf.PointSet(np.zeros((2, 2)), [0, 1])
    with pytest.raises(ValueError):
        ps.coords[0, 0] = 5.0


def test_colored_point_roundtrip():
    p = cf.ColoredPoint((1.0, 2.0), 3, 7)
    ps = cf.PointSet.from_points([p])
    assert ps.row(0) == p


# -- multiset semantics ----------------------------------------------------------


def test_frequency_list_multiset_equality():
    assert canon([(1, 2), (0, 5)]) == canon([(0, 5), (1, 2)])
    assert canon([(1, 2)]) != canon([(1, 3)])


# -- text formats ----------------------------------------------------------------


def test_dataset_roundtrip(tmp_path):
    ps = cf.generate_points(40, 3, 5, seed=77)
    path = tmp_path / "d.txt"
    cf.write_dataset(ps, path)
    back = cf.read_dataset(path, d=3)
    assert back.n == ps.n and back.d == 3
    # same answers come out regardless of internal id permutation
    q = cf.BoxQuery.dominance((500.0, 500.0, 500.0))
    by_label = lambda inst: sorted(
        (inst.label_of(c), w) for c, w in cf.brute_force(inst, q)
    )
    assert by_label(back) == by_label(ps)


def test_dataset_weights_column(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("# weighted points\n1.5 0.5 red 7\n2.5 1.5 blue 3\n")
    ps = cf.read_dataset(path, d=2)
    assert ps.weights.tolist() == [7, 3]
    assert ps.labels == ("red", "blue")


def test_dataset_dimension_inference(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("1.0 2.0 red\n3.0 4.0 blue\n")
    assert cf.read_dataset(path).d == 2


def test_dataset_bad_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1.0 2.0 red\n1.0 blue\n")
    with pytest.raises(cf.MalformedInputError):
        cf.read_dataset(path, d=2)


def test_query_roundtrip_with_infinities(tmp_path):
    qs = [
        cf.BoxQuery([(-INF, 3.5), (1.25, INF)]),
        cf.BoxQuery([(0.0, 1.0), (-INF, INF)]),
    ]
    path = tmp_path / "q.txt"
    cf.write_queries(qs, path)
    assert cf.read_queries(path) == qs


def test_query_file_literal_inf_tokens(tmp_path):
    path = tmp_path / "q.txt"
    path.write_text("-inf 5.0 2.0 inf\n")
    (q,) = cf.read_queries(path)
    assert q.bounds == ((-INF, 5.0), (2.0, INF))


# -- sessions ---------------------------------------------------------------------


def test_concurrent_sessions_do_not_interfere():
    ps = cf.generate_points(100, 2, 8, seed=50)
    t = cf.build_dominance(ps, 2, s=4)
    s1, s2 = t.new_session(), t.new_session()
    q1 = cf.BoxQuery.dominance((400.0, 600.0))
    q2 = cf.BoxQuery.dominance((800.0, 200.0))
    a_only = canon(t.query(q1, s1))
    b_only = canon(t.query(q2, s2))
    # interleave on the same structure
    r1 = t.query(q1, s1)
    r2 = t.query(q2, s2)
    assert canon(r1) == a_only and canon(r2) == b_only
