import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taut_cycles import reduced as rd
from taut_cycles.errors import (
    BadCase,
    BadN,
    CollapseAtBasepoint,
    DegenerateDirection,
    PointOffCirclesButSingularFlag,
    PointOnCircleButRegularFlag,
    QOnFocalPoint,
)
from taut_cycles.suite import brute_force_index


def regular_frame(geom, seed):
    rng = np.random.default_rng(seed)
    while True:
        e = rng.normal(size=3)
        e /= np.linalg.norm(e)
        if geom.is_regular(e, 1e-3):
            v = rng.normal(size=3)
            v -= e * (e @ v)
            return e, v / np.linalg.norm(v)


@pytest.mark.parametrize(
    "case,n,mults,ambient",
    [(1, 2, [1, 6, 7], 32), (2, 2, [1, 2, 3], 16), (3, 2, [3, 1, 1, 1], 16), (2, 5, [1, 2, 15], 40)],
)
def test_geometry_table(case, n, mults, ambient):
    geom = rd.build_reduced_geometry(case, n)
    assert [c.multiplicity for c in geom.circles] == mults
    assert geom.ambient_dim == ambient
    lhs, rhs = geom.sum_rule()
    assert lhs == rhs == ambient - 3


@pytest.mark.parametrize("case,n,exc", [(0, 2, BadCase), (4, 2, BadCase), (2, 1, BadN), (3, 0, BadN)])
def test_bad_geometry(case, n, exc):
    with pytest.raises(exc):
        rd.build_reduced_geometry(case, n)


@pytest.mark.parametrize("case,order", [(1, 8), (2, 8), (3, 12)])
def test_reflection_group_order(case, order):
    assert len(rd.build_reduced_geometry(case, 2).group()) == order


def test_case3_intersections():
    geom = rd.build_reduced_geometry(3, 2)
    sizes = sorted(len(labels) for _, labels in geom.intersection_points())
    assert sizes == [2, 2, 2, 3]


@pytest.mark.parametrize("case,items,total", [(1, 7, 29), (2, 7, 13), (3, 9, 13)])
def test_regular_schedule(case, items, total):
    geom = rd.build_reduced_geometry(case, 2)
    e, v = regular_frame(geom, 11)
    sched = rd.focal_schedule(geom, e, v)
    assert len(sched.items) == items
    assert sched.total == total
    special = [i for i in sched.items if i.kind == "special"]
    assert len(special) == 1 and special[0].multiplicity == 1
    assert math.isclose(special[0].param, math.pi / 2)
    assert sched.params() == sorted(sched.params(), reverse=True)


def test_singular_schedule_has_one_mixed_point():
    geom = rd.build_reduced_geometry(2, 2)
    e = np.array([0.6, 0.0, 0.8])  # on the y = 0 circle only
    v = np.array([0.3, 0.9, -0.225])
    v /= np.linalg.norm(v)
    sched = rd.focal_schedule(geom, e, v, regular=False)
    mixed = [i for i in sched.items if i.kind == "mixed"]
    assert len(mixed) == 1 and mixed[0].multiplicity >= 2
    assert sched.total == 13 - 2
    assert all(not math.isclose(i.param, math.pi / 2) for i in sched.items if i.kind == "standard")


def test_schedule_flag_errors():
    geom = rd.build_reduced_geometry(2, 2)
    with pytest.raises(PointOnCircleButRegularFlag):
        rd.focal_schedule(geom, [0.0, 0.6, 0.8], [1.0, 0.0, 0.0])
    with pytest.raises(PointOffCirclesButSingularFlag):
        rd.focal_schedule(geom, [0.6, 0.48, 0.64], [0.8, -0.36, -0.48], regular=False)
    with pytest.raises(DegenerateDirection):
        rd.focal_schedule(geom, [0.0, 0.6, 0.8], [0.0, -0.8, 0.6], regular=False)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.integers(0, 2**32 - 1))
def test_collapse_counts(case, seed):
    geom = rd.build_reduced_geometry(case, 2)
    e, v = regular_frame(geom, seed)
    events = rd.collapse_events(geom, e, v)
    doubles = sum(ev.order == 2 for ev in events)
    triples = sum(ev.order == 3 for ev in events)
    assert (doubles, triples) == ((6, 2) if case == 3 else (6, 0))
    ts = [ev.t_star for ev in events]
    assert ts == sorted(ts)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.integers(0, 2**32 - 1), st.floats(0.05, math.pi - 0.05))
def test_cycle_dimension_matches_index(case, seed, s_q):
    geom = rd.build_reduced_geometry(case, 2)
    e, v = regular_frame(geom, seed)
    try:
        cyc = rd.assemble_cycle(geom, e, v, True, s_q)
    except (QOnFocalPoint, CollapseAtBasepoint):
        return
    assert cyc.total_dim == brute_force_index(geom, e, v, True, s_q)
    if cyc.tail is not None:
        assert cyc.tail.cycle_condition()
        assert cyc.tail.monodromy() == cyc.tail.arcs[0].labels()
        assert cyc.total_dim == cyc.prefix_dim + 1 + cyc.tail.fiber_dim


def test_q_before_first_focal_point_is_minimum():
    geom = rd.build_reduced_geometry(2, 2)
    e, v = regular_frame(geom, 3)
    first = min(rd.focal_schedule(geom, e, v).params())
    cyc = rd.assemble_cycle(geom, e, v, True, first / 2)
    assert cyc.prefix == () and cyc.tail is None and cyc.total_dim == 0


def test_case3_flags_square_to_identity():
    geom = rd.build_reduced_geometry(3, 2)
    e, v = regular_frame(geom, 5)
    cyc = rd.assemble_cycle(geom, e, v, True, math.pi - 0.01)
    flags = [g.flag.name for g in cyc.tail.gluings]
    assert len(flags) == 8
    assert flags.count("w°") == 2
    assert np.allclose(cyc.tail.flag_product(), np.eye(3))


def test_full_cycle_case2():
    geom = rd.build_reduced_geometry(2, 2)
    e, v = regular_frame(geom, 7)
    cyc = rd.assemble_cycle(geom, e, v, True, math.pi - 1e-3)
    assert cyc.total_dim == 13
    assert len(cyc.tail.arcs) == 6
    assert cyc.tail.fiber_dim == 6


def test_hopf_map():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.normal(size=4)
        x /= np.linalg.norm(x)
        y = rd.hopf(x)
        assert math.isclose(np.linalg.norm(y), 1.0)
        assert np.allclose(rd.hopf(rd.hopf_lift(y)), y)
        # the circle action lies in the fiber
        assert np.allclose(rd.hopf(rd._rotate(x, 0.7)), y)


@pytest.mark.parametrize("case,circles", [(1, 8), (2, 8), (3, 12)])
def test_special_circle_counts(case, circles):
    geom = rd.build_reduced_geometry(case, 2)
    e, _ = regular_frame(geom, 13)
    rep = rd.orbit_critical_data(geom, np.array([0.3, -1.1, 0.7, 0.2]), rd.hopf_lift(e))
    assert rep.special_circles == circles
    assert len(rep.critical_points) == 2 * circles
    assert sum(rep.polynomial) == 2 * circles


def test_tautness_polynomial_is_independent_of_q():
    geom = rd.build_reduced_geometry(2, 2)
    e, _ = regular_frame(geom, 17)
    p3 = rd.hopf_lift(e)
    rng = np.random.default_rng(1)
    polys = {rd.orbit_critical_data(geom, rng.normal(size=4), p3).polynomial for _ in range(6)}
    assert len(polys) == 1
