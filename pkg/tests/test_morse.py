from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from taut_cycles.bruhat import PoincarePolynomial, ThetaSubset, poincare_polynomial
from taut_cycles.errors import NonGenericSegment, QNotRegular, ZeroPoint
from taut_cycles.morse import (
    ChamberPoint,
    critical_cosets,
    crossing_sequence,
    dominant,
    generic_regular_point,
    is_regular,
    morse_index,
    morse_polynomial,
    verify_bruhat_correspondence,
    walls_crossed,
)
from taut_cycles.rootsys import build_root_system, weyl_group

A2_M2 = {"family": "A2", "multiplicities": {"long": 2}}
TRIPLE = {"factors": [{"family": "A1", "multiplicities": {"long": m}} for m in (1, 6, 7)]}


def point(rs, *vals):
    return ChamberPoint.from_simple_values(rs, vals)


def test_coset_counts():
    a2 = build_root_system("A2")
    assert len(critical_cosets(a2, point(a2, 1, 2))) == 6
    assert len(critical_cosets(a2, point(a2, 0, 1))) == 3
    triple = build_root_system(TRIPLE)
    assert len(critical_cosets(triple, point(triple, 1, 2, 3))) == 8


def test_zero_point():
    rs = build_root_system("A2")
    with pytest.raises(ZeroPoint):
        critical_cosets(rs, point(rs, 0, 0))


def test_theta_of_wall_point():
    rs = build_root_system("B3")
    assert point(rs, 0, 1, 0).theta.indices == {0, 2}


def test_parse_accepts_ambient_and_simple_values():
    rs = build_root_system("A2")
    assert ChamberPoint.parse(rs, "1,2") == ChamberPoint.parse(rs, "4/3,1/3,-5/3")


def test_identity_coset_is_minimum():
    rs = build_root_system("A2")
    p, q = point(rs, 1, 1), point(rs, 3, 1)
    word = crossing_sequence(rs, q, rs.identity, p)
    assert word.walls == () and word.dimension == 0


@pytest.mark.parametrize("spec,dim", [("A2", 3), (A2_M2, 6)])
def test_longest_element_crosses_three_walls(spec, dim):
    rs = build_root_system(spec)
    p, q = point(rs, 1, 1), point(rs, 3, 1)
    word = crossing_sequence(rs, q, weyl_group(rs)[-1], p)
    assert len(word.walls) == 3
    assert word.dimension == dim
    assert list(word.params) == sorted(word.params)
    assert all(0 < t < 1 for t in word.params)


def test_bc1_nontrivial_coset_has_index_seven():
    rs = build_root_system({"family": "BC1", "multiplicities": {"short": 6, "double": 1}})
    p, q = point(rs, 1), point(rs, 2)
    assert morse_index(rs, q, rs.simple_reflection(0), p) == 7


def test_q_on_wall_rejected():
    rs = build_root_system("A2")
    with pytest.raises(QNotRegular):
        crossing_sequence(rs, point(rs, 0, 1), rs.identity, point(rs, 1, 1))


def test_segment_through_origin_is_not_generic():
    rs = build_root_system("A2")
    p = point(rs, 1, 1)
    q = ChamberPoint.from_ambient(rs, [-x for x in p.coords])
    with pytest.raises(NonGenericSegment):
        crossing_sequence(rs, q, rs.identity, p)


def test_walls_crossed_is_exact():
    rs = build_root_system("A2")
    hits = walls_crossed(rs, (3, 1, -4), (-2, 5, -3))
    assert hits and all(isinstance(t, Fraction) for t, _ in hits)


def test_dominant_lands_in_closed_chamber():
    rs = build_root_system("G2")
    _, x = dominant(rs, (5, -7, 2))
    assert all(rs.pairing(i, x) >= 0 for i in rs.simple)


def test_correspondence_examples():
    rs = build_root_system("A2")
    p = point(rs, 1, 1)
    rep = verify_bruhat_correspondence(rs, ThetaSubset(), generic_regular_point(rs, p, 0), p)
    assert rep.ok and sorted(e.index for e in rep.entries) == [0, 1, 1, 2, 2, 3]

    triple = build_root_system(TRIPLE)
    p = point(triple, 1, 1, 1)
    rep = verify_bruhat_correspondence(triple, ThetaSubset(), generic_regular_point(triple, p, 1), p)
    assert sorted(e.index for e in rep.entries) == [0, 1, 6, 7, 7, 8, 13, 14]
    expected = PoincarePolynomial.from_degrees([0, 1]) * PoincarePolynomial.from_degrees([0, 6])
    expected = expected * PoincarePolynomial.from_degrees([0, 7])
    assert rep.morse == expected


def test_full_theta_gives_single_cell():
    rs = build_root_system("A2")
    rep = verify_bruhat_correspondence(rs, ThetaSubset([0, 1]), point(rs, 3, 1), point(rs, 0, 0))
    assert rep.ok
    assert [e.index for e in rep.entries] == [0]
    assert rep.poincare.coefficients == (1,)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["A2", "A3", "B2", "B3", "C3", "G2", "BC2", "A1xA2"]), st.data())
def test_morse_polynomial_equals_poincare(name, data):
    rs = build_root_system(name)
    theta = data.draw(st.sets(st.integers(0, rs.rank - 1), max_size=rs.rank - 1))
    p = point(rs, *[0 if k in theta else k + 1 for k in range(rs.rank)])
    q = generic_regular_point(rs, p, data.draw(st.integers(0, 10**6)), dominant_only=data.draw(st.booleans()))
    assert is_regular(rs, q.coords)
    assert morse_polynomial(rs, q, p) == poincare_polynomial(rs, ThetaSubset(theta))
