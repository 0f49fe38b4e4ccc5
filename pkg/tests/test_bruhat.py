import pytest
from hypothesis import given, settings, strategies as st

from taut_cycles.bruhat import (
    PoincarePolynomial,
    ThetaSubset,
    bruhat_cells,
    cell_dimension,
    minimal_coset_reps,
    poincare_polynomial,
)
from taut_cycles.errors import InvalidTheta
from taut_cycles.rootsys import build_root_system, weyl_group
from taut_cycles.suite import brute_force_poincare

A2_M2 = {"family": "A2", "multiplicities": {"long": 2}}
BC1 = {"family": "BC1", "multiplicities": {"short": 6, "double": 1}}


@pytest.mark.parametrize(
    "spec,coeffs",
    [("A2", (1, 2, 2, 1)), (A2_M2, (1, 0, 2, 0, 2, 0, 1)), (BC1, (1, 0, 0, 0, 0, 0, 0, 1))],
)
def test_full_flag_polynomials(spec, coeffs):
    assert poincare_polynomial(build_root_system(spec), ThetaSubset()).coefficients == coeffs


def test_theta_extremes():
    rs = build_root_system("A3")
    assert minimal_coset_reps(rs, ThetaSubset(range(3))) == [rs.identity]
    assert len(minimal_coset_reps(rs, ThetaSubset())) == 24


def test_a2_one_simple_root_gives_three_reps():
    assert len(minimal_coset_reps(build_root_system("A2"), ThetaSubset([0]))) == 3


def test_invalid_theta():
    with pytest.raises(InvalidTheta):
        minimal_coset_reps(build_root_system("A2"), ThetaSubset([2]))


def test_parse_theta():
    assert ThetaSubset.parse("").indices == frozenset()
    assert ThetaSubset.parse("0, 2").indices == {0, 2}


def test_cell_dimensions():
    rs = build_root_system("A2")
    top = weyl_group(rs)[-1]
    assert cell_dimension(rs, rs.identity) == 0
    assert cell_dimension(rs, top) == 3
    rs2 = build_root_system(A2_M2)
    assert cell_dimension(rs2, weyl_group(rs2)[-1]) == 6


def test_polynomial_algebra():
    p = PoincarePolynomial.from_degrees([0, 1]) * PoincarePolynomial.from_degrees([0, 6])
    assert p.coefficients == (1, 1, 0, 0, 0, 0, 1, 1)
    assert p(1) == 4
    assert p.degree == 7
    assert p.is_palindromic()
    assert str(PoincarePolynomial((1, 2, 2, 1))) == "1 + 2t + 2t^2 + t^3"


def _parabolic_order(rs, theta):
    gens = [rs.simple_reflection(k) for k in theta]
    seen, frontier = {rs.identity}, [rs.identity]
    while frontier:
        frontier = [w * g for w in frontier for g in gens if w * g not in seen]
        seen.update(frontier)
    return len(seen)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "A3", "B2", "B3", "C3", "G2", "BC2", "A1xA2"]), st.data())
def test_polynomial_invariants(name, data):
    rs = build_root_system(name)
    theta = ThetaSubset(data.draw(st.sets(st.integers(0, rs.rank - 1))))
    poly = poincare_polynomial(rs, theta)
    reps = minimal_coset_reps(rs, theta)
    assert poly.coefficients[0] == 1
    assert sum(poly.coefficients) == len(reps)
    assert len(reps) * _parabolic_order(rs, theta) == len(weyl_group(rs))
    assert poly.is_palindromic()
    assert [c.dimension for c in bruhat_cells(rs, theta)] == sorted(c.dimension for c in bruhat_cells(rs, theta))


@pytest.mark.parametrize("name", ["A2", "B3", "G2", "BC3", "D3"])
def test_agrees_with_brute_force(name):
    rs = build_root_system(name)
    assert list(poincare_polynomial(rs, ThetaSubset()).coefficients) == brute_force_poincare(rs)
