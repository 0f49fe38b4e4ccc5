import itertools

import pytest
from hypothesis import given, settings, strategies as st

from taut_cycles.errors import (
    ElementNotInGroup,
    MultiplicityNotWeylInvariant,
    NonClosedUnderReflection,
    NotABase,
    RankTooLarge,
)
from taut_cycles.rootsys import build_root_system, inversion_set, is_group_closed, load_spec, weyl_group

A2_ROOTS = [[1, -1, 0], [-1, 1, 0], [0, 1, -1], [0, -1, 1], [1, 0, -1], [-1, 0, 1]]
SMALL = ["A1", "A2", "A3", "B2", "B3", "C3", "D3", "D4", "G2", "BC1", "BC2", "A1xA1xA1", "A1xB2"]


def test_a2_has_six_roots_and_rank_two():
    rs = build_root_system("A2")
    assert len(rs.roots) == 6
    assert rs.rank == 2


def test_a2_with_multiplicity_two():
    rs = build_root_system({"family": "A2", "multiplicities": {"long": 2}})
    assert {r.multiplicity for r in rs.roots} == {2}


def test_bc1_barred_multiplicity():
    rs = build_root_system({"family": "BC1", "multiplicities": {"short": 6, "double": 1}})
    assert len(rs.roots) == 4
    short = rs.simple[0]
    assert rs.barred_multiplicity(short) == 7
    assert sum(not r.is_reduced for r in rs.roots) == 2


def test_explicit_spec_roundtrip(tmp_path):
    path = tmp_path / "a2.json"
    path.write_text('{"roots": %s, "mults": [1,1,1,1,1,1], "simple": [0, 2]}' % A2_ROOTS)
    rs = load_spec(str(path))
    assert len(weyl_group(rs)) == 6


def test_rejects_non_closed_set():
    roots = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]]
    with pytest.raises(NonClosedUnderReflection):
        build_root_system({"roots": roots, "mults": [1] * 6, "simple": [0, 2]})


def test_rejects_non_invariant_multiplicities():
    with pytest.raises(MultiplicityNotWeylInvariant):
        build_root_system({"roots": A2_ROOTS, "mults": [1, 1, 2, 2, 1, 1], "simple": [0, 2]})


def test_rejects_bad_base():
    with pytest.raises(NotABase):
        build_root_system({"roots": A2_ROOTS, "mults": [1] * 6, "simple": [0, 4]})


def test_rank_limit():
    with pytest.raises(RankTooLarge):
        weyl_group(build_root_system("A7"))


def test_foreign_element_rejected():
    with pytest.raises(ElementNotInGroup):
        inversion_set(build_root_system("A2"), weyl_group(build_root_system("B2"))[3])


@pytest.mark.parametrize("name,order", [("A2", 6), ("A1xA1xA1", 8), ("G2", 12), ("B3", 48), ("D4", 192)])
def test_weyl_orders(name, order):
    group = weyl_group(build_root_system(name))
    assert len(group) == order
    assert len({w.perm for w in group}) == order


def test_g2_order_matches_orbit_of_generic_vector():
    rs = build_root_system("G2")
    x = (7, 2, -9)
    assert len({rs.from_word(w.word).apply(x) for w in weyl_group(rs)}) == 12


@pytest.mark.parametrize("name", SMALL)
def test_group_axioms(name):
    rs = build_root_system(name)
    group = weyl_group(rs)
    assert is_group_closed(group)
    assert rs.identity in group
    for w in group:
        assert w * w.inverse() == rs.identity


@pytest.mark.parametrize("name", SMALL)
def test_inversion_count_is_length(name):
    rs = build_root_system(name)
    for w in weyl_group(rs):
        assert len(inversion_set(rs, w)) == w.length


def test_inversion_examples():
    rs = build_root_system("A2")
    group = weyl_group(rs)
    assert inversion_set(rs, rs.identity) == frozenset()
    for k, i in enumerate(rs.simple):
        assert inversion_set(rs, rs.simple_reflection(k)) == {rs.roots[i]}
    assert len(inversion_set(rs, group[-1])) == 3


@pytest.mark.parametrize("name", ["A3", "B3", "G2", "BC2"])
def test_inversion_of_inverse(name):
    rs = build_root_system(name)
    for w in weyl_group(rs):
        inv = w.inverse()
        image = set()
        for r in inversion_set(rs, w):
            v = tuple(-x for x in inv.apply(r.vector))
            image.add(tuple(int(x) for x in v))
        assert image == {r.vector for r in inversion_set(rs, inv)}


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "BC3"])
def test_multiplicity_is_weyl_invariant(name):
    rs = build_root_system(name)
    for w in weyl_group(rs):
        for r in rs.roots:
            image = tuple(int(x) for x in w.apply(r.vector))
            assert rs.roots[rs.index(image)].multiplicity == r.multiplicity


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_length_changes_by_one_under_simple_reflection(name, data):
    rs = build_root_system(name)
    group = weyl_group(rs)
    w = data.draw(st.sampled_from(group))
    k = data.draw(st.integers(0, rs.rank - 1))
    ws = w * rs.simple_reflection(k)
    assert abs(len(inversion_set(rs, ws)) - len(inversion_set(rs, w))) == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A3", "B3", "G2"]), st.data())
def test_associativity(name, data):
    group = weyl_group(build_root_system(name))
    a, b, c = (data.draw(st.sampled_from(group)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_product_of_factors():
    rs = build_root_system({"factors": [{"family": "A1", "multiplicities": {"long": m}} for m in (1, 6, 7)]})
    assert rs.rank == 3
    assert sorted(rs.roots[i].multiplicity for i in rs.simple) == [1, 6, 7]
    assert all(len(inversion_set(rs, w)) == w.length for w in itertools.islice(weyl_group(rs), 8))
