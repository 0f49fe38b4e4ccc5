import math

import numpy as np
import pytest

from taut_cycles import numlie
from taut_cycles import reduced as rd
from taut_cycles.errors import NotNormal, RankDeficientTangentFrame, UnsupportedCase


def so3_on_r4():
    """SO(3) rotating the first three coordinates of R^4; orbits are round 2-spheres."""
    gens = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = np.zeros((4, 4))
        x[i, j], x[j, i] = -1.0, 1.0
        gens.append(x)
    return numlie.MatrixRep(0, 0, tuple(gens), 4)


def test_clifford_relations():
    gens = numlie.clifford_generators()
    assert len(gens) == 9
    eye = np.eye(gens[0].shape[0])
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            assert np.allclose(a @ b + b @ a, 2 * eye * (i == j))
        assert np.allclose(a, a.T)


@pytest.mark.parametrize("case,n,count,dim", [(1, 2, 37, 32), (2, 2, 14, 16), (3, 2, 13, 16), (2, 3, 25, 24)])
def test_generator_counts(case, n, count, dim):
    rep = numlie.build_representation(case, n)
    assert rep.dim_g == count
    assert rep.ambient_dim == dim
    assert all(np.allclose(x, -x.T) for x in rep.lie_basis)
    assert rep.closure_residual(pairs=15) < 1e-9


@pytest.mark.parametrize("case,n", [(0, 2), (2, 1), (3, 5)])
def test_unsupported(case, n):
    with pytest.raises(UnsupportedCase):
        numlie.build_representation(case, n)


@pytest.mark.parametrize("case", [2, 3])
def test_cohomogeneity_three(case):
    rep = numlie.build_representation(case, 2)
    p = np.random.default_rng(case).normal(size=rep.ambient_dim)
    p /= np.linalg.norm(p)
    assert numlie.orbit_rank(rep, p) == rep.principal_orbit_dim == rep.ambient_dim - 3
    assert numlie.normal_space(rep, p).shape[1] == 3


def test_umbilic_orbit_has_one_curvature():
    rep = so3_on_r4()
    a = 0.4
    p = np.array([math.cos(a), 0, 0, math.sin(a)])
    n = np.array([-math.sin(a), 0, 0, math.cos(a)])
    spec = numlie.shape_operator(rep, p, n)
    assert len(spec.eigenvalues) == 1
    kappa, mult = spec.eigenvalues[0]
    assert mult == 2
    assert math.isclose(abs(kappa), math.tan(a), rel_tol=1e-10)


def test_shape_operator_errors():
    rep = so3_on_r4()
    p = np.array([1.0, 0, 0, 0])
    with pytest.raises(NotNormal):
        numlie.shape_operator(rep, p, np.array([0, 1.0, 0, 0]))
    with pytest.raises(NotNormal):
        numlie.shape_operator(rep, p, np.array([0, 0, 0, 2.0]))
    with pytest.raises(RankDeficientTangentFrame):
        numlie.shape_operator(rep, np.array([0, 0, 0, 1.0]), np.array([1.0, 0, 0, 0]))


def test_shape_operator_is_symmetric_in_case2():
    rep = numlie.build_representation(2, 2)
    rng = np.random.default_rng(4)
    p = rng.normal(size=16)
    p /= np.linalg.norm(p)
    nrm = numlie.normal_space(rep, p)
    n = nrm @ rng.normal(size=nrm.shape[1])
    n -= p * (p @ n)
    n /= np.linalg.norm(n)
    spec = numlie.shape_operator(rep, p, n)
    assert spec.asymmetry < 1e-9
    assert spec.total == 13


@pytest.mark.parametrize("case,items,total", [(2, 7, 13), (3, 9, 13)])
def test_focal_schedule_on_fixed_space(case, items, total):
    rep = numlie.build_representation(case, 2)
    geom = rd.build_reduced_geometry(case, 2)
    fs = numlie.fixed_space(rep, seed=1, geom=geom)
    assert fs.isometry_residual < 1e-6
    assert sorted(fs.multiplicities) == sorted(c.multiplicity for c in geom.circles)
    rng = np.random.default_rng(2)
    while True:
        c = rng.normal(size=4)
        c /= np.linalg.norm(c)
        if geom.is_regular(fs.eta(fs.embed(c)), 1e-2):
            break
    p = fs.embed(c)
    xi = fs.embed(rng.normal(size=4))  # the V^H component of the normal space is two-dimensional
    q, _ = numlie.tangent_frame(rep, p)
    n = xi - p * (p @ xi)
    n -= q @ (q.T @ n)
    assert np.linalg.norm(n) > 1e-3
    sched = numlie.numerical_focal_schedule(rep, p, n / np.linalg.norm(n))
    assert sched.total == total
    assert len(sched.items) == items
    assert sum(i.kind == "special" for i in sched.items) == 1


def test_verify_reduction_small():
    rep = numlie.build_representation(3, 2)
    geom = rd.build_reduced_geometry(3, 2)
    report = numlie.verify_reduction(rep, geom, samples=4, seed=9)
    d = report.to_dict()
    assert report.ok
    assert d["max_ds"] < 1e-6
    assert d["mult_mismatches"] == 0
    assert d["lemma_checks"]["max_restriction_error"] < 1e-8


def test_verify_reduction_is_thread_independent():
    rep = numlie.build_representation(2, 2)
    geom = rd.build_reduced_geometry(2, 2)
    a = numlie.verify_reduction(rep, geom, samples=3, seed=5, threads=1).to_dict()
    b = numlie.verify_reduction(rep, geom, samples=3, seed=5, threads=3).to_dict()
    assert a == b
