"""Numerical oracle: matrix models of the three representations and their orbit geometry.

The representations are realised as real skew-symmetric generators acting on
``V``:

1. ``SO(2) × Spin(9)`` on ``ℝ² ⊗ ℝ¹⁶ = ℝ³²``.
2. ``U(2) × Sp(n)`` on ``ℂ² ⊗_ℂ ℂ²ⁿ = ℝ⁸ⁿ``.
3. ``SU(2) × Sp(n)`` on the real form of ``S³ℂ² ⊗ ℂ²ⁿ``, which is ``ℝ⁸ⁿ``.

From a random regular point the module locates a four-dimensional slice
``V^H`` with a circle action, identifies it with ``ℂ²`` so that the circle acts
by scalars, and detects the singular great circles of the induced Hopf
picture by scanning the orbit rank.  Shape operators of orbits then provide
focal data that is compared against :mod:`taut_cycles.reduced`.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from . import reduced as rd
from .errors import (
    FixedSpaceError,
    NotNormal,
    RankDeficientTangentFrame,
    SampleDegenerate,
    UnsupportedCase,
)

__all__ = [
    "MatrixRep",
    "ShapeSpectrum",
    "FixedSpace",
    "SampleResult",
    "ReductionReport",
    "clifford_generators",
    "build_representation",
    "orbit_rank",
    "tangent_frame",
    "normal_space",
    "shape_operator",
    "numerical_focal_schedule",
    "fixed_space",
    "verify_reduction",
]

RANK_TOL = 1e-8
CLUSTER_TOL = 1e-8
MERGE_TOL = 1e-6

_I2 = np.eye(2)
_S1 = np.array([[0.0, 1.0], [1.0, 0.0]])
_S3 = np.array([[1.0, 0.0], [0.0, -1.0]])
_EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _kron(*ms: np.ndarray) -> np.ndarray:
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


@lru_cache(maxsize=None)
def clifford_generators() -> tuple[np.ndarray, ...]:
    """Nine real symmetric 16×16 matrices with ``γ_i γ_j + γ_j γ_i = 2δ_ij``.

    Candidates are four-fold tensor products of ``I, σ₁, σ₃, ε`` with an even
    number of ``ε`` factors (so the product is symmetric).  Two such products
    anticommute exactly when an odd number of slots carry different non-identity
    factors; a depth-first search picks nine mutually anticommuting ones.
    """
    facs = (_I2, _S1, _S3, _EPS)
    cands = [
        c
        for c in itertools.product(range(4), repeat=4)
        if any(c) and sum(k == 3 for k in c) % 2 == 0
    ]

    def anti(a, b):
        return sum(1 for x, y in zip(a, b) if x and y and x != y) % 2 == 1

    def search(chosen, start):
        if len(chosen) == 9:
            return chosen
        for i in range(start, len(cands)):
            if all(anti(cands[i], d) for d in chosen):
                found = search(chosen + [cands[i]], i + 1)
                if found:
                    return found
        return None

    best = search([], 0)
    return tuple(_kron(*(facs[k] for k in c)) for c in best)


def _realify(x: np.ndarray) -> np.ndarray:
    a, b = x.real, x.imag
    return np.block([[a, -b], [b, a]])


def _u_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        e = np.zeros((n, n), complex)
        e[i, i] = 1j
        out.append(e)
        for j in range(i + 1, n):
            e = np.zeros((n, n), complex)
            e[i, j], e[j, i] = 1, -1
            out.append(e)
            e = np.zeros((n, n), complex)
            e[i, j] = e[j, i] = 1j
            out.append(e)
    return out


def _null_combinations(basis, constraint) -> list:
    """Real combinations of ``basis`` annihilated by the real-linear ``constraint``."""
    cols = []
    for e in basis:
        c = constraint(e)
        cols.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
    m = np.array(cols).T
    _, s, vt = np.linalg.svd(m)
    null = vt[int(np.sum(s > 1e-10)) :]
    return [sum(c * e for c, e in zip(v, basis)) for v in null]


def _sp_basis(n: int) -> list[np.ndarray]:
    """Basis of ``sp(n) = {X ∈ u(2n) : XᵀΩ + ΩX = 0}``."""
    m = 2 * n
    omega = np.zeros((m, m))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return _null_combinations(_u_basis(m), lambda e: e.T @ omega + omega @ e)


def _spin32() -> list[np.ndarray]:
    """``su(2)`` acting on the four-dimensional irreducible module."""
    j = 1.5
    ms = [1.5, 0.5, -0.5, -1.5]
    jz = np.diag(ms).astype(complex)
    jp = np.zeros((4, 4), complex)
    for k in range(1, 4):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - ms[k] * (ms[k] + 1))
    jm = jp.conj().T
    return [1j * (jp + jm) / 2, (jp - jm) / 2, 1j * jz]


def _quaternionic_structure(gens: list[np.ndarray]) -> np.ndarray:
    """A matrix ``C`` with ``C X̄ = X C`` for all generators and ``C C̄ = −I``."""
    dim = gens[0].shape[0]
    basis = []
    for a, b in itertools.product(range(dim), repeat=2):
        e = np.zeros((dim, dim), complex)
        e[a, b] = 1
        basis += [e, 1j * e]
    sols = _null_combinations(
        basis, lambda c: np.concatenate([(c @ x.conj() - x @ c).ravel() for x in gens])
    )
    if not sols:
        raise FixedSpaceError("no invariant antilinear structure")
    c = sols[0]
    cc = c @ c.conj()
    lam = cc[0, 0]
    if not np.allclose(cc, lam * np.eye(dim)) or lam.real >= 0:
        raise FixedSpaceError("invariant structure is not quaternionic")
    return c / math.sqrt(abs(lam))


def _case1() -> list[np.ndarray]:
    g = clifford_generators()
    gens = [np.kron(_EPS, np.eye(16))]
    for i, j in itertools.combinations(range(9), 2):
        gens.append(np.kron(_I2, 0.5 * g[i] @ g[j]))
    return gens


def _case2(n: int) -> list[np.ndarray]:
    gens = [_realify(np.kron(e, np.eye(2 * n))) for e in _u_basis(2)]
    gens += [_realify(np.kron(np.eye(2), e)) for e in _sp_basis(n)]
    return gens


def _case3(n: int) -> list[np.ndarray]:
    su, sp = _spin32(), _sp_basis(n)
    c = np.kron(_quaternionic_structure(su), _quaternionic_structure(sp))
    dim = 8 * n
    xs = [np.kron(x, np.eye(2 * n)) for x in su] + [np.kron(np.eye(4), x) for x in sp]
    # real form: vectors fixed by v ↦ C v̄ (C C̄ = +I for the tensor product)
    vecs = []
    for k in range(dim):
        for ph in (1, 1j):
            e = np.zeros(dim, complex)
            e[k] = ph
            vecs.append((e + c @ e.conj()) / 2)
    r = np.array([np.concatenate([v.real, v.imag]) for v in vecs]).T
    u, s, _ = np.linalg.svd(r)
    if int(np.sum(s > 1e-10)) != dim:
        raise FixedSpaceError("real form has the wrong dimension")
    f = u[:dim, :dim] + 1j * u[dim:, :dim]
    return [np.real(f.conj().T @ x @ f) for x in xs]


@dataclass(frozen=True, eq=False)
class MatrixRep:
    case_id: int
    n: int
    lie_basis: tuple[np.ndarray, ...]
    ambient_dim: int

    @property
    def dim_g(self) -> int:
        return len(self.lie_basis)

    @property
    def principal_orbit_dim(self) -> int:
        return self.ambient_dim - 3

    def closure_residual(self, pairs: int = 40, seed: int = 0) -> float:
        """Largest distance of a sampled commutator from the span of the basis."""
        basis = np.array([x.ravel() for x in self.lie_basis]).T
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(pairs):
            i, j = rng.choice(self.dim_g, size=2, replace=False)
            a, b = self.lie_basis[i], self.lie_basis[j]
            c = (a @ b - b @ a).ravel()
            coef, *_ = np.linalg.lstsq(basis, c, rcond=None)
            worst = max(worst, float(np.linalg.norm(basis @ coef - c)))
        return worst


def build_representation(case_id: int, n: int = 2) -> MatrixRep:
    if case_id not in (1, 2, 3):
        raise UnsupportedCase(f"case must be 1, 2 or 3, got {case_id!r}")
    if case_id == 1:
        gens, n = _case1(), 0
    else:
        if not isinstance(n, int) or not 2 <= n <= 4:
            raise UnsupportedCase(f"n must be 2, 3 or 4 (dim V <= 32), got {n!r}")
        gens = _case2(n) if case_id == 2 else _case3(n)
    dim = gens[0].shape[0]
    for x in gens:
        if np.abs(x + x.T).max() > 1e-12:
            raise UnsupportedCase("generator is not skew-symmetric")
    expected = {1: 37, 2: 4 + n * (2 * n + 1), 3: 3 + n * (2 * n + 1)}[case_id]
    assert len(gens) == expected, (len(gens), expected)
    return MatrixRep(case_id, n, tuple(gens), dim)


# ----------------------------------------------------------------------
# orbit geometry


def _frame(rep: MatrixRep, p: np.ndarray) -> np.ndarray:
    return np.array([x @ p for x in rep.lie_basis]).T


def orbit_rank(rep: MatrixRep, p: np.ndarray, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(_frame(rep, p), compute_uv=False)
    return int(np.sum(s > tol * s[0]))


def tangent_frame(rep: MatrixRep, p: np.ndarray, tol: float = RANK_TOL):
    """``(Q, C)``: orthonormal tangent basis ``Q = F C`` where ``F`` is the frame ``(X_i p)``."""
    f = _frame(rep, p)
    u, s, vt = np.linalg.svd(f, full_matrices=False)
    k = int(np.sum(s > tol * s[0]))
    return u[:, :k], vt[:k].T / s[:k]


def normal_space(rep: MatrixRep, p: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the normal space of the orbit at ``p`` (it contains ``p``)."""
    q, _ = tangent_frame(rep, p)
    proj = np.eye(len(p)) - q @ q.T
    u, _, _ = np.linalg.svd(proj)
    return u[:, : len(p) - q.shape[1]]


@dataclass(frozen=True, eq=False)
class ShapeSpectrum:
    eigenvalues: tuple[tuple[float, int], ...]
    basepoint: np.ndarray
    normal: np.ndarray
    matrix: np.ndarray = field(repr=False)
    tangent: np.ndarray = field(repr=False)
    asymmetry: float = 0.0

    @property
    def total(self) -> int:
        return sum(m for _, m in self.eigenvalues)


def _cluster(values: np.ndarray, tol: float, relative: bool) -> list[tuple[float, int]]:
    out: list[list[float]] = []
    scale = max(1.0, float(np.abs(values).max())) if relative and len(values) else 1.0
    for v in np.sort(values):
        if out and v - out[-1][-1] <= tol * scale:
            out[-1].append(v)
        else:
            out.append([v])
    return [(float(np.mean(g)), len(g)) for g in out]


def shape_operator(rep: MatrixRep, p, normal) -> ShapeSpectrum:
    """Weingarten operator ``A_n`` of the orbit through ``p``.

    It is determined by ``⟨A_n(X·p), Y·p⟩ = ⟨X(Y·p), n⟩`` and expressed in an
    orthonormal tangent frame.
    """
    p = np.asarray(p, dtype=float)
    nv = np.asarray(normal, dtype=float)
    if abs(np.linalg.norm(p) - 1) > 1e-9 or abs(np.linalg.norm(nv) - 1) > 1e-9:
        raise NotNormal("p and the normal must be unit vectors")
    q, c = tangent_frame(rep, p)
    if q.shape[1] == 0:
        raise RankDeficientTangentFrame("orbit is a point")
    if abs(p @ nv) > 1e-9 or np.abs(q.T @ nv).max() > 1e-8:
        raise NotNormal("vector is not normal to the orbit inside the sphere")
    y = _frame(rep, p)
    z = np.array([x.T @ nv for x in rep.lie_basis]).T
    b = z.T @ y  # b_ij = <X_i X_j p, n>
    a = c.T @ b @ c
    asym = float(np.abs(a - a.T).max())
    evals = np.linalg.eigvalsh((a + a.T) / 2)
    return ShapeSpectrum(
        tuple(_cluster(evals, CLUSTER_TOL, True)), p, nv, (a + a.T) / 2, q, asym
    )


def numerical_focal_schedule(rep: MatrixRep, p, normal) -> rd.FocalSchedule:
    """Focal parameters ``s = arccot κ`` for the eigenvalues ``κ`` of ``A_n``, merged at 1e−6."""
    spec = shape_operator(rep, p, normal)
    params = []
    for kappa, m in spec.eigenvalues:
        params += [math.atan2(1.0, kappa)] * m
    items = []
    for s, m in _cluster(np.array(params), MERGE_TOL, False):
        if abs(s - math.pi / 2) < MERGE_TOL:
            kind = "special" if m == 1 else "mixed"
        else:
            kind = "standard"
        items.append(rd.FocalItem(s, kind, m))
    items.sort(key=lambda i: -i.param)
    return rd.FocalSchedule(0.0, tuple(items))


# ----------------------------------------------------------------------
# the slice V^H and its Hopf picture


@dataclass(frozen=True, eq=False)
class FixedSpace:
    """The slice ``V^H`` with complex structure, circle generator and detected circles.

    ``basis`` has orthonormal columns; coordinates ``basis.T @ x`` read as
    ``(Re z₁, Im z₁, Re z₂, Im z₂)``.  ``x_t`` is the element of the Lie algebra
    generating the circle action, which is multiplication by ``i`` on ``V^H``.
    ``isometry`` maps detected circle normals onto the normals of the model
    geometry (up to sign).
    """

    basis: np.ndarray
    x_t: np.ndarray
    normals: tuple[tuple[float, float, float], ...]
    multiplicities: tuple[int, ...]
    isometry: np.ndarray
    isometry_residual: float

    def coords(self, x: np.ndarray) -> np.ndarray:
        return self.basis.T @ x

    def embed(self, c: np.ndarray) -> np.ndarray:
        return self.basis @ c

    def eta(self, x: np.ndarray) -> np.ndarray:
        """Image of ``x ∈ V^H`` in the model sphere."""
        return self.isometry @ rd.hopf(self.coords(x))


def _slice_basis(rep: MatrixRep, p: np.ndarray) -> np.ndarray:
    """``span(p, ξ₁, ξ₂, v)``: ``ξ`` span the normals orthogonal to ``p``, ``v`` spans ``∩ ker A_ξ``."""
    nn = normal_space(rep, p)
    nn = nn - np.outer(p, p @ nn)
    u, s, _ = np.linalg.svd(nn, full_matrices=False)
    if int(np.sum(s > 1e-6)) != 2:
        raise FixedSpaceError("base point is not regular (normal space has the wrong size)")
    xi = u[:, :2]
    a1 = shape_operator(rep, p, xi[:, 0])
    a2 = shape_operator(rep, p, xi[:, 1])
    _, sv, vt = np.linalg.svd(np.vstack([a1.matrix, a2.matrix]))
    if sv[-1] > 1e-8 or sv[-2] < 1e-6:
        raise FixedSpaceError("shape operators have no isolated common kernel vector")
    v = a1.tangent @ vt[-1]
    w, _ = np.linalg.qr(np.column_stack([p, xi, v]))
    return w


def _circle_generator(rep: MatrixRep, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The Lie algebra element preserving ``W`` whose restriction squares to ``−I``."""
    d = w.shape[0]
    outside = np.eye(d) - w @ w.T
    m = np.array([(outside @ x @ w).ravel() for x in rep.lie_basis]).T
    _, s, vt = np.linalg.svd(m)
    null = vt[int(np.sum(s > 1e-9)) :]
    algs = [sum(c * x for c, x in zip(v, rep.lie_basis)) for v in null]
    if not algs:
        raise FixedSpaceError("no Lie algebra element preserves the slice")
    r = np.array([(w.T @ x @ w).ravel() for x in algs])
    u, sv, vt = np.linalg.svd(r)
    if len(sv) > 1 and sv[1] > 1e-8 * sv[0]:
        raise FixedSpaceError("the induced action on the slice is not a circle")
    j4 = vt[0].reshape(4, 4)
    lam = -float((j4 @ j4)[0, 0])
    if lam <= 0:
        raise FixedSpaceError("circle generator does not square to a negative multiple of I")
    j4 /= math.sqrt(lam)
    if np.abs(j4 @ j4 + np.eye(4)).max() > 1e-8:
        raise FixedSpaceError("circle generator is not a complex structure")
    coef = u[:, 0] / sv[0] / math.sqrt(lam)
    x_t = sum(c * x for c, x in zip(coef, algs))
    return j4, x_t


def _scan(rep, fs_basis, a, b, rank, points=720):
    """Rank drops of the orbit frame along the great circle ``cos φ·a + sin φ·b`` of the model sphere."""

    def point(ph):
        return fs_basis @ rd.hopf_lift(math.cos(ph) * a + math.sin(ph) * b)

    def f(ph):
        return np.linalg.svd(_frame(rep, point(ph)), compute_uv=False)[rank - 1]

    phs = np.linspace(0, 2 * math.pi, points, endpoint=False)
    vals = np.array([f(ph) for ph in phs])
    h = phs[1] - phs[0]
    hits = []
    for i in range(points):
        if vals[i] < vals[i - 1] and vals[i] <= vals[(i + 1) % points]:
            res = minimize_scalar(
                f, bounds=(phs[i] - h, phs[i] + h), method="bounded", options={"xatol": 1e-13}
            )
            sv = np.linalg.svd(_frame(rep, point(res.x)), compute_uv=False)
            m = int(np.sum(sv[:rank] < 1e-6 * sv[0]))
            if m:
                ph = res.x % (2 * math.pi)
                hits.append((ph, m, math.cos(ph) * a + math.sin(ph) * b))
    return hits


def _detect_circles(rep, basis, rank, expected, rng, want=4, budget=16):
    """Singular great circles of the model sphere, from rank drops along random great circles.

    Only scans that meet every circle twice, with all hits well separated, are
    used.  Each normal is the least-squares normal of all hits that support it.
    """
    clean = []
    for _ in range(budget):
        a = rng.normal(size=3)
        a /= np.linalg.norm(a)
        b = rng.normal(size=3)
        b -= a * (a @ b)
        b /= np.linalg.norm(b)
        hits = _scan(rep, basis, a, b, rank)
        phs = sorted(h[0] for h in hits)
        gaps = np.diff(phs + [phs[0] + 2 * math.pi]) if phs else []
        if len(hits) == 2 * expected and min(gaps) > 0.05:
            clean.append(hits)
            if len(clean) == want:
                break
    if len(clean) < 3:
        raise FixedSpaceError("too few clean scans of the singular circles")
    normals, mults = [], []
    for _, m1, y1 in clean[0]:
        for _, m2, y2 in clean[1]:
            if m1 != m2:
                continue
            c = np.cross(y1, y2)
            if np.linalg.norm(c) < 1e-3:
                continue
            c /= np.linalg.norm(c)
            support = [[y for _, m, y in scan if m == m1 and abs(y @ c) < 1e-5] for scan in clean]
            if not all(support) or any(abs(abs(c @ d) - 1) < 1e-5 for d in normals):
                continue
            pts = np.array([y for group in support for y in group])
            c = np.linalg.svd(pts)[2][-1]
            normals.append(c)
            mults.append(m1)
    if len(normals) != expected:
        raise FixedSpaceError(f"detected {len(normals)} singular circles, expected {expected}")
    return normals, mults


def _kabsch(src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, float]:
    """Orthogonal ``R`` (proper or not) minimising ``Σ |R s_k − d_k|²``."""
    u, _, vt = np.linalg.svd(dst.T @ src)
    r = u @ vt
    return r, float(np.abs(src @ r.T - dst).max())


def _match_model(normals, mults, geom: rd.ReducedGeometry) -> tuple[np.ndarray, float]:
    model = [np.array(c.normal) for c in geom.circles]
    model_m = [c.multiplicity for c in geom.circles]
    if sorted(mults) != sorted(model_m):
        raise FixedSpaceError(f"detected multiplicities {sorted(mults)} differ from the model {sorted(model_m)}")
    src = np.array(normals)
    best = (None, math.inf)
    for perm in itertools.permutations(range(len(model))):
        if any(mults[i] != model_m[perm[i]] for i in range(len(perm))):
            continue
        for signs in itertools.product((1, -1), repeat=len(model)):
            dst = np.array([s * model[k] for s, k in zip(signs, perm)])
            r, res = _kabsch(src, dst)
            if res < best[1]:
                best = (r, res)
    return best


def fixed_space(rep: MatrixRep, seed: int = 0, geom: rd.ReducedGeometry | None = None) -> FixedSpace:
    """Locate ``V^H``, its circle action and the singular great circles."""
    rng = np.random.default_rng(seed)
    d = rep.ambient_dim
    rank = rep.principal_orbit_dim
    for _ in range(10):
        p = rng.normal(size=d)
        p /= np.linalg.norm(p)
        if orbit_rank(rep, p) == rank:
            break
    else:  # pragma: no cover
        raise FixedSpaceError("no regular point found")
    w = _slice_basis(rep, p)
    j4, x_t = _circle_generator(rep, w)
    w1 = w.T @ p
    w2 = j4 @ w1
    r = rng.normal(size=4)
    r -= w1 * (r @ w1) + w2 * (r @ w2)
    r /= np.linalg.norm(r)
    basis = w @ np.column_stack([w1, w2, r, j4 @ r])
    if np.abs(basis.T @ basis - np.eye(4)).max() > 1e-9:
        raise FixedSpaceError("slice basis is not orthonormal")
    geom = geom or rd.build_reduced_geometry(rep.case_id, rep.n or 2)
    normals, mults = _detect_circles(rep, basis, rank, len(geom.circles), rng)
    iso, res = _match_model(normals, mults, geom)
    if res > 1e-6:
        raise FixedSpaceError(f"detected circles are not isometric to the model (residual {res:.2e})")
    return FixedSpace(
        basis,
        x_t,
        tuple(tuple(map(float, c)) for c in normals),
        tuple(mults),
        iso,
        res,
    )


# ----------------------------------------------------------------------
# comparison with the reduced model


@dataclass(frozen=True)
class SampleResult:
    index: int
    max_ds: float
    mult_mismatch: bool
    restriction_error: float
    asymmetry: float
    sigma_ok: bool
    min_gradient: float
    attempts: int


@dataclass(frozen=True)
class ReductionReport:
    case_id: int
    n: int
    samples: tuple[SampleResult, ...]
    isometry_residual: float

    @property
    def max_ds(self) -> float:
        return max(s.max_ds for s in self.samples)

    @property
    def mult_mismatches(self) -> int:
        return sum(s.mult_mismatch for s in self.samples)

    @property
    def max_restriction_error(self) -> float:
        return max(s.restriction_error for s in self.samples)

    @property
    def ok(self) -> bool:
        return (
            self.max_ds < 1e-6
            and self.mult_mismatches == 0
            and self.max_restriction_error < 1e-8
            and all(s.sigma_ok and s.min_gradient > 1e-6 for s in self.samples)
        )

    def to_dict(self) -> dict:
        return {
            "case": self.case_id,
            "n": self.n,
            "samples": len(self.samples),
            "max_ds": _fmt(self.max_ds),
            "mult_mismatches": self.mult_mismatches,
            "lemma_checks": {
                "max_restriction_error": _fmt(self.max_restriction_error),
                "max_asymmetry": _fmt(max(s.asymmetry for s in self.samples)),
                "sigma_dimension_ok": all(s.sigma_ok for s in self.samples),
                "min_tangential_gradient": _fmt(min(s.min_gradient for s in self.samples)),
            },
            "isometry_residual": _fmt(self.isometry_residual),
            "ok": self.ok,
        }


def _fmt(x: float) -> float:
    """Two significant digits: stable across runs and thread counts."""
    return float(f"{x:.1e}")


def _sample(rep, geom, fs: FixedSpace, index: int, seed_seq, retries: int = 20) -> SampleResult:
    rng = np.random.default_rng(seed_seq)
    for attempt in range(1, retries + 1):
        c = rng.normal(size=4)
        c /= np.linalg.norm(c)
        p = fs.embed(c)
        e = fs.eta(p)
        if min(abs(np.array(ci.normal) @ e) for ci in geom.circles) < 1e-3:
            continue
        if orbit_rank(rep, p) != rep.principal_orbit_dim:
            continue
        # σ_p: directions of V^H normal to the circle through p
        jp = fs.coords(fs.x_t @ p)
        hor = np.linalg.svd(np.column_stack([c, jp]))[0][:, 2:]
        nc = hor @ rng.normal(size=2)
        nc /= np.linalg.norm(nc)
        nv = fs.embed(nc)
        d_model = fs.isometry @ rd.hopf_differential(c, nc)
        model = rd.focal_schedule(geom, e, d_model, 0.0, True)
        gaps = np.diff(sorted(model.params()))
        if len(gaps) and gaps.min() < 1e-4:
            continue
        num = numerical_focal_schedule(rep, p, nv)
        spec = shape_operator(rep, p, nv)
        mismatch = [i.multiplicity for i in num.items] != [i.multiplicity for i in model.items]
        if len(num.items) == len(model.items):
            ds = max(abs(a - b) for a, b in zip(num.params(), model.params()))
        else:
            ds, mismatch = math.inf, True
        # restriction of A_n to the circle direction versus the intrinsic curvature in V^H
        vt = spec.tangent.T @ (fs.x_t @ p)
        vt /= np.linalg.norm(vt)
        jpc = fs.coords(fs.x_t @ p)
        kappa_h = float((fs.coords(fs.x_t @ (fs.x_t @ p))) @ nc) / float(jpc @ jpc)
        restriction = float(np.linalg.norm(spec.matrix @ vt - kappa_h * vt))
        # ν_p ∩ V^H is spanned by p and σ_p
        nu = normal_space(rep, p)
        inter = np.linalg.svd(np.hstack([nu, fs.basis]), compute_uv=False)
        sigma_dim = int(np.sum(inter < 1e-8 * inter[0]))
        # tangential gradient of L_q at orbit points away from V^H
        q = fs.embed(rng.normal(size=4))
        grads = []
        for _ in range(3):
            g = expm(sum(rng.normal() * x for x in rep.lie_basis))
            x = g @ p
            if np.linalg.norm(x - fs.basis @ (fs.basis.T @ x)) < 1e-3:
                continue
            qt, _ = tangent_frame(rep, x)
            grads.append(float(np.linalg.norm(qt.T @ (x - q))))
        return SampleResult(
            index,
            float(ds),
            bool(mismatch),
            restriction,
            spec.asymmetry,
            sigma_dim == 3,
            min(grads) if grads else math.inf,
            attempt,
        )
    raise SampleDegenerate(f"sample {index}: no generic point in {retries} attempts")


def verify_reduction(
    rep: MatrixRep,
    geom: rd.ReducedGeometry,
    samples: int,
    seed: int,
    threads: int = 1,
) -> ReductionReport:
    """Compare numerical focal data on ``samples`` random points of ``V^H`` against the model."""
    if (rep.case_id, rep.n) != (geom.case_id, geom.n):
        raise ValueError("representation and geometry describe different cases")
    root = np.random.SeedSequence(seed)
    fs_seed, *sample_seeds = root.spawn(samples + 1)
    fs = fixed_space(rep, int(fs_seed.generate_state(1)[0]), geom)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(
            pool.map(lambda k: _sample(rep, geom, fs, k, sample_seeds[k]), range(samples))
        )
    return ReductionReport(rep.case_id, rep.n, tuple(results), fs.isometry_residual)
