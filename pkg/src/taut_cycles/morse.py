"""Morse data of distance functions on orbits ``K·p`` in the Cartan subspace.

The critical points of ``L_q(x) = |q - x|²`` on ``K·p`` are the Weyl translates
``w·p``.  Walking the segment from ``q`` to ``w·p`` records the walls crossed;
their barred multiplicities add up to the Morse index, and the product of the
wall reflections gives the matching Bruhat cell representative.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _exact as ex
from .bruhat import (
    PoincarePolynomial,
    ThetaSubset,
    cell_dimension,
    minimal_coset_reps,
    poincare_polynomial,
    theta_positive_roots,
)
from .errors import CosetMismatch, NonGenericSegment, QNotRegular, ZeroPoint
from .rootsys import Root, RootSystem, WeylElement, _inversion_indices, weyl_group

__all__ = [
    "ChamberPoint",
    "WeylCoset",
    "CycleWord",
    "CorrespondenceEntry",
    "CorrespondenceReport",
    "dominant",
    "is_regular",
    "walls_crossed",
    "critical_cosets",
    "crossing_sequence",
    "morse_index",
    "morse_polynomial",
    "verify_bruhat_correspondence",
    "perturb",
    "generic_regular_point",
]


def _in_span(rs: RootSystem, x: Sequence[Fraction]) -> bool:
    simple = [rs.roots[i].vector for i in rs.simple]
    gram = [[ex.dot(a, b) for b in simple] for a in simple]
    c = ex.solve(gram, [ex.dot(a, x) for a in simple])
    proj = tuple(sum((ci * a[k] for ci, a in zip(c, simple)), Fraction(0)) for k in range(len(x)))
    return proj == tuple(x)


# Points are handled internally as (integer numerators, common denominator) in
# lowest terms; Fraction arithmetic is far too slow for the Weyl group loops.
_Scaled = tuple[tuple[int, ...], int]


def _scale(x: Sequence) -> _Scaled:
    x = ex.vec(x)
    d = math.lcm(*(xi.denominator for xi in x)) if x else 1
    return tuple(int(xi * d) for xi in x), d


def _unscale(xs: _Scaled) -> ex.Vector:
    nums, d = xs
    return tuple(Fraction(n, d) for n in nums)


def _norm(nums: Sequence[int], d: int) -> _Scaled:
    g = math.gcd(d, *nums)
    return tuple(n // g for n in nums), d // g


def _ipair(v: Sequence[int], nums: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(v, nums))


def _ireflect(rs: RootSystem, i: int, xs: _Scaled) -> _Scaled:
    v = rs.roots[i].vector
    nums, d = xs
    c = 2 * _ipair(v, nums)
    if not c:
        return xs
    n2 = _ipair(v, v)
    return _norm([x * n2 - c * a for x, a in zip(nums, v)], d * n2)


def _iapply(rs: RootSystem, w: WeylElement, xs: _Scaled) -> _Scaled:
    for k in reversed(w.word):
        xs = _ireflect(rs, rs.simple[k], xs)
    return xs


def reflect_point(rs: RootSystem, i: int, x: Sequence[Fraction]) -> ex.Vector:
    """Image of ``x`` under the reflection in the wall of root ``i``."""
    return _unscale(_ireflect(rs, i, _scale(x)))


def _perm_product(rs: RootSystem, roots: Sequence[int]) -> WeylElement:
    perm = rs.identity.perm
    for i in roots:
        r = _reflection_perm(rs, i)
        perm = tuple(perm[j] for j in r)
    return rs.element(perm)


def _reflection_perm(rs: RootSystem, i: int) -> tuple[int, ...]:
    cache = rs.__dict__.setdefault("_refl_perm_cache", {})
    if i not in cache:
        cache[i] = rs._reflection_perm(i)
    return cache[i]


def _idominant(rs: RootSystem, xs: _Scaled) -> tuple[list[int], _Scaled]:
    chain = []
    simple = [rs.roots[i].vector for i in rs.simple]
    while True:
        k = next((k for k, a in enumerate(simple) if _ipair(a, xs[0]) < 0), None)
        if k is None:
            return chain, xs
        xs = _ireflect(rs, rs.simple[k], xs)
        chain.append(k)


def dominant(rs: RootSystem, x: Sequence) -> tuple[WeylElement, ex.Vector]:
    """Return ``(u, x_dom)`` with ``x = u·x_dom`` and ``x_dom`` in the closed positive chamber."""
    chain, xs = _idominant(rs, _scale(x))
    return _perm_product(rs, [rs.simple[j] for j in chain]), _unscale(xs)


@dataclass(frozen=True)
class ChamberPoint:
    """A rational point of the Cartan subspace.

    ``theta`` lists the simple roots vanishing at the dominant representative
    of the point.
    """

    coords: ex.Vector
    theta: ThetaSubset

    @classmethod
    def from_ambient(cls, rs: RootSystem, coords: Sequence) -> "ChamberPoint":
        x = ex.vec(coords)
        if len(x) != rs.ambient_dim:
            raise ValueError(f"expected {rs.ambient_dim} ambient coordinates, got {len(x)}")
        if not _in_span(rs, x):
            raise ValueError(f"{x} does not lie in the span of the roots")
        _, xd = dominant(rs, x)
        theta = ThetaSubset(k for k, a in enumerate(rs.simple) if rs.pairing(a, xd) == 0)
        return cls(x, theta)

    @classmethod
    def from_simple_values(cls, rs: RootSystem, values: Sequence) -> "ChamberPoint":
        """The point ``x`` with ``α_k(x) = values[k]`` for each simple root."""
        vals = ex.vec(values)
        if len(vals) != rs.rank:
            raise ValueError(f"expected {rs.rank} simple-root values, got {len(vals)}")
        simple = [rs.roots[i].vector for i in rs.simple]
        gram = [[ex.dot(a, b) for b in simple] for a in simple]
        b = ex.solve(gram, vals)
        x = tuple(sum((bi * a[k] for bi, a in zip(b, simple)), Fraction(0)) for k in range(rs.ambient_dim))
        return cls.from_ambient(rs, x)

    @classmethod
    def parse(cls, rs: RootSystem, text: str) -> "ChamberPoint":
        """Comma separated rationals; rank-many are simple-root values, else ambient coordinates."""
        vals = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
        if len(vals) == rs.rank:
            return cls.from_simple_values(rs, vals)
        return cls.from_ambient(rs, vals)

    def simple_values(self, rs: RootSystem) -> ex.Vector:
        return tuple(rs.pairing(a, self.coords) for a in rs.simple)

    def is_zero(self) -> bool:
        return not any(self.coords)


def is_regular(rs: RootSystem, x: Sequence) -> bool:
    nums, _ = _scale(x)
    return all(_ipair(rs.roots[i].vector, nums) != 0 for i in rs.reduced_positive)


@dataclass(frozen=True)
class WeylCoset:
    """The coset ``w W_p``; ``rep`` is its minimal (length, word) element."""

    rep: WeylElement
    point: ex.Vector


@dataclass(frozen=True)
class CycleWord:
    """Walls crossed from ``q`` to ``w·p``: (reduced positive root, dim ḡ_λ) in order."""

    walls: tuple[tuple[Root, int], ...]
    base_coset: WeylCoset
    params: tuple[Fraction, ...] = field(default=())
    wall_indices: tuple[int, ...] = field(default=(), repr=False)

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.walls)


def walls_crossed(rs: RootSystem, start: Sequence, end: Sequence) -> list[tuple[Fraction, int]]:
    """Walls met in the open segment from ``start`` to ``end``, as sorted (parameter, root index).

    Raises NonGenericSegment if two distinct walls are met at the same point.
    """
    return _iwalls(rs, _scale(start), _scale(end))


def _iwalls(rs: RootSystem, start: _Scaled, end: _Scaled) -> list[tuple[Fraction, int]]:
    (s_nums, ds), (e_nums, de) = start, end
    hits = []
    for i in rs.reduced_positive:
        v = rs.roots[i].vector
        a, b = _ipair(v, s_nums) * de, _ipair(v, e_nums) * ds
        if (a > 0 and b < 0) or (a < 0 and b > 0):
            hits.append((Fraction(a, a - b), i))
    hits.sort()
    for (t1, i1), (t2, i2) in zip(hits, hits[1:]):
        if t1 == t2:
            raise NonGenericSegment(
                f"segment meets walls {rs.roots[i1].vector} and {rs.roots[i2].vector} "
                f"at the same parameter {t1}"
            )
    return hits


def _cosets(rs: RootSystem, p: ChamberPoint) -> list[WeylCoset]:
    cache = rs.__dict__.setdefault("_coset_cache", {})
    if p.coords not in cache:
        best: dict[_Scaled, WeylElement] = {}
        ps = _scale(p.coords)
        for w in weyl_group(rs):  # canonical order: first hit is minimal
            best.setdefault(_iapply(rs, w, ps), w)
        cache[p.coords] = tuple(
            sorted(
                (WeylCoset(w, _unscale(x)) for x, w in best.items()),
                key=lambda c: c.rep.sort_key(),
            )
        )
    return list(cache[p.coords])


def _apply(rs: RootSystem, w: WeylElement, x: Sequence) -> ex.Vector:
    return _unscale(_iapply(rs, w, _scale(x)))


def critical_cosets(rs: RootSystem, p: ChamberPoint) -> list[WeylCoset]:
    """One canonical representative per coset ``w W_p``."""
    if p.is_zero():
        raise ZeroPoint("p = 0: the orbit is a single point")
    return _cosets(rs, p)


def _coset_of(rs: RootSystem, x: ex.Vector, p: ChamberPoint) -> WeylCoset:
    for c in _cosets(rs, p):
        if c.point == x:
            return c
    raise CosetMismatch("no coset contains w·p")  # pragma: no cover


def crossing_sequence(
    rs: RootSystem, q: ChamberPoint, w: WeylElement, p: ChamberPoint
) -> CycleWord:
    """Ordered walls crossed by the segment from ``q`` to ``w·p``.

    With ``q = u·q⁺`` for dominant ``q⁺``, the element ``s_k⋯s_1 u`` is checked
    to lie in ``w W_p`` on every call.
    """
    w = rs.coerce(w)
    if not is_regular(rs, q.coords):
        raise QNotRegular(f"q = {q.coords} lies on a wall")
    ps = _scale(p.coords)
    target = _iapply(rs, w, ps)
    hits = _iwalls(rs, _scale(q.coords), target)
    idx = [i for _, i in hits]
    chain, _ = _idominant(rs, _scale(q.coords))
    back = ps  # s_k ... s_1 u p with u = s_{c1} s_{c2} ...
    for k in reversed(chain):
        back = _ireflect(rs, rs.simple[k], back)
    for i in idx:
        back = _ireflect(rs, i, back)
    if back != target:
        raise CosetMismatch(f"s_k...s_1 u is not in the coset of w={w.word}")
    return CycleWord(
        walls=tuple((rs.roots[i], rs.barred_multiplicity(i)) for i in idx),
        base_coset=_coset_of(rs, _unscale(target), p),
        params=tuple(t for t, _ in hits),
        wall_indices=tuple(idx),
    )


def morse_index(rs: RootSystem, q: ChamberPoint, w: WeylElement, p: ChamberPoint) -> int:
    return crossing_sequence(rs, q, w, p).dimension


def morse_polynomial(rs: RootSystem, q: ChamberPoint, p: ChamberPoint) -> PoincarePolynomial:
    """Σ t^index over the critical points of ``L_q`` on the orbit of ``p``."""
    return PoincarePolynomial.from_degrees(
        morse_index(rs, q, c.rep, p) for c in _cosets(rs, p)
    )


@dataclass(frozen=True)
class CorrespondenceEntry:
    coset: WeylCoset
    word: CycleWord
    index: int
    w_u: WeylElement
    in_w_u: bool
    inversions_match: bool
    cell_dim: int

    @property
    def ok(self) -> bool:
        return self.in_w_u and self.inversions_match and self.index == self.cell_dim


@dataclass(frozen=True)
class CorrespondenceReport:
    theta: ThetaSubset
    entries: tuple[CorrespondenceEntry, ...]
    bijective: bool
    multisets_equal: bool
    morse: PoincarePolynomial
    poincare: PoincarePolynomial

    @property
    def ok(self) -> bool:
        return (
            self.bijective
            and self.multisets_equal
            and self.morse == self.poincare
            and all(e.ok for e in self.entries)
        )


def verify_bruhat_correspondence(
    rs: RootSystem, theta: ThetaSubset, q: ChamberPoint, p: ChamberPoint
) -> CorrespondenceReport:
    """Match each critical coset with a Bruhat cell and compare index with dimension.

    ``p`` must be dominant with vanishing set ``theta``.  When ``q`` is not in the
    positive chamber the crossed walls are pulled back by ``u⁻¹`` (``q = u·q⁺``),
    which leaves the index unchanged and makes the reflection product land in W_u.
    """
    theta.validate(rs)
    if any(v < 0 for v in p.simple_values(rs)):
        raise ValueError("p must lie in the closed positive chamber")
    if p.theta != theta:
        raise ValueError(f"p vanishes on {sorted(p.theta)}, expected {sorted(theta)}")
    u, _ = dominant(rs, q.coords)
    u_inv = u.inverse()
    span = theta_positive_roots(rs, theta)
    w_u_set = minimal_coset_reps(rs, theta)
    entries = []
    for coset in _cosets(rs, p):
        word = crossing_sequence(rs, q, coset.rep, p)
        pulled = [rs.positive_rep(u_inv.perm[i]) for i in word.wall_indices]
        w_u = _perm_product(rs, pulled)  # s'_1 ... s'_k
        w_u_inv = w_u.inverse()
        in_w_u = not (_inversion_indices(rs, w_u) & span)
        same_coset = _apply(rs, w_u_inv, p.coords) == _apply(rs, u_inv, coset.point)
        inv_match = _inversion_indices(rs, w_u_inv) == frozenset(pulled) and len(pulled) == len(set(pulled))
        entries.append(
            CorrespondenceEntry(
                coset=coset,
                word=word,
                index=word.dimension,
                w_u=w_u,
                in_w_u=in_w_u and same_coset,
                inversions_match=inv_match,
                cell_dim=cell_dimension(rs, w_u),
            )
        )
    images = [e.w_u for e in entries]
    bijective = len(set(images)) == len(images) == len(w_u_set) and set(images) == set(w_u_set)
    cell_dims = Counter(cell_dimension(rs, w) for w in w_u_set)
    indices = Counter(e.index for e in entries)
    return CorrespondenceReport(
        theta=theta,
        entries=tuple(entries),
        bijective=bijective,
        multisets_equal=cell_dims == indices,
        morse=PoincarePolynomial.from_degrees(e.index for e in entries),
        poincare=poincare_polynomial(rs, theta),
    )


def perturb(
    rs: RootSystem, q: ChamberPoint, seed: int, scale: Fraction = Fraction(1, 1000)
) -> ChamberPoint:
    """A nearby rational regular point; deterministic in ``seed``."""
    rng = random.Random(seed)
    base = q.simple_values(rs)
    while True:
        vals = [v + scale * Fraction(rng.randint(-1000, 1000), 1000) for v in base]
        cand = ChamberPoint.from_simple_values(rs, vals)
        if is_regular(rs, cand.coords):
            return cand


def generic_regular_point(
    rs: RootSystem,
    p: ChamberPoint,
    seed: int,
    *,
    dominant_only: bool = True,
    tries: int = 100,
) -> ChamberPoint:
    """A random rational regular ``q`` whose segments to every ``w·p`` are generic."""
    rng = random.Random(seed)
    for _ in range(tries):
        vals = [Fraction(rng.randint(1, 997), rng.randint(1, 97)) for _ in range(rs.rank)]
        q = ChamberPoint.from_simple_values(rs, vals)
        if not dominant_only:
            q = ChamberPoint.from_ambient(rs, _apply(rs, rng.choice(weyl_group(rs)), q.coords))
        if not is_regular(rs, q.coords):
            continue
        qs = _scale(q.coords)
        try:
            for c in _cosets(rs, p):
                _iwalls(rs, qs, _scale(c.point))
        except NonGenericSegment:
            continue
        return q
    raise NonGenericSegment(f"no generic q found in {tries} tries")
