"""Restricted root systems with multiplicities and their Weyl groups.

Roots live in exact integer ambient coordinates (the usual ``e_i`` realizations
of the classical families and of G2).  Weyl group elements are stored as the
permutation they induce on the root list; their orthogonal matrices are
rational and computed on demand.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Mapping, Sequence

from . import _exact as ex
from .errors import (
    ElementNotInGroup,
    MultiplicityNotWeylInvariant,
    NonClosedUnderReflection,
    NotABase,
    RankTooLarge,
    RootSystemError,
)

MAX_WEYL_RANK = 6

__all__ = [
    "Root",
    "RootSystem",
    "RootSystemSpec",
    "WeylElement",
    "build_root_system",
    "weyl_group",
    "inversion_set",
    "load_spec",
]


@dataclass(frozen=True)
class Root:
    vector: tuple[int, ...]
    multiplicity: int
    is_reduced: bool = True


@dataclass(frozen=True)
class WeylElement:
    """An element of the Weyl group.

    ``perm[i]`` is the index of ``w(root_i)``.  Equality and hashing use the
    permutation only; ``word`` is the lexicographically smallest reduced word,
    read left to right as a product of simple reflections.
    """

    perm: tuple[int, ...]
    word: tuple[int, ...] = field(compare=False)
    _rs: "RootSystem" = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    @cached_property
    def matrix(self) -> ex.Matrix:
        m = ex.identity(self._rs.ambient_dim)
        for i in self.word:
            m = ex.matmul(m, self._rs._simple_matrices[i])
        return m

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        perm = tuple(self.perm[j] for j in other.perm)
        return self._rs.element(perm)

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return self._rs.element(tuple(inv))

    def apply(self, x: Sequence) -> ex.Vector:
        """Act on an ambient vector."""
        return ex.matvec(self.matrix, x)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.word), self.word)


@dataclass
class RootSystemSpec:
    """User description of a root system, as read from a spec file.

    Either a catalog entry (``family`` + ``rank`` + ``multiplicities``), a list
    of ``factors`` each of that form, or explicit ``roots``/``mults``/``simple``.
    """

    family: str | None = None
    rank: int | None = None
    multiplicities: dict[str, int] = field(default_factory=dict)
    factors: list["RootSystemSpec"] = field(default_factory=list)
    roots: list[list[int]] | None = None
    mults: list[int] | None = None
    simple: list[int] | None = None
    name: str | None = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RootSystemSpec":
        factors = [cls.from_dict(f) for f in data.get("factors", [])]
        return cls(
            family=data.get("family"),
            rank=data.get("rank"),
            multiplicities=dict(data.get("multiplicities", {})),
            factors=factors,
            roots=data.get("roots"),
            mults=data.get("mults"),
            simple=data.get("simple"),
            name=data.get("name"),
        )


class RootSystem:
    """A validated root system with multiplicities.

    Positive roots are those that are nonnegative combinations of the simple
    roots.  Only reduced roots carry walls; a non-reduced root ``2a`` enters
    through ``barred_multiplicity(a) = m_a + m_2a``.
    """

    def __init__(
        self,
        name: str,
        roots: Sequence[Root],
        simple: Sequence[int],
    ) -> None:
        self.name = name
        self.roots: tuple[Root, ...] = tuple(roots)
        self.simple: tuple[int, ...] = tuple(simple)
        if not self.roots:
            raise RootSystemError("empty root system")
        self.ambient_dim = len(self.roots[0].vector)
        self._index = {r.vector: i for i, r in enumerate(self.roots)}
        if len(self._index) != len(self.roots):
            raise RootSystemError("duplicate roots")
        self.rank = ex.rank([r.vector for r in self.roots])
        self._validate_closure()
        self._neg = tuple(self._index[tuple(-x for x in r.vector)] for r in self.roots)
        self._validate_base()
        self._simple_perms = tuple(self._reflection_perm(i) for i in self.simple)
        self._simple_matrices = tuple(
            ex.reflection_matrix(self.roots[i].vector) for i in self.simple
        )
        self.identity = WeylElement(tuple(range(len(self.roots))), (), self)

    # ------------------------------------------------------------------
    # construction checks

    def _reflect(self, a: int, b: int) -> tuple[int, ...]:
        av, bv = self.roots[a].vector, self.roots[b].vector
        num = 2 * sum(x * y for x, y in zip(av, bv))
        den = sum(x * x for x in av)
        if num % den:
            raise NonClosedUnderReflection(
                f"reflection of {bv} in {av} is not integral (Cartan integer {num}/{den})"
            )
        c = num // den
        return tuple(y - c * x for x, y in zip(av, bv))

    def _validate_closure(self) -> None:
        for a, ra in enumerate(self.roots):
            if not any(ra.vector):
                raise RootSystemError("zero vector is not a root")
            for b, rb in enumerate(self.roots):
                img = self._reflect(a, b)
                j = self._index.get(img)
                if j is None:
                    raise NonClosedUnderReflection(
                        f"s_{ra.vector}({rb.vector}) = {img} is not a root"
                    )
                if self.roots[j].multiplicity != rb.multiplicity:
                    raise MultiplicityNotWeylInvariant(
                        f"roots {rb.vector} and {img} are Weyl conjugate but have "
                        f"multiplicities {rb.multiplicity} and {self.roots[j].multiplicity}"
                    )
        for r in self.roots:
            half = tuple(x // 2 for x in r.vector)
            has_half = all(x % 2 == 0 for x in r.vector) and half in self._index
            if r.is_reduced == has_half:
                raise RootSystemError(f"is_reduced flag of {r.vector} is inconsistent")

    def _validate_base(self) -> None:
        if len(set(self.simple)) != len(self.simple) or any(
            not 0 <= i < len(self.roots) for i in self.simple
        ):
            raise NotABase("simple root indices are invalid")
        if len(self.simple) != self.rank:
            raise NotABase(f"need {self.rank} simple roots, got {len(self.simple)}")
        if any(not self.roots[i].is_reduced for i in self.simple):
            raise NotABase("simple roots must be reduced")
        vecs = [self.roots[i].vector for i in self.simple]
        gram = [[ex.dot(a, b) for b in vecs] for a in vecs]
        coeffs = []
        for r in self.roots:
            rhs = [ex.dot(a, r.vector) for a in vecs]
            c = ex.solve(gram, rhs)
            if c is None:
                raise NotABase("simple roots are linearly dependent")
            if any(x.denominator != 1 for x in c):
                raise NotABase(f"{r.vector} is not an integer combination of simple roots")
            ci = tuple(int(x) for x in c)
            if not (all(x >= 0 for x in ci) or all(x <= 0 for x in ci)):
                raise NotABase(f"{r.vector} has coefficients of mixed sign")
            coeffs.append(ci)
        self.coefficients: tuple[tuple[int, ...], ...] = tuple(coeffs)
        self.positive = tuple(sum(c) > 0 for c in coeffs)

    def _reflection_perm(self, a: int) -> tuple[int, ...]:
        return tuple(self._index[self._reflect(a, b)] for b in range(len(self.roots)))

    # ------------------------------------------------------------------
    # lookups

    def index(self, vector: Sequence[int]) -> int:
        try:
            return self._index[tuple(vector)]
        except KeyError:
            raise KeyError(f"{tuple(vector)} is not a root of {self.name}") from None

    def negative(self, i: int) -> int:
        return self._neg[i]

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(self.roots[i] for i in self.simple)

    @cached_property
    def positive_indices(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.positive) if p)

    @cached_property
    def reduced_positive(self) -> tuple[int, ...]:
        return tuple(i for i in self.positive_indices if self.roots[i].is_reduced)

    def barred_multiplicity(self, i: int) -> int:
        """``dim g_a + dim g_2a`` for a reduced root ``a``."""
        r = self.roots[i]
        double = self._index.get(tuple(2 * x for x in r.vector))
        return r.multiplicity + (self.roots[double].multiplicity if double is not None else 0)

    def positive_rep(self, i: int) -> int:
        return i if self.positive[i] else self._neg[i]

    def pairing(self, i: int, x: Sequence) -> Fraction:
        """Value of root ``i`` at the point ``x`` of the Cartan subspace."""
        return ex.dot(self.roots[i].vector, x)

    # ------------------------------------------------------------------
    # Weyl group elements

    def element(self, perm: tuple[int, ...]) -> WeylElement:
        """Build an element from its root permutation, with its lex-minimal reduced word."""
        word: list[int] = []
        cur = perm
        while True:
            inv = [0] * len(cur)
            for i, j in enumerate(cur):
                inv[j] = i
            # smallest left descent: w^{-1}(alpha_i) negative
            desc = next(
                (k for k, a in enumerate(self.simple) if not self.positive[inv[a]]), None
            )
            if desc is None:
                break
            word.append(desc)
            sp = self._simple_perms[desc]
            cur = tuple(sp[j] for j in cur)
        if cur != self.identity.perm:
            raise ElementNotInGroup("permutation is not induced by a Weyl group element")
        return WeylElement(tuple(perm), tuple(word), self)

    def simple_reflection(self, k: int) -> WeylElement:
        return WeylElement(self._simple_perms[k], (k,), self)

    def reflection(self, i: int) -> WeylElement:
        """Reflection in the wall of root ``i``."""
        return self.element(self._reflection_perm(i))

    def from_word(self, word: Sequence[int]) -> WeylElement:
        w = self.identity
        for k in word:
            w = w * self.simple_reflection(k)
        return w

    def coerce(self, w: WeylElement) -> WeylElement:
        """Return ``w`` as an element of this group or raise ElementNotInGroup."""
        if w._rs is self:
            return w
        try:
            m = w.matrix
        except Exception as exc:  # pragma: no cover - defensive
            raise ElementNotInGroup(str(exc)) from exc
        if len(m) != self.ambient_dim:
            raise ElementNotInGroup("matrix has the wrong size")
        perm = []
        for r in self.roots:
            img = ex.matvec(m, r.vector)
            if any(x.denominator != 1 for x in img) or tuple(int(x) for x in img) not in self._index:
                raise ElementNotInGroup("matrix does not permute the roots")
            perm.append(self._index[tuple(int(x) for x in img)])
        cand = self.element(tuple(perm))
        if cand.matrix != m:
            raise ElementNotInGroup("matrix differs from the Weyl element with the same root action")
        return cand

    def __repr__(self) -> str:
        return f"RootSystem({self.name!r}, rank={self.rank}, roots={len(self.roots)})"


# ----------------------------------------------------------------------
# catalog


def _e(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


def _add(*vs: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(xs) for xs in zip(*vs))


def _single_mult(family: str, mults: Mapping[str, int]) -> int:
    vals = {mults[k] for k in ("short", "long") if k in mults}
    if len(vals) > 1:
        raise MultiplicityNotWeylInvariant(
            f"{family} has a single root length; got short/long multiplicities {sorted(vals)}"
        )
    return vals.pop() if vals else 1


def _catalog(family: str, n: int, mults: Mapping[str, int]) -> tuple[list[Root], list[int]]:
    fam = family.upper()
    roots: dict[tuple[int, ...], int] = {}
    simple: list[tuple[int, ...]] = []
    if n < 1:
        raise RootSystemError("rank must be positive")
    if fam == "A":
        m = _single_mult(fam, mults)
        d = n + 1
        for i in range(d):
            for j in range(d):
                if i != j:
                    roots[_add(_e(d, i), _e(d, j, -1))] = m
        simple = [_add(_e(d, i), _e(d, i + 1, -1)) for i in range(n)]
    elif fam in ("B", "C", "BC", "D"):
        ms, ml, md = mults.get("short", 1), mults.get("long", 1), mults.get("double", 1)
        if fam == "D":
            if n < 2:
                raise RootSystemError("D_n needs n >= 2")
            ml = _single_mult(fam, mults)
        if fam == "C" and n == 1:
            ml = _single_mult(fam, mults)
        if fam == "B" and n == 1:
            ms = _single_mult(fam, mults)
        mid = {"B": ml, "C": ms, "BC": ml, "D": ml}[fam]
        for i in range(n):
            for j in range(i + 1, n):
                for si in (1, -1):
                    for sj in (1, -1):
                        roots[_add(_e(n, i, si), _e(n, j, sj))] = mid
            for s in (1, -1):
                if fam in ("B", "BC"):
                    roots[tuple(_e(n, i, s))] = ms
                if fam == "C":
                    roots[tuple(_e(n, i, 2 * s))] = ml
                if fam == "BC":
                    roots[tuple(_e(n, i, 2 * s))] = md
        simple = [_add(_e(n, i), _e(n, i + 1, -1)) for i in range(n - 1)]
        if fam in ("B", "BC"):
            simple.append(tuple(_e(n, n - 1)))
        elif fam == "C":
            simple.append(tuple(_e(n, n - 1, 2)))
        else:
            simple.append(_add(_e(n, n - 2), _e(n, n - 1)))
    elif fam == "G":
        if n != 2:
            raise RootSystemError("G only exists in rank 2")
        ms, ml = mults.get("short", 1), mults.get("long", 1)
        for i in range(3):
            for j in range(3):
                if i != j:
                    roots[_add(_e(3, i), _e(3, j, -1))] = ms
            k1, k2 = [k for k in range(3) if k != i]
            for s in (1, -1):
                roots[tuple(s * x for x in _add(_e(3, i, 2), _e(3, k1, -1), _e(3, k2, -1)))] = ml
        simple = [(1, -1, 0), (-2, 1, 1)]
    else:
        raise RootSystemError(f"unknown family {family!r}")
    out = [
        Root(v, m, not (all(x % 2 == 0 for x in v) and tuple(x // 2 for x in v) in roots))
        for v, m in sorted(roots.items(), key=lambda kv: kv[0], reverse=True)
    ]
    index = {r.vector: i for i, r in enumerate(out)}
    return out, [index[s] for s in simple]


def _direct_sum(parts: Sequence[tuple[str, list[Root], list[int]]]) -> RootSystem:
    total = sum(len(p[1][0].vector) for p in parts)
    roots: list[Root] = []
    simple: list[int] = []
    offset = 0
    for _, rts, smp in parts:
        d = len(rts[0].vector)
        base = len(roots)
        for r in rts:
            v = [0] * total
            v[offset : offset + d] = r.vector
            roots.append(Root(tuple(v), r.multiplicity, r.is_reduced))
        simple.extend(base + i for i in smp)
        offset += d
    name = "x".join(p[0] for p in parts)
    return RootSystem(name, roots, simple)


_FAMILY_RE = re.compile(r"^\s*(BC|[ABCDG])\s*(\d+)\s*$", re.IGNORECASE)


def _parse_family(family: str, rank: int | None) -> list[tuple[str, int]]:
    out = []
    for part in re.split(r"[x×*]", family):
        m = _FAMILY_RE.match(part)
        if m:
            out.append((m.group(1).upper(), int(m.group(2))))
        elif rank is not None and part.strip().upper() in ("A", "B", "C", "D", "G", "BC"):
            out.append((part.strip().upper(), rank))
        else:
            raise RootSystemError(f"cannot parse family {family!r}")
    return out


def build_root_system(spec: RootSystemSpec | Mapping[str, Any] | str) -> RootSystem:
    """Validate a catalog or explicit root system description.

    >>> build_root_system("A2").rank
    2
    >>> build_root_system({"family": "BC", "rank": 1,
    ...     "multiplicities": {"short": 6, "double": 1}}).barred_multiplicity(0)
    7
    """
    if isinstance(spec, str):
        spec = RootSystemSpec(family=spec)
    elif not isinstance(spec, RootSystemSpec):
        spec = RootSystemSpec.from_dict(spec)

    if spec.roots is not None:
        if spec.mults is None or spec.simple is None or len(spec.mults) != len(spec.roots):
            raise RootSystemError("explicit spec needs roots, mults and simple of matching size")
        vecs = [tuple(int(x) for x in v) for v in spec.roots]
        vs = set(vecs)
        roots = [
            Root(v, int(m), not (all(x % 2 == 0 for x in v) and tuple(x // 2 for x in v) in vs))
            for v, m in zip(vecs, spec.mults)
        ]
        if any(r.multiplicity < 1 for r in roots):
            raise RootSystemError("multiplicities must be positive")
        return RootSystem(spec.name or "explicit", roots, [int(i) for i in spec.simple])

    parts: list[tuple[str, list[Root], list[int]]] = []
    if spec.factors:
        for f in spec.factors:
            sub = build_root_system(f)
            parts.append((sub.name, list(sub.roots), list(sub.simple)))
    elif spec.family:
        for fam, n in _parse_family(spec.family, spec.rank):
            if any(v < 1 for v in spec.multiplicities.values()):
                raise RootSystemError("multiplicities must be positive")
            roots, simple = _catalog(fam, n, spec.multiplicities)
            parts.append((f"{fam}{n}", roots, simple))
    else:
        raise RootSystemError("spec names neither a family, factors nor explicit roots")
    if len(parts) == 1:
        name, roots, simple = parts[0]
        return RootSystem(spec.name or name, roots, simple)
    rs = _direct_sum(parts)
    if spec.name:
        rs.name = spec.name
    return rs


def load_spec(path: str) -> RootSystem:
    with open(path, encoding="utf-8") as fh:
        return build_root_system(json.load(fh))


# ----------------------------------------------------------------------
# Weyl group


def weyl_group(rs: RootSystem) -> list[WeylElement]:
    """All Weyl group elements, ordered by (length, lex-minimal reduced word)."""
    if rs.rank > MAX_WEYL_RANK:
        raise RankTooLarge(f"rank {rs.rank} exceeds {MAX_WEYL_RANK}")
    cache = rs.__dict__.get("_weyl_cache")
    if cache is not None:
        return list(cache)
    seen = {rs.identity.perm}
    level = [rs.identity]
    out = [rs.identity]
    while level:
        nxt: list[WeylElement] = []
        for w in level:  # level is in lex order of words
            for k, sp in enumerate(rs._simple_perms):
                perm = tuple(w.perm[j] for j in sp)
                if perm not in seen:
                    seen.add(perm)
                    nxt.append(WeylElement(perm, w.word + (k,), rs))
        level = nxt
        out.extend(nxt)
    rs.__dict__["_weyl_cache"] = tuple(out)
    return out


def _inversion_indices(rs: RootSystem, w: WeylElement) -> frozenset[int]:
    inv = [0] * len(w.perm)
    for i, j in enumerate(w.perm):
        inv[j] = i
    return frozenset(b for b in rs.reduced_positive if not rs.positive[inv[b]])


def inversion_set(rs: RootSystem, w: WeylElement) -> frozenset[Root]:
    """Reduced positive roots made negative by ``w^{-1}`` (i.e. ``wΣ⁻ ∩ Σ⁺``)."""
    w = rs.coerce(w)
    return frozenset(rs.roots[i] for i in _inversion_indices(rs, w))


def is_group_closed(elements: Sequence[WeylElement]) -> bool:
    perms = {w.perm for w in elements}
    return all(tuple(a.perm[j] for j in b.perm) in perms for a, b in combinations(elements, 2))
