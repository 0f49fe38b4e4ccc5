"""Bruhat cells of generalized real flag manifolds G/P_Θ."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidTheta
from .rootsys import Root, RootSystem, WeylElement, _inversion_indices, weyl_group

__all__ = [
    "ThetaSubset",
    "BruhatCell",
    "PoincarePolynomial",
    "theta_positive_roots",
    "minimal_coset_reps",
    "cell_dimension",
    "bruhat_cells",
    "poincare_polynomial",
]


@dataclass(frozen=True)
class ThetaSubset:
    """A subset of simple-root positions (0-based, in the order of ``rs.simple``)."""

    indices: frozenset[int]

    def __init__(self, indices: Iterable[int] = ()) -> None:
        object.__setattr__(self, "indices", frozenset(int(i) for i in indices))

    @classmethod
    def parse(cls, text: str) -> "ThetaSubset":
        text = text.strip()
        return cls(int(t) for t in text.split(",") if t.strip()) if text else cls()

    def validate(self, rs: RootSystem) -> "ThetaSubset":
        bad = [i for i in self.indices if not 0 <= i < rs.rank]
        if bad:
            raise InvalidTheta(f"indices {sorted(bad)} out of range for rank {rs.rank}")
        return self

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class BruhatCell:
    """Cell ``N⁺ w_u⁻¹ P_Θ``; ``inverse_inversions`` is the inversion set of ``w_u⁻¹``."""

    rep: WeylElement
    inverse_inversions: frozenset[Root]
    dimension: int


@dataclass(frozen=True)
class PoincarePolynomial:
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        c = list(self.coefficients)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "PoincarePolynomial":
        degrees = list(degrees)
        coeffs = [0] * (max(degrees, default=0) + 1)
        for d in degrees:
            coeffs[d] += 1
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t):
        return sum(c * t**k for k, c in enumerate(self.coefficients))

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return PoincarePolynomial(tuple(out))

    def is_palindromic(self) -> bool:
        return self.coefficients == self.coefficients[::-1]

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            coef = str(c) if (c != 1 or k == 0) else ""
            terms.append(f"{coef}{mono}")
        return " + ".join(terms) or "0"


def theta_positive_roots(rs: RootSystem, theta: ThetaSubset) -> frozenset[int]:
    """Indices of positive roots supported on Θ (the set ⟨Θ⟩⁺)."""
    theta.validate(rs)
    return frozenset(
        i
        for i in rs.positive_indices
        if all(c == 0 for k, c in enumerate(rs.coefficients[i]) if k not in theta.indices)
    )


def minimal_coset_reps(rs: RootSystem, theta: ThetaSubset) -> list[WeylElement]:
    """W_u: elements whose inversion set avoids ⟨Θ⟩⁺, in canonical order."""
    span = theta_positive_roots(rs, theta)
    return [w for w in weyl_group(rs) if not (_inversion_indices(rs, w) & span)]


def cell_dimension(rs: RootSystem, w_u: WeylElement, theta: ThetaSubset | None = None) -> int:
    """Dimension of the Bruhat cell of ``w_u``: Σ dim ḡ_λ over λ in Σ⁺ of ``w_u⁻¹``."""
    w_u = rs.coerce(w_u)
    if theta is not None and _inversion_indices(rs, w_u) & theta_positive_roots(rs, theta):
        raise InvalidTheta(f"element with word {w_u.word} is not in W_u for Θ={sorted(theta)}")
    return sum(rs.barred_multiplicity(i) for i in _inversion_indices(rs, w_u.inverse()))


def bruhat_cells(rs: RootSystem, theta: ThetaSubset) -> list[BruhatCell]:
    cells = []
    for w in minimal_coset_reps(rs, theta):
        inv = _inversion_indices(rs, w.inverse())
        dim = sum(rs.barred_multiplicity(i) for i in inv)
        cells.append(BruhatCell(w, frozenset(rs.roots[i] for i in inv), dim))
    cells.sort(key=lambda c: (c.dimension, c.rep.sort_key()))
    return cells


def poincare_polynomial(rs: RootSystem, theta: ThetaSubset) -> PoincarePolynomial:
    return PoincarePolynomial.from_degrees(c.dimension for c in bruhat_cells(rs, theta))
