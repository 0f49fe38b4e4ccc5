"""Reduced S² geometry of the three exceptional taut representations.

Each representation is reduced to a sphere ``S²`` carrying a reflection group
``D`` whose mirrors cut out singular great circles with multiplicities.  The
sphere is modelled here as the unit sphere; the metric sphere of radius 1/2 is
recovered by halving arc lengths.  This is why the projection of a normal
geodesic of arc parameter ``s`` is the great circle ``cos 2s·e + sin 2s·u``.

The module works in three layers:

* :func:`build_reduced_geometry` fixes circles and multiplicities.
* :func:`focal_schedule` and :func:`collapse_events` read focal data off
  great-circle intersections in closed form.
* :func:`assemble_cycle` and :func:`orbit_critical_data` put the schedule to
  work, as a letter-level cycle descriptor and as critical point indices of
  height functions on the orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadCase,
    BadN,
    CoincidentCollapse,
    CollapseAtBasepoint,
    DegenerateDirection,
    MonodromyError,
    PointOffCirclesButSingularFlag,
    PointOnCircleButRegularFlag,
    QNotGeneric,
    QOnFocalPoint,
)

__all__ = [
    "TOL",
    "SingularCircle",
    "ReducedGeometry",
    "FocalItem",
    "FocalSchedule",
    "CollapseEvent",
    "Flag",
    "Arc",
    "Gluing",
    "S1Bundle",
    "CycleDescriptor",
    "CriticalPoint",
    "TautnessReport",
    "build_reduced_geometry",
    "focal_schedule",
    "collapse_events",
    "assemble_cycle",
    "orbit_critical_data",
    "hopf",
    "hopf_differential",
    "hopf_lift",
    "direction_at",
]

TOL = 1e-9
"""Absolute tolerance for circle membership and parameter coincidence."""

Vec3 = tuple[float, float, float]


def _unit(v: Sequence[float], what: str = "vector") -> np.ndarray:
    a = np.asarray(v, dtype=float)
    n = np.linalg.norm(a)
    if n < TOL:
        raise ValueError(f"{what} must be nonzero")
    return a / n


@dataclass(frozen=True)
class SingularCircle:
    """The great circle ``S² ∩ normal^⊥`` with its multiplicity."""

    normal: Vec3
    multiplicity: int
    label: str = ""

    def __post_init__(self):
        if abs(math.hypot(*self.normal) - 1.0) > TOL:
            raise ValueError(f"circle normal {self.normal} is not a unit vector")
        if self.multiplicity < 1:
            raise ValueError("circle multiplicity must be positive")

    def contains(self, x: Sequence[float], tol: float = TOL) -> bool:
        return abs(float(np.dot(self.normal, x))) < tol

    def reflect(self, x: np.ndarray) -> np.ndarray:
        c = np.asarray(self.normal)
        return x - 2 * float(c @ x) * c


@dataclass(frozen=True)
class ReducedGeometry:
    case_id: int
    n: int
    ambient_dim: int
    circles: tuple[SingularCircle, ...]
    sphere_radius: float = 0.5

    @property
    def principal_orbit_dim(self) -> int:
        return self.ambient_dim - 3

    def sum_rule(self) -> tuple[int, int]:
        """``(Σ 2·m_C + 1, dim V − 3)``; the two agree for a valid geometry."""
        return 2 * sum(c.multiplicity for c in self.circles) + 1, self.ambient_dim - 3

    def circles_through(self, x: Sequence[float], tol: float = TOL) -> list[int]:
        return [k for k, c in enumerate(self.circles) if c.contains(x, tol)]

    def is_regular(self, x: Sequence[float], tol: float = TOL) -> bool:
        return not self.circles_through(_unit(x), tol)

    def orbit_dim(self, x: Sequence[float]) -> int:
        """Dimension of the orbit whose image in S² is ``x``."""
        through = self.circles_through(_unit(x))
        return self.principal_orbit_dim - sum(self.circles[k].multiplicity for k in through)

    def group(self) -> list[np.ndarray]:
        """All elements of ``D`` as 3×3 matrices, generated by the circle reflections."""
        gens = [np.eye(3) - 2 * np.outer(c.normal, c.normal) for c in self.circles]
        elems = [np.eye(3)]
        frontier = [np.eye(3)]
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = s @ g
                    if not any(np.allclose(h, e, atol=1e-9) for e in elems):
                        elems.append(h)
                        nxt.append(h)
            frontier = nxt
        return elems

    def intersection_points(self) -> list[tuple[np.ndarray, tuple[int, ...]]]:
        """One point per antipodal pair where two or more circles meet, with the circles through it."""
        out: list[tuple[np.ndarray, tuple[int, ...]]] = []
        for i, a in enumerate(self.circles):
            for b in self.circles[i + 1 :]:
                x = np.cross(a.normal, b.normal)
                x /= np.linalg.norm(x)
                if any(abs(abs(float(x @ y)) - 1) < TOL for y, _ in out):
                    continue
                out.append((x, tuple(self.circles_through(x))))
        return out


def build_reduced_geometry(case_id: int, n: int = 2) -> ReducedGeometry:
    """Circles and multiplicities of the reduced model.

    Cases 1 and 2 use the three coordinate planes.  Case 3 uses the equator
    ``z = 0`` together with three meridian planes at azimuths 0°, 60° and 120°.
    ``n`` is ignored for case 1.
    """
    if case_id not in (1, 2, 3):
        raise BadCase(f"case must be 1, 2 or 3, got {case_id!r}")
    if case_id == 1:
        mults, ambient = (1, 6, 7), 32
        n = 0
    else:
        if not isinstance(n, int) or n < 2:
            raise BadN(f"n must be an integer >= 2, got {n!r}")
        ambient = 8 * n
        mults = (1, 2, 4 * n - 5)
    if case_id in (1, 2):
        circles = tuple(
            SingularCircle(tuple(float(i == k) for i in range(3)), m, f"{axis}=0")
            for k, (m, axis) in enumerate(zip(mults, "xyz"))
        )
    else:
        circles = (SingularCircle((0.0, 0.0, 1.0), 4 * n - 5, "equator"),) + tuple(
            SingularCircle(
                (-math.sin(math.radians(az)), math.cos(math.radians(az)), 0.0),
                1,
                f"meridian {az}",
            )
            for az in (0, 60, 120)
        )
    geom = ReducedGeometry(case_id, n, ambient, circles)
    lhs, rhs = geom.sum_rule()
    assert lhs == rhs, (lhs, rhs)
    return geom


# ----------------------------------------------------------------------
# focal schedules


@dataclass(frozen=True)
class FocalItem:
    param: float
    kind: str  # "standard" | "special" | "mixed"
    multiplicity: int
    circle_labels: frozenset[int] = frozenset()

    def letter(self) -> tuple[tuple[int, ...], int]:
        return tuple(sorted(self.circle_labels)), self.multiplicity


@dataclass(frozen=True)
class FocalSchedule:
    """Focal points along one normal geodesic, sorted by decreasing focal distance."""

    t: float
    items: tuple[FocalItem, ...]
    basepoint: Vec3 = (0.0, 0.0, 0.0)
    direction: Vec3 = (0.0, 0.0, 0.0)

    @property
    def total(self) -> int:
        return sum(i.multiplicity for i in self.items)

    def params(self) -> list[float]:
        return [i.param for i in self.items]

    def index_before(self, s_q: float) -> int:
        """Morse index of the critical point seen from parameter ``s_q``."""
        return sum(i.multiplicity for i in self.items if i.param < s_q)


def direction_at(p2: Sequence[float], direction: Sequence[float], t: float) -> np.ndarray:
    """Projected normal direction after moving the basepoint by ``t`` along its special circle."""
    e = _unit(p2)
    v = np.asarray(direction, dtype=float)
    return math.cos(t) * v + math.sin(t) * np.cross(e, v)


def _frame(p2, direction) -> tuple[np.ndarray, np.ndarray]:
    e = _unit(p2, "p")
    v = np.asarray(direction, dtype=float)
    v = v - (v @ e) * e
    if np.linalg.norm(v) < TOL:
        raise DegenerateDirection("direction is parallel to the basepoint")
    return e, v / np.linalg.norm(v)


def _circle_params(c: np.ndarray, e: np.ndarray, u: np.ndarray) -> list[float]:
    """Parameters ``s ∈ (0, π)`` with ``c·(cos 2s·e + sin 2s·u) = 0``, excluding ``s = π/2``."""
    a, b = float(c @ e), float(c @ u)
    theta = math.atan2(-a, b)  # 2s ≡ theta mod π
    out = []
    for k in range(-1, 4):
        s = (theta + k * math.pi) / 2
        if TOL < s < math.pi - TOL and abs(s - math.pi / 2) > TOL:
            out.append(s)
    return out


def focal_schedule(
    geom: ReducedGeometry,
    p2: Sequence[float],
    direction: Sequence[float],
    t: float = 0.0,
    regular: bool = True,
) -> FocalSchedule:
    """Focal points of the orbit over ``p2`` along the normal geodesic projecting to ``direction``."""
    e, v = _frame(p2, direction)
    through = geom.circles_through(e)
    if regular and through:
        raise PointOnCircleButRegularFlag(f"p lies on circles {through}")
    if not regular and not through:
        raise PointOffCirclesButSingularFlag("p lies on no singular circle")
    u = direction_at(e, v, t)
    hits: list[tuple[float, int]] = []
    for k, circ in enumerate(geom.circles):
        c = np.asarray(circ.normal)
        if abs(c @ e) < TOL and abs(c @ u) < TOL:
            raise DegenerateDirection(f"projected geodesic runs inside circle {k}")
        if k in through:
            continue
        hits.extend((s, k) for s in _circle_params(c, e, u))
    hits.sort()
    items: list[FocalItem] = []
    group: list[tuple[float, int]] = []
    for h in hits + [(math.inf, -1)]:
        if group and h[0] - group[-1][0] > TOL:
            items.append(
                FocalItem(
                    float(np.mean([s for s, _ in group])),
                    "standard",
                    sum(geom.circles[k].multiplicity for _, k in group),
                    frozenset(k for _, k in group),
                )
            )
            group = []
        group.append(h)
    standard = sum(i.multiplicity for i in items)
    if regular:
        items.append(FocalItem(math.pi / 2, "special", 1))
    else:
        items.append(FocalItem(math.pi / 2, "mixed", geom.orbit_dim(e) - standard))
    items.sort(key=lambda i: -i.param)
    sched = FocalSchedule(float(t), tuple(items), tuple(e), tuple(u))
    assert sched.total == geom.orbit_dim(e)
    return sched


# ----------------------------------------------------------------------
# collapse of focal points


@dataclass(frozen=True)
class CollapseEvent:
    """At ``t_star`` the letters ``affected[0]:affected[1]`` of the tail word meet."""

    t_star: float
    order: int
    affected: tuple[int, int]
    circle_labels: tuple[int, ...]
    point: Vec3


def _tail_word(geom, e, v, t, regular) -> list[FocalItem]:
    sched = focal_schedule(geom, e, v, t, regular)
    return [i for i in sched.items if i.param < math.pi / 2]


def _arc_word(geom, e, v, a, b, regular) -> list[FocalItem]:
    # For singular p the projected circle runs inside a circle through e at
    # isolated t; the word is continuous there, so sample elsewhere in the arc.
    for frac in (0.5, 0.375, 0.625, 0.25, 0.75):
        try:
            return _tail_word(geom, e, v, a + frac * (b - a), regular)
        except DegenerateDirection:
            continue
    raise DegenerateDirection(f"no usable sample in the arc [{a}, {b}]")  # pragma: no cover


def collapse_events(
    geom: ReducedGeometry,
    p2: Sequence[float],
    direction: Sequence[float],
    regular: bool | None = None,
) -> list[CollapseEvent]:
    """Parameters ``t ∈ [0, 2π)`` where tail focal points coincide, sorted by ``t``.

    The great circle through ``e`` in direction ``u(t)`` meets the point ``P``
    exactly when ``t ≡ atan2(P·w, P·v) (mod π)`` with ``w = e × v``.  Each
    antipodal pair of intersection points therefore gives two events.
    """
    e, v = _frame(p2, direction)
    if regular is None:
        regular = geom.is_regular(e)
    w = np.cross(e, v)
    through = set(geom.circles_through(e))
    events = []
    for x, circles in geom.intersection_points():
        active = tuple(k for k in circles if k not in through)
        if len(active) < 2:
            continue
        t0 = math.atan2(float(x @ w), float(x @ v)) % math.pi
        for t in (t0, t0 + math.pi):
            events.append((t, active, x))
    events.sort(key=lambda ev: ev[0])
    for (t1, *_), (t2, *_) in zip(events, events[1:]):
        if t2 - t1 < TOL:
            raise CoincidentCollapse(f"two collapses at t = {t1}")
    out = []
    for t, active, x in events:
        before = _arc_word(geom, e, v, t - 2e-4, t, regular)
        pos = [j for j, it in enumerate(before) if it.circle_labels & set(active)]
        if len(pos) != len(active) or pos != list(range(pos[0], pos[0] + len(pos))):
            raise MonodromyError(f"collapsing letters at t = {t} are not contiguous")
        sign = 1.0 if float(x @ direction_at(e, v, t)) > 0 else -1.0
        out.append(
            CollapseEvent(
                float(t),
                len(active),
                (pos[0], pos[-1] + 1),
                active,
                tuple(float(c) for c in sign * x),
            )
        )
    return out


# ----------------------------------------------------------------------
# cycle assembly


@dataclass(frozen=True)
class Flag:
    """A correcting element: identity or the order-two element w° of D."""

    name: str
    matrix: tuple[tuple[float, ...], ...]

    @classmethod
    def identity(cls) -> "Flag":
        return cls("identity", tuple(map(tuple, np.eye(3))))

    @classmethod
    def reflection(cls, normal: Sequence[float]) -> "Flag":
        c = np.asarray(normal, dtype=float)
        return cls("w°", tuple(map(tuple, np.eye(3) - 2 * np.outer(c, c))))

    def array(self) -> np.ndarray:
        return np.array(self.matrix)


@dataclass(frozen=True)
class Arc:
    start: float
    end: float
    word: tuple[FocalItem, ...]

    def labels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(i.circle_labels)) for i in self.word)


@dataclass(frozen=True)
class Gluing:
    """Letter action at one collapse: ``swap`` (order 2) or ``reverse`` (order 3)."""

    event: CollapseEvent
    action: str
    flag: Flag

    def apply(self, labels: Sequence) -> tuple:
        a, b = self.event.affected
        labels = list(labels)
        labels[a:b] = labels[a:b][::-1]
        return tuple(labels)


@dataclass(frozen=True)
class S1Bundle:
    """Cut-and-paste bundle over the special circle.

    ``head`` is the special (or mixed) focal point at distance π/2.  The base
    circle accounts for one dimension of it and the remainder sits in the
    fiber, together with the arc letters.
    """

    head: FocalItem
    arcs: tuple[Arc, ...]
    gluings: tuple[Gluing, ...]

    @property
    def fiber_dim(self) -> int:
        return self.head.multiplicity - 1 + sum(i.multiplicity for i in self.arcs[0].word)

    def flag_product(self) -> np.ndarray:
        out = np.eye(3)
        for g in self.gluings:
            out = out @ g.flag.array()
        return out

    def cycle_condition(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.flag_product(), np.eye(3), atol=tol))

    def monodromy(self) -> tuple:
        """The first arc word transported once around the circle through every gluing."""
        labels = self.arcs[0].labels()
        for g in self.gluings:
            labels = g.apply(labels)
        return labels


@dataclass(frozen=True)
class CycleDescriptor:
    prefix: tuple[FocalItem, ...]
    tail: S1Bundle | None
    total_dim: int
    s_q: float = 0.0

    @property
    def prefix_dim(self) -> int:
        return sum(i.multiplicity for i in self.prefix)


def _bundle(geom, e, v, regular) -> S1Bundle:
    events = collapse_events(geom, e, v, regular)
    for ev in events:
        if min(ev.t_star, 2 * math.pi - ev.t_star) < TOL:
            raise CollapseAtBasepoint(f"collapse at the basepoint (t = {ev.t_star})")
    head = next(i for i in focal_schedule(geom, e, v, 0.0, regular).items if i.kind != "standard")
    if not events:
        word = tuple(_arc_word(geom, e, v, 0.0, 2 * math.pi, regular))
        return S1Bundle(head, (Arc(0.0, 2 * math.pi, word),), ())
    ts = [ev.t_star for ev in events]
    bounds = list(zip(ts, ts[1:] + [ts[0] + 2 * math.pi]))
    arcs = tuple(
        Arc(a, b, tuple(_arc_word(geom, e, v, a, b, regular))) for a, b in bounds
    )
    gluings = []
    for k, ev in enumerate(events):
        if ev.order == 2:
            g = Gluing(ev, "swap", Flag.identity())
        else:
            before = arcs[k - 1].word
            middle = before[ev.affected[0] + 1]
            (label,) = middle.circle_labels
            g = Gluing(ev, "reverse", Flag.reflection(geom.circles[label].normal))
        if g.apply(arcs[k - 1].labels()) != arcs[k].labels():
            raise MonodromyError(f"gluing at t = {ev.t_star} does not match the arc words")
        gluings.append(g)
    # arc k ends at event k+1; rotate so gluing k leads from arc k to arc k+1
    gluings = gluings[1:] + gluings[:1]
    return S1Bundle(head, arcs, tuple(gluings))


def assemble_cycle(
    geom: ReducedGeometry,
    p2: Sequence[float],
    direction: Sequence[float],
    regular: bool,
    q_param: float,
) -> CycleDescriptor:
    """Letter-level Bott-Samelson cycle for the critical point seen from ``q`` at distance ``q_param``.

    Standard letters beyond the special point form the prefix.  Once ``q`` is
    past the special point the remaining letters are carried by an
    :class:`S1Bundle` over the special circle.
    """
    e, v = _frame(p2, direction)
    sched = focal_schedule(geom, e, v, 0.0, regular)
    if not 0 < q_param < math.pi:
        raise ValueError("q_param must lie in (0, π)")
    if any(abs(q_param - s) < TOL for s in sched.params()):
        raise QOnFocalPoint(f"q sits on a focal point at s = {q_param}")
    crossed = tuple(i for i in sched.items if i.param < q_param)
    if q_param < math.pi / 2:
        return CycleDescriptor(crossed, None, sum(i.multiplicity for i in crossed), q_param)
    prefix = tuple(i for i in crossed if i.param > math.pi / 2)
    tail = _bundle(geom, e, v, regular)
    total = sum(i.multiplicity for i in prefix) + 1 + tail.fiber_dim
    return CycleDescriptor(prefix, tail, total, q_param)


# ----------------------------------------------------------------------
# the Hopf model of V^H ∩ S³ and critical points of height functions


def _complex(x: Sequence[float]) -> tuple[complex, complex]:
    return complex(x[0], x[1]), complex(x[2], x[3])


def hopf(x: Sequence[float]) -> np.ndarray:
    """``η(z₁, z₂) = (|z₁|² − |z₂|², 2 Re z₁z̄₂, 2 Im z₁z̄₂)``."""
    z1, z2 = _complex(x)
    w = z1 * z2.conjugate()
    return np.array([abs(z1) ** 2 - abs(z2) ** 2, 2 * w.real, 2 * w.imag])


def hopf_differential(x: Sequence[float], n: Sequence[float]) -> np.ndarray:
    z1, z2 = _complex(x)
    w1, w2 = _complex(n)
    m = w1 * z2.conjugate() + z1 * w2.conjugate()
    return np.array([2 * (z1 * w1.conjugate()).real - 2 * (z2 * w2.conjugate()).real, 2 * m.real, 2 * m.imag])


def hopf_lift(y: Sequence[float]) -> np.ndarray:
    """A point of S³ over the unit vector ``y``."""
    a, b, c = _unit(y)
    if a > -0.5:
        z1 = math.sqrt((1 + a) / 2)
        z2 = complex(b, -c) / (2 * z1)
    else:
        z2 = math.sqrt((1 - a) / 2)
        z1 = complex(b, c) / (2 * z2)
        z2 = complex(z2)
    z1 = complex(z1)
    return np.array([z1.real, z1.imag, z2.real, z2.imag])


def _rotate(x: np.ndarray, theta: float) -> np.ndarray:
    z1, z2 = _complex(x)
    r = complex(math.cos(theta), math.sin(theta))
    z1, z2 = r * z1, r * z2
    return np.array([z1.real, z1.imag, z2.real, z2.imag])


@dataclass(frozen=True)
class CriticalPoint:
    circle: int
    point: tuple[float, ...]
    base: Vec3
    s_q: float
    index: int


@dataclass(frozen=True)
class TautnessReport:
    special_circles: int
    critical_points: tuple[CriticalPoint, ...]
    polynomial: tuple[int, ...]
    regular: bool = field(default=True)


def orbit_critical_data(
    geom: ReducedGeometry, q3: Sequence[float], p3: Sequence[float]
) -> TautnessReport:
    """Critical points and indices of ``L_q`` on the orbit through ``p3``, read off the S³ model.

    The orbit meets ``S³`` in the Hopf fibers over the ``D``-orbit of ``η(p3)``.
    On each fiber ``L_q`` has one maximum and one minimum of ``⟨q, x⟩``; the index
    of each is the focal multiplicity met along the geodesic from ``x`` to ``q``.
    """
    q = np.asarray(q3, dtype=float)
    p = np.asarray(p3, dtype=float)
    if abs(np.linalg.norm(p) - 1) > 1e-9:
        raise ValueError("p3 must be a unit vector in the S³ model")
    e = hopf(p)
    regular = geom.is_regular(e)
    bases: list[np.ndarray] = []
    for g in geom.group():
        y = g @ e
        if not any(np.allclose(y, b, atol=1e-9) for b in bases):
            bases.append(y)
    bases.sort(key=lambda b: tuple(np.round(-b, 9)))
    crit = []
    for k, b in enumerate(bases):
        x0 = hopf_lift(b)
        z = _complex(x0)
        w = _complex(q)
        c = sum(zi.conjugate() * wi for zi, wi in zip(z, w))
        if abs(c) < 1e-9:
            raise QNotGeneric(f"q is orthogonal to the fiber over {b}")
        for theta in (math.atan2(c.imag, c.real), math.atan2(c.imag, c.real) + math.pi):
            x = _rotate(x0, theta)
            a = float(q @ x)
            h = q - a * x
            if np.linalg.norm(h) < 1e-9:
                raise QNotGeneric("q lies on the orbit")
            s_q = math.atan2(np.linalg.norm(h), a)
            nvec = h / np.linalg.norm(h)
            d = hopf_differential(x, nvec)
            if np.linalg.norm(d) < 1e-9:
                raise QNotGeneric("normal direction is vertical")
            sched = focal_schedule(geom, hopf(x), d, 0.0, regular)
            if any(abs(s - s_q) < 1e-9 for s in sched.params()):
                raise QNotGeneric("q is a focal point of the orbit")
            crit.append(
                CriticalPoint(k, tuple(map(float, x)), tuple(map(float, hopf(x))), s_q, sched.index_before(s_q))
            )
    top = max(cp.index for cp in crit)
    poly = [0] * (top + 1)
    for cp in crit:
        poly[cp.index] += 1
    return TautnessReport(len(bases), tuple(crit), tuple(poly), regular)
