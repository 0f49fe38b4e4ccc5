"""The acceptance battery behind ``taut-cycles suite``.

Each check returns a :class:`CheckResult` whose ``details`` are plain JSON data.
Nothing timing-dependent goes into the details, so a report is a pure function
of the seed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numlie
from . import reduced as rd
from .errors import CollapseAtBasepoint, DegenerateDirection, QOnFocalPoint
from .bruhat import PoincarePolynomial, ThetaSubset, poincare_polynomial
from .morse import ChamberPoint, generic_regular_point, verify_bruhat_correspondence
from .rootsys import build_root_system, weyl_group, inversion_set

__all__ = ["CheckResult", "CATALOG", "run_suite", "CHECKS", "brute_force_poincare", "brute_force_index"]


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "details": self.details}


# Catalog systems of rank at most three, with a few non-trivial multiplicity patterns.
CATALOG: tuple[tuple[str, dict], ...] = (
    ("A1", {"family": "A1"}),
    ("A2", {"family": "A2"}),
    ("A2 (m=2)", {"family": "A2", "multiplicities": {"long": 2}}),
    ("A3", {"family": "A3"}),
    ("B2", {"family": "B2", "multiplicities": {"short": 2, "long": 1}}),
    ("B3", {"family": "B3"}),
    ("C3", {"family": "C3", "multiplicities": {"short": 4, "long": 3}}),
    ("D3", {"family": "D3"}),
    ("G2", {"family": "G2", "multiplicities": {"short": 1, "long": 2}}),
    ("BC1 (6,1)", {"family": "BC1", "multiplicities": {"short": 6, "double": 1}}),
    ("BC2", {"family": "BC2", "multiplicities": {"short": 2, "long": 3, "double": 1}}),
    ("BC3", {"family": "BC3", "multiplicities": {"short": 4, "long": 1, "double": 3}}),
    ("A1xA1", {"family": "A1xA1"}),
    ("A1xA2", {"family": "A1xA2"}),
    (
        "A1xA1xA1 (1,6,7)",
        {"factors": [{"family": "A1", "multiplicities": {"long": m}} for m in (1, 6, 7)]},
    ),
)


def brute_force_poincare(rs) -> list[int]:
    """Σ_w t^{dim} over all of W, from raw inversion sets (an independent oracle for Θ = ∅)."""
    coeffs: dict[int, int] = {}
    for w in weyl_group(rs):
        inv = inversion_set(rs, w.inverse())
        d = sum(r.multiplicity + _double_mult(rs, r.vector) for r in inv)
        coeffs[d] = coeffs.get(d, 0) + 1
    return [coeffs.get(k, 0) for k in range(max(coeffs) + 1)]


def _double_mult(rs, v) -> int:
    try:
        return rs.roots[rs.index(tuple(2 * x for x in v))].multiplicity
    except Exception:
        return 0


def _check_poincare(seed: int, threads: int) -> CheckResult:
    cases = [
        ("A2", {"family": "A2"}, [1, 2, 2, 1]),
        ("A2 (m=2)", {"family": "A2", "multiplicities": {"long": 2}}, [1, 0, 2, 0, 2, 0, 1]),
        ("BC1 (6,1)", {"family": "BC1", "multiplicities": {"short": 6, "double": 1}}, [1, 0, 0, 0, 0, 0, 0, 1]),
        (
            "A1xA1xA1 (1,6,7)",
            CATALOG[-1][1],
            list(
                (
                    PoincarePolynomial.from_degrees([0, 1])
                    * PoincarePolynomial.from_degrees([0, 6])
                    * PoincarePolynomial.from_degrees([0, 7])
                ).coefficients
            ),
        ),
    ]
    rows = []
    for name, spec, expected in cases:
        rs = build_root_system(spec)
        got = list(poincare_polynomial(rs, ThetaSubset()).coefficients)
        oracle = brute_force_poincare(rs)
        rows.append({"system": name, "poincare": got, "expected": expected, "oracle_agrees": got == oracle})
    ok = all(r["poincare"] == r["expected"] and r["oracle_agrees"] for r in rows)
    return CheckResult(1, "Bruhat/Poincare exactness", ok, {"systems": rows})


def _check_correspondence(seed: int, threads: int, q_per_case: int = 5) -> CheckResult:
    rows = []
    for name, spec in CATALOG:
        rs = build_root_system(spec)
        runs = failures = 0
        for r in range(rs.rank + 1):
            for theta in itertools.combinations(range(rs.rank), r):
                vals = [0 if k in theta else k + 1 for k in range(rs.rank)]
                p = ChamberPoint.from_simple_values(rs, vals)
                for j in range(q_per_case):
                    q = generic_regular_point(rs, p, seed * 1000 + j, dominant_only=(j % 2 == 0))
                    rep = verify_bruhat_correspondence(rs, ThetaSubset(theta), q, p)
                    runs += 1
                    failures += not rep.ok
        rows.append({"system": name, "runs": runs, "failures": failures})
    return CheckResult(2, "Bruhat-Morse correspondence", all(r["failures"] == 0 for r in rows), {"systems": rows})


def _check_sum_rule(seed: int, threads: int) -> CheckResult:
    bad = []
    for case in (1, 2, 3):
        for n in range(2, 65) if case != 1 else [2]:
            lhs, rhs = rd.build_reduced_geometry(case, n).sum_rule()
            if lhs != rhs:
                bad.append([case, n, lhs, rhs])
    return CheckResult(3, "Reduced sum rule", not bad, {"checked_n": [2, 64], "violations": bad})


def _random_regular(geom, rng):
    while True:
        e = rng.normal(size=3)
        e /= np.linalg.norm(e)
        if min(abs(np.array(c.normal) @ e) for c in geom.circles) < 1e-3:
            continue
        v = rng.normal(size=3)
        v -= e * (e @ v)
        return e, v / np.linalg.norm(v)


def _check_collapses(seed: int, threads: int, trials: int = 50) -> CheckResult:
    expected = {1: [6, 0], 2: [6, 0], 3: [6, 2]}
    rows = []
    for case in (1, 2, 3):
        geom = rd.build_reduced_geometry(case, 2)
        rng = np.random.default_rng([seed, 4, case])
        counts: dict[str, int] = {}
        for _ in range(trials):
            e, v = _random_regular(geom, rng)
            ev = rd.collapse_events(geom, e, v)
            key = f"{sum(x.order == 2 for x in ev)},{sum(x.order == 3 for x in ev)}"
            counts[key] = counts.get(key, 0) + 1
        want = "{},{}".format(*expected[case])
        rows.append({"case": case, "counts": counts, "expected": want, "ok": counts == {want: trials}})
    return CheckResult(4, "Collapse counts", all(r["ok"] for r in rows), {"trials": trials, "cases": rows})


def brute_force_index(geom, e, v, regular: bool, s_q: float, grid: int = 20000) -> int:
    """Morse index by sign changes of ``c·X(s)`` on a fine grid, independent of the schedule code."""
    e = np.asarray(e) / np.linalg.norm(e)
    s = np.linspace(0, s_q, grid)[1:]
    xs = np.outer(np.cos(2 * s), e) + np.outer(np.sin(2 * s), v)
    index = 0
    through = 0
    for c in geom.circles:
        cn = np.asarray(c.normal)
        if abs(cn @ e) < 1e-9:
            through += c.multiplicity
            continue
        vals = xs @ cn
        index += c.multiplicity * int(np.sum(np.sign(vals[1:]) != np.sign(vals[:-1])))
    if s_q > math.pi / 2:
        index += 1 + through
    return index


def _random_singular(geom, rng):
    c = np.asarray(geom.circles[rng.integers(len(geom.circles))].normal)
    while True:
        e = rng.normal(size=3)
        e -= c * (c @ e)
        e /= np.linalg.norm(e)
        if len(geom.circles_through(e)) != 1:
            continue
        v = rng.normal(size=3)
        v -= e * (e @ v)
        return e, v / np.linalg.norm(v)


def _check_cycles(seed: int, threads: int, trials: int = 100) -> CheckResult:
    rows = []
    for case in (1, 2, 3):
        geom = rd.build_reduced_geometry(case, 2)
        rng = np.random.default_rng([seed, 5, case])
        flag_fail = mono_fail = index_fail = tails = 0
        for k in range(trials):
            regular = k % 5 != 4
            e, v = _random_regular(geom, rng) if regular else _random_singular(geom, rng)
            s_q = float(rng.uniform(0.05, math.pi - 0.05))
            while True:
                try:
                    cyc = rd.assemble_cycle(geom, e, v, regular, s_q)
                    break
                except (QOnFocalPoint, CollapseAtBasepoint, DegenerateDirection):
                    s_q = float(rng.uniform(0.05, math.pi - 0.05))
                    e, v = _random_regular(geom, rng) if regular else _random_singular(geom, rng)
            if cyc.tail is not None:
                tails += 1
                flag_fail += not cyc.tail.cycle_condition()
                mono_fail += cyc.tail.monodromy() != cyc.tail.arcs[0].labels()
            index_fail += cyc.total_dim != brute_force_index(geom, e, v, regular, s_q)
        rows.append(
            {
                "case": case,
                "cycles": trials,
                "with_tail": tails,
                "flag_failures": flag_fail,
                "monodromy_failures": mono_fail,
                "index_failures": index_fail,
            }
        )
    ok = all(r["flag_failures"] == r["monodromy_failures"] == r["index_failures"] == 0 for r in rows)
    return CheckResult(5, "Cycle condition and monodromy", ok, {"cases": rows})


def _check_oracle(seed: int, threads: int) -> CheckResult:
    rows = []
    for case, samples in ((2, 20), (3, 20), (1, 5)):
        rep = numlie.build_representation(case, 2)
        geom = rd.build_reduced_geometry(case, 2)
        report = numlie.verify_reduction(rep, geom, samples, seed, threads=threads)
        rows.append(report.to_dict())
    return CheckResult(6, "Numerical reduction oracle", all(r["ok"] for r in rows), {"reports": rows})


def _random_s3(rng) -> np.ndarray:
    x = rng.normal(size=4)
    return x / np.linalg.norm(x)


def _check_tautness(seed: int, threads: int, trials: int = 10) -> CheckResult:
    rng = np.random.default_rng([seed, 7])
    geom = rd.build_reduced_geometry(2, 2)
    while True:
        p3 = _random_s3(rng)
        if geom.is_regular(rd.hopf(p3), 1e-3):
            break
    polys = set()
    for _ in range(trials):
        polys.add(rd.orbit_critical_data(geom, rng.normal(size=4) * rng.uniform(0.3, 3.0), p3).polynomial)
    circles = {}
    for case in (1, 2, 3):
        g = rd.build_reduced_geometry(case, 2)
        while True:
            p = _random_s3(rng)
            if g.is_regular(rd.hopf(p), 1e-3):
                break
        circles[str(case)] = rd.orbit_critical_data(g, rng.normal(size=4), p).special_circles
    ok = len(polys) == 1 and circles == {"1": 8, "2": 8, "3": 12}
    return CheckResult(
        7,
        "Tautness invariance",
        ok,
        {"trials": trials, "polynomials": sorted(list(p) for p in polys), "special_circles": circles},
    )


CHECKS: tuple[Callable[[int, int], CheckResult], ...] = (
    _check_poincare,
    _check_correspondence,
    _check_sum_rule,
    _check_collapses,
    _check_cycles,
    _check_oracle,
    _check_tautness,
)


def run_suite(seed: int = 0, threads: int = 1) -> list[CheckResult]:
    """Run criteria 1 to 7.  Criterion 8 (determinism) compares two runs of this function."""
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(check, seed, threads) for check in CHECKS]
        return [f.result() for f in futures]
