"""Acceptance criteria, one test and one printed PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from taut_cycles import suite
from taut_cycles.bruhat import PoincarePolynomial, ThetaSubset, poincare_polynomial
from taut_cycles.rootsys import build_root_system

SEED = 0
LINES: list[str] = []


def report(number: int, title: str, passed: bool, detail: str, capsys=None) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
    LINES.append(line)
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def _product(*degrees):
    out = PoincarePolynomial((1,))
    for d in degrees:
        out = out * PoincarePolynomial.from_degrees([0, d])
    return out.coefficients


POINCARE_TARGETS = [
    ("A2", {"family": "A2"}, (1, 2, 2, 1)),
    ("A2 mult 2", {"family": "A2", "multiplicities": {"long": 2}}, (1, 0, 2, 0, 2, 0, 1)),
    ("BC1 (6,1)", {"family": "BC1", "multiplicities": {"short": 6, "double": 1}}, (1, 0, 0, 0, 0, 0, 0, 1)),
    ("A1^3 (1,6,7)", suite.CATALOG[-1][1], _product(1, 6, 7)),
]


def criterion_1(capsys=None):
    ok, worst, notes = True, 0.0, []
    for name, spec, target in POINCARE_TARGETS:
        start = time.perf_counter()
        rs = build_root_system(spec)
        got = poincare_polynomial(rs, ThetaSubset()).coefficients
        elapsed = time.perf_counter() - start
        oracle = tuple(suite.brute_force_poincare(rs))
        good = got == target == oracle and elapsed < 1.0
        ok &= good
        worst = max(worst, elapsed)
        if not good:
            notes.append(f"{name}: got {got}, oracle {oracle}, {elapsed:.2f}s")
    report(1, "Bruhat/Poincare exactness", ok, "; ".join(notes) or f"4 systems exact, slowest {worst:.3f}s < 1s", capsys)
    return ok


def criterion_2(capsys=None):
    res, elapsed = timed(suite._check_correspondence, SEED, 1)
    runs = sum(r["runs"] for r in res.details["systems"])
    ok = res.passed and elapsed < 10.0
    report(2, "Bruhat-Morse correspondence", ok, f"{len(res.details['systems'])} systems, {runs} (Theta, q) runs, {elapsed:.1f}s < 10s", capsys)
    return ok


def criterion_3(capsys=None):
    res = suite._check_sum_rule(SEED, 1)
    report(3, "Reduced sum rule", res.passed, f"cases 1-3, n = 2..64, violations {res.details['violations']}", capsys)
    return res.passed


def criterion_4(capsys=None):
    res = suite._check_collapses(SEED, 1)
    counts = {r["case"]: r["counts"] for r in res.details["cases"]}
    report(4, "Collapse counts", res.passed, f"50 trials per case, (double,triple) counts {counts}", capsys)
    return res.passed


def criterion_5(capsys=None):
    res = suite._check_cycles(SEED, 1)
    rows = res.details["cases"]
    fails = sum(r["flag_failures"] + r["monodromy_failures"] + r["index_failures"] for r in rows)
    report(5, "Cycle condition and monodromy", res.passed, f"100 cycles per case, {fails} failures", capsys)
    return res.passed


def criterion_6(capsys=None):
    res, elapsed = timed(suite._check_oracle, SEED, 1)
    reps = res.details["reports"]
    max_ds = max(r["max_ds"] for r in reps)
    lemma = max(r["lemma_checks"]["max_restriction_error"] for r in reps)
    mism = sum(r["mult_mismatches"] for r in reps)
    ok = res.passed and max_ds < 1e-6 and lemma < 1e-8 and mism == 0 and elapsed < 120
    detail = f"max |ds| {max_ds:.1e} < 1e-6, restriction error {lemma:.1e} < 1e-8, {mism} multiplicity mismatches, {elapsed:.1f}s < 120s"
    report(6, "Numerical reduction oracle", ok, detail, capsys)
    return ok


def criterion_7(capsys=None):
    res = suite._check_tautness(SEED, 1)
    detail = f"{len(res.details['polynomials'])} distinct polynomial(s) over 10 q, special circles {res.details['special_circles']}"
    report(7, "Tautness invariance", res.passed, detail, capsys)
    return res.passed


def criterion_8(capsys=None):
    outs = []
    for width in ("1", "4"):
        proc = subprocess.run(
            [sys.executable, "-m", "taut_cycles.cli", "suite", "--seed", str(SEED), "--threads", width],
            capture_output=True,
            check=False,
        )
        outs.append((proc.returncode, proc.stdout))
    ok = outs[0] == outs[1] and outs[0][0] == 0
    report(8, "Determinism", ok, f"suite JSON at widths 1 and 4: {len(outs[0][1])} bytes, identical={outs[0][1] == outs[1][1]}", capsys)
    return ok


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion, capsys):
    assert criterion(capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
