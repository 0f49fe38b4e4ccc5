"""Command-line access to every module of taut_cycles.

Exit codes: 0 on success, 1 on a computation error (a JSON error object is
printed on stdout), 2 on bad usage.  Every JSON document carries
``schema_version``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import numlie
from . import reduced as rd
from .bruhat import ThetaSubset, bruhat_cells, poincare_polynomial
from .errors import TautCyclesError
from .morse import ChamberPoint, critical_cosets, crossing_sequence, verify_bruhat_correspondence
from .rootsys import build_root_system, load_spec, weyl_group
from .suite import run_suite

SCHEMA_VERSION = "1"
log = logging.getLogger("taut_cycles")


@dataclass
class RunConfig:
    """Resolved settings for one invocation: config file values overridden by flags."""

    subcommand: str
    options: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    threads: int = 1
    tolerance: float = 1e-6
    output: str = "json"

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")


def read_config(path: str | None) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    if not path:
        return {}
    out = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def thread_width(requested: int | None) -> int:
    """Requested width (default 1), capped by ``TAUT_CYCLES_THREADS`` when set."""
    width = requested or 1
    cap = os.environ.get("TAUT_CYCLES_THREADS")
    if cap:
        width = min(width, int(cap))
    return max(1, width)


# ----------------------------------------------------------------------
# JSON helpers


def _num(x) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (np.floating, float)):
        return round(float(x), 12)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _vec(v) -> list:
    return [_num(x) for x in v]


def _emit(doc: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _rs_from(spec: str):
    """A spec file path, or a catalog name such as ``B3`` or ``A1xA2``."""
    if Path(spec).is_file() or spec.endswith(".json"):
        return load_spec(spec)
    return build_root_system(spec)


def _floats(text: str | None, size: int, what: str) -> np.ndarray | None:
    if text is None:
        return None
    vals = [float(t) for t in text.replace(" ", "").split(",") if t]
    if len(vals) != size:
        raise ValueError(f"{what} needs {size} comma separated numbers")
    return np.array(vals)


# ----------------------------------------------------------------------
# subcommands


def cmd_roots(cfg: RunConfig) -> int:
    rs = _rs_from(cfg.options["spec"])
    emit = cfg.options["emit"]
    roots = [
        {"vector": list(r.vector), "multiplicity": r.multiplicity, "reduced": r.is_reduced}
        for r in rs.roots
    ]
    if emit == "roots":
        for i, r in enumerate(rs.roots):
            tag = " (simple)" if i in rs.simple else ""
            print(f"{list(r.vector)}  m={r.multiplicity}{'' if r.is_reduced else '  non-reduced'}{tag}")
        return 0
    group = weyl_group(rs)
    if emit == "weyl":
        print(f"|W| = {len(group)}")
        for w in group:
            print(" ".join(f"s{k}" for k in w.word) or "e")
        return 0
    _emit(
        {
            "name": rs.name,
            "rank": rs.rank,
            "ambient_dim": rs.ambient_dim,
            "roots": roots,
            "simple": list(rs.simple),
            "weyl_order": len(group),
        }
    )
    return 0


def cmd_bruhat(cfg: RunConfig) -> int:
    rs = _rs_from(cfg.options["spec"])
    theta = ThetaSubset.parse(cfg.options["theta"]).validate(rs)
    cells = bruhat_cells(rs, theta)
    poly = poincare_polynomial(rs, theta)
    emit = cfg.options["emit"]
    if emit == "cells":
        for c in cells:
            print(f"dim {c.dimension:3d}  w_u = {' '.join(f's{k}' for k in c.rep.word) or 'e'}")
    elif emit == "poincare":
        print(poly)
    else:
        _emit(
            {
                "theta": sorted(theta),
                "cells": [{"word": list(c.rep.word), "dim": c.dimension} for c in cells],
                "poincare": list(poly.coefficients),
            }
        )
    return 0


def cmd_morse(cfg: RunConfig) -> int:
    rs = _rs_from(cfg.options["spec"])
    p = ChamberPoint.parse(rs, cfg.options["p"])
    q = ChamberPoint.parse(rs, cfg.options["q"])
    emit = cfg.options["emit"]
    rows = []
    for coset in critical_cosets(rs, p):
        word = crossing_sequence(rs, q, coset.rep, p)
        rows.append(
            {
                "coset_rep": list(coset.rep.word),
                "point": _vec(coset.point),
                "walls": [list(r.vector) for r, _ in word.walls],
                "multiplicities": [m for _, m in word.walls],
                "params": _vec(word.params),
                "index": word.dimension,
            }
        )
    if emit == "indices":
        for r in rows:
            print(f"w = {' '.join(f's{k}' for k in r['coset_rep']) or 'e'}: index {r['index']}")
        return 0
    doc: dict[str, Any] = {"p": _vec(p.coords), "q": _vec(q.coords), "critical_points": rows}
    if all(v >= 0 for v in p.simple_values(rs)):
        rep = verify_bruhat_correspondence(rs, p.theta, q, p)
        doc["correspondence"] = {
            "theta": sorted(rep.theta),
            "bijective": rep.bijective,
            "multisets_equal": rep.multisets_equal,
            "morse": list(rep.morse.coefficients),
            "poincare": list(rep.poincare.coefficients),
            "entries": [
                {"coset_rep": list(e.coset.rep.word), "w_u": list(e.w_u.word), "index": e.index, "cell_dim": e.cell_dim}
                for e in rep.entries
            ],
            "ok": rep.ok,
        }
    if emit == "report":
        print(f"p = {doc['p']}, q = {doc['q']}")
        for r in rows:
            print(f"  w = {r['coset_rep']}: walls {r['walls']} -> index {r['index']}")
        if "correspondence" in doc:
            c = doc["correspondence"]
            print(f"  Morse {c['morse']} vs Poincare {c['poincare']}: {'ok' if c['ok'] else 'MISMATCH'}")
        return 0
    _emit(doc)
    return 0


def _item(i: rd.FocalItem) -> dict:
    return {"s": _num(i.param), "kind": i.kind, "multiplicity": i.multiplicity, "circles": sorted(i.circle_labels)}


def _reduced_inputs(cfg: RunConfig, geom: rd.ReducedGeometry):
    rng = np.random.default_rng(cfg.seed)
    singular = cfg.options.get("singular", False)
    p = _floats(cfg.options.get("p"), 3, "--p")
    if p is None:
        while True:
            p = rng.normal(size=3)
            if singular:
                c = np.asarray(geom.circles[0].normal)
                p -= c * (c @ p)
            p /= np.linalg.norm(p)
            if singular or geom.is_regular(p, 1e-3):
                break
    p = p / np.linalg.norm(p)
    d = _floats(cfg.options.get("dir"), 3, "--dir")
    if d is None:
        d = rng.normal(size=3)
    d = d - p * (p @ d)
    return p, d / np.linalg.norm(d), rng


def cmd_reduced(cfg: RunConfig) -> int:
    geom = rd.build_reduced_geometry(cfg.options["case"], cfg.options["n"])
    p, d, rng = _reduced_inputs(cfg, geom)
    regular = not cfg.options.get("singular", False)
    emit = cfg.options["emit"]
    doc: dict[str, Any] = {
        "case": geom.case_id,
        "n": geom.n,
        "ambient_dim": geom.ambient_dim,
        "circles": [{"normal": _vec(c.normal), "multiplicity": c.multiplicity, "label": c.label} for c in geom.circles],
        "p": _vec(p),
        "dir": _vec(d),
    }
    if emit in ("schedule", "json"):
        sched = rd.focal_schedule(geom, p, d, cfg.options["t"], regular)
        doc["schedule"] = {"t": _num(sched.t), "items": [_item(i) for i in sched.items], "total": sched.total}
    if emit in ("collapses", "json"):
        events = rd.collapse_events(geom, p, d, regular)
        doc["collapses"] = {
            "double": sum(e.order == 2 for e in events),
            "triple": sum(e.order == 3 for e in events),
            "events": [
                {"t": _num(e.t_star), "order": e.order, "affected": list(e.affected), "circles": list(e.circle_labels)}
                for e in events
            ],
        }
    if emit in ("cycle", "json"):
        cyc = rd.assemble_cycle(geom, p, d, regular, cfg.options["q_param"])
        tail = None
        if cyc.tail is not None:
            tail = {
                "head": _item(cyc.tail.head),
                "arcs": [{"start": _num(a.start), "end": _num(a.end), "word": [list(x) for x in a.labels()]} for a in cyc.tail.arcs],
                "gluings": [{"t": _num(g.event.t_star), "action": g.action, "flag": g.flag.name} for g in cyc.tail.gluings],
                "fiber_dim": cyc.tail.fiber_dim,
                "cycle_condition": cyc.tail.cycle_condition(),
                "monodromy_trivial": cyc.tail.monodromy() == cyc.tail.arcs[0].labels(),
            }
        doc["cycle"] = {
            "q_param": _num(cyc.s_q),
            "prefix": [_item(i) for i in cyc.prefix],
            "tail": tail,
            "total_dim": cyc.total_dim,
        }
    if emit in ("tautness", "json"):
        q3 = _floats(cfg.options.get("q3"), 4, "--q3")
        if q3 is None:
            q3 = rng.normal(size=4)
        rep = rd.orbit_critical_data(geom, q3, rd.hopf_lift(p))
        doc["tautness"] = {
            "q3": _vec(q3),
            "special_circles": rep.special_circles,
            "critical_points": len(rep.critical_points),
            "indices": [cp.index for cp in rep.critical_points],
            "polynomial": list(rep.polynomial),
        }
    if emit == "json":
        _emit(doc)
    elif emit == "schedule":
        for i in doc["schedule"]["items"]:
            print(f"s = {i['s']:.9f}  {i['kind']:8s} m = {i['multiplicity']}  circles {i['circles']}")
        print(f"total multiplicity {doc['schedule']['total']}")
    elif emit == "collapses":
        c = doc["collapses"]
        for e in c["events"]:
            print(f"t = {e['t']:.9f}  {'double' if e['order'] == 2 else 'triple'}  letters {e['affected']}")
        print(f"{c['double']} double + {c['triple']} triple")
    elif emit == "cycle":
        c = doc["cycle"]
        print(f"prefix letters: {[i['multiplicity'] for i in c['prefix']]}")
        if c["tail"]:
            t = c["tail"]
            print(f"tail: {len(t['arcs'])} arcs, fiber dim {t['fiber_dim']}, flags {[g['flag'] for g in t['gluings']]}")
        print(f"total dimension {c['total_dim']}")
    else:
        t = doc["tautness"]
        print(f"{t['special_circles']} special circles, {t['critical_points']} critical points")
        print(f"Morse polynomial coefficients {t['polynomial']}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    case, n = cfg.options["case"], cfg.options["n"]
    rep = numlie.build_representation(case, n)
    geom = rd.build_reduced_geometry(case, n if case != 1 else 2)
    report = numlie.verify_reduction(rep, geom, cfg.options["samples"], cfg.seed, threads=cfg.threads)
    doc = report.to_dict()
    doc["ok"] = doc["ok"] and report.max_ds < cfg.tolerance
    if cfg.options["emit"] == "summary":
        print(
            f"case {doc['case']}: {doc['samples']} samples, max |ds| = {doc['max_ds']:.1e}, "
            f"multiplicity mismatches {doc['mult_mismatches']}, "
            f"restriction error {doc['lemma_checks']['max_restriction_error']:.1e}: "
            f"{'ok' if doc['ok'] else 'FAIL'}"
        )
    else:
        _emit(doc)
    return 0 if doc["ok"] else 1


def cmd_suite(cfg: RunConfig) -> int:
    results = run_suite(cfg.seed, cfg.threads)
    ok = all(r.passed for r in results)
    if cfg.options["emit"] == "table":
        for r in results:
            print(f"[{'PASS' if r.passed else 'FAIL'}] {r.number}. {r.name}")
    else:
        _emit({"seed": cfg.seed, "passed": ok, "criteria": [r.to_dict() for r in results]})
    return 0 if ok else 1


COMMANDS = {
    "roots": cmd_roots,
    "bruhat": cmd_bruhat,
    "morse": cmd_morse,
    "reduced": cmd_reduced,
    "verify": cmd_verify,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override its values")
    common.add_argument("--seed", type=int, help="seed for sampled computations (default 0)")
    common.add_argument("--threads", type=int, help="parallel width (capped by TAUT_CYCLES_THREADS)")
    common.add_argument("--tol", type=float, help="acceptance tolerance for numerical comparisons")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="taut-cycles", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("roots", parents=[common], help="root system and Weyl group")
    p.add_argument("--spec", required=True, help="JSON spec file or a catalog name such as A2 or BC1")
    p.add_argument("--emit", choices=["roots", "weyl", "json"])

    p = sub.add_parser("bruhat", parents=[common], help="Bruhat cells and Poincare polynomial of G/P_theta")
    p.add_argument("--spec", required=True)
    p.add_argument("--theta", help="comma separated simple-root indices")
    p.add_argument("--emit", choices=["cells", "poincare", "json"])

    p = sub.add_parser("morse", parents=[common], help="Morse indices of L_q on the orbit of p")
    p.add_argument("--spec", required=True)
    p.add_argument("--p", required=True, help="simple-root values (rank many) or ambient coordinates")
    p.add_argument("--q", required=True)
    p.add_argument("--emit", choices=["indices", "report", "json"])

    p = sub.add_parser("reduced", parents=[common], help="reduced S^2 model of the exceptional cases")
    p.add_argument("--case", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--n", type=int)
    p.add_argument("--p", help="point of S^2 as x,y,z (random regular point if omitted)")
    p.add_argument("--dir", help="projected normal direction as x,y,z")
    p.add_argument("--t", type=float, help="circle parameter for the schedule")
    p.add_argument("--q-param", type=float, help="distance of q along the normal geodesic")
    p.add_argument("--q3", help="q in the S^3 model as four numbers, for --emit tautness")
    p.add_argument("--singular", action="store_const", const=True, help="p lies on a singular circle")
    p.add_argument("--emit", choices=["schedule", "collapses", "cycle", "tautness", "json"])

    p = sub.add_parser("verify", parents=[common], help="numerical shape-operator oracle")
    p.add_argument("--case", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--emit", choices=["summary", "json"])

    p = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    p.add_argument("--emit", choices=["table", "json"])
    return parser


# Defaults live here rather than in argparse so that config-file values can fill
# any flag the user did not pass.
_DEFAULTS = {"emit": "json", "theta": "", "n": 2, "t": 0.0, "q_param": 3.0, "samples": 20, "singular": False}
_TYPES = {"singular": lambda v: v.lower() in ("1", "true", "yes"), "seed": int, "threads": int, "tol": float, "n": int, "case": int, "samples": int, "t": float, "q_param": float}


def resolve(args: argparse.Namespace) -> RunConfig:
    file_values = read_config(args.config)
    opts = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    for key, raw in file_values.items():
        if key in opts and opts[key] is None:
            opts[key] = _TYPES.get(key, str)(raw)
        elif key not in opts:
            raise ValueError(f"unknown config key {key!r}")
    for key, value in _DEFAULTS.items():
        if key in opts and opts[key] is None:
            opts[key] = value
    return RunConfig(
        subcommand=args.subcommand,
        options=opts,
        seed=opts.pop("seed") or 0,
        threads=thread_width(opts.pop("threads")),
        tolerance=opts.pop("tol") or 1e-6,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve(args)
        log.info("running %s with seed %d on %d threads", cfg.subcommand, cfg.seed, cfg.threads)
        return COMMANDS[cfg.subcommand](cfg)
    except (TautCyclesError, ValueError, OSError, json.JSONDecodeError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
