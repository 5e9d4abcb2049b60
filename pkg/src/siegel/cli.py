"""``siegel`` command line.

Every command reads JSON files and prints UTF-8 JSON (or CSV for
``sweep --out csv``) on stdout.  ``SIEGEL_SEED`` sets the seed of every
sampling step.  Indices in inputs and outputs are 1-based.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .configuration import Configuration, admissibility, gale_dual, gale_transform
from .corpus import rng
from .jsonio import (
    config_from_json,
    config_to_json,
    dumps,
    load_json,
    matrix_from_json,
    matrix_to_json,
    one_based,
    point_from_json,
    point_to_json,
)
from .leaf import SolverSettings, minimize, retract, xap_residual
from .projection import DEFAULT_SCHEDULE, mac_contains, project_combinatorial, project_plimit, sweep
from .simplicial import build_complex, realize_polytope
from .suites import SUITES, run_suite
from .verification import Stratum, cube_sample, jacobian_rank, orthant_sample, rigidity_check


class CLIError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def parse_schedule(text: str) -> tuple[float, ...]:
    """``"2:1024:x2"`` (geometric), ``"1:10:+1"`` (arithmetic) or ``"2,4,8"``."""
    if ":" not in text:
        return tuple(float(v) for v in text.split(","))
    try:
        start, stop, step = text.split(":")
        a, b = float(start), float(stop)
        out = []
        if step.startswith("x"):
            f = float(step[1:])
            if f <= 1:
                raise ValueError
            while a <= b * (1 + 1e-12):
                out.append(a)
                a *= f
        else:
            s = float(step.lstrip("+"))
            if s <= 0:
                raise ValueError
            while a <= b + 1e-12:
                out.append(a)
                a += s
    except ValueError:
        raise CLIError(f"bad schedule {text!r}; use START:STOP:xFACTOR, START:STOP:+STEP or a comma list")
    return tuple(out)


def _leaf_json(lm) -> dict:
    return {
        "p": lm.p,
        "T": lm.T,
        "f_p": point_to_json(lm.f_p),
        "norm": lm.norm,
        "residual": lm.residual,
        "iterations": lm.iterations,
    }


def _projection_json(A: Configuration, res) -> dict:
    mem = mac_contains(build_complex(A), res.y)
    out = {
        "method": res.method,
        "y": point_to_json(res.y),
        "T_inf": res.T_inf,
        "r": res.r,
        "c": res.c,
        "sigma": one_based(res.sigma),
        "u": res.u,
        "phases": point_to_json(res.phases),
        "lsq_residual": res.lsq_residual,
        "flagged": res.flagged,
        "reconstruction_error": res.reconstruction_error,
        "certificate": {
            "inside": mem.inside,
            "max_norm": mem.max_norm,
            "strict_set": one_based(mem.strict_set),
            "carrier": one_based(mem.carrier),
        },
    }
    if res.increments:
        out["schedule"] = list(res.schedule)
        out["increments"] = list(res.increments)
    return out


def _request(ns) -> tuple[Configuration, object, dict]:
    """Configuration and point from either ``cfg --point pt`` or a single
    request document ``{configuration, point, p, settings}``."""
    doc = load_json(ns.config)
    if "configuration" in doc:
        return config_from_json(doc["configuration"]), point_from_json(doc["point"]), doc
    if ns.point is None:
        raise CLIError("--point is required unless the input is a request document")
    return config_from_json(doc), point_from_json(load_json(ns.point)), {}


def _settings_from(doc: dict, ns) -> SolverSettings:
    s = doc.get("settings", {})
    return SolverSettings(
        tol=float(s.get("tol", ns.tol)),
        max_iter=int(s.get("max_iter", ns.max_iter)),
        shrink=float(s.get("shrink", 0.5)),
        sufficient_decrease=float(s.get("sufficient_decrease", 1e-4)),
    )


def _p_from(doc: dict, ns) -> float:
    p = doc.get("p", ns.p)
    if p is None:
        raise CLIError("--p is required")
    return float(p)


def _batch(ns, handle: Callable[[dict], dict]) -> list[str]:
    """JSON-lines mode: each input line is a request document."""
    text = sys.stdin.read() if ns.batch == "-" else Path(ns.batch).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        try:
            out.append(dumps(handle(json.loads(line)), indent=None))
        except Exception as exc:  # noqa: BLE001 - reported per line
            out.append(dumps({"error": f"{type(exc).__name__}: {exc}"}, indent=None))
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_admissible(ns):
    A = config_from_json(load_json(ns.config))
    rep = admissibility(A)
    return {
        "admissible": rep.admissible,
        "siegel": rep.siegel,
        "weak_hyperbolicity": rep.weak_hyperbolicity,
        "centered": rep.centered,
        "siegel_certificate": list(rep.siegel_certificate.lam) if rep.siegel_certificate else None,
        "violating": one_based(rep.violating),
        "violating_certificate": list(rep.violating_certificate.lam) if rep.violating_certificate else None,
    }


def cmd_gale(ns):
    doc = load_json(ns.input)
    if "V" in doc:
        return config_to_json(gale_transform(matrix_from_json(doc), ns.d))
    return matrix_to_json(gale_dual(config_from_json(doc)))


def cmd_complex(ns):
    A = config_from_json(load_json(ns.config))
    K = build_complex(A)
    out = K.to_json()
    if A.is_centered:
        real = realize_polytope(A)
        out["polytope"] = {
            "dimension": real.dim,
            "vertices": one_based(real.vertex_indices),
            "interior": one_based(real.interior_indices),
            "boundary_equals_K": real.boundary == K,
        }
    return out


def _minimize_one(A, z, p, settings):
    return _leaf_json(minimize(A, z, p, settings))


def _retract_one(A, z, p, settings):
    x = retract(A, z, p, settings)
    moment, norm = xap_residual(A, x, p)
    return {"p": p, "x": point_to_json(x), "moment_residual": moment, "norm_residual": norm}


def _leaf_command(fn):
    def run(ns):
        if ns.batch:
            def handle(req):
                A = config_from_json(req["configuration"])
                return fn(A, point_from_json(req["point"]), _p_from(req, ns), _settings_from(req, ns))
            return _batch(ns, handle)
        if ns.config is None:
            raise CLIError("a configuration or request file is required")
        A, z, doc = _request(ns)
        return fn(A, z, _p_from(doc, ns), _settings_from(doc, ns))
    return run


def _project_one(A, z, method, schedule, settings):
    if method == "combinatorial":
        return _projection_json(A, project_combinatorial(A, z))
    return _projection_json(A, project_plimit(A, z, schedule, settings))


def cmd_project(ns):
    schedule = parse_schedule(ns.p_schedule) if ns.p_schedule else DEFAULT_SCHEDULE
    if ns.batch:
        def handle(req):
            A = config_from_json(req["configuration"])
            return _project_one(A, point_from_json(req["point"]), req.get("method", ns.method),
                                schedule, _settings_from(req, ns))
        return _batch(ns, handle)
    A, z, doc = _request(ns)
    return _project_one(A, z, doc.get("method", ns.method), schedule, _settings_from(doc, ns))


def cmd_sweep(ns):
    A, z, doc = _request(ns)
    schedule = parse_schedule(ns.p_schedule)
    rows = sweep(A, z, schedule, _settings_from(doc, ns))
    if ns.out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p"] + [f"T{k + 1}" for k in range(A.d)] + ["norm_p", "x_inf", "residual"])
        for r in rows:
            w.writerow([format(v, ".17g") for v in [r.p, *r.T, r.norm, r.x_inf, r.residual]])
        return buf.getvalue()
    return {"rows": [{"p": r.p, "T": r.T, "norm_p": r.norm, "x_inf": r.x_inf, "residual": r.residual}
                     for r in rows]}


def _perm(text: str, m: int) -> list[int]:
    perm = [int(v) - 1 for v in text.split(",")]
    if sorted(perm) != list(range(m)):
        raise CLIError(f"--perm must be a permutation of 1..{m}")
    return perm


def cmd_rigidity(ns):
    A = config_from_json(load_json(ns.config_a))
    B = config_from_json(load_json(ns.config_b))
    perm = _perm(ns.perm, A.m) if ns.perm else list(range(A.m))
    rep = rigidity_check(A, B, perm, ns.samples, rng(), ns.tol_check)
    return {
        "permutation": one_based(rep.permutation),
        "diagram_residual": rep.diagram_residual,
        "direct_residual": rep.direct_residual,
        "commutativity_residual": rep.commutativity_residual,
        "isomorphism": rep.isomorphism,
        "passed": rep.passed,
        "n_samples": rep.n_samples,
        "tolerance": rep.tol,
    }


def _parse_stratum(text: str) -> Stratum:
    if text == "orthant":
        return Stratum("orthant")
    if text.startswith("cube:"):
        return Stratum("cube", [int(v) - 1 for v in text[5:].split(",") if v])
    raise CLIError("--stratum must be 'orthant' or 'cube:i,j,...'")


def cmd_jacobian(ns):
    A = config_from_json(load_json(ns.config))
    stratum = _parse_stratum(ns.stratum)
    gen = rng()
    if ns.point:
        points = [point_from_json(load_json(ns.point)).coords]
    elif stratum.kind == "cube":
        points = [cube_sample(gen, A, stratum.face) for _ in range(ns.samples)]
    else:
        points = [orthant_sample(gen, A) for _ in range(ns.samples)]
    certs = []
    for y in points:
        c = jacobian_rank(A, stratum, y, ns.h)
        certs.append({
            "point": np.real(c.point),
            "singular_values": list(c.singular_values),
            "rank": c.rank,
            "expected_rank": c.expected_rank,
            "margin": c.margin,
            "richardson": c.richardson,
            "passed": c.passed,
        })
    return {
        "stratum": {"kind": stratum.kind, "face": one_based(stratum.face)},
        "h": ns.h,
        "certified": "at sample points only",
        "passed": all(c["passed"] for c in certs),
        "certificates": certs,
    }


def cmd_verify(ns):
    rep = run_suite(ns.suite)
    return rep.to_json()


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _solver_flags(p):
    p.add_argument("--tol", type=float, default=1e-12, help="residual tolerance")
    p.add_argument("--max-iter", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegel", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("admissible", help="Siegel condition, weak hyperbolicity, centering")
    p.add_argument("config")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("gale", help="dual tuple of a configuration, or configuration of a V")
    p.add_argument("input")
    p.add_argument("--d", type=int, default=None, help="expected d when transforming V")
    p.set_defaults(func=cmd_gale)

    p = sub.add_parser("complex", help="K_A and the dual polytope")
    p.add_argument("config")
    p.set_defaults(func=cmd_complex)

    for name, fn, helptext in (("minimize", _minimize_one, "norm minimum on one leaf"),
                               ("retract", _retract_one, "retraction onto X_A(p)")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", nargs="?", help="configuration or request document")
        p.add_argument("--point")
        p.add_argument("--p", type=float, default=None)
        p.add_argument("--batch", help="JSON-lines request file ('-' for stdin)")
        _solver_flags(p)
        p.set_defaults(func=_leaf_command(fn))

    p = sub.add_parser("project", help="projection onto the moment-angle complex")
    p.add_argument("config", nargs="?")
    p.add_argument("--point")
    p.add_argument("--method", choices=("combinatorial", "plimit"), default="combinatorial")
    p.add_argument("--p-schedule", default=None)
    p.add_argument("--batch")
    _solver_flags(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("sweep", help="T_p along a p schedule")
    p.add_argument("config")
    p.add_argument("--point")
    p.add_argument("--p-schedule", default="2:1024:x2")
    p.add_argument("--out", choices=("json", "csv"), default="json")
    _solver_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rigidity", help="X_A(2) vs X_A'(2) under a vertex bijection")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--perm", help="comma list, 1-based: coordinate i goes to slot perm[i]")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--tol-check", type=float, default=1e-8)
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("jacobian", help="finite-difference rank of the L2 retraction on a stratum")
    p.add_argument("config")
    p.add_argument("--stratum", required=True, help="'orthant' or 'cube:i,j,...' (1-based)")
    p.add_argument("--point")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--h", type=float, default=1e-5)
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("verify", help="run a bundled invariant suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        out = ns.func(ns)
    except (CLIError, ValueError, RuntimeError, OSError, KeyError) as exc:
        print(f"siegel {ns.command}: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, list):
        sys.stdout.write("".join(line + "\n" for line in out))
    elif isinstance(out, str):
        sys.stdout.write(out)
    else:
        sys.stdout.write(dumps(out) + "\n")
    if ns.command == "verify" and not out["passed"]:
        return 1
    if ns.command in ("rigidity", "jacobian") and not out["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
