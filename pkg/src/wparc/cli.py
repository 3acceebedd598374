"""Command line front end.

Every command prints one document (JSON by default, or CSV) carrying the
schema version and the seed.  Exit status: 0 success, 1 a verification
residual exceeded its tolerance, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import limits, metrics, twist, wp_poisson
from ._validation import parse_arc_map
from .hyptrig import GeometryError
from .surface import Surface, SurfaceError, bundled_surface, fmt, load_surface

SCHEMA = "wparc-cli/1"
DEFAULT_SEED = 0
COMMANDS = ("validate", "geom", "poisson", "casimir", "jacobi", "limit-kontsevich",
            "penner-duality", "twist", "flip", "spine")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wparc", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--surface", help="surface JSON file, or a bundled name")
    p.add_argument("--lengths", help="JSON object arc id -> a-length (random if omitted)")
    p.add_argument("--lambda", dest="lam", help="JSON object arc id -> lambda-length")
    p.add_argument("--scenario", help="twist scenario JSON (command twist)")
    p.add_argument("--arc", type=int, help="arc to flip (command flip)")
    p.add_argument("--tol", type=float, help="verification tolerance")
    p.add_argument("--fd-step", type=float, help="relative finite-difference step")
    p.add_argument("--t-list", default="1,0.3,0.1,0.03,0.01",
                   help="comma-separated decreasing scale factors")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the document here instead of stdout")
    return p


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read_json(path: str, what: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{what}: {path} is not UTF-8") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _surface(args) -> Surface:
    if not args.surface:
        raise InputError("--surface is required for this command")
    path = Path(args.surface)
    try:
        if path.exists():
            return load_surface(path)
        return bundled_surface(args.surface)
    except SurfaceError as exc:
        raise InputError(f"surface {args.surface}: {exc}") from None


def _vector(args, surface: Surface, path_attr: str, what: str, rng, low: float, high: float):
    path = getattr(args, path_attr)
    if path is None:
        return rng.uniform(low, high, surface.arc_count), "random"
    try:
        return parse_arc_map(_read_json(path, what), surface.arc_count, what), path
    except SurfaceError as exc:
        raise InputError(str(exc)) from None


def _t_list(text: str) -> list:
    try:
        ts = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--t-list: not a list of numbers: {text!r}") from None
    if not ts or any(t <= 0 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise InputError("--t-list must be strictly decreasing positive numbers")
    return ts


def _tol(args, default: float) -> float:
    tol = default if args.tol is None else args.tol
    if not tol > 0:
        raise InputError("--tol must be positive")
    return tol


def _step(args, default: float) -> float:
    step = default if args.fd_step is None else args.fd_step
    if not step > 0:
        raise InputError("--fd-step must be positive")
    return step


def _arc_map(v) -> dict:
    return {str(i): float(x) for i, x in enumerate(v)}


def _matrix(m) -> list:
    return [[float(x) for x in row] for row in np.asarray(m)]


# ---------------------------------------------------------------------------
# commands: each returns (document, csv rows or None, passed)
# ---------------------------------------------------------------------------

def cmd_validate(args, rng):
    s = _surface(args)
    g, n = s.genus_and_boundary()
    cycles = [[fmt(x) for x in cyc] for cyc in s.boundary_cycles()]
    doc = {"surface": s.name, "genus": g, "boundary_components": n,
           "euler_characteristic": 2 - 2 * g - n, "arcs": s.arc_count,
           "hexagons": s.hexagon_count, "boundary_cycles": cycles}
    rows = [["key", "value"]] + [[k, doc[k]] for k in
                                 ("surface", "genus", "boundary_components",
                                  "euler_characteristic", "arcs", "hexagons")]
    return doc, rows, True


def cmd_geom(args, rng):
    s = _surface(args)
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    hg = metrics.hexagon_geometry(s, a)
    bg = metrics.boundary_geometry(s, a)
    w = metrics.widths(s, a)
    d_table = {}
    for cyc in bg.cycles:
        for y in cyc:
            for y2 in cyc:
                if y != y2:
                    d_table[f"{fmt(y)}->{fmt(y2)}"] = float(bg.d(y, y2))
    hexes = []
    for t, h in enumerate(s.hexagons):
        hexes.append({"sides": [fmt(x) for x in h],
                      "b": [float(x) for x in hg.b_lengths[t]],
                      "half_widths": [float(x) for x in hg.half_widths[t]],
                      "angles": [None if math.isnan(x) else float(x) for x in hg.angles[t]]})
    doc = {"surface": s.name, "lengths_source": src, "a": _arc_map(a),
           "s": _arc_map(metrics.s_lengths(a)), "widths": _arc_map(w),
           "perimeters": [float(p) for p in bg.perimeters], "hexagons": hexes,
           "boundary_distance": d_table}
    rows = [["arc", "a", "s", "width"]] + [
        [i, float(a[i]), float(np.cosh(a[i] / 2)), float(w[i])] for i in range(s.arc_count)]
    return doc, rows, True


def cmd_poisson(args, rng):
    s = _surface(args)
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    H = wp_poisson.wp_bivector(s, a)
    doc = {"surface": s.name, "lengths_source": src, "a": _arc_map(a), "H": _matrix(H)}
    rows = [["i"] + [f"a{j}" for j in range(s.arc_count)]] + [
        [i] + [float(x) for x in H[i]] for i in range(s.arc_count)]
    return doc, rows, True


def cmd_casimir(args, rng):
    s = _surface(args)
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    tol = _tol(args, 1e-7)
    step = _step(args, wp_poisson.GRADIENT_STEP)
    n = len(s.boundary_cycles())
    res = [wp_poisson.casimir_residual(s, a, c, step, scaled=True) for c in range(n)]
    worst = max(res)
    doc = {"surface": s.name, "lengths_source": src, "a": _arc_map(a), "fd_step": step,
           "residuals": res, "residual": worst, "tolerance": tol, "passed": worst <= tol}
    rows = [["component", "residual", "tolerance"]] + [[c, r, tol] for c, r in enumerate(res)]
    return doc, rows, worst <= tol


def cmd_jacobi(args, rng):
    s = _surface(args)
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    tol = _tol(args, 1e-5)
    step = _step(args, wp_poisson.JACOBI_STEP)
    J = wp_poisson.jacobi_tensor(s, a, step)
    n = s.arc_count
    triples = [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
    res = [float(abs(J[t])) for t in triples]
    worst = max(res) if res else 0.0
    doc = {"surface": s.name, "lengths_source": src, "a": _arc_map(a), "fd_step": step,
           "residuals": {f"{i},{j},{k}": r for (i, j, k), r in zip(triples, res)},
           "residual": worst, "tolerance": tol, "passed": worst <= tol}
    rows = [["i", "j", "k", "residual", "tolerance"]] + [
        [*t, r, tol] for t, r in zip(triples, res)]
    return doc, rows, worst <= tol


def cmd_limit(args, rng):
    s = _surface(args)
    a0, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    tol = _tol(args, 1e-2)
    step = _step(args, wp_poisson.GRADIENT_STEP)
    table = limits.large_boundary_limit_study(s, a0, _t_list(args.t_list), step)
    dev = [r.deviation for r in table]
    monotone = all(b < a for a, b in zip(dev, dev[1:]))
    passed = monotone and dev[-1] <= tol
    doc = {"surface": s.name, "lengths_source": src, "a0": _arc_map(a0), "fd_step": step,
           "rows": [{"t": r.t, "delta": r.deviation, "sign_match": r.sign_match}
                    for r in table],
           "monotone": monotone, "residual": dev[-1], "tolerance": tol, "passed": passed}
    rows = [["t", "delta"]] + [[r.t, r.deviation] for r in table]
    return doc, rows, passed


def cmd_penner(args, rng):
    s = _surface(args)
    lam, src = _vector(args, s, "lam", "lambda", rng, 0.5, 2.0)
    tol = _tol(args, 1e-7)
    step = _step(args, wp_poisson.GRADIENT_STEP)
    d = limits.DecoratedSurface(s, tuple(lam))
    res = limits.duality_residuals(d, step)
    worst = float(np.max(res))
    doc = {"surface": s.name, "lambda_source": src, "lambda": _arc_map(lam), "fd_step": step,
           "residuals": [float(x) for x in res], "residual": worst, "tolerance": tol,
           "passed": worst <= tol}
    rows = [["arc", "residual", "tolerance"]] + [[i, float(r), tol] for i, r in enumerate(res)]
    return doc, rows, worst <= tol


def cmd_twist(args, rng):
    if not args.scenario:
        raise InputError("--scenario is required for twist")
    try:
        sc = twist.TwistScenario.from_dict(_read_json(args.scenario, "scenario"))
    except (GeometryError, TypeError) as exc:
        raise InputError(f"scenario: {exc}") from None
    coeffs = [twist.coefficient_c(x, sc.h) for x in sc.items]
    c0 = [math.cos(z.alpha) for z in sc.distant]
    total = twist.twist_derivative_distance(sc)
    doc = {"scenario": sc.to_dict(), "coefficients": coeffs, "distant_terms": c0,
           "derivative": total}
    rows = [["term", "value"]] + [[f"c{x.target}[{n}]", c] for n, (x, c) in
                                  enumerate(zip(sc.items, coeffs))]
    rows += [[f"c0[{n}]", c] for n, c in enumerate(c0)] + [["total", total]]
    return doc, rows, True


def cmd_flip(args, rng):
    s = _surface(args)
    if args.arc is None:
        raise InputError("--arc is required for flip")
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    try:
        s2, a2 = metrics.flip(s, a, args.arc)
    except SurfaceError as exc:
        raise InputError(str(exc)) from None
    drift = float(np.max(np.abs(np.sort(metrics.perimeters(s2, a2))
                                - np.sort(metrics.perimeters(s, a)))))
    tol = _tol(args, 1e-8)
    doc = {"surface": s.name, "lengths_source": src, "arc": args.arc, "a": _arc_map(a),
           "flipped_surface": s2.to_dict(), "flipped_lengths": _arc_map(a2),
           "residual": drift, "tolerance": tol, "passed": drift <= tol}
    rows = [["arc", "a", "flipped_a"]] + [[i, float(a[i]), float(a2[i])]
                                          for i in range(s.arc_count)]
    return doc, rows, drift <= tol


def cmd_spine(args, rng):
    s = _surface(args)
    a, src = _vector(args, s, "lengths", "lengths", rng, 0.5, 2.5)
    r = metrics.spine_search(s, a)
    doc = {"surface": s.name, "lengths_source": src, "a": _arc_map(a), "flips": r.flips,
           "spine_surface": r.surface.to_dict(), "spine_lengths": _arc_map(r.lengths),
           "widths": _arc_map(r.widths), "perimeter_drift": r.perimeter_drift}
    rows = [["arc", "a", "width"]] + [[i, float(r.lengths[i]), float(r.widths[i])]
                                      for i in range(s.arc_count)]
    return doc, rows, True


HANDLERS = {
    "validate": cmd_validate, "geom": cmd_geom, "poisson": cmd_poisson,
    "casimir": cmd_casimir, "jacobi": cmd_jacobi, "limit-kontsevich": cmd_limit,
    "penner-duality": cmd_penner, "twist": cmd_twist, "flip": cmd_flip, "spine": cmd_spine,
}


def render(doc: dict, rows, fmt_: str) -> str:
    if fmt_ == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema={doc['schema']} command={doc['command']} seed={doc['seed']}\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        rng = np.random.default_rng(args.seed)
        body, rows, passed = HANDLERS[args.command](args, rng)
    except InputError as exc:
        print(f"wparc: input error: {exc}", file=stderr)
        return 2
    except (SurfaceError, GeometryError, ValueError) as exc:
        print(f"wparc: input error: {exc}", file=stderr)
        return 2
    doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed, **body}
    text = render(doc, rows, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    if not passed:
        print(f"wparc: {args.command}: residual {doc.get('residual')} exceeds tolerance "
              f"{doc.get('tolerance')}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
