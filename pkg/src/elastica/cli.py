"""Command-line interface: solve, analyze, generate domains, run recipes.

Exit codes: 0 success (and solver converged), 2 solver stopped without
converging (iteration budget or stalled line search), 1 invalid input.
The ELASTICA_LOG environment variable (error | info | debug) controls
verbosity on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys

from .analyze import analyze_curve, report_to_jsonable
from .curve import ClosedCurve, circle, curve_from_json, curve_to_json, length
from .domain import (
    DomainSpec,
    disk,
    domain_from_json,
    domain_to_json,
    ellipse_domain,
    stadium,
    two_drops_layout,
)
from .errors import ElasticaError, InvalidParameters
from .solver import SolveReport, SolverConfig, Termination, minimize, seed_from_boundary_offset
from .svg import save_svg

log = logging.getLogger("elastica")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2


class _Parser(argparse.ArgumentParser):
    """argparse that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _write_text(path: str, text: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_domain(path: str) -> DomainSpec:
    return domain_from_json(_read_text(path))


def _load_curve(path: str) -> ClosedCurve:
    """Accept a bare curve file or a solve report containing one."""
    text = _read_text(path)
    data = json.loads(text)
    if isinstance(data, dict) and "curve" in data and "points" not in data:
        return curve_from_json(json.dumps(data["curve"]))
    return curve_from_json(text)


def _load_config(path: str | None) -> SolverConfig:
    if path is None:
        return SolverConfig()
    data = json.loads(_read_text(path))
    if not isinstance(data, dict):
        raise InvalidParameters("solver config must be a JSON object")
    try:
        return SolverConfig(**data)
    except TypeError as exc:
        raise InvalidParameters(f"bad solver config: {exc}") from exc


def _solve_report_json(report: SolveReport) -> str:
    data = {
        "termination": report.termination.value,
        "iters": report.iters,
        "final_energy": report.final_energy,
        "final_violation": report.final_violation,
        "n": report.final_curve.n,
        "curve": {"points": [[float(x), float(y)] for x, y in report.final_curve.points]},
        "energy_trace": [list(row) for row in report.energy_trace],
    }
    return json.dumps(data)


def _write_trace_csv(path: str, report: SolveReport) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "mu", "bending_energy", "penalty", "max_violation", "step"])
        for row in report.trace_rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _analysis_markers(curve, domain, self_tol):
    from .analyze import boundary_contacts, self_contacts

    points = []
    pairs = []
    try:
        if domain is not None:
            points = [a.point for a in boundary_contacts(curve, domain)]
        tol = self_tol if self_tol is not None else max(
            1e-3 * curve.bbox_diag(), length(curve) / curve.n
        )
        pairs = [(c.i, c.j) for c in self_contacts(curve, tol)]
    except ElasticaError:
        pass
    return points, pairs


def _parse_circle_spec(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidParameters("--init-circle expects CX,CY,R")
    try:
        cx, cy, r = (float(p) for p in parts)
    except ValueError as exc:
        raise InvalidParameters(f"--init-circle expects numbers: {exc}") from exc
    return cx, cy, r


def cmd_minimize(args) -> int:
    domain = _load_domain(args.domain)
    if args.init is not None:
        init = _load_curve(args.init)
    else:
        cx, cy, r = _parse_circle_spec(args.init_circle)
        init = circle((cx, cy), r, n=256)
    config = _load_config(args.config)
    log.info("minimize: domain=%s n=%d", args.domain, config.N)
    report = minimize(init, domain, config)
    log.info(
        "minimize: termination=%s iters=%d W=%.6g violation=%.3g",
        report.termination.value, report.iters, report.final_energy, report.final_violation,
    )
    if args.out:
        _write_text(args.out, _solve_report_json(report))
    if args.trace:
        _write_trace_csv(args.trace, report)
    if args.svg:
        points, pairs = _analysis_markers(report.final_curve, domain, None)
        parent = os.path.dirname(os.path.abspath(args.svg))
        os.makedirs(parent, exist_ok=True)
        save_svg(args.svg, report.final_curve, domain, points, pairs)
    print(
        f"termination={report.termination.value} iters={report.iters} "
        f"energy={report.final_energy:.6g} violation={report.final_violation:.3g}"
    )
    return EXIT_OK if report.termination is Termination.Converged else EXIT_NOT_CONVERGED


def cmd_analyze(args) -> int:
    curve = _load_curve(args.curve)
    domain = _load_domain(args.domain) if args.domain else None
    self_tol = args.self_tol
    if args.self_tol_edges is not None:
        if self_tol is not None:
            raise InvalidParameters("give only one of --self-tol / --self-tol-edges")
        self_tol = args.self_tol_edges * length(curve) / curve.n
    contact, structure = analyze_curve(
        curve,
        domain,
        boundary_tol=args.boundary_tol,
        self_tol=self_tol,
        tol_angle=args.tol_angle,
        grid_resolution=args.grid,
    )
    text = json.dumps(report_to_jsonable(contact, structure))
    if args.out:
        _write_text(args.out, text)
    else:
        print(text)
    if args.svg:
        points = [a.point for a in contact.boundary_arcs]
        pairs = [(c.i, c.j) for c in contact.self_couples]
        parent = os.path.dirname(os.path.abspath(args.svg))
        os.makedirs(parent, exist_ok=True)
        save_svg(args.svg, curve, domain, points, pairs)
    log.info(
        "analyze: arcs=%d couples=%d non_crossing=%s nested=%s",
        len(contact.boundary_arcs), len(contact.self_couples),
        structure.non_crossing, structure.nested,
    )
    return EXIT_OK


def _build_generator_domain(name: str, args):
    if name == "two-drops":
        layout = two_drops_layout(args.eps, args.ring_radius, args.ring_span, args.drop_scale)
        return layout.domain, layout
    if name == "stadium":
        return stadium(args.length, args.radius), None
    if name == "ellipse":
        return ellipse_domain(args.a, args.b, args.sides), None
    if name == "disk":
        return disk(args.cx, args.cy, args.r), None
    raise InvalidParameters(f"unknown generator {name!r}")


def cmd_domain(args) -> int:
    domain, layout = _build_generator_domain(args.generator, args)
    text = domain_to_json(domain)
    if args.out:
        _write_text(args.out, text)
    else:
        print(text)
    if args.init_out:
        if layout is None:
            raise InvalidParameters("--init-out is only available for two-drops")
        loop = layout.traversal_loop(args.init_n)
        _write_text(args.init_out, curve_to_json(loop))
    if args.svg:
        parent = os.path.dirname(os.path.abspath(args.svg))
        os.makedirs(parent, exist_ok=True)
        save_svg(args.svg, None, domain)
    return EXIT_OK


def _recipe_path(base_dir: str, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _recipe_domain(spec, base_dir: str):
    if not isinstance(spec, dict):
        raise InvalidParameters("recipe domain must be an object")
    if "file" in spec:
        return _load_domain(_recipe_path(base_dir, spec["file"])), None
    if "generator" in spec:
        params = spec.get("params", {})
        name = spec["generator"]
        if name == "two-drops":
            layout = two_drops_layout(**params)
            return layout.domain, layout
        if name == "stadium":
            return stadium(**params), None
        if name == "ellipse":
            return ellipse_domain(**params), None
        if name == "disk":
            return disk(**params), None
        raise InvalidParameters(f"unknown generator {name!r}")
    if "spec" in spec:
        return domain_from_json(json.dumps(spec["spec"])), None
    raise InvalidParameters("recipe domain needs 'file', 'generator', or 'spec'")


def _recipe_init(spec, base_dir: str, domain, layout):
    if not isinstance(spec, dict):
        raise InvalidParameters("recipe init must be an object")
    if "file" in spec:
        return _load_curve(_recipe_path(base_dir, spec["file"]))
    if "circle" in spec:
        cx, cy, r = (float(v) for v in spec["circle"])
        return circle((cx, cy), r, n=int(spec.get("n", 256)))
    if "boundary_offset" in spec:
        return seed_from_boundary_offset(
            domain, float(spec["boundary_offset"]), n=int(spec.get("n", 512))
        )
    if "drops_trace" in spec:
        if layout is None:
            raise InvalidParameters("'drops_trace' init needs the two-drops generator")
        return layout.traversal_loop(int(spec.get("n", 1024)))
    raise InvalidParameters(
        "recipe init needs 'file', 'circle', 'boundary_offset', or 'drops_trace'"
    )


def cmd_run(args) -> int:
    base_dir = os.path.dirname(os.path.abspath(args.recipe))
    recipe = json.loads(_read_text(args.recipe))
    if not isinstance(recipe, dict):
        raise InvalidParameters("recipe must be a JSON object")
    name = recipe.get("name", os.path.basename(args.recipe))
    domain, layout = _recipe_domain(recipe.get("domain", {}), base_dir)
    init = _recipe_init(recipe.get("init", {}), base_dir, domain, layout)
    config = SolverConfig(**recipe.get("config", {}))
    log.info("run %s: n=%d", name, config.N)
    report = minimize(init, domain, config)
    outputs = recipe.get("outputs", {})
    if "report" in outputs:
        _write_text(_recipe_path(base_dir, outputs["report"]), _solve_report_json(report))
    if "trace" in outputs:
        _write_trace_csv(_recipe_path(base_dir, outputs["trace"]), report)

    analyses = recipe.get("analyses", {})
    analysis_text = None
    if analyses.get("structure"):
        self_tol = analyses.get("self_tol")
        if self_tol == "mean-edge":
            self_tol = length(report.final_curve) / report.final_curve.n
        contact, structure = analyze_curve(
            report.final_curve,
            domain,
            boundary_tol=analyses.get("boundary_tol"),
            self_tol=self_tol,
            tol_angle=float(analyses.get("tol_angle", 5.0)),
            grid_resolution=int(analyses.get("grid_resolution", 64)),
        )
        analysis_text = json.dumps(report_to_jsonable(contact, structure))
        if "analysis" in outputs:
            _write_text(_recipe_path(base_dir, outputs["analysis"]), analysis_text)
    if "svg" in outputs:
        points, pairs = _analysis_markers(
            report.final_curve, domain,
            None if analyses.get("self_tol") != "mean-edge"
            else length(report.final_curve) / report.final_curve.n,
        )
        save_svg(
            _recipe_path(base_dir, outputs["svg"]), report.final_curve, domain, points, pairs
        )
    print(
        f"{name}: termination={report.termination.value} iters={report.iters} "
        f"energy={report.final_energy:.6g} violation={report.final_violation:.3g}"
    )
    return EXIT_OK if report.termination is Termination.Converged else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elastica", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_min = sub.add_parser("minimize", help="minimize bending energy in a domain")
    p_min.add_argument("--domain", required=True, help="domain JSON file")
    group = p_min.add_mutually_exclusive_group(required=True)
    group.add_argument("--init", help="initial curve JSON file")
    group.add_argument("--init-circle", metavar="CX,CY,R", help="initial circle")
    p_min.add_argument("--config", help="solver config JSON file")
    p_min.add_argument("--out", help="solve report JSON output path")
    p_min.add_argument("--trace", help="iteration trace CSV output path")
    p_min.add_argument("--svg", help="rendering output path")
    p_min.set_defaults(func=cmd_minimize)

    p_an = sub.add_parser("analyze", help="structural report for a curve")
    p_an.add_argument("--curve", required=True, help="curve JSON file (or solve report)")
    p_an.add_argument("--domain", help="domain JSON file")
    p_an.add_argument("--out", help="report JSON output path (default: stdout)")
    p_an.add_argument("--boundary-tol", type=float, help="wall contact tolerance")
    p_an.add_argument("--self-tol", type=float, help="self-contact distance tolerance")
    p_an.add_argument(
        "--self-tol-edges", type=float,
        help="self-contact tolerance in units of the mean edge length",
    )
    p_an.add_argument("--tol-angle", type=float, default=5.0, help="tangential angle (deg)")
    p_an.add_argument("--grid", type=int, default=64, help="winding grid resolution")
    p_an.add_argument("--svg", help="rendering output path")
    p_an.set_defaults(func=cmd_analyze)

    p_dom = sub.add_parser("domain", help="generate a domain JSON file")
    dom_sub = p_dom.add_subparsers(dest="generator", required=True)

    p_td = dom_sub.add_parser("two-drops", help="two drops joined by a circular corridor")
    p_td.add_argument("--eps", type=float, default=0.05, help="corridor half-width")
    p_td.add_argument("--ring-radius", type=float, default=2.0)
    p_td.add_argument("--ring-span", type=float, default=1.5 * math.pi,
                      help="connector arc amplitude in radians (> pi)")
    p_td.add_argument("--drop-scale", type=float, default=1.0)

    p_st = dom_sub.add_parser("stadium", help="capsule around a horizontal segment")
    p_st.add_argument("--length", type=float, required=True)
    p_st.add_argument("--radius", type=float, required=True)

    p_el = dom_sub.add_parser("ellipse", help="ellipse as intersection of half-planes")
    p_el.add_argument("--a", type=float, required=True)
    p_el.add_argument("--b", type=float, required=True)
    p_el.add_argument("--sides", type=int, default=256)

    p_dk = dom_sub.add_parser("disk", help="round disk")
    p_dk.add_argument("--cx", type=float, default=0.0)
    p_dk.add_argument("--cy", type=float, default=0.0)
    p_dk.add_argument("--r", type=float, required=True)

    for p in (p_td, p_st, p_el, p_dk):
        p.add_argument("--out", help="domain JSON output path (default: stdout)")
        p.add_argument("--svg", help="render the domain wall to SVG")
        p.add_argument("--init-out", help="write a traversal seed curve (two-drops only)")
        p.add_argument("--init-n", type=int, default=1024, help="seed curve vertex count")
        p.set_defaults(func=cmd_domain)

    p_run = sub.add_parser("run", help="execute an experiment recipe")
    p_run.add_argument("recipe", help="recipe JSON file")
    p_run.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("ELASTICA_LOG", "error").strip().lower(), logging.ERROR
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return EXIT_OK
        return code if isinstance(code, int) else EXIT_INPUT
    except ElasticaError as exc:
        print(f"elastica: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"elastica: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
