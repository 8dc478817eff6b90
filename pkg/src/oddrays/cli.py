"""Command-line front end.

Every subcommand prints one report (JSON by default, ``key: value`` lines
with ``--text``) and exits with 0 on success, 2 on usage errors, 3 on parse
errors, 4 when the solver gives up on a degenerate system and 5 when an
internal invariant fails.

Conventions: system files and ``--poly`` forms for ``resultant``,
``infinity-check``, ``solve``, ``real-ray`` and ``bezout`` use variables
x0, x1, ... directly. Odd maps (``homogenize``, ``system-build``,
``bu-zero``, ``coincidence``, ``guard``) are written in x1..x_{n+1}; x0 is
reserved for the homogenizing variable and must not occur.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .borsuk_ulam import bu_zero, coincidence, delta_epsilon_guard, fit_odd_poly
from .config import SolverConfig
from .errors import DegenerateSystemError, InputError, OddRaysError
from .homogenize import (HomSystem, OddMap, build_odd_system, homogenize_odd,
                         sphere_substitute)
from .macaulay import macaulay_matrix, resultant_from_matrix, at_infinity_check
from .parser import format_system, parse_poly, read_samples, read_system
from .poly import Poly
from .realray import conjugate_pairing, find_real_ray_odd, perturb_to_generic
from .report import dumps, to_text
from .uresultant import bezout_check, pick_chart, solve_rays

COMMANDS = ("parity", "homogenize", "system-build", "resultant", "infinity-check",
            "solve", "real-ray", "bu-zero", "coincidence", "fit", "guard", "bezout")


class UsageError(InputError):
    code = "usage-error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--system", metavar="FILE", help="system file")
    common.add_argument("--poly", metavar="EXPR", action="append", default=[],
                        help="polynomial expression (repeatable)")
    common.add_argument("--nvars", type=int, help="variable count for --poly input")
    common.add_argument("--seed", type=int)
    common.add_argument("--residual-bound", type=float)
    common.add_argument("--cluster-tol", type=float)
    common.add_argument("--precision", type=int, metavar="BITS")
    common.add_argument("--max-retries", type=int)
    common.add_argument("--chart", type=int, help="chart variable index")
    common.add_argument("--perturb", action="store_true", default=None,
                        help="perturb coefficients when the system is degenerate")
    common.add_argument("--config", metavar="FILE", help="JSON config file")
    common.add_argument("--text", action="store_true", help="plain text output")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock time (breaks byte-identity)")

    parser = _Parser(prog="oddrays", description="Resultant-based solver for "
                     "homogeneous systems and antipodal zeros of odd maps.")
    parser.add_argument("--version", action="version", version=f"oddrays {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    helps = {
        "parity": "odd/even/neither classification",
        "homogenize": "homogenize an odd polynomial and substitute the sphere",
        "system-build": "odd map -> homogeneous odd-degree system",
        "resultant": "Macaulay resultant of k forms in k variables",
        "infinity-check": "test for solution rays in x_chart = 0",
        "solve": "all solution rays with multiplicities",
        "real-ray": "a real solution ray of an odd-degree system",
        "bu-zero": "antipodal zero of an odd map on the sphere",
        "coincidence": "point with g(y) = g(-y)",
        "fit": "fit an odd polynomial map to samples",
        "guard": "distance of a map from the origin on the sphere",
        "bezout": "multiplicity sum versus degree product",
    }
    subs = {name: sub.add_parser(name, parents=[common], help=helps[name])
            for name in COMMANDS}
    subs["resultant"].add_argument("--dump", metavar="FILE",
                                   help="write the Macaulay matrix listing")
    subs["system-build"].add_argument("--system-out", metavar="FILE",
                                      help="write the built system file")
    for name in ("fit", "guard"):
        subs[name].add_argument("--samples", metavar="FILE", help="sample file")
    subs["fit"].add_argument("--degree-cap", type=int, help="override the file's cap")
    subs["guard"].add_argument("--epsilon", type=float)
    subs["guard"].add_argument("--count", type=int, default=2000,
                               help="sphere sample count")
    return parser


# -- input helpers ---------------------------------------------------------------------

def _config(args) -> SolverConfig:
    cfg = SolverConfig.from_file(args.config) if args.config else SolverConfig()
    overrides = {
        "seed": args.seed, "residual_bound": args.residual_bound,
        "cluster_tol": args.cluster_tol, "float_precision_bits": args.precision,
        "max_retries": args.max_retries, "chart_variable": args.chart,
        "perturb": args.perturb,
    }
    return cfg.replace(**{k: v for k, v in overrides.items() if v is not None})


def _polys(args) -> list[Poly]:
    if args.system and args.poly:
        raise UsageError("give either --system or --poly, not both")
    if args.system:
        return read_system(args.system)[1]
    if not args.poly:
        raise UsageError("no input: use --system FILE or --poly EXPR")
    if args.nvars is None:
        exprs = [parse_poly(t) for t in args.poly]
        nvars = max(e.parsed.nvars for e in exprs)
    else:
        nvars = args.nvars
    return [parse_poly(t, nvars).parsed for t in args.poly]


def _map_components(args) -> list[Poly]:
    """Map components in x1..x_{n+1} (x0 reserved), returned 0-based."""
    polys = _polys(args)
    n = len(polys)
    nvars = polys[0].nvars
    if args.system is None and args.nvars is None:
        nvars = n + 2
        polys = [parse_poly(t, nvars).parsed for t in args.poly]
    if nvars != n + 2:
        raise InputError(f"a map with {n} components needs variables x1..x{n + 1} "
                         f"(nvars={n + 2}, x0 unused), got nvars={nvars}")
    return [_drop_x0(p, i) for i, p in enumerate(polys)]


def _drop_x0(p: Poly, i: int) -> Poly:
    if any(m[0] for m in p.terms):
        raise InputError(f"input {i}: x0 is reserved and must not occur")
    return p.drop_variable(0)


def _system(args) -> HomSystem:
    return HomSystem(tuple(_polys(args)))


def _shift(p: Poly) -> str:
    return p.to_string(offset=1)


def _ray_tree(ray) -> dict:
    return {"coords": list(ray.coords), "multiplicity": ray.multiplicity,
            "is_real": ray.is_real, "max_residual": max(ray.residuals),
            "cluster_radius": ray.cluster_radius}


def _trail_tree(trail) -> dict:
    return {
        "direct": trail.direct, "chart": trail.chart, "note": trail.note,
        "final_residual": trail.final_residual,
        "bezout": trail.bezout,
        "steps": [{"epsilon": s.epsilon, "certified": s.at_infinity_resultant_nonzero,
                   "real_ray": s.real_ray} for s in trail.steps],
    }


def _bu_tree(res) -> dict:
    cert = res.certificate
    return {
        "point": list(res.point), "antipode": list(res.antipode),
        "values": list(res.values), "degenerate_map": res.degenerate,
        "coordinates": [f"x{i + 1}" for i in range(len(res.point))],
        "certificate": {
            "residuals": list(cert.residuals),
            "system_residuals": list(cert.system_residuals),
            "degrees": list(cert.degrees),
            "bezout": cert.bezout,
            "trail": _trail_tree(cert.trail) if cert.trail else None,
        },
    }


# -- commands ----------------------------------------------------------------------------

def cmd_parity(args, cfg):
    polys = _polys(args)
    return {"inputs": {"polys": polys},
            "outputs": {"parity": [p.parity() for p in polys] if len(polys) > 1
                        else polys[0].parity()}}


def cmd_homogenize(args, cfg):
    qs = [_drop_x0(p, i) for i, p in enumerate(_polys(args))]
    out = []
    for q in qs:
        h = homogenize_odd(q)
        s = sphere_substitute(h)
        out.append({"input": _shift(q), "homogenized": h.to_string(),
                    "degree": h.total_degree, "sphere_form": _shift(s)})
    return {"inputs": {"polys": [_shift(q) for q in qs]}, "outputs": {"forms": out}}


def cmd_system_build(args, cfg):
    comps = _map_components(args)
    system = build_odd_system(OddMap(tuple(comps)))
    text = format_system(system.forms)
    if args.system_out:
        Path(args.system_out).write_text(text)
    return {"inputs": {"map": [_shift(q) for q in comps]},
            "outputs": {"forms": [_shift(f) for f in system.forms],
                        "degrees": list(system.degrees),
                        "bezout_number": system.bezout_number(),
                        "system_file": text,
                        "system_file_variables": "x0..xn stand for x1..x_{n+1}"}}


def cmd_resultant(args, cfg):
    polys = _polys(args)
    degrees = [p.total_degree for p in polys]
    if any(d < 1 for d in degrees):
        raise InputError("every form needs positive degree (zero forms included)")
    mat = macaulay_matrix(polys, degrees, size_cap=cfg.matrix_size_cap)
    res = resultant_from_matrix(mat, degrees)
    if args.dump:
        Path(args.dump).write_text(mat.dump() + "\n")
    return {"inputs": {"forms": polys, "degrees": degrees},
            "outputs": {"resultant": res.value, "method": res.method,
                        "degenerate_retries": res.degenerate_retries,
                        "critical_degree": mat.degree_D, "matrix_size": mat.size,
                        "nonreduced_size": len(mat.nonreduced)}}


def cmd_infinity_check(args, cfg):
    system = _system(args)
    charts = [cfg.chart_variable] if cfg.chart_variable is not None else list(range(system.nvars))
    checks = [at_infinity_check(system, c, cfg.matrix_size_cap) for c in charts]
    ok = [c.chart for c in checks if not c.has_infinite_solutions]
    return {"inputs": {"forms": system.forms, "degrees": system.degrees},
            "outputs": {"checks": [{"chart": c.chart,
                                    "has_infinite_solutions": c.has_infinite_solutions,
                                    "resultant": c.resultant.value if c.resultant else None,
                                    "zero_forms": list(c.zero_forms)} for c in checks],
                        "finite_chart": ok[0] if ok else None}}


def _solve_block(system, cfg):
    block = {}
    chart, _, _ = pick_chart(system, cfg)
    if chart is None:
        if not cfg.perturb:
            raise DegenerateSystemError(
                "every chart has solutions at infinity; rerun with --perturb")
        system, cert, deltas = perturb_to_generic(system, cfg.epsilon0, cfg.seed, cfg)
        block["perturbation"] = {"epsilon": cfg.epsilon0_rational(),
                                 "certificate_chart": cert.chart,
                                 "certificate_resultant": cert.resultant,
                                 "perturbed_forms": system.forms}
    rays, rep = solve_rays(system, cfg)
    pairing = conjugate_pairing(rays, cfg.cluster_tol)
    block.update({
        "rays": [_ray_tree(r) for r in rays],
        "bezout": bezout_check(rays, system.degrees),
        "chart": rep.chart, "method": rep.method,
        "pairing": {"pairs": [list(p) for p in pairing.pairs],
                    "real": list(pairing.fixed)},
        "specializations": [{"direction": s.direction, "coefficients": s.coefficients}
                            for s in rep.specializations],
    })
    return block


def cmd_solve(args, cfg):
    system = _system(args)
    return {"inputs": {"forms": system.forms, "degrees": system.degrees},
            "outputs": _solve_block(system, cfg)}


def cmd_bezout(args, cfg):
    system = _system(args)
    block = _solve_block(system, cfg)
    return {"inputs": {"forms": system.forms, "degrees": system.degrees},
            "outputs": {"bezout": block["bezout"],
                        "multiplicities": [r["multiplicity"] for r in block["rays"]]}}


def cmd_real_ray(args, cfg):
    system = _system(args)
    b, trail = find_real_ray_odd(system, cfg)
    return {"inputs": {"forms": system.forms, "degrees": system.degrees},
            "outputs": {"ray": list(b), "antipode": list(-b), "trail": _trail_tree(trail)}}


def cmd_bu_zero(args, cfg):
    comps = _map_components(args)
    res = bu_zero(OddMap(tuple(comps)), cfg)
    return {"inputs": {"map": [_shift(q) for q in comps]}, "outputs": _bu_tree(res)}


def cmd_coincidence(args, cfg):
    comps = _map_components(args)
    res = coincidence(comps, cfg)
    y, z = list(res.point), list(res.antipode)
    gaps = [abs(g.evaluate(y) - g.evaluate(z)) for g in comps]
    out = _bu_tree(res)
    out["gaps"] = gaps
    return {"inputs": {"map": [_shift(q) for q in comps]}, "outputs": out}


def _samples(args):
    if not args.samples:
        raise UsageError("--samples FILE is required")
    return read_samples(args.samples)


def cmd_fit(args, cfg):
    s = _samples(args)
    if args.degree_cap is not None:
        from .borsuk_ulam import SampleSet
        s = SampleSet(s.points, s.values, args.degree_cap)
    m, rep = fit_odd_poly(s, cfg)
    return {"inputs": {"samples": len(s.points), "n": s.n, "degree_cap": s.degree_cap},
            "outputs": {"map": [_shift(c) for c in m.components], "report": rep}}


def cmd_guard(args, cfg):
    epsilon = args.epsilon
    fit = None
    if args.samples and not args.poly and not args.system:
        m, fit = fit_odd_poly(_samples(args), cfg)
        comps = list(m.components)
        if epsilon is None:
            epsilon = fit.max_deviation
    else:
        comps = _map_components(args)
    if epsilon is None:
        raise UsageError("--epsilon is required unless chained after a fit")
    rep = delta_epsilon_guard(comps, epsilon, count=args.count, seed=cfg.seed)
    return {"inputs": {"map": [_shift(q) for q in comps], "count": args.count},
            "outputs": {"guard": rep, "fit": fit}}


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# -- entry point -----------------------------------------------------------------------

def run_command(argv: Sequence[str]) -> tuple[dict, int, argparse.Namespace | None]:
    """Run one subcommand; returns (report, exit code, parsed args)."""
    args = None
    report: dict = {"tool": "oddrays", "version": __version__}
    try:
        args = build_parser().parse_args(list(argv))
        report["command"] = args.command
        cfg = _config(args)
        report["seed"] = cfg.seed
        report["config"] = cfg.to_dict()
        start = time.perf_counter()
        report.update(HANDLERS[args.command](args, cfg))
        if args.timing:
            report["timing"] = {"seconds": time.perf_counter() - start}
        return report, 0, args
    except OddRaysError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        diag = getattr(exc, "diagnostics", None)
        if diag:
            report["error"]["diagnostics"] = diag
        return report, exc.exit_code, args
    except RecursionError as exc:
        report["error"] = {"code": "internal-error", "message": str(exc)}
        return report, 5, args


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        report, code, args = run_command(argv)
    except SystemExit as exc:        # --help / --version
        return int(exc.code or 0)
    text = to_text(report) if args is not None and args.text else dumps(report)
    out = getattr(args, "out", None) if args is not None else None
    try:
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"oddrays: cannot write {out}: {exc}", file=sys.stderr)
        return 2
    if code:
        print(f"oddrays: {report['error']['code']}: {report['error']['message']}",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
