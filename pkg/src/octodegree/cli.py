"""Command-line front end.

Every subcommand prints one JSON object (or a short text summary) with the
same top-level keys, so results can be diffed between runs. Exit codes: 0 for
a passing verdict, 1 for a failing one, 2 for bad input, 3 when an integral's
precondition does not hold (``f = a`` on the surface, a self-intersecting
tube, a point on the integration surface).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import degree as dg
from .errors import ContractViolation, DomainError, OctoError, OracleInconclusive, OrientationError, SingularityError
from .fields import FIELD_GRAMMAR, cr_residual, parse_field
from .octonion import table_entries, verify_table
from .surfaces import SURFACE_GRAMMAR, QuadratureSpec, parse_core, parse_surface

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2, 3
CR_TOLERANCE = 1e-6

OCTONION_HELP = "octonion literal: 8 comma-separated reals, or a sum like '1+e1+e2' / '0.1*e_3 - 2'"

_TERM = re.compile(
    r"\s*(?P<sign>[-+])?\s*(?:(?P<coef>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(?:\*\s*(?P<unit1>e_?[0-7]))?|(?P<unit2>e_?[0-7]))\s*"
)


def parse_octonion(text: str) -> np.ndarray:
    """Components of an octonion literal (see ``OCTONION_HELP``)."""
    text = text.strip()
    if "," in text:
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise DomainError(f"bad octonion literal {text!r}") from None
        if len(vals) != 8:
            raise DomainError(f"octonion literal needs 8 components, got {len(vals)}")
        return np.array(vals)
    out = np.zeros(8)
    pos, first = 0, True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and m.group("sign") is None):
            raise DomainError(f"bad octonion literal {text!r} at position {pos}")
        sign = -1.0 if m.group("sign") == "-" else 1.0
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        unit = m.group("unit1") or m.group("unit2")
        out[int(unit[-1]) if unit else 0] += sign * coef
        pos, first = m.end(), False
    if first:
        raise DomainError("empty octonion literal")
    return out


def _split_top_level(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def parse_zeros(text: str) -> list[dg.ZeroSpec]:
    """Comma-separated enclosures, each ``sphere(c;r)`` or ``tube(core;eps)``."""
    zeros = []
    for item in _split_top_level(text):
        surf = parse_surface(item)
        if surf.core.kind == "point":
            zeros.append(dg.ZeroSpec.point(surf.core.center, surf.eps))
        else:
            zeros.append(dg.ZeroSpec.variety(surf.core, surf.eps))
    return zeros


def _nodes(text: str):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--nodes takes an integer or 7 comma-separated integers, got {text!r}") from None
    return vals[0] if len(vals) == 1 else tuple(vals)


# -- output ------------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: arrays to lists, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _record(command: str, inputs: dict, result: Optional[dg.DegreeResult], verdict: str, details: dict) -> dict:
    rec = {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "raw": None,
        "scalar": None,
        "rounded": None,
        "residual": None,
        "node_count": None,
        "runtime_ms": None,
        "verdict": verdict,
        "details": details,
    }
    if result is not None:
        rec.update(
            raw=result.raw.components.tolist(),
            scalar=result.scalar,
            rounded=result.rounded,
            residual=result.residual,
            node_count=result.node_count,
        )
    return _clean(rec)


def _emit(rec: dict, output: str, stream) -> None:
    if output == "json":
        stream.write(json.dumps(rec, sort_keys=True) + "\n")
        return
    lines = [f"{rec['command']}: {rec['verdict']}"]
    if rec["raw"] is not None:
        lines.append(f"  rounded {rec['rounded']}  scalar {rec['scalar']:.10f}  residual {rec['residual']:.3e}  nodes {rec['node_count']}")
    for key, val in rec["details"].items():
        if key == "table":
            lines.extend(f"  e{i}*e{j} = {p}" for i, j, p in val)
        else:
            lines.append(f"  {key}: {json.dumps(val)}")
    if rec["runtime_ms"] is not None:
        lines.append(f"  runtime {rec['runtime_ms']:.0f} ms")
    stream.write("\n".join(lines) + "\n")


# -- commands ----------------------------------------------------------------


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(
        rule=args.rule, nodes_per_dim=args.nodes, total_samples=args.samples, seed=args.seed, threads=args.threads
    )


def _spec_inputs(args) -> dict:
    return {
        "rule": args.rule,
        "nodes": list(args.nodes) if isinstance(args.nodes, tuple) else args.nodes,
        "samples": args.samples,
        "seed": args.seed,
        "tolerance": args.tolerance,
    }


def _integer_verdict(res: dg.DegreeResult, args) -> str:
    return "pass" if res.residual < args.tolerance else "fail"


def cmd_table(args):
    verify_table()
    entries = table_entries()
    return None, "pass", {"table": [list(e) for e in entries]}, {}


def cmd_check_cr(args):
    f = parse_field(args.field)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    pts = rng.standard_normal((args.points, 8))
    res = np.linalg.norm(cr_residual(f, pts, side=args.side), axis=-1)
    worst = float(res.max())
    declared = f.left_regular if args.side == "left" else f.right_regular
    measured = worst <= CR_TOLERANCE
    details = {"max_residual": worst, "declared_regular": declared, "measured_regular": measured}
    return None, "pass" if declared == measured else "fail", details, {"field": args.field, "side": args.side, "points": args.points}


def cmd_winding(args):
    surf = parse_surface(args.surface)
    res = dg.winding_number(surf, parse_octonion(args.point), args.side, _spec(args))
    inputs = {"surface": args.surface, "point": args.point, "side": args.side}
    return res, _integer_verdict(res, args), {"method": res.method}, inputs


def cmd_order(args):
    f = parse_field(args.field)
    res = dg.order_isolated(
        f, parse_octonion(args.center), parse_octonion(args.a), args.radius, _spec(args), args.method, args.side, adapt=not args.no_adapt
    )
    inputs = {"field": args.field, "center": args.center, "radius": args.radius, "a": args.a, "method": args.method, "side": args.side}
    return res, _integer_verdict(res, args), {"method": res.method}, inputs


def cmd_tube_order(args):
    f = parse_field(args.field)
    core = parse_core(args.core)
    res = dg.order_variety(f, core, args.eps, _spec(args), args.method, args.side, adapt=not args.no_adapt)
    inputs = {"field": args.field, "core": args.core, "eps": args.eps, "method": args.method, "side": args.side}
    return res, _integer_verdict(res, args), {"method": res.method}, inputs


def cmd_argument(args):
    f = parse_field(args.field)
    zeros = parse_zeros(args.zeros) if args.zeros else []
    rep = dg.argument_principle(f, parse_surface(args.boundary), zeros, parse_octonion(args.a), _spec(args), args.method)
    details = {
        "orders": [o.to_dict() for o in rep.orders],
        "rhs": rep.rhs,
        "rhs_rounded": rep.rhs_rounded,
        "difference": rep.difference,
    }
    verdict = "pass" if rep.holds(2 * args.tolerance) else "fail"
    inputs = {"field": args.field, "boundary": args.boundary, "zeros": args.zeros, "a": args.a}
    return rep.lhs, verdict, details, inputs


def cmd_rouche(args):
    f, g = parse_field(args.field), parse_field(args.perturbed)
    rep = dg.rouche_check(f, g, parse_surface(args.boundary), _spec(args))
    details = {
        "hypothesis_holds": rep.hypothesis_holds,
        "margin": rep.margin,
        "min_abs_f": rep.min_abs_f,
        "max_abs_diff": rep.max_abs_diff,
        "violating_node": rep.violating_node,
        "sum_f": None if rep.sum_f is None else rep.sum_f.to_dict(),
        "sum_g": None if rep.sum_g is None else rep.sum_g.to_dict(),
    }
    inputs = {"field": args.field, "perturbed": args.perturbed, "boundary": args.boundary}
    return rep.sum_f, "pass" if rep.verdict else "fail", details, inputs


def cmd_hurwitz(args):
    family = dg.family_get(args.family)
    region = parse_surface(args.region)
    if region.kind != "sphere":
        raise DomainError("--region must be a sphere(c;r)")
    rep = dg.hurwitz_check(family, args.nmax, region.core.center, region.eps, _spec(args), args.grid)
    details = {
        "hypothesis_holds": rep.hypothesis_holds,
        "classification": rep.classification,
        "limit_max_abs": rep.limit_max_abs,
        "failing_member": rep.failing_member,
        "failing_node": rep.failing_node,
        "family": family.name,
    }
    inputs = {"family": args.family, "nmax": args.nmax, "region": args.region, "grid": args.grid}
    return rep.limit_order, "pass" if rep.verdict else "fail", details, inputs


def cmd_oracle(args):
    f = parse_field(args.field)
    res = dg.degree_oracle(f, parse_octonion(args.center), args.radius, parse_octonion(args.a), args.starts, args.seed)
    inputs = {"field": args.field, "center": args.center, "radius": args.radius, "a": args.a, "starts": args.starts, "seed": args.seed}
    details = res.to_dict()
    details["degree"] = res.degree
    return None, "pass", details, inputs


# -- parser ------------------------------------------------------------------

EPILOG = f"""\
octonion literals: {OCTONION_HELP}

fields:
{FIELD_GRAMMAR}
surfaces:
{SURFACE_GRAMMAR}
examples:
  octodegree table
  octodegree check-cr --field "module_base" --side left
  octodegree winding --surface "sphere(0,0,0,0,0,0,0,0;1)" --point 0
  octodegree order --field "hempfling" --center "1,1,1,1,1,1,1,1" --radius 0.3 --nodes 4
  octodegree tube-order --field "circle_variety" --core "circle;e1,e2;1" --eps 0.2 --nodes 4
  octodegree argument --field "hempfling" --boundary "sphere(1,1,1,1,1,1,1,1;0.5)" --zeros "sphere(1,1,1,1,1,1,1,1;0.3)" --nodes 4
  octodegree rouche --field "constant(1)" --perturbed "constant(3)" --boundary "sphere(0;1)" --nodes 4
  octodegree hurwitz --family inverse --nmax 5 --region "sphere(0;0.5)" --nodes 4
  octodegree oracle --field "identity" --center 0 --radius 1 --a "0.1*e1" --starts 16 --seed 0
"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("quadrature and output")
    g.add_argument("--nodes", type=_nodes, default=8, help="Gauss-Legendre nodes per angle, or 7 comma-separated counts (default 8)")
    g.add_argument("--rule", choices=("gauss_legendre", "monte_carlo"), default="gauss_legendre", help="quadrature rule")
    g.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample count (default 1000000)")
    g.add_argument("--tolerance", type=float, default=dg.INTEGER_TOLERANCE, help="integer tolerance for verdicts (default 0.1)")
    g.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    g.add_argument("--threads", type=int, default=1, help="worker threads for chunk evaluation (default 1)")
    g.add_argument("--output", choices=("json", "text"), default="json", help="output format (default json)")
    g.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="octodegree",
        description="Octonionic Cauchy-kernel integrals: winding numbers, orders of zeros, and checks built on them.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    add("table", cmd_table, "print the multiplication table of the imaginary units and verify it")

    p = add("check-cr", cmd_check_cr, "measure the Cauchy-Riemann residual of a field at random points")
    p.add_argument("--field", required=True)
    p.add_argument("--side", choices=dg.SIDES, default="left")
    p.add_argument("--points", type=int, default=100)

    p = add("winding", cmd_winding, "winding number of a surface around a point")
    p.add_argument("--surface", required=True)
    p.add_argument("--point", required=True, help=OCTONION_HELP)
    p.add_argument("--side", choices=dg.SIDES, default="left")

    def order_opts(p):
        p.add_argument("--method", choices=dg.METHODS, default="pullback")
        p.add_argument("--side", choices=dg.SIDES, default="left")
        p.add_argument("--no-adapt", action="store_true", help="integrate over the round chart instead of the Jacobian-adapted one")

    p = add("order", cmd_order, "order of an a-point of a field, integrated over a small sphere")
    p.add_argument("--field", required=True)
    p.add_argument("--center", required=True, help=OCTONION_HELP)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--a", default="0", help=OCTONION_HELP)
    order_opts(p)

    p = add("tube-order", cmd_tube_order, "order of a zero variety, integrated over a tube around its core")
    p.add_argument("--field", required=True)
    p.add_argument("--core", required=True, help="point;c | circle;e1,e2;R | ksphere;k;R | segment;a;b")
    p.add_argument("--eps", type=float, required=True)
    order_opts(p)

    p = add("argument", cmd_argument, "compare a boundary degree with the orders of the enclosed zeros")
    p.add_argument("--field", required=True)
    p.add_argument("--boundary", required=True)
    p.add_argument("--zeros", default="", help="comma-separated enclosures: sphere(c;r) or tube(core;eps)")
    p.add_argument("--a", default="0", help=OCTONION_HELP)
    p.add_argument("--method", choices=dg.METHODS, default="pullback")

    p = add("rouche", cmd_rouche, "check |f - g| < |f| on a boundary and compare degrees")
    p.add_argument("--field", required=True)
    p.add_argument("--perturbed", required=True)
    p.add_argument("--boundary", required=True)

    p = add("hurwitz", cmd_hurwitz, "spot-check a sequence of fields and classify its limit")
    p.add_argument("--family", required=True, help=f"one of: {', '.join(sorted(dg.FAMILIES))}")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--region", required=True, help="sphere(c;r)")
    p.add_argument("--grid", type=int, default=5, help="grid points per axis for the spot check (default 5)")

    p = add("oracle", cmd_oracle, "Brouwer degree on a ball by counting Newton preimages")
    p.add_argument("--field", required=True)
    p.add_argument("--center", required=True, help=OCTONION_HELP)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--a", default="0", help=OCTONION_HELP)
    p.add_argument("--starts", type=int, default=64)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=stderr, format="%(name)s: %(message)s")
    command = args.command
    start = time.perf_counter()
    try:
        result, verdict, details, inputs = args.func(args)
        code = EXIT_OK if verdict == "pass" else EXIT_FAIL
    except OctoError as exc:
        if isinstance(exc, (ContractViolation, SingularityError, OrientationError)):
            verdict, code = "error", EXIT_CONTRACT
        elif isinstance(exc, OracleInconclusive):
            verdict, code = "fail", EXIT_FAIL
        else:
            verdict, code = "error", EXIT_USAGE
        result, details = None, {"error": str(exc), "kind": type(exc).__name__}
        skip = {"func", "command", "verbose", "output"} | set(_spec_inputs(args))
        inputs = {k: v for k, v in vars(args).items() if k not in skip}
    if command != "table":
        inputs = {**inputs, **_spec_inputs(args)}
    rec = _record(command, inputs, result, verdict, details)
    rec["runtime_ms"] = round(1000.0 * (time.perf_counter() - start), 3)
    if "error" in details:
        stderr.write(f"octodegree {command}: {details['error']}\n")
    _emit(rec, args.output, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
