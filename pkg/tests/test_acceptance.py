"""Acceptance checks, one test per criterion.

Each check prints a single ``PASS``/``FAIL`` line with the measured numbers
and its runtime; the lines are repeated in pytest's terminal summary. Run the
file directly (``python tests/test_acceptance.py``) to get only those lines.
"""

import io
import json
import math
import time

import numpy as np
import pytest

from octodegree import (
    HEMPFLING_ZERO,
    NORMALIZATION,
    QuadratureSpec,
    catalog_get,
    cr_residual,
    degree_oracle,
    hurwitz_check,
    jacobian,
    order_isolated,
    order_variety,
    rouche_check,
    sphere,
    surface_area,
    surface_degree,
    winding_number,
)
from octodegree.cli import run
from octodegree.degree import constant_family
from octodegree.fields import CATALOG, determinant
from octodegree.octonion import REFERENCE_TABLE, conj, mul, norm, table_entries
from octodegree.surfaces import CoreManifold

REPORT: list[str] = []

DEFAULT = QuadratureSpec()  # 8 Gauss-Legendre nodes per angle
# sum_squares(7) depends only on the first angle and peaks sharply there
SUM_SQUARES_SPEC = QuadratureSpec(nodes_per_dim=(64, 6, 6, 6, 6, 6, 6))


def record(label: str, ok: bool, detail: str, seconds: float) -> None:
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail} [{seconds:.1f} s]"
    REPORT.append(line)
    print(line)


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# -- 1 ------------------------------------------------------------------------


def algebra_suite():
    table = {(i, j): s for i, j, s in table_entries()}
    table_ok = all(table[(i, j)] == tok for i, row in enumerate(REFERENCE_TABLE, 1) for j, tok in enumerate(row, 1))

    rng = np.random.default_rng(11)
    a, b, c = rng.normal(size=(3, 10_000, 8))
    na, nb, nc = norm(a), norm(b), norm(c)
    tol = 1e-12

    def worst(lhs, rhs, scale):
        return float((np.linalg.norm(np.atleast_2d((lhs - rhs).T).T, axis=-1) / (tol * np.maximum(scale, 1.0))).max())

    checks = {
        "moufang": worst(mul(mul(a, b), mul(c, a)), mul(a, mul(mul(b, c), a)), na * nb * nc * na),
        "flexible": worst(mul(mul(a, b), a), mul(a, mul(b, a)), na * nb * na),
        "composition": worst(norm(mul(a, b)), na * nb, na * nb),
        "conj_assoc": worst(mul(mul(a, conj(b)), b), mul(a, mul(conj(b), b)), na * nb * nb),
        "real_part": worst(mul(b, mul(mul(conj(a), a), c))[..., 0], mul(mul(b, conj(a)), mul(a, c))[..., 0], nb * na * na * nc),
    }
    return table_ok, checks


def test_c1_algebra_suite():
    (table_ok, checks), dt = timed(algebra_suite)
    ok = table_ok and all(v <= 1.0 for v in checks.values()) and dt < 5
    detail = f"49 products {'match' if table_ok else 'MISMATCH'}; worst error / (1e-12*scale): " + ", ".join(
        f"{k} {v:.3f}" for k, v in checks.items()
    )
    record("C1 algebra suite", ok, detail, dt)
    assert ok


# -- 2 ------------------------------------------------------------------------

CATALOG_INSTANCES = {
    "sum_squares": (7,),
    "hempfling": (),
    "circle_variety": (),
    "sphere_variety": (3, 0.8),
    "module_base": (),
    "module_counterexample": (),
    "identity": (),
    "constant": (1.5,),
    "Z": (4,),
    "V": (1, 0, 2, 0, 0, 0, 0),
}


def cr_fixtures():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(100, 8))
    base = float(np.linalg.norm(cr_residual(catalog_get("module_base"), pts, "left"), axis=-1).max())
    e5 = np.eye(8)[5] * 2
    counter = float(np.abs(cr_residual(catalog_get("module_counterexample"), pts, "left") - e5).max())
    mismatches = []
    assert set(CATALOG_INSTANCES) == set(CATALOG)
    for name, params in CATALOG_INSTANCES.items():
        f = catalog_get(name, params)
        for side in ("left", "right"):
            measured = float(np.linalg.norm(cr_residual(f, pts, side), axis=-1).max()) <= 1e-6
            declared = f.left_regular if side == "left" else f.right_regular
            if measured != declared:
                mismatches.append(f"{name}/{side}")
    return base, counter, mismatches


def test_c2_cr_fixtures():
    (base, counter, mismatches), dt = timed(cr_fixtures)
    ok = base <= 1e-8 and counter <= 1e-6 and not mismatches and dt < 10
    detail = (
        f"left residual of x1 - x2 e4 = {base:.2e}; (x1 - x2 e4) e3 off 2e5 by {counter:.2e}; "
        f"{len(CATALOG_INSTANCES)} catalog fields, declared-vs-measured mismatches: {mismatches or 'none'}"
    )
    record("C2 Cauchy-Riemann fixtures", ok, detail, dt)
    assert ok


# -- 3 ------------------------------------------------------------------------


def hempfling_determinants():
    f = catalog_get("hempfling")
    return float(determinant(jacobian(f, HEMPFLING_ZERO))), float(determinant(jacobian(f, HEMPFLING_ZERO, analytic=False)))


def test_c3_hempfling_jacobian():
    (analytic, fd), dt = timed(hempfling_determinants)
    expected = -7.0
    ok = analytic == expected and abs(fd - expected) <= 1e-4
    detail = f"det Jf at 1+e1+...+e7: analytic {analytic:+.12g}, finite-difference {fd:+.9f}; expected {expected:+g}"
    record("C3 Hempfling Jacobian determinant", ok, detail, dt)
    assert ok


# -- 4 ------------------------------------------------------------------------


def test_c4_winding_integers():
    s = sphere(0.0, 1.0)
    inside, t1 = timed(lambda: winding_number(s, 0.0, spec=DEFAULT))
    outside, t2 = timed(lambda: winding_number(s, 2.0 * np.eye(8)[1], spec=DEFAULT))
    area, t3 = timed(lambda: surface_area(s, DEFAULT).value)
    off_scalar = float(np.abs(inside.raw.components[1:]).max())
    normalized_area = NORMALIZATION * float(area)
    ok = (
        abs(inside.scalar - 1) <= 1e-3
        and off_scalar < 1e-6
        and abs(outside.scalar) <= 1e-3
        and abs(normalized_area - 1) <= 1e-3
        and max(t1, t2, t3) < 60
    )
    detail = (
        f"around 0: {inside.scalar:.6f} (non-scalar max {off_scalar:.1e}); around 2e1: {outside.scalar:.2e}; "
        f"3/pi^4 * area = {normalized_area:.6f}; slowest {max(t1, t2, t3):.1f} s"
    )
    record("C4 winding integers", ok, detail, t1 + t2 + t3)
    assert ok


# -- 5 ------------------------------------------------------------------------

ORDER_CASES = [
    # name, field, center, eps, spec, expected (None = take the oracle's value)
    ("identity at 0", "identity", np.zeros(8), 0.5, DEFAULT, 1),
    ("hempfling at z*", "hempfling", HEMPFLING_ZERO, 0.3, DEFAULT, -1),
    ("sum_squares(7) at 0", "sum_squares", np.zeros(8), 0.5, SUM_SQUARES_SPEC, None),
]


def order_equivalence():
    rows = []
    for label, name, c, eps, spec, expected in ORDER_CASES:
        f = catalog_get(name, (7,) if name == "sum_squares" else ())
        pull = order_isolated(f, c, eps=eps, spec=spec, method="pullback")
        image = order_isolated(f, c, eps=eps, spec=spec, method="image")
        oracle = degree_oracle(f, c, eps, starts=64, seed=0)
        target = oracle.degree if expected is None else expected
        agree = pull.rounded == image.rounded == oracle.degree
        ok = agree and pull.rounded == target and max(pull.residual, image.residual) < 0.1
        rows.append((label, ok, pull, image, oracle, target))
    return rows


def test_c5_order_oracle_equivalence():
    rows, dt = timed(order_equivalence)
    ok = all(r[1] for r in rows) and dt < 300
    detail = "; ".join(
        f"{label}: pullback {p.scalar:+.4f}, image {i.scalar:+.4f}, oracle {o.degree:+d} "
        f"(signs {list(o.signs)}), expected {t:+d} {'ok' if good else 'MISMATCH'}"
        for label, good, p, i, o, t in rows
    )
    record("C5 order/oracle equivalence", ok, detail, dt)
    assert ok


# -- 6 ------------------------------------------------------------------------


def argument_principle_check():
    f = catalog_get("hempfling")
    boundary = surface_degree(f, sphere(HEMPFLING_ZERO, 0.5), spec=QuadratureSpec(nodes_per_dim=10))
    order = order_isolated(f, HEMPFLING_ZERO, eps=0.3, spec=DEFAULT)
    zero_free = surface_degree(f, sphere(0.0, 0.5), spec=DEFAULT)
    return boundary, order, zero_free


def test_c6_argument_principle():
    (boundary, order, zero_free), dt = timed(argument_principle_check)
    gap = abs(boundary.scalar - order.scalar)
    ok = gap <= 0.1 and zero_free.rounded == 0 and dt < 120
    detail = (
        f"boundary sphere(z*,0.5) {boundary.scalar:+.4f} vs ord(f;z*) {order.scalar:+.4f} (gap {gap:.3f}); "
        f"zero-free sphere(0,0.5) {zero_free.scalar:+.2e} -> {zero_free.rounded}"
    )
    record("C6 argument principle", ok, detail, dt)
    assert ok


# -- 7 ------------------------------------------------------------------------


def rouche():
    f = catalog_get("sum_squares", (7,))
    g = f + 0.01 * catalog_get("Z", (1,))
    return rouche_check(f, g, sphere(0.0, 1.0), SUM_SQUARES_SPEC)


def test_c7_rouche():
    rep, dt = timed(rouche)
    ok = rep.hypothesis_holds and rep.margin > 0 and rep.sums_equal and dt < 180
    sums = "n/a" if rep.sum_f is None else f"{rep.sum_f.scalar:+.4f} vs {rep.sum_g.scalar:+.4f} -> {rep.sum_f.rounded} / {rep.sum_g.rounded}"
    detail = f"margin min(|f| - |f-g|) = {rep.margin:.4f}; degrees {sums}"
    record("C7 Rouche", ok, detail, dt)
    assert ok


# -- 8 ------------------------------------------------------------------------


def variety_orders():
    f = catalog_get("circle_variety")
    core = CoreManifold.circle(1.0)
    return {
        "eps 0.2": order_variety(f, core, 0.2, DEFAULT),
        "eps 0.1": order_variety(f, core, 0.1, DEFAULT),
        "eps 0.2 refined": order_variety(f, core, 0.2, DEFAULT.refined()),
    }


def test_c8_non_isolated_order():
    res, dt = timed(variety_orders)
    values = {r.rounded for r in res.values()}
    ok = len(values) == 1 and all(r.residual < 0.1 for r in res.values()) and dt < 300
    detail = ", ".join(f"{k}: {r.scalar:+.4f} -> {r.rounded}" for k, r in res.items())
    record("C8 non-isolated order", ok, detail, dt)
    assert ok


# -- 9 ------------------------------------------------------------------------


def hurwitz():
    return hurwitz_check(constant_family(0.0), 10, spec=DEFAULT), hurwitz_check(constant_family(1.0), 10, spec=DEFAULT)


def test_c9_hurwitz_harness():
    (vanishing, shifted), dt = timed(hurwitz)
    ok = (
        vanishing.classification == "identically_zero"
        and vanishing.verdict
        and shifted.classification == "nonvanishing"
        and shifted.limit_order.rounded == 0
        and shifted.verdict
        and dt < 60
    )
    detail = (
        f"1/n -> {vanishing.classification}; 1 + 1/n -> {shifted.classification} "
        f"with limit degree {shifted.limit_order.scalar:+.2e}"
    )
    record("C9 Hurwitz harness", ok, detail, dt)
    assert ok


# -- 10 -----------------------------------------------------------------------

CLI_RUNS = [
    ["table"],
    ["check-cr", "--field", "module_counterexample", "--side", "left", "--seed", "3"],
    ["winding", "--surface", "sphere(0;1)", "--point", "0.2*e3", "--nodes", "5"],
    ["winding", "--surface", "sphere(0;1)", "--point", "0", "--rule", "monte_carlo", "--samples", "20000", "--seed", "9"],
    ["order", "--field", "hempfling", "--center", "1,1,1,1,1,1,1,1", "--radius", "0.3", "--nodes", "5", "--method", "image"],
    ["tube-order", "--field", "circle_variety", "--core", "circle;e1,e2;1", "--eps", "0.2", "--nodes", "4"],
    ["argument", "--field", "identity", "--boundary", "sphere(0;1)", "--zeros", "sphere(0;0.3)", "--nodes", "4"],
    ["rouche", "--field", "identity", "--perturbed", "identity + 0.1*e2", "--boundary", "sphere(0;1)", "--nodes", "4"],
    ["hurwitz", "--family", "shifted_constant", "--nmax", "4", "--region", "sphere(0;0.5)", "--nodes", "4"],
    ["oracle", "--field", "sum_squares(7)", "--center", "0", "--radius", "0.5", "--starts", "16", "--seed", "2"],
]


def cli_determinism():
    def once(argv):
        out = io.StringIO()
        run(argv, out, io.StringIO())
        rec = json.loads(out.getvalue())
        rec.pop("runtime_ms")
        return json.dumps(rec, sort_keys=True).encode()

    return [argv[0] for argv in CLI_RUNS if once(argv) != once(argv)]


def test_c10_cli_determinism():
    differing, dt = timed(cli_determinism)
    ok = not differing
    detail = f"{len(CLI_RUNS)} commands run twice; differing outputs: {differing or 'none'}"
    record("C10 CLI determinism", ok, detail, dt)
    assert ok


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
