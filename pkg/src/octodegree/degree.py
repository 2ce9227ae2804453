"""Winding numbers and mapping degrees from Cauchy-kernel surface integrals.

Every integral here has the form ``(3/pi^4) * sum q0(F - a) * n`` over the
weighted, outward surface elements ``n`` of a 7-surface, where ``q0`` is the
Cauchy kernel. For ``F`` the identity this is the winding number of the
surface around ``a``; for ``F = f`` pulled back through the Jacobian it is the
local degree of ``f``. The result is an octonion that should be a real
integer, and both the rounding residual and the non-scalar part are kept.

:func:`degree_oracle` computes the same degree a different way (counting
Newton preimages with Jacobian signs) so that the integrals can be checked.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import ContractViolation, DomainError, OracleInconclusive, SingularityError
from .fields import OctonionField, catalog_get, jacobian
from .octonion import Octonion, as_array, conj, mul
from .surfaces import (
    CoreManifold,
    ParamSurface,
    QuadratureSpec,
    SurfaceChunk,
    core_frames,
    integrate,
    quadrature_nodes,
    sphere,
    tube,
)

log = logging.getLogger(__name__)

NORMALIZATION = 3.0 / math.pi**4
INTEGER_TOLERANCE = 0.1
KERNEL_FLOOR = 1e-12
ZERO_FLOOR = 1e-9

SIDES = ("left", "right")
METHODS = ("pullback", "image")


@dataclass(frozen=True)
class DegreeResult:
    """Normalized surface integral and its nearest integer.

    ``residual`` is the octonion norm of ``raw - rounded``, so a large
    imaginary part shows up there too. ``stderr`` is only set for the Monte
    Carlo rule.
    """

    raw: Octonion
    rounded: int
    residual: float
    node_count: int
    method: str
    stderr: Optional[float] = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def scalar(self) -> float:
        return self.raw.real

    def is_integer(self, tolerance: float = INTEGER_TOLERANCE) -> bool:
        return self.residual < tolerance

    @classmethod
    def from_integral(cls, value, node_count: int, method: str, stderr=None, **diagnostics) -> DegreeResult:
        raw = Octonion(NORMALIZATION * np.asarray(value, float))
        rounded = int(round(raw.real))
        residual = float(np.linalg.norm(raw.components - as_array(float(rounded))))
        err = None if stderr is None else float(NORMALIZATION * np.linalg.norm(stderr))
        return cls(raw, rounded, residual, node_count, method, err, diagnostics)

    def to_dict(self) -> dict:
        return {
            "raw": self.raw.components.tolist(),
            "scalar": self.scalar,
            "rounded": self.rounded,
            "residual": self.residual,
            "node_count": self.node_count,
            "method": self.method,
            "stderr": self.stderr,
        }


@dataclass(frozen=True)
class ZeroSpec:
    """An enclosed zero (or a-point): a point with a ball radius, or a core with a tube radius."""

    kind: str
    location: Union[np.ndarray, CoreManifold]
    eps: float

    def __post_init__(self):
        if self.kind not in ("isolated", "variety"):
            raise DomainError(f"zero kind must be 'isolated' or 'variety', got {self.kind!r}")
        if not self.eps > 0:
            raise DomainError(f"enclosure radius must be positive, got {self.eps}")
        if self.kind == "isolated":
            object.__setattr__(self, "location", as_array(self.location).copy())
        elif not isinstance(self.location, CoreManifold):
            raise DomainError("a variety zero needs a CoreManifold location")

    @classmethod
    def point(cls, c, eps: float) -> ZeroSpec:
        return cls("isolated", c, eps)

    @classmethod
    def variety(cls, core: CoreManifold, eps: float) -> ZeroSpec:
        return cls("variety", core, eps)

    def surface(self) -> ParamSurface:
        if self.kind == "isolated":
            return sphere(self.location, self.eps)
        return tube(self.location, self.eps)

    def describe(self) -> dict:
        loc = self.location.tolist() if self.kind == "isolated" else self.location.describe()
        return {"kind": self.kind, "location": loc, "eps": self.eps}


# -- kernel ------------------------------------------------------------------


def _kernel(w: np.ndarray, floor: float) -> np.ndarray:
    n2 = np.sum(w * w, axis=-1)
    if np.any(n2 < floor * floor):
        raise SingularityError(f"Cauchy kernel evaluated within {floor:g} of its pole")
    return conj(w) / (n2 * n2 * n2 * n2)[..., None]


def cauchy_kernel(z, floor: float = KERNEL_FLOOR):
    """``conj(z) / |z|^8`` for an octonion or an (..., 8) array."""
    out = _kernel(as_array(z), floor)
    if isinstance(z, Octonion) or np.isscalar(z):
        return Octonion(out)
    return out


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")


def _pair(q: np.ndarray, n: np.ndarray, side: str) -> np.ndarray:
    return mul(q, n) if side == "left" else mul(n, q)


def _result(res, method: str, **diag) -> DegreeResult:
    return DegreeResult.from_integral(res.value, res.node_count, method, res.stderr, **diag)


# -- winding numbers ---------------------------------------------------------


def winding_number(
    surface: ParamSurface,
    z,
    side: str = "left",
    spec: Optional[QuadratureSpec] = None,
    kernel_floor: float = KERNEL_FLOOR,
) -> DegreeResult:
    """How often ``surface`` wraps around the point ``z``."""
    _check_side(side)
    spec = spec or QuadratureSpec()
    z = as_array(z)

    def integrand(chunk: SurfaceChunk) -> np.ndarray:
        return _pair(_kernel(chunk.points - z, kernel_floor), chunk.weighted_normals, side)

    return _result(integrate(surface, spec, integrand), f"winding-{side}")


# -- orders ------------------------------------------------------------------


def _field_jacobian(f: OctonionField, x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(jacobian(f, x))


def _degree_integrand(f: OctonionField, a: np.ndarray, method: str, side: str, zero_floor: float, kernel_floor: float):
    if method not in METHODS:
        raise DomainError(f"method must be 'pullback' or 'image', got {method!r}")
    _check_side(side)

    def integrand(chunk: SurfaceChunk) -> np.ndarray:
        w = f.evaluate(chunk.points) - a
        gap = np.linalg.norm(w, axis=-1)
        if np.min(gap) < zero_floor:
            at = chunk.points[int(np.argmin(gap))]
            raise ContractViolation(f"f - a vanishes on the integration surface near {np.round(at, 12).tolist()}")
        jac = _field_jacobian(f, chunk.points)
        if method == "pullback":
            # image normal = cofactor matrix times source normal = adj(J^T) n
            n = _kernels.adjugate_times(np.ascontiguousarray(np.swapaxes(jac, -1, -2)), chunk.weighted_normals)
        else:
            pushed = np.ascontiguousarray(jac @ chunk.tangents)
            transversal = np.ascontiguousarray(np.einsum("kij,kj->ki", jac, chunk.weighted_normals))
            n = chunk.orientation * chunk.weights[:, None] * _kernels.surface_elements(pushed, transversal)
        return _pair(_kernel(w, kernel_floor), n, side)

    return integrand


# -- adapted charts ----------------------------------------------------------
#
# The pulled-back integrand is the solid-angle density of f/|f| on the surface.
# When Jf is far from conformal it concentrates in thin bands that a tensor grid
# misses. Re-charting the same surface with w = Bv/|Bv|, B = (G^T G)^(-1/2) for
# the Jacobian G in chart coordinates, makes f(w) ~ G B v nearly isotropic.
# This only helps where f is close to its linearization, i.e. around regular
# zeros; degenerate zeros keep the round chart and need a finer grid.

SHAPE_CONDITION_CAP = 1e4


def _inverse_sqrt(gram: np.ndarray) -> Optional[np.ndarray]:
    lam, vec = np.linalg.eigh(0.5 * (gram + gram.T))
    if not lam[-1] > 0:
        return None
    lam = np.maximum(lam, lam[-1] / SHAPE_CONDITION_CAP**2)
    b = (vec / np.sqrt(lam)) @ vec.T
    return b / np.exp(np.mean(np.log(1.0 / np.sqrt(lam))))


def _regular_gram(g: np.ndarray) -> bool:
    lam = np.linalg.eigvalsh(g)
    return bool(lam[..., -1].min() > 0 and np.all(lam[..., 0] > 1e-10 * lam[..., -1]))


def sphere_shape(f: OctonionField, c, eps: float, a=0.0) -> Optional[np.ndarray]:
    """Chart shape for a sphere around a regular a-point ``c``, else ``None``.

    Away from a regular a-point no linear shape is reliably better than the
    round chart (it can even move nodes off the peaks), so none is proposed.
    """
    c = as_array(c)
    if np.linalg.norm(f.evaluate(c) - as_array(a)) > 1e-8 * max(1.0, eps):
        return None
    jac = jacobian(f, c)
    gram = jac.T @ jac
    return _inverse_sqrt(gram) if _regular_gram(gram) else None


def tube_shape(f: OctonionField, core: CoreManifold, eps: float, a=0.0) -> Optional[np.ndarray]:
    """Chart shape for a tube whose core is a regular zero set of ``f - a``, else ``None``."""
    if core.kind == "point":
        return sphere_shape(f, core.center, eps, a)
    pts, frames = core_frames(core)
    if np.max(np.linalg.norm(f.evaluate(pts) - as_array(a), axis=-1)) > 1e-8:
        return None
    g = jacobian(f, pts) @ frames
    grams = np.einsum("kij,kil->kjl", g, g)
    return _inverse_sqrt(grams.mean(axis=0)) if _regular_gram(grams) else None


def adapted(f: OctonionField, surface: ParamSurface, a=0.0) -> ParamSurface:
    """The same surface re-charted so that ``f`` looks isotropic in its parameters."""
    if surface.kind == "sphere":
        return sphere(surface.core.center, surface.eps, shape=sphere_shape(f, surface.core.center, surface.eps, a))
    return tube(surface.core, surface.eps, shape=tube_shape(f, surface.core, surface.eps, a))


def surface_degree(
    f: OctonionField,
    surface: ParamSurface,
    a=0.0,
    spec: Optional[QuadratureSpec] = None,
    method: str = "pullback",
    side: str = "left",
    zero_floor: float = ZERO_FLOOR,
    kernel_floor: float = KERNEL_FLOOR,
    adapt: bool = True,
) -> DegreeResult:
    """Degree of ``f - a`` over a closed surface (the winding of its image around ``a``).

    With ``adapt`` the surface is re-charted by :func:`adapted` first.
    """
    spec = spec or QuadratureSpec()
    integrand = _degree_integrand(f, as_array(a), method, side, zero_floor, kernel_floor)
    if adapt:
        surface = adapted(f, surface, a)
    return _result(integrate(surface, spec, integrand), f"{method}-{side}", field=f.label(), adapted=adapt)


def order_isolated(
    f: OctonionField,
    c,
    a=0.0,
    eps: float = 0.5,
    spec: Optional[QuadratureSpec] = None,
    method: str = "pullback",
    side: str = "left",
    zero_floor: float = ZERO_FLOOR,
    kernel_floor: float = KERNEL_FLOOR,
    adapt: bool = True,
) -> DegreeResult:
    """Order of the a-point of ``f`` at ``c``, integrated over the sphere of radius ``eps``.

    ``method="pullback"`` maps the surface element through the adjugate
    Jacobian; ``method="image"`` integrates over the pushed-forward surface
    ``f(S)`` directly. Both discretize the same form.
    """
    return surface_degree(f, sphere(c, eps), a, spec, method, side, zero_floor, kernel_floor, adapt)


def order_variety(
    f: OctonionField,
    core: CoreManifold,
    eps: float,
    spec: Optional[QuadratureSpec] = None,
    method: str = "pullback",
    side: str = "left",
    a=0.0,
    zero_floor: float = ZERO_FLOOR,
    kernel_floor: float = KERNEL_FLOOR,
    adapt: bool = True,
) -> DegreeResult:
    """Order of a zero variety: the degree integral over the tube of radius ``eps`` around ``core``."""
    return surface_degree(f, tube(core, eps), a, spec, method, side, zero_floor, kernel_floor, adapt)


def order_of(f: OctonionField, zero: ZeroSpec, a=0.0, spec: Optional[QuadratureSpec] = None, **kw) -> DegreeResult:
    if zero.kind == "isolated":
        return order_isolated(f, zero.location, a, zero.eps, spec, **kw)
    return order_variety(f, zero.location, zero.eps, spec, a=a, **kw)


# -- argument principle ------------------------------------------------------


def _enclosure_ball(zero: ZeroSpec) -> tuple[np.ndarray, float]:
    if zero.kind == "isolated":
        return zero.location, zero.eps
    return zero.location.centroid, zero.location.bounding_radius + zero.eps


def _separation(z1: ZeroSpec, z2: ZeroSpec) -> float:
    """Lower bound on the gap between two enclosures (negative when they may overlap)."""
    if z1.kind == "variety" and z2.kind == "isolated":
        z1, z2 = z2, z1
    if z1.kind == "isolated":
        if z2.kind == "isolated":
            d = float(np.linalg.norm(z1.location - z2.location))
        else:
            d = float(z2.location.distance(z1.location))
        return d - z1.eps - z2.eps
    (c1, r1), (c2, r2) = _enclosure_ball(z1), _enclosure_ball(z2)
    return float(np.linalg.norm(c1 - c2)) - r1 - r2


def _inside(boundary: ParamSurface, zero: ZeroSpec) -> bool:
    if boundary.kind != "sphere":
        c, r = _enclosure_ball(zero)
        return boundary.contains(c, margin=r)
    center, radius = boundary.core.center, boundary.eps
    if zero.kind == "isolated":
        return float(np.linalg.norm(zero.location - center)) + zero.eps < radius
    c, r = _enclosure_ball(zero)
    return float(np.linalg.norm(c - center)) + r < radius


@dataclass(frozen=True)
class ArgumentReport:
    lhs: DegreeResult
    orders: tuple[DegreeResult, ...]
    zeros: tuple[ZeroSpec, ...]

    @property
    def rhs(self) -> float:
        return float(sum(o.scalar for o in self.orders))

    @property
    def rhs_rounded(self) -> int:
        return sum(o.rounded for o in self.orders)

    @property
    def difference(self) -> float:
        """``|lhs.raw - sum of order raws|`` as an octonion norm."""
        total = sum((o.raw.components for o in self.orders), np.zeros(8))
        return float(np.linalg.norm(self.lhs.raw.components - total))

    def holds(self, tolerance: float = 2 * INTEGER_TOLERANCE) -> bool:
        return self.difference < tolerance and self.lhs.rounded == self.rhs_rounded


def argument_principle(
    f: OctonionField,
    boundary: ParamSurface,
    zeros: Sequence[ZeroSpec],
    a=0.0,
    spec: Optional[QuadratureSpec] = None,
    method: str = "pullback",
) -> ArgumentReport:
    """Compare the boundary degree with the sum of the enclosed orders.

    Enclosures must lie inside ``boundary`` and be pairwise disjoint; for two
    varieties disjointness is checked through bounding balls, which is
    conservative.
    """
    zeros = tuple(zeros)
    for z in zeros:
        if not _inside(boundary, z):
            raise ContractViolation(f"enclosure {z.describe()} is not inside the boundary")
    for i in range(len(zeros)):
        for j in range(i + 1, len(zeros)):
            if _separation(zeros[i], zeros[j]) <= 0:
                raise ContractViolation(f"enclosures {i} and {j} overlap")
    spec = spec or QuadratureSpec()
    lhs = surface_degree(f, boundary, a, spec, method)
    orders = tuple(order_of(f, z, a, spec, method=method) for z in zeros)
    return ArgumentReport(lhs, orders, zeros)


# -- Rouche ------------------------------------------------------------------


@dataclass(frozen=True)
class RoucheReport:
    hypothesis_holds: bool
    margin: float
    violating_node: Optional[np.ndarray]
    sum_f: Optional[DegreeResult]
    sum_g: Optional[DegreeResult]
    min_abs_f: float
    max_abs_diff: float

    @property
    def sums_equal(self) -> bool:
        return self.sum_f is not None and self.sum_f.rounded == self.sum_g.rounded

    @property
    def verdict(self) -> bool:
        return self.hypothesis_holds and self.sums_equal


def rouche_check(
    f: OctonionField,
    g: OctonionField,
    boundary: ParamSurface,
    spec: Optional[QuadratureSpec] = None,
    zeros_f: Sequence[ZeroSpec] = (),
    zeros_g: Sequence[ZeroSpec] = (),
    method: str = "pullback",
) -> RoucheReport:
    """Check ``|f - g| < |f|`` on every boundary node, then compare the degrees.

    ``margin`` is the smallest ``|f| - |f - g|`` over the nodes. When it is not
    positive the report names that node and no integral is computed. Given
    enclosures, the sums of enclosed orders replace the boundary integrals.
    """
    spec = spec or QuadratureSpec()
    margin, worst = math.inf, None
    min_f, max_d = math.inf, 0.0
    for chunk in quadrature_nodes(boundary, spec):
        fv = f.evaluate(chunk.points)
        af = np.linalg.norm(fv, axis=-1)
        ad = np.linalg.norm(fv - g.evaluate(chunk.points), axis=-1)
        gap = af - ad
        k = int(np.argmin(gap))
        if gap[k] < margin:
            margin, worst = float(gap[k]), chunk.points[k].copy()
        min_f, max_d = min(min_f, float(af.min())), max(max_d, float(ad.max()))
    if not margin > 0:
        return RoucheReport(False, margin, worst, None, None, min_f, max_d)

    def total(h, zs):
        if not zs:
            return surface_degree(h, boundary, 0.0, spec, method)
        return argument_principle(h, boundary, zs, 0.0, spec, method).lhs

    return RoucheReport(True, margin, None, total(f, zeros_f), total(g, zeros_g), min_f, max_d)


# -- Hurwitz -----------------------------------------------------------------


@dataclass(frozen=True)
class Family:
    """Indexed sequence of fields ``member(n)``, n >= 1, with its limit."""

    name: str
    member: Callable[[int], OctonionField]
    limit: OctonionField


@dataclass(frozen=True)
class HurwitzReport:
    hypothesis_holds: bool
    classification: Optional[str]
    limit_max_abs: float
    limit_order: Optional[DegreeResult]
    failing_member: Optional[int] = None
    failing_node: Optional[np.ndarray] = None

    @property
    def verdict(self) -> bool:
        if not self.hypothesis_holds:
            return False
        if self.classification == "identically_zero":
            return True
        return self.limit_order is not None and self.limit_order.rounded == 0


def ball_grid(center, radius: float, per_axis: int = 5) -> np.ndarray:
    """Tensor grid on the cube around ``center``, clipped to the closed ball."""
    t = np.linspace(-radius, radius, per_axis)
    pts = np.stack(np.meshgrid(*([t] * 8), indexing="ij"), axis=-1).reshape(-1, 8)
    pts = pts[np.linalg.norm(pts, axis=-1) <= radius * (1 + 1e-12)]
    return pts + as_array(center)


def hurwitz_check(
    family: Family,
    n_max: int,
    center=0.0,
    radius: float = 0.5,
    spec: Optional[QuadratureSpec] = None,
    per_axis: int = 5,
    zero_floor: float = ZERO_FLOOR,
) -> HurwitzReport:
    """Spot-check that ``f_1 .. f_n_max`` have no zero in the ball, then classify the limit.

    The limit either vanishes on the whole grid (``"identically_zero"``) or its
    boundary degree over the sphere is computed (``"nonvanishing"``), which
    should round to 0.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    grid = ball_grid(center, radius, per_axis)
    for n in range(1, n_max + 1):
        vals = np.linalg.norm(family.member(n).evaluate(grid), axis=-1)
        k = int(np.argmin(vals))
        if vals[k] < zero_floor:
            return HurwitzReport(False, None, math.nan, None, n, grid[k])
    limit_max = float(np.linalg.norm(family.limit.evaluate(grid), axis=-1).max())
    if limit_max < zero_floor:
        return HurwitzReport(True, "identically_zero", limit_max, None)
    order = surface_degree(family.limit, sphere(center, radius), 0.0, spec or QuadratureSpec())
    return HurwitzReport(True, "nonvanishing", limit_max, order)


def nonvanishing_shift(
    f: OctonionField,
    center=0.0,
    radius: float = 0.5,
    per_axis: int = 5,
    candidates: Sequence[float] = (0.0, 0.5, 1.0, 2.0, 4.0, -0.5, -1.0, -2.0, -4.0),
    margin: float = 0.05,
) -> float:
    """First real ``c`` with ``min |f + c + t| > margin`` on the ball grid for all t in [0, 1]."""
    grid = ball_grid(center, radius, per_axis)
    fv = f.evaluate(grid)
    for c in candidates:
        worst = min(np.linalg.norm(fv + as_array(c + t), axis=-1).min() for t in np.linspace(0.0, 1.0, 11))
        if worst > margin:
            return float(c)
    raise DomainError("no candidate shift keeps the family away from zero on the grid")


def _constant(v: float) -> OctonionField:
    return catalog_get("constant", (v,))


def constant_family(offset: float) -> Family:
    """``f_n = offset + 1/n``."""
    return Family(f"constant({offset:g}+1/n)", lambda n: _constant(offset + 1.0 / n), _constant(offset))


def shifted_family(f: OctonionField, c: float) -> Family:
    """``f_n = f + c + 1/n``."""
    base = f + as_array(c)
    return Family(f"{f.label()}+{c:g}+1/n", lambda n: base + as_array(1.0 / n), base)


FAMILIES = {
    "inverse": lambda: constant_family(0.0),
    "shifted_constant": lambda: constant_family(1.0),
    "hempfling_shift": lambda: shifted_family(catalog_get("hempfling"), nonvanishing_shift(catalog_get("hempfling"))),
}


def family_get(name: str) -> Family:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise DomainError(f"unknown family {name!r}; valid names: {', '.join(sorted(FAMILIES))}") from None


# -- oracle ------------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    degree: int
    preimages: np.ndarray
    signs: tuple[int, ...]
    value: np.ndarray
    perturbed: bool
    converged_starts: int

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "preimages": self.preimages.tolist(),
            "signs": list(self.signs),
            "value": self.value.tolist(),
            "perturbed": self.perturbed,
            "converged_starts": self.converged_starts,
        }


def _newton(f: OctonionField, x: np.ndarray, a: np.ndarray, max_iter: int, halvings: int, tol: float) -> Optional[np.ndarray]:
    r = f.evaluate(x) - a
    rn = np.linalg.norm(r)
    for _ in range(max_iter):
        if rn < tol:
            return x
        try:
            step = np.linalg.solve(jacobian(f, x), -r)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        for _ in range(halvings + 1):
            xn = x + t * step
            rn_new = np.linalg.norm(f.evaluate(xn) - a)
            if rn_new < rn:
                break
            t *= 0.5
        else:
            return x if rn < tol else None
        x, rn = xn, rn_new
        r = f.evaluate(x) - a
    return x if rn < tol else None


def _preimages(f, c, eps, a, starts, rng, max_iter, halvings, tol, dedup):
    d = rng.standard_normal((starts, 8))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    radii = eps * rng.random(starts) ** (1 / 8)
    seeds = np.vstack([c[None], c + d * radii[:, None]])
    found: list[np.ndarray] = []
    converged = 0
    for s in seeds:
        x = _newton(f, s.copy(), a, max_iter, halvings, tol)
        if x is None:
            continue
        converged += 1
        if np.linalg.norm(x - c) >= eps:
            continue
        if all(np.linalg.norm(x - y) > dedup for y in found):
            found.append(x)
    return found, converged


def degree_oracle(
    f: OctonionField,
    c,
    eps: float,
    a=0.0,
    starts: int = 64,
    seed: int = 0,
    det_floor: float = 1e-8,
    max_iter: int = 200,
    halvings: int = 30,
    dedup_radius: float = 1e-6,
    boundary_nodes: int = 4,
) -> OracleResult:
    """Brouwer degree of ``f - a`` on the ball ``B(c, eps)`` by counting preimages.

    Damped Newton runs from ``c`` and from ``starts`` uniform points in the
    ball; distinct solutions inside contribute ``sign det Jf``. If a solution
    is critical (``|det| <= det_floor``), ``a`` is replaced by a random nearby
    value whose distance grows until every preimage is regular, but stays below
    half the smallest ``|f - a|`` on the boundary sphere so the degree cannot
    change. When Newton finds nothing, a coarse boundary integral decides
    between degree 0 and :class:`OracleInconclusive`.
    """
    c = as_array(c).astype(float)
    a = as_array(a).astype(float)
    if not eps > 0:
        raise DomainError(f"ball radius must be positive, got {eps}")
    if starts < 1:
        raise DomainError("starts must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    coarse = QuadratureSpec(nodes_per_dim=boundary_nodes)

    boundary_min = min(
        float(np.linalg.norm(f.evaluate(ch.points) - a, axis=-1).min()) for ch in quadrature_nodes(sphere(c, eps), coarse)
    )
    if boundary_min < ZERO_FLOOR:
        raise ContractViolation("f - a vanishes on the boundary sphere")

    target, perturbed = a, False
    radius = 1e-4 * boundary_min
    while True:
        tol = 1e-12 * max(1.0, float(np.linalg.norm(target)), boundary_min)
        found, converged = _preimages(f, c, eps, target, starts, rng, max_iter, halvings, tol, dedup_radius)
        dets = [float(np.linalg.det(jacobian(f, x))) for x in found]
        if all(abs(d) > det_floor for d in dets):
            break
        radius *= 4.0
        if radius >= 0.5 * boundary_min:
            raise OracleInconclusive("could not find a regular value near a within the safe radius")
        step = rng.standard_normal(8)
        target = a + radius * step / np.linalg.norm(step)
        perturbed = True
        log.debug("critical preimage; perturbing the value by %.3g", radius)

    for x in found:
        if np.linalg.norm(x - c) > 0.95 * eps:
            raise ContractViolation(f"preimage {x.tolist()} lies within 0.05*eps of the boundary")
    if not found:
        check = surface_degree(f, sphere(c, eps), a, coarse)
        if check.rounded != 0:
            raise OracleInconclusive(f"Newton found no preimage but the boundary degree is about {check.scalar:.3f}")
    signs = tuple(int(np.sign(d)) for d in dets)
    pre = np.array(found) if found else np.zeros((0, 8))
    return OracleResult(int(sum(signs)), pre, signs, target, perturbed, converged)


__all__ = [
    "ArgumentReport",
    "DegreeResult",
    "FAMILIES",
    "Family",
    "HurwitzReport",
    "INTEGER_TOLERANCE",
    "KERNEL_FLOOR",
    "NORMALIZATION",
    "OracleResult",
    "RoucheReport",
    "ZERO_FLOOR",
    "ZeroSpec",
    "adapted",
    "argument_principle",
    "ball_grid",
    "cauchy_kernel",
    "constant_family",
    "degree_oracle",
    "family_get",
    "hurwitz_check",
    "nonvanishing_shift",
    "order_isolated",
    "order_of",
    "order_variety",
    "rouche_check",
    "shifted_family",
    "sphere_shape",
    "surface_degree",
    "tube_shape",
    "winding_number",
]
