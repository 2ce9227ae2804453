"""Oriented 7-surfaces in R^8 and their quadrature.

Every surface is a list of smooth patches, each parametrised over a 7-box with
analytic tangents. Spheres and tubes around circles or k-spheres are a single
patch; the capsule around a segment needs three (two half-sphere caps and a
cylinder). Quadrature yields chunks of nodes carrying the vector surface
element ``n dS`` already multiplied by the quadrature weight and oriented away
from the core.
"""

from __future__ import annotations

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import _kernels
from .errors import ContractViolation, DomainError, OrientationError
from .octonion import as_array

log = logging.getLogger(__name__)

RULES = ("gauss_legendre", "monte_carlo")


# -- hyperspherical coordinates ----------------------------------------------


def hyperspherical(angles: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors on S^d and their angle derivatives.

    ``angles`` has shape ``(..., d)``. Returns ``u`` of shape ``(..., d + 1)`` with
    ``u_k = sin(t_1)...sin(t_k) cos(t_{k+1})`` (last one without the cosine), and
    ``du`` of shape ``(..., d + 1, d)`` with ``du[..., k, j] = d u_k / d t_j``.
    """
    angles = np.asarray(angles, dtype=float)
    lead, d = angles.shape[:-1], angles.shape[-1]
    u, du = _kernels.hyperspherical(np.ascontiguousarray(angles.reshape(-1, d)))
    return u.reshape(lead + (d + 1,)), du.reshape(lead + (d + 1, d))


def sphere_domain(d: int) -> np.ndarray:
    dom = np.tile([0.0, math.pi], (d, 1))
    dom[-1, 1] = 2.0 * math.pi
    return dom


def complement_frame(axes: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of ``axes``."""
    axes = np.atleast_2d(np.asarray(axes, float))
    q, _ = np.linalg.qr(np.concatenate([axes, np.eye(axes.shape[0])], axis=1))
    return q[:, axes.shape[1] :]


# -- data types --------------------------------------------------------------


@dataclass(frozen=True)
class CoreManifold:
    """Compact core of a tubular surface: point, segment, circle or k-sphere.

    ``axes`` holds orthonormal columns spanning the embedding subspace; a circle
    is the 1-sphere case of ``k_sphere``.
    """

    kind: str
    center: np.ndarray = field(default_factory=lambda: np.zeros(8))
    radius: float = 0.0
    axes: Optional[np.ndarray] = None
    dim: int = 0
    end: Optional[np.ndarray] = None

    @classmethod
    def point(cls, c) -> CoreManifold:
        return cls("point", as_array(c).copy())

    @classmethod
    def segment(cls, a, b) -> CoreManifold:
        a, b = as_array(a).copy(), as_array(b).copy()
        if np.linalg.norm(b - a) == 0:
            raise DomainError("segment endpoints coincide")
        return cls("segment", a, float(np.linalg.norm(b - a)), dim=1, end=b)

    @classmethod
    def circle(cls, radius: float = 1.0, plane: Sequence[int] = (1, 2), center=0.0) -> CoreManifold:
        return cls.k_sphere(1, radius, axes=plane, center=center, kind="circle")

    @classmethod
    def k_sphere(cls, k: int, radius: float = 1.0, axes: Optional[Sequence[int]] = None, center=0.0, kind="k_sphere") -> CoreManifold:
        """k-dimensional round sphere in the span of basis vectors ``axes`` (default e1..e_{k+1})."""
        if not 1 <= int(k) <= 6:
            raise DomainError(f"k-sphere dimension must be in 1..6, got {k}")
        k = int(k)
        if not radius > 0:
            raise DomainError(f"core radius must be positive, got {radius}")
        axes = tuple(range(1, k + 2)) if axes is None else tuple(int(a) for a in axes)
        if len(axes) != k + 1 or len(set(axes)) != k + 1 or not all(0 <= a <= 7 for a in axes):
            raise DomainError(f"a {k}-sphere needs {k + 1} distinct axes in 0..7, got {axes}")
        frame = np.eye(8)[:, list(axes)]
        return cls(kind, as_array(center).copy(), float(radius), frame, k)

    @property
    def reach(self) -> float:
        if self.kind in ("circle", "k_sphere"):
            return self.radius
        return math.inf

    @property
    def bounding_radius(self) -> float:
        """Radius of a ball around ``centroid`` containing the core."""
        if self.kind == "segment":
            return 0.5 * self.radius
        return self.radius

    @property
    def centroid(self) -> np.ndarray:
        if self.kind == "segment":
            return 0.5 * (self.center + self.end)
        return self.center

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from each point to the core."""
        p = np.asarray(points, float) - self.center
        if self.kind == "point":
            return np.linalg.norm(p, axis=-1)
        if self.kind == "segment":
            d = (self.end - self.center) / self.radius
            t = np.clip(p @ d, 0.0, self.radius)
            return np.linalg.norm(p - t[..., None] * d, axis=-1)
        inplane = p @ self.axes
        r = np.linalg.norm(inplane, axis=-1)
        off2 = np.sum(p * p, axis=-1) - r * r
        return np.sqrt(np.maximum(off2, 0.0) + (r - self.radius) ** 2)

    def describe(self) -> dict:
        out = {"kind": self.kind, "center": self.center.tolist()}
        if self.kind == "segment":
            out["end"] = self.end.tolist()
        if self.kind in ("circle", "k_sphere"):
            out.update(radius=self.radius, dim=self.dim, axes=[int(np.argmax(c)) for c in self.axes.T])
        return out


@dataclass(frozen=True)
class Patch:
    """One smooth parametrised piece of a surface.

    ``chart`` maps parameters ``(m, 7)`` from the box ``domain`` to points
    ``(m, 8)``, tangents ``(m, 8, 7)`` and anchors ``(m, 8)``. The anchor is the
    nearest core point, so ``point - anchor`` points to the outside.
    """

    domain: np.ndarray
    chart: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]

    @property
    def volume(self) -> float:
        return float(np.prod(self.domain[:, 1] - self.domain[:, 0]))

    def point_map(self, params) -> np.ndarray:
        return self.chart(np.asarray(params, float))[0]

    def tangent_map(self, params) -> np.ndarray:
        return self.chart(np.asarray(params, float))[1]

    def anchor_map(self, params) -> np.ndarray:
        return self.chart(np.asarray(params, float))[2]


@dataclass(frozen=True)
class ParamSurface:
    kind: str
    patches: tuple[Patch, ...]
    core: CoreManifold
    eps: float
    exact_area: Optional[float] = None
    shape: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def center(self) -> np.ndarray:
        return self.core.centroid

    @property
    def bounding_radius(self) -> float:
        return self.core.bounding_radius + self.eps

    def contains(self, z, margin: float = 0.0) -> bool:
        """Whether ``z`` lies inside the tube by at least ``margin``."""
        return bool(self.core.distance(as_array(z)) < self.eps - margin)

    def describe(self) -> dict:
        out = {"kind": self.kind, "eps": self.eps, "core": self.core.describe()}
        if self.shape is not None:
            out["shape"] = self.shape.tolist()
        return out


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature rule for surface integrals.

    ``gauss_legendre`` uses a tensor grid of ``nodes_per_dim`` points per
    parameter, either one count for every axis or a 7-tuple (for a sphere the
    first entry is the angle measured from the real axis); ``monte_carlo`` draws ``total_samples`` uniform parameter points
    from a PCG64 generator seeded with ``seed``.
    """

    rule: str = "gauss_legendre"
    nodes_per_dim: Union[int, tuple[int, ...]] = 8
    total_samples: int = 1_000_000
    seed: int = 0
    chunk_size: int = 1 << 15
    threads: int = 1

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"quadrature rule must be one of {RULES}, got {self.rule!r}")
        n = self.nodes_per_dim
        if not isinstance(n, (int, np.integer)):
            n = tuple(int(v) for v in n)
            if len(n) != 7:
                raise DomainError(f"per-axis nodes_per_dim needs 7 entries, got {len(n)}")
            object.__setattr__(self, "nodes_per_dim", n)
        if self.rule == "gauss_legendre" and min(self.axis_nodes()) < 2:
            raise DomainError("nodes_per_dim must be at least 2")
        if self.rule == "monte_carlo" and self.total_samples < 1000:
            raise DomainError("total_samples must be at least 1000")
        if self.chunk_size < 1 or self.threads < 1:
            raise DomainError("chunk_size and threads must be positive")

    def axis_nodes(self) -> tuple[int, ...]:
        n = self.nodes_per_dim
        return n if isinstance(n, tuple) else (int(n),) * 7

    def refined(self) -> QuadratureSpec:
        """Spec with at least twice as many nodes per surface patch."""
        from dataclasses import replace

        if self.rule == "monte_carlo":
            return replace(self, total_samples=2 * self.total_samples)
        grow = [math.ceil(n * 2 ** (1 / 7)) for n in self.axis_nodes()]
        return replace(self, nodes_per_dim=grow[0] if isinstance(self.nodes_per_dim, int) else tuple(grow))


@dataclass
class SurfaceChunk:
    """A batch of quadrature nodes on one patch.

    ``weighted_normals`` is the outward vector surface element times the
    quadrature weight; ``orientation`` is the sign that was applied to the raw
    minors of ``tangents`` to make it outward.
    """

    points: np.ndarray
    weighted_normals: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray
    orientation: int
    patch: int

    def __len__(self):
        return self.points.shape[0]


# -- surface element ---------------------------------------------------------


def surface_element(tangents) -> np.ndarray:
    """Vector of signed maximal minors: ``out_i = (-1)^i det(T without row i)``.

    ``tangents`` has shape ``(..., 8, 7)``. The result is orthogonal to every
    column and its length is the 7-volume of the spanned parallelotope.
    """
    t = np.asarray(tangents, dtype=float)
    out = np.empty(t.shape[:-2] + (8,))
    for i in range(8):
        rows = [r for r in range(8) if r != i]
        out[..., i] = (-1) ** i * np.linalg.det(t[..., rows, :])
    return out


# -- constructors ------------------------------------------------------------


def _rotate(frame: Optional[np.ndarray], vecs: np.ndarray) -> np.ndarray:
    """Apply ``frame`` (8 x k columns) to vectors or tangent stacks along axis -2 / -1."""
    if frame is None:
        return vecs
    return vecs @ frame.T


def _rotate_tangents(frame: Optional[np.ndarray], du: np.ndarray) -> np.ndarray:
    if frame is None:
        return du
    return np.swapaxes(np.swapaxes(du, -1, -2) @ frame.T, -1, -2)


def _adapted(v: np.ndarray, dv: np.ndarray, shape: Optional[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Radially project ``shape @ v`` back to the unit sphere, with derivatives.

    The image is the same sphere, only the distribution of parameter nodes on
    it changes.
    """
    if shape is None:
        return v, dv
    lead, n, d = v.shape[:-1], v.shape[-1], dv.shape[-1]
    w, dw = _kernels.project_shaped(
        np.ascontiguousarray(v.reshape(-1, n)), np.ascontiguousarray(dv.reshape(-1, n, d)), np.ascontiguousarray(shape)
    )
    return w.reshape(lead + (n,)), dw.reshape(lead + (n, d))


def _check_shape(shape, n: int) -> Optional[np.ndarray]:
    if shape is None:
        return None
    shape = np.asarray(shape, float)
    if shape.shape != (n, n):
        raise DomainError(f"chart shape must be {n}x{n}, got {shape.shape}")
    if not np.all(np.isfinite(shape)) or not abs(np.linalg.det(shape)) > 1e-12 * np.abs(shape).max() ** n:
        raise DomainError("chart shape must be a finite invertible matrix")
    if np.linalg.det(shape) < 0:
        raise DomainError("chart shape must preserve orientation")
    return shape


def _sphere_patch(
    center: np.ndarray, r: float, frame: Optional[np.ndarray], first_range=(0.0, math.pi), shape: Optional[np.ndarray] = None
) -> Patch:
    dom = sphere_domain(7)
    dom[0] = first_range

    def chart(theta):
        u, du = _adapted(*hyperspherical(theta), shape)
        pts = center + r * _rotate(frame, u)
        return pts, r * _rotate_tangents(frame, du), np.broadcast_to(center, pts.shape)

    return Patch(dom, chart)


def sphere(center, r: float, frame: Optional[np.ndarray] = None, shape: Optional[np.ndarray] = None) -> ParamSurface:
    """Round 7-sphere ``|z - center| = r`` in hyperspherical angles.

    ``frame`` (orthonormal 8x8, columns) rotates the angle chart; the default is
    the identity, with the first angle measured from the real axis. ``shape``
    (8x8, in frame coordinates) maps each unit vector ``v`` of the chart to
    ``shape v / |shape v|``, which moves nodes towards directions ``shape``
    contracts.
    """
    r = float(r)
    if not r > 0:
        raise DomainError(f"sphere radius must be positive, got {r}")
    c = as_array(center).astype(float).copy()
    if frame is not None:
        frame = np.asarray(frame, float)
        if frame.shape != (8, 8) or not np.allclose(frame.T @ frame, np.eye(8), atol=1e-12):
            raise DomainError("sphere frame must be an orthonormal 8x8 matrix")
    shape = _check_shape(shape, 8)
    area = r**7 * math.pi**4 / 3.0
    return ParamSurface("sphere", (_sphere_patch(c, r, frame, shape=shape),), CoreManifold.point(c), r, area, shape)


def normal_frame_size(core: CoreManifold) -> int:
    """Dimension of the vectors a tube ``shape`` acts on (the normal space plus one for k-spheres)."""
    if core.kind == "point":
        return 8
    if core.kind == "segment":
        return 7
    return 8 - core.dim


def core_frames(core: CoreManifold, per_angle: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Sample core points with the local normal frames a tube ``shape`` acts in.

    Returns points ``(m, 8)`` and frames ``(m, 8, normal_frame_size(core))``
    whose columns are orthonormal.
    """
    if core.kind == "point":
        return core.center[None], np.eye(8)[None]
    if core.kind == "segment":
        d = (core.end - core.center) / core.radius
        t = np.linspace(0.0, core.radius, per_angle + 1)
        g = complement_frame(d[:, None])
        return core.center + t[:, None] * d, np.broadcast_to(g, (len(t), 8, 7)).copy()
    axes = [_gl_axis(lo, hi, per_angle)[0] for lo, hi in sphere_domain(core.dim)]
    params = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, core.dim)
    omega = hyperspherical(params)[0] @ core.axes.T
    g = complement_frame(core.axes)
    frames = np.concatenate([omega[:, :, None], np.broadcast_to(g, (len(omega),) + g.shape)], axis=-1)
    return core.center + core.radius * omega, frames


def _k_sphere_tube(core: CoreManifold, eps: float, shape: Optional[np.ndarray] = None) -> Patch:
    k, big_r = core.dim, core.radius
    a_frame = core.axes  # 8 x (k+1)
    g_frame = complement_frame(a_frame)  # 8 x (7-k)
    c = core.center
    dom = np.concatenate([sphere_domain(k), sphere_domain(7 - k)])

    def chart(params):
        s, ds = hyperspherical(params[..., :k])
        v, dv = _adapted(*hyperspherical(params[..., k:]), shape)
        omega = s @ a_frame.T
        anchor = c + big_r * omega
        radial = big_r + eps * v[..., :1]
        pts = c + radial * omega + eps * v[..., 1:] @ g_frame.T
        t_core = radial[..., None] * _rotate_tangents(a_frame, ds)
        t_normal = eps * (omega[..., :, None] * dv[..., None, 0, :] + _rotate_tangents(g_frame, dv[..., 1:, :]))
        return pts, np.concatenate([t_core, t_normal], axis=-1), anchor

    return Patch(dom, chart)


def _segment_patches(core: CoreManifold, eps: float, shape: Optional[np.ndarray] = None) -> tuple[Patch, ...]:
    a, b, length = core.center, core.end, core.radius
    d = (b - a) / length
    g = complement_frame(d[:, None])  # 8 x 7
    frame = np.concatenate([d[:, None], g], axis=1)
    # the caps act on the normal block only so that they still meet the cylinder
    cap_shape = None if shape is None else np.block([[np.ones((1, 1)), np.zeros((1, 7))], [np.zeros((7, 1)), shape]])
    cap_b = _sphere_patch(b, eps, frame, (0.0, 0.5 * math.pi), cap_shape)
    cap_a = _sphere_patch(a, eps, frame, (0.5 * math.pi, math.pi), cap_shape)
    dom = np.concatenate([[[0.0, length]], sphere_domain(6)])

    def chart(params):
        v, dv = _adapted(*hyperspherical(params[..., 1:]), shape)
        anchor = a + params[..., :1] * d
        t_axis = np.broadcast_to(d[:, None], params.shape[:-1] + (8, 1))
        tangents = np.concatenate([t_axis, eps * _rotate_tangents(g, dv)], axis=-1)
        return anchor + eps * v @ g.T, tangents, anchor

    return (cap_a, Patch(dom, chart), cap_b)


def tube(core: CoreManifold, eps: float, shape: Optional[np.ndarray] = None) -> ParamSurface:
    """Surface of points at distance exactly ``eps`` from ``core``.

    ``shape`` redistributes nodes over each normal sphere like the sphere
    option of the same name. It acts on local normal coordinates: for a
    k-sphere core the in-plane radial direction followed by the complement of
    the core's span, for a segment the complement of its direction. See
    :func:`normal_frame_size` for the expected size.
    """
    eps = float(eps)
    if not eps > 0:
        raise DomainError(f"tube thickness must be positive, got {eps}")
    if eps >= core.reach:
        raise ContractViolation(f"tube self-intersects: eps={eps} >= reach {core.reach} of the {core.kind}")
    shape = _check_shape(shape, normal_frame_size(core))
    if core.kind == "point":
        s = sphere(core.center, eps, shape=shape)
        return ParamSurface("tube", s.patches, core, eps, s.exact_area, shape)
    if core.kind == "segment":
        area = eps**7 * math.pi**4 / 3.0 + core.radius * eps**6 * (16.0 * math.pi**3 / 15.0)
        return ParamSurface("tube", _segment_patches(core, eps, shape), core, eps, area, shape)
    if core.kind in ("circle", "k_sphere"):
        return ParamSurface("tube", (_k_sphere_tube(core, eps, shape),), core, eps, None, shape)
    raise DomainError(f"unknown core kind {core.kind!r}")


# -- quadrature --------------------------------------------------------------


def _gl_axis(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _patch_params(patch: Patch, spec: QuadratureSpec, rng: Optional[np.random.Generator], count: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    dom = patch.domain
    if spec.rule == "gauss_legendre":
        axes = [_gl_axis(lo, hi, n) for (lo, hi), n in zip(dom, spec.axis_nodes())]
        nodes = [ax[0] for ax in axes]
        weights = [ax[1] for ax in axes]
        shape = tuple(len(x) for x in nodes)
        total = int(np.prod(shape))
        for start in range(0, total, spec.chunk_size):
            idx = np.unravel_index(np.arange(start, min(start + spec.chunk_size, total)), shape)
            params = np.stack([nodes[d][idx[d]] for d in range(len(shape))], axis=-1)
            w = np.ones(len(idx[0]))
            for d in range(len(shape)):
                w = w * weights[d][idx[d]]
            yield params, w
    else:
        lo, hi = dom[:, 0], dom[:, 1]
        w_each = patch.volume / count
        for start in range(0, count, spec.chunk_size):
            m = min(spec.chunk_size, count - start)
            params = lo + (hi - lo) * rng.random((m, dom.shape[0]))
            yield params, np.full(m, w_each)


def _mc_allocation(surface: ParamSurface, total: int) -> list[int]:
    vols = np.array([p.volume for p in surface.patches])
    counts = np.floor(total * vols / vols.sum()).astype(int)
    counts[-1] += total - counts.sum()
    return counts.tolist()


def quadrature_nodes(surface: ParamSurface, spec: QuadratureSpec) -> Iterator[SurfaceChunk]:
    """Deterministic stream of oriented, weighted surface nodes.

    The outward side of each patch is fixed from its first chunk; a later node
    disagreeing with it raises :class:`OrientationError`.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed)) if spec.rule == "monte_carlo" else None
    counts = _mc_allocation(surface, spec.total_samples) if rng is not None else [0] * len(surface.patches)
    for p_idx, (patch, count) in enumerate(zip(surface.patches, counts)):
        orientation = 0
        for params, w in _patch_params(patch, spec, rng, count):
            pts, tangents, anchors = patch.chart(params)
            tangents = np.ascontiguousarray(tangents)
            outward = pts - anchors
            raw = _kernels.surface_elements(tangents, np.ascontiguousarray(outward))
            signs = np.sign(np.einsum("ni,ni->n", raw, outward))
            if orientation == 0:
                orientation = int(signs[0]) or 1
                if orientation < 0:
                    log.debug("patch %d of %s: flipping parametrisation normal to point outward", p_idx, surface.kind)
            if np.any(signs != orientation):
                bad = int(np.flatnonzero(signs != orientation)[0])
                raise OrientationError(f"mixed normal orientation on {surface.kind} patch {p_idx} at parameters {params[bad].tolist()}")
            yield SurfaceChunk(pts, orientation * w[:, None] * raw, tangents, w, orientation, p_idx)


@dataclass
class IntegralResult:
    value: np.ndarray
    node_count: int
    stderr: Optional[np.ndarray] = None


def integrate(surface: ParamSurface, spec: QuadratureSpec, integrand: Callable[[SurfaceChunk], np.ndarray]) -> IntegralResult:
    """Sum ``integrand(chunk)`` (per-node, already weighted) over all nodes.

    Chunks are evaluated ``spec.threads`` at a time and reduced in stream order,
    so the result does not depend on the thread count. For the Monte Carlo rule
    the standard error of the sum is returned as well.
    """
    total = None
    nodes = 0
    moments: dict[int, list] = {}

    def consume(chunk, contrib):
        nonlocal total, nodes
        s = contrib.sum(axis=0)
        total = s if total is None else total + s
        nodes += len(chunk)
        if spec.rule == "monte_carlo":
            acc = moments.setdefault(chunk.patch, [0, 0.0, 0.0])
            acc[0] += len(chunk)
            acc[1] = acc[1] + s
            acc[2] = acc[2] + (contrib * contrib).sum(axis=0)

    stream = quadrature_nodes(surface, spec)
    if spec.threads == 1:
        for chunk in stream:
            consume(chunk, np.asarray(integrand(chunk)))
    else:
        with ThreadPoolExecutor(spec.threads) as pool:
            while True:
                batch = [c for _, c in zip(range(spec.threads), stream)]
                if not batch:
                    break
                for chunk, contrib in zip(batch, pool.map(integrand, batch)):
                    consume(chunk, np.asarray(contrib))
    stderr = None
    if spec.rule == "monte_carlo":
        var = 0.0
        for n, s1, s2 in moments.values():
            var = var + np.maximum(s2 - s1 * s1 / n, 0.0) * n / max(n - 1, 1)
        stderr = np.sqrt(var)
    return IntegralResult(np.asarray(total), nodes, stderr)


def surface_area(surface: ParamSurface, spec: QuadratureSpec) -> IntegralResult:
    return integrate(surface, spec, lambda ch: np.linalg.norm(ch.weighted_normals, axis=-1))


# -- mini-format -------------------------------------------------------------

SURFACE_GRAMMAR = """\
sphere(c0,...,c7;r)         sphere of radius r around c (or sphere(c;r) with one real c)
tube(point;c0,...,c7;eps)   same as a sphere of radius eps
tube(circle;e1,e2;R;eps)    tube around the radius-R circle in the plane of the named units
tube(ksphere;k;R;eps)       tube around the radius-R k-sphere in span(e1..e_{k+1})
tube(segment;a0..a7;b0..b7;eps)  capsule around the segment from a to b
"""


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"bad number list for {what}: {text!r}") from None


def _point(text: str, what: str) -> np.ndarray:
    vals = _floats(text, what)
    if len(vals) == 1:
        return as_array(vals[0])
    if len(vals) != 8:
        raise DomainError(f"{what} needs 1 or 8 components, got {len(vals)}")
    return np.array(vals)


def parse_core(text: str) -> CoreManifold:
    """Core part of the tube format, e.g. ``circle;e1,e2;1`` or ``ksphere;2;1``."""
    parts = [p.strip() for p in text.split(";")]
    kind = parts[0]
    try:
        if kind == "point" and len(parts) == 2:
            return CoreManifold.point(_point(parts[1], "point"))
        if kind == "circle" and len(parts) == 3:
            plane = [int(re.fullmatch(r"e_?([0-7])", u.strip()).group(1)) for u in parts[1].split(",")]
            return CoreManifold.circle(float(parts[2]), plane)
        if kind == "ksphere" and len(parts) == 3:
            return CoreManifold.k_sphere(int(parts[1]), float(parts[2]))
        if kind == "segment" and len(parts) == 3:
            return CoreManifold.segment(_point(parts[1], "segment start"), _point(parts[2], "segment end"))
    except (AttributeError, ValueError) as exc:
        raise DomainError(f"malformed core {text!r}: {exc}") from None
    raise DomainError(f"malformed core {text!r}; expected one of:\n{SURFACE_GRAMMAR}")


def parse_surface(text: str) -> ParamSurface:
    """Parse ``sphere(...)`` or ``tube(...)`` (see ``SURFACE_GRAMMAR``)."""
    m = re.fullmatch(r"\s*(sphere|tube)\s*\((.*)\)\s*", text)
    if not m:
        raise DomainError(f"malformed surface {text!r}; expected one of:\n{SURFACE_GRAMMAR}")
    kind, body = m.groups()
    if kind == "sphere":
        parts = body.split(";")
        if len(parts) != 2:
            raise DomainError(f"malformed sphere {text!r}; expected sphere(c0,...,c7;r)")
        return sphere(_point(parts[0], "sphere center"), _floats(parts[1], "radius")[0])
    head, _, eps = body.rpartition(";")
    return tube(parse_core(head), _floats(eps, "eps")[0])
