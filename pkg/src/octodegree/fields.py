"""Octonion-valued fields, Fueter polynomials and Cauchy-Riemann checks.

A field is an immutable bundle of a vectorised evaluator ``(..., 8) -> (..., 8)``
and, when known, an analytic Jacobian ``(..., 8) -> (..., 8, 8)`` with entry
``(i, j) = d f_i / d x_j``. Everything the integrators touch is vectorised; the
``Octonion`` value type is accepted at the edges for convenience.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from . import _kernels
from .errors import DomainError
from .octonion import Octonion, as_array, basis, mul

Evaluator = Callable[[np.ndarray], np.ndarray]

REGULARITY = ("left", "right", "both", "none")

_EPS_CBRT = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class OctonionField:
    """An evaluatable map from the octonions to the octonions.

    ``regularity`` is a *claim*; :func:`cr_residual` is how it gets checked.
    Arithmetic between fields (``+``, ``-``, real scaling, right multiplication
    by a constant via :meth:`times`) keeps the analytic Jacobian when both
    operands have one.
    """

    name: str
    evaluate: Evaluator = field(repr=False, compare=False)
    jacobian: Optional[Evaluator] = field(default=None, repr=False, compare=False)
    regularity: str = "none"
    params: tuple = ()

    def __post_init__(self):
        if self.regularity not in REGULARITY:
            raise DomainError(f"regularity must be one of {REGULARITY}, got {self.regularity!r}")

    def __call__(self, z):
        out = self.evaluate(as_array(z))
        if isinstance(z, Octonion) or np.ndim(z) == 0:
            return Octonion(out)
        return out

    @property
    def left_regular(self) -> bool:
        return self.regularity in ("left", "both")

    @property
    def right_regular(self) -> bool:
        return self.regularity in ("right", "both")

    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(_fmt(p) for p in self.params)})"

    def __add__(self, other):
        if not isinstance(other, OctonionField):
            return self.shifted(other)
        return _combine(self, other, 1.0, f"{self.label()} + {other.label()}")

    def __sub__(self, other):
        if not isinstance(other, OctonionField):
            return self.shifted(-as_array(other))
        return _combine(self, other, -1.0, f"{self.label()} - {other.label()}")

    def __rmul__(self, s):
        if not np.isscalar(s):
            return NotImplemented
        s = float(s)
        jac = self.jacobian
        return OctonionField(
            name=f"{_fmt(s)}*{self.label()}",
            evaluate=lambda x: s * self.evaluate(x),
            jacobian=None if jac is None else (lambda x: s * jac(x)),
            regularity=self.regularity,
        )

    def __neg__(self):
        return -1.0 * self

    def shifted(self, a) -> OctonionField:
        """``z -> f(z) + a`` for a constant octonion ``a``."""
        a = as_array(a)
        return OctonionField(
            name=f"{self.label()} + ({Octonion(a)})",
            evaluate=lambda x: self.evaluate(x) + a,
            jacobian=self.jacobian,
            regularity=self.regularity,
        )

    def times(self, u) -> OctonionField:
        """``z -> f(z) u`` for a constant octonion ``u`` (no regularity promise)."""
        u = as_array(u)
        jac = self.jacobian

        def jacobian(x):
            # columns are octonions: (df/dx_j) u
            return np.swapaxes(mul(np.swapaxes(jac(x), -1, -2), u), -1, -2)

        real = bool(np.all(u[1:] == 0.0))
        return OctonionField(
            name=f"({self.label()})*({Octonion(u)})",
            evaluate=lambda x: mul(self.evaluate(x), u),
            jacobian=None if jac is None else jacobian,
            regularity=self.regularity if real else "none",
        )


def _fmt(p) -> str:
    if isinstance(p, (int, np.integer)):
        return str(int(p))
    return f"{float(p):g}"


def _combine(f: OctonionField, g: OctonionField, s: float, name: str) -> OctonionField:
    jf, jg = f.jacobian, g.jacobian
    jac = None if jf is None or jg is None else (lambda x: jf(x) + s * jg(x))
    if f.left_regular and g.left_regular:
        reg = "both" if f.right_regular and g.right_regular else "left"
    elif f.right_regular and g.right_regular:
        reg = "right"
    else:
        reg = "none"
    return OctonionField(
        name=name,
        evaluate=lambda x: f.evaluate(x) + s * g.evaluate(x),
        jacobian=jac,
        regularity=reg,
    )


# -- multi-indices and Fueter polynomials ------------------------------------


def tau(i: int) -> tuple[int, ...]:
    """Multi-index with a single 1 in slot ``i`` (1-based)."""
    _check_unit_index(i)
    n = [0] * 7
    n[i - 1] = 1
    return tuple(n)


def _check_unit_index(i) -> None:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= 7:
        raise DomainError(f"Fueter index must be an integer in 1..7, got {i!r}")


def _check_multi_index(n: Sequence[int]) -> tuple[int, ...]:
    n = tuple(int(v) for v in n)
    if len(n) != 7 or any(v < 0 for v in n):
        raise DomainError(f"multi-index needs 7 nonnegative entries, got {n}")
    return n


def _z_array(i: int, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    out[..., 0] = x[..., i]
    out[..., i] = -x[..., 0]
    return out


def fueter_Z(i: int, z):
    """``Z_i(z) = x_i - x_0 e_i``."""
    _check_unit_index(i)
    x = as_array(z)
    out = _z_array(i, x)
    return Octonion(out) if out.ndim == 1 else out


def _sequences(n: tuple[int, ...]) -> list[list[int]]:
    letters = [i + 1 for i, k in enumerate(n) for _ in range(k)]
    return [list(p) for p in multiset_permutations(letters)]


def _weight(n: tuple[int, ...]) -> float:
    return math.prod(math.factorial(k) for k in n) / math.factorial(sum(n))


def _nested(seq: list[int], x: np.ndarray) -> np.ndarray:
    # Z_{s1}(Z_{s2}( ... (Z_{s_{m-1}} Z_{s_m})))
    acc = _z_array(seq[-1], x)
    for i in reversed(seq[:-1]):
        acc = mul(_z_array(i, x), acc)
    return acc


def _nested_with_jacobian(seq: list[int], x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # derivative columns stored on axis -2: d[..., j, :] = d(value)/dx_j
    def dz(i):
        d = np.zeros(x.shape[:-1] + (8, 8))
        d[..., 0, i] = -1.0
        d[..., i, 0] = 1.0
        return d

    acc = _z_array(seq[-1], x)
    dacc = dz(seq[-1])
    for i in reversed(seq[:-1]):
        zi = _z_array(i, x)
        dacc = mul(dz(i), acc[..., None, :]) + mul(zi[..., None, :], dacc)
        acc = mul(zi, acc)
    return acc, dacc


def _fueter_V_array(n: tuple[int, ...], x: np.ndarray) -> np.ndarray:
    if sum(n) == 0:
        out = np.zeros_like(x)
        out[..., 0] = 1.0
        return out
    total = sum(_nested(seq, x) for seq in _sequences(n))
    return _weight(n) * total


def _fueter_V_jacobian(n: tuple[int, ...], x: np.ndarray) -> np.ndarray:
    if sum(n) == 0:
        return np.zeros(x.shape[:-1] + (8, 8))
    total = sum(_nested_with_jacobian(seq, x)[1] for seq in _sequences(n))
    return _weight(n) * np.swapaxes(total, -1, -2)


def fueter_V(n: Sequence[int], z):
    """Symmetrised Fueter polynomial ``V_n``.

    Sum of the right-nested products ``Z_{s1}(Z_{s2}(...(Z_{s_{m-1}} Z_{s_m})))``
    over all distinguishable orderings ``s`` of the multiset in which index ``i``
    occurs ``n_i`` times, each weighted by ``n_1! ... n_7! / |n|!``. With this
    weighting ``V_{(2,0,...)} = Z_1 Z_1`` and ``V_{(1,1,0,...)}`` is the average
    of ``Z_1 Z_2`` and ``Z_2 Z_1``. ``|n| = 0`` gives the constant 1.
    """
    n = _check_multi_index(n)
    x = as_array(z)
    out = _fueter_V_array(n, x)
    return Octonion(out) if out.ndim == 1 else out


def fueter_field(n: Sequence[int]) -> OctonionField:
    n = _check_multi_index(n)
    return OctonionField(
        name="V",
        params=n,
        evaluate=lambda x: _fueter_V_array(n, x),
        jacobian=lambda x: _fueter_V_jacobian(n, x),
        regularity="both",
    )


# -- differential checks -----------------------------------------------------


def default_step(z: np.ndarray) -> np.ndarray:
    """Central-difference step ``cbrt(eps) * max(1, |z|)``."""
    return _EPS_CBRT * np.maximum(1.0, np.linalg.norm(z, axis=-1))


def _central_differences(f: OctonionField, x: np.ndarray, h) -> np.ndarray:
    """``(..., 8, 8)`` array whose ``[..., j, :]`` is ``df/dx_j``."""
    h = default_step(x) if h is None else np.broadcast_to(np.asarray(h, float), x.shape[:-1])
    steps = h[..., None, None] * np.eye(8)
    xp = x[..., None, :] + steps
    xm = x[..., None, :] - steps
    return (f.evaluate(xp) - f.evaluate(xm)) / (2.0 * h[..., None, None])


def cr_residual(f: OctonionField, z, side: str = "left", h: Optional[float] = None):
    """Finite-difference Cauchy-Riemann residual.

    ``side="left"`` gives ``df/dx0 + sum e_i df/dx_i``; ``side="right"`` gives
    ``df/dx0 + sum (df/dx_i) e_i``.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    if h is not None and h <= 0:
        raise DomainError("finite-difference step must be positive")
    x = as_array(z)
    d = _central_differences(f, x, h)
    units = np.eye(8)
    if side == "left":
        out = mul(units, d).sum(axis=-2)
    else:
        out = mul(d, units).sum(axis=-2)
    return Octonion(out) if out.ndim == 1 else out


def jacobian(f: OctonionField, z, h: Optional[float] = None, analytic: bool = True) -> np.ndarray:
    """Real 8x8 Jacobian ``d f_i / d x_j``; analytic when the field provides one."""
    if h is not None and h <= 0:
        raise DomainError("finite-difference step must be positive")
    x = as_array(z)
    if analytic and f.jacobian is not None:
        return np.asarray(f.jacobian(x), dtype=float)
    return np.swapaxes(_central_differences(f, x, h), -1, -2)


def adjugate(m) -> np.ndarray:
    """Transposed cofactor matrix, batched over leading axes; singular input is fine."""
    m = np.asarray(m, dtype=float)
    n = m.shape[-1]
    if m.ndim < 2 or m.shape[-2] != n:
        raise DomainError(f"adjugate needs square matrices, got shape {m.shape}")
    flat = np.ascontiguousarray(m.reshape((-1, n, n)))
    return _kernels.adjugates(flat).reshape(m.shape)


def determinant(m) -> np.ndarray:
    return np.linalg.det(np.asarray(m, dtype=float))


# -- catalog -----------------------------------------------------------------


def _excluded_products(x: np.ndarray) -> np.ndarray:
    """``out[..., i] = prod_{k != i} x_k`` without division."""
    ones = np.ones(x.shape[:-1] + (1,))
    left = np.cumprod(np.concatenate([ones, x[..., :-1]], axis=-1), axis=-1)
    right = np.cumprod(np.concatenate([ones, x[..., :0:-1]], axis=-1), axis=-1)[..., ::-1]
    return left * right


_HEMPFLING_SIGN = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


def _hempfling(x):
    return _HEMPFLING_SIGN * (_excluded_products(x) - 1.0)


def _hempfling_jacobian(x):
    lead = x.shape[:-1]
    flat = np.ascontiguousarray(x.reshape(-1, 8), dtype=float)
    return _kernels.excluded_products_jacobian(flat, _HEMPFLING_SIGN).reshape(lead + (8, 8))


def _sum_squares(k: int, radius2: float = 0.0, linear_tail: bool = False):
    """``Z_1^2 + ... + Z_k^2`` plus optionally ``sum_{j>k} Z_j e_j - R^2``."""
    tail = 7 - k if linear_tail else 0

    def evaluate(x):
        x0 = x[..., 0]
        xs = x[..., 1 : k + 1]
        out = np.zeros_like(x)
        out[..., 0] = np.sum(xs * xs, axis=-1) - k * x0 * x0 + tail * x0 - radius2
        out[..., 1 : k + 1] = -2.0 * x0[..., None] * xs
        if linear_tail:
            out[..., k + 1 :] = x[..., k + 1 :]
        return out

    def jac(x):
        x0 = x[..., 0]
        out = np.zeros(x.shape[:-1] + (8, 8))
        out[..., 0, 0] = -2.0 * k * x0 + tail
        idx = np.arange(1, k + 1)
        out[..., 0, idx] = 2.0 * x[..., 1 : k + 1]
        out[..., idx, 0] = -2.0 * x[..., 1 : k + 1]
        out[..., idx, idx] = -2.0 * x0[..., None]
        if linear_tail:
            t = np.arange(k + 1, 8)
            out[..., t, t] = 1.0
        return out

    return evaluate, jac


def _linear(matrix: np.ndarray, offset: Optional[np.ndarray] = None):
    offset = np.zeros(8) if offset is None else offset

    def evaluate(x):
        return x @ matrix.T + offset

    def jac(x):
        return np.broadcast_to(matrix, x.shape[:-1] + (8, 8)).copy()

    return evaluate, jac


def _sum_squares_field(k) -> OctonionField:
    k = _int_param("sum_squares", k, 1, 7)
    ev, jac = _sum_squares(k)
    return OctonionField("sum_squares", ev, jac, "both", (k,))


def _sphere_variety_field(k, radius) -> OctonionField:
    k = _int_param("sphere_variety", k, 2, 6)
    radius = float(radius)
    if not radius > 0:
        raise DomainError(f"sphere_variety radius must be positive, got {radius}")
    ev, jac = _sum_squares(k, radius * radius, linear_tail=True)
    return OctonionField("sphere_variety", ev, jac, "both", (k, radius))


def _circle_variety_field() -> OctonionField:
    ev, jac = _sum_squares(2, 1.0, linear_tail=True)
    return OctonionField("circle_variety", ev, jac, "both")


def _hempfling_field() -> OctonionField:
    return OctonionField("hempfling", _hempfling, _hempfling_jacobian, "both")


def _module_base_field() -> OctonionField:
    # x1 - x2 e4
    m = np.zeros((8, 8))
    m[0, 1] = 1.0
    m[4, 2] = -1.0
    ev, jac = _linear(m)
    return OctonionField("module_base", ev, jac, "left")


def _module_counterexample_field() -> OctonionField:
    # (x1 - x2 e4) e3 = x1 e3 - x2 e7
    m = np.zeros((8, 8))
    m[3, 1] = 1.0
    m[7, 2] = -1.0
    ev, jac = _linear(m)
    return OctonionField("module_counterexample", ev, jac, "none")


def _identity_field() -> OctonionField:
    ev, jac = _linear(np.eye(8))
    return OctonionField("identity", ev, jac, "none")


def _constant_field(*a) -> OctonionField:
    if len(a) not in (1, 8):
        raise DomainError(f"constant takes 1 or 8 real parameters, got {len(a)}")
    value = as_array(float(a[0])) if len(a) == 1 else np.array(a, dtype=float)
    ev, jac = _linear(np.zeros((8, 8)), value)
    return OctonionField("constant", ev, jac, "both", tuple(float(v) for v in a))


def _fueter_Z_field(i) -> OctonionField:
    i = _int_param("Z", i, 1, 7)
    f = fueter_field(tau(i))
    return OctonionField("Z", f.evaluate, f.jacobian, "both", (i,))


def _int_param(name: str, value, lo: int, hi: int) -> int:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, (int, np.integer)) or not lo <= value <= hi:
        raise DomainError(f"{name}: integer parameter in {lo}..{hi} expected, got {value!r}")
    return int(value)


CATALOG: dict[str, Callable[..., OctonionField]] = {
    "sum_squares": _sum_squares_field,
    "hempfling": _hempfling_field,
    "circle_variety": _circle_variety_field,
    "sphere_variety": _sphere_variety_field,
    "module_base": _module_base_field,
    "module_counterexample": _module_counterexample_field,
    "identity": _identity_field,
    "constant": _constant_field,
    "Z": _fueter_Z_field,
    "V": lambda *n: fueter_field(n),
}


def catalog_get(name: str, params: Sequence = ()) -> OctonionField:
    """Look up a named field; unknown names list the valid ones."""
    if name not in CATALOG:
        raise DomainError(f"unknown field {name!r}; valid fields: {', '.join(sorted(CATALOG))}")
    try:
        return CATALOG[name](*params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from None


HEMPFLING_ZERO = np.ones(8)


def sphere_variety_axis_zeros(k: int, radius: float) -> list[float]:
    """Real ``x0`` of the isolated zeros of ``sphere_variety(k, R)`` on the real axis.

    They solve ``-k x0^2 + (7 - k) x0 - R^2 = 0``.
    """
    roots = np.roots([-float(k), 7.0 - k, -float(radius) ** 2])
    return sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12)


# -- mini-format parser ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)|(?P<unit>e_?[0-7])(?![\w(])|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*(),]))")

FIELD_GRAMMAR = """\
field      := term (('+' | '-') term)*
term       := factor ('*' factor)*
factor     := number | unit | call | '(' field ')' | '-' factor
call       := name ['(' [number (',' number)*] ')']   (bare name = no parameters)
unit       := e0 .. e7 (also e_0 .. e_7); multiplies the factor to its left from the right
names      := {names}
examples   := sum_squares(7) | sphere_variety(2,1.0) | sum_squares(7) + 0.01*Z(1)
              | (Z(1) - Z(2)*e4)*e3 | hempfling() + 0.5
"""


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse field spec at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise DomainError(f"malformed field spec {self.text!r}: expected {value or 'more input'}")
        self.i += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.i != len(self.tokens):
            raise DomainError(f"malformed field spec {self.text!r}: trailing {self.peek()[1]!r}")
        if not isinstance(value, OctonionField):
            value = _constant_field(*as_array(value))
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = _add(value, rhs, 1.0 if op == "+" else -1.0)
        return value

    def term(self):
        value = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            value = _times(value, self.factor())
        return value

    def factor(self):
        kind, tok = self.peek()
        if tok == "-":
            self.take()
            return _times(-1.0, self.factor())
        if tok == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if kind == "num":
            self.take()
            return float(tok)
        if kind == "unit":
            self.take()
            return basis(int(tok[-1]))
        if kind == "name":
            self.take()
            args = []
            if self.peek()[1] != "(":
                return catalog_get(tok, args)
            self.take("(")
            while self.peek()[1] != ")":
                sign = 1.0
                if self.peek()[1] == "-":
                    self.take()
                    sign = -1.0
                k, t = self.take()
                if k != "num":
                    raise DomainError(f"malformed field spec {self.text!r}: bad argument {t!r}")
                args.append(sign * (int(t) if re.fullmatch(r"\d+", t) else float(t)))
                if self.peek()[1] == ",":
                    self.take(",")
            self.take(")")
            return catalog_get(tok, args)
        raise DomainError(f"malformed field spec {self.text!r}: unexpected {tok!r}")


def _add(a, b, s):
    if isinstance(a, OctonionField) and isinstance(b, OctonionField):
        return a + b if s > 0 else a - b
    if isinstance(a, OctonionField):
        return a.shifted(s * as_array(b))
    if isinstance(b, OctonionField):
        return (s * b).shifted(as_array(a))
    return as_array(a) + s * as_array(b)


def _times(a, b):
    if isinstance(a, OctonionField) and isinstance(b, OctonionField):
        raise DomainError("products of two fields are not supported; multiply by constants only")
    if isinstance(a, OctonionField):
        if np.isscalar(b):
            return float(b) * a
        return a.times(b)
    if isinstance(b, OctonionField):
        if np.isscalar(a):
            return float(a) * b
        raise DomainError("left multiplication of a field by an octonion unit is not supported")
    if np.isscalar(a) or np.isscalar(b):
        return a * b
    return mul(a, b)


def parse_field(text: str) -> OctonionField:
    """Parse the CLI field mini-format (see ``FIELD_GRAMMAR``)."""
    return _Parser(text).parse()


FIELD_GRAMMAR = FIELD_GRAMMAR.format(names=", ".join(sorted(CATALOG)))
