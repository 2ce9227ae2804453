"""Octonion arithmetic.

Two layers live here. The array layer (``mul``, ``conj``, ``norm``, ...) works on
real arrays whose last axis has length 8 and is what the integrators use. The
``Octonion`` class is an immutable value type on top of it for interactive use
and for the CLI.

Basis convention: ``e4 = e1 e2``, ``e5 = e1 e3``, ``e6 = e2 e3``, ``e7 = e4 e3``.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

# Products e_i * e_j for i, j = 1..7 as printed in the reference table.
# Kept verbatim so the signed-index constant below can be checked against it.
REFERENCE_TABLE = (
    ("-1", "e4", "e5", "-e2", "-e3", "-e7", "e6"),
    ("-e4", "-1", "e6", "e1", "e7", "-e3", "-e5"),
    ("-e5", "-e6", "-1", "-e7", "e1", "e2", "e4"),
    ("e2", "-e1", "e7", "-1", "-e6", "e5", "-e3"),
    ("e3", "-e7", "-e1", "e6", "-1", "-e4", "e2"),
    ("e7", "e3", "-e2", "-e5", "e4", "-1", "-e1"),
    ("-e6", "e5", "-e4", "e3", "-e2", "e1", "-1"),
)

# Signed index k: e_i e_j = sign(k) * e_|k|, with 0 standing for the unit and the
# sign of the unit carried separately in UNIT_SIGN (0 cannot hold a sign).
_SIGNED = np.array(
    [
        [0, 1, 2, 3, 4, 5, 6, 7],
        [1, 0, 4, 5, -2, -3, -7, 6],
        [2, -4, 0, 6, 1, 7, -3, -5],
        [3, -5, -6, 0, -7, 1, 2, 4],
        [4, 2, -1, 7, 0, -6, 5, -3],
        [5, 3, -7, -1, 6, 0, -4, 2],
        [6, 7, 3, -2, -5, 4, 0, -1],
        [7, -6, 5, -4, 3, -2, 1, 0],
    ],
    dtype=np.int64,
)

PRODUCT_INDEX = np.abs(_SIGNED)
PRODUCT_SIGN = np.where(_SIGNED < 0, -1, 1)
PRODUCT_SIGN[np.arange(1, 8), np.arange(1, 8)] = -1
PRODUCT_SIGN.setflags(write=False)
PRODUCT_INDEX.setflags(write=False)

# (64, 8) matrix P with mul(a, b) = outer(a, b).ravel() @ P.
_MUL_MATRIX = np.zeros((64, 8))
for _i in range(8):
    for _j in range(8):
        _MUL_MATRIX[8 * _i + _j, PRODUCT_INDEX[_i, _j]] = PRODUCT_SIGN[_i, _j]
_MUL_MATRIX.setflags(write=False)

_CONJ = np.array([1.0, -1, -1, -1, -1, -1, -1, -1])


def _parse_unit(token: str) -> tuple[int, int]:
    sign = -1 if token.startswith("-") else 1
    body = token.lstrip("-")
    return sign, 0 if body == "1" else int(body[1:])


def verify_table() -> None:
    """Check the signed-index constant against ``REFERENCE_TABLE``.

    Raises ``AssertionError`` on the first mismatch.
    """
    for i, row in enumerate(REFERENCE_TABLE, start=1):
        for j, token in enumerate(row, start=1):
            sign, k = _parse_unit(token)
            got = (int(PRODUCT_SIGN[i, j]), int(PRODUCT_INDEX[i, j]))
            assert got == (sign, k), f"e{i}*e{j}: table says {token}, constant says {got}"


verify_table()


def table_entries() -> list[tuple[int, int, str]]:
    """All 49 products ``(i, j, "±e_k")`` computed from the multiplication."""
    out = []
    for i in range(1, 8):
        for j in range(1, 8):
            c = mul(basis(i), basis(j))
            k = int(np.flatnonzero(c)[0])
            sign = "-" if c[k] < 0 else ""
            out.append((i, j, f"{sign}{'1' if k == 0 else f'e{k}'}"))
    return out


# -- array layer -------------------------------------------------------------


def basis(i: int) -> np.ndarray:
    """Component vector of ``e_i`` (``e_0`` is the unit)."""
    if not 0 <= i <= 7:
        raise ValueError(f"basis index must be in 0..7, got {i}")
    v = np.zeros(8)
    v[i] = 1.0
    return v


def mul(a, b) -> np.ndarray:
    """Octonion product of arrays broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    outer = a[..., :, None] * b[..., None, :]
    return outer.reshape(outer.shape[:-2] + (64,)) @ _MUL_MATRIX


def conj(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ


def norm(a) -> np.ndarray:
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def inner(a, b) -> np.ndarray:
    """Euclidean scalar product, equal to ``Re(a conj(b))``."""
    return np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)


def inv(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n2 = np.sum(a * a, axis=-1)
    if np.any(n2 == 0.0):
        raise ZeroDivisionError("zero has no inverse")
    return conj(a) / n2[..., None]


def assoc(a, b, c) -> np.ndarray:
    """Associator ``(ab)c - a(bc)``."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


# -- value type --------------------------------------------------------------


class Octonion:
    """Immutable octonion ``x0 + x1 e1 + ... + x7 e7``."""

    __slots__ = ("_x",)

    def __init__(self, *components):
        if len(components) == 1 and np.ndim(components[0]) == 1:
            components = tuple(components[0])
        if len(components) == 1:
            components = (components[0], 0, 0, 0, 0, 0, 0, 0)
        x = np.array(components, dtype=float)
        if x.shape != (8,):
            raise ValueError(f"an octonion needs 8 components, got {x.shape[0]}")
        x.setflags(write=False)
        self._x = x

    @classmethod
    def unit(cls, i: int) -> Octonion:
        return cls(basis(i))

    @property
    def components(self) -> np.ndarray:
        """Read-only view of the 8 real components."""
        return self._x

    @property
    def real(self) -> float:
        return float(self._x[0])

    @property
    def imag(self) -> np.ndarray:
        return self._x[1:]

    def __array__(self, dtype=None, copy=None):
        return np.array(self._x, dtype=dtype)

    def __getitem__(self, i):
        return self._x[i]

    def __iter__(self):
        return iter(self._x.tolist())

    def __len__(self):
        return 8

    def __add__(self, other):
        return Octonion(self._x + _as_components(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Octonion(self._x - _as_components(other))

    def __rsub__(self, other):
        return Octonion(_as_components(other) - self._x)

    def __neg__(self):
        return Octonion(-self._x)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(mul(self._x, other._x))
        if np.isscalar(other):
            return Octonion(self._x * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Octonion(self._x * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Octonion(self._x / float(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return bool(np.array_equal(self._x, other._x))

    def __hash__(self):
        return hash(self._x.tobytes())

    def conjugate(self) -> Octonion:
        return Octonion(conj(self._x))

    def norm(self) -> float:
        return float(norm(self._x))

    def inverse(self) -> Octonion:
        return inverse(self)

    def isclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self._x, _as_components(other), rtol=0.0, atol=atol))

    def __repr__(self):
        return "Octonion(" + ", ".join(f"{v:.17g}" for v in self._x) + ")"

    def __str__(self):
        terms = []
        for i, v in enumerate(self._x):
            if v == 0.0:
                continue
            unit = "" if i == 0 else f"e{i}"
            terms.append(f"{v:+g}{unit}")
        return " ".join(terms) if terms else "0"


OctonionLike = Union[Octonion, float, int, Iterable[float], np.ndarray]


def _as_components(x) -> np.ndarray:
    if isinstance(x, Octonion):
        return x._x
    if np.isscalar(x):
        v = np.zeros(8)
        v[0] = float(x)
        return v
    return np.asarray(x, dtype=float)


def as_array(x) -> np.ndarray:
    """Components of an octonion, a real scalar, or an (..., 8) array."""
    return _as_components(x)


def _wrap(result: np.ndarray, *inputs):
    if result.ndim == 1 and any(isinstance(i, Octonion) or np.isscalar(i) for i in inputs):
        return Octonion(result)
    return result


# -- public operations on either representation ------------------------------


def multiply(a, b):
    return _wrap(mul(as_array(a), as_array(b)), a, b)


def conjugate(a):
    return _wrap(conj(as_array(a)), a)


def scalar_product(a, b):
    out = inner(as_array(a), as_array(b))
    return float(out) if np.ndim(out) == 0 else out


def inverse(a):
    """``conj(a) / |a|^2``; zero raises ``DomainError``."""
    from .errors import DomainError

    try:
        return _wrap(inv(as_array(a)), a)
    except ZeroDivisionError as exc:
        raise DomainError(str(exc)) from None


def associator(a, b, c):
    return _wrap(assoc(as_array(a), as_array(b), as_array(c)), a, b, c)


def octonion_norm(a):
    out = norm(as_array(a))
    return float(out) if np.ndim(out) == 0 else out
