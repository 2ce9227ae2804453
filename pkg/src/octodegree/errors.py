"""Exception hierarchy shared by every module."""

from __future__ import annotations


class OctoError(Exception):
    """Base class for all library errors."""


class DomainError(OctoError, ValueError):
    """Invalid input: bad parameters, unknown names, out-of-range indices."""


class SingularityError(OctoError, ArithmeticError):
    """The Cauchy kernel was evaluated too close to its pole."""


class ContractViolation(OctoError):
    """A precondition of an integral formula does not hold numerically.

    Raised for example when ``f - a`` vanishes at an integration node, or a tube
    would self-intersect.
    """


class OrientationError(OctoError, RuntimeError):
    """Per-node normals of one surface disagree about which side is outward."""


class OracleInconclusive(OctoError):
    """Newton found no preimage although the boundary winding is nonzero."""
