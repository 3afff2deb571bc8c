"""Exception types shared across the package."""

from __future__ import annotations


class LdncError(Exception):
    """Base class for every domain error raised by this package."""


class ModulusMismatchError(LdncError):
    """Two operands live over different prime fields."""


class ShapeMismatchError(LdncError):
    """Matrix shapes are not conformable for the requested operation."""


class InvalidNetworkError(LdncError):
    """An operation was asked to run on a structurally invalid network."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid network: {report}")


class NotLayeredError(LdncError):
    """The network admits no layer assignment with sources at layer 0."""


class CodeBindingError(LdncError):
    """A linear code does not match the layered network it is applied to."""


class SchemeShapeError(LdncError):
    """A time-indexed coding scheme has matrices of inconsistent shape."""


class BlockFormError(LdncError):
    """A layered code writes outside the bands a lifted code may use."""


class NonShiftGainError(LdncError):
    """The operation requires every channel gain to be a shift matrix."""


class ParseError(LdncError):
    """Malformed network, code, or message file."""
