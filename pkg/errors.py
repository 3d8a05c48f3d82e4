"""
Exception hierarchy for the digital net quality tool.
Each error carries the process exit code the CLI reports for it.
"""


class NetQualityError(Exception):
    """Base class for all tool errors."""

    exit_code = 1


class NetInputError(NetQualityError, ValueError):
    """Malformed net, point set, direction file or command-line flags."""

    exit_code = 2


class ResourceBoundError(NetQualityError):
    """An explicit enumeration or memory guard was exceeded."""

    exit_code = 3


class DisagreementError(NetQualityError):
    """Two algorithms (or an algorithm and an oracle) returned different results."""

    exit_code = 1


class InternalComputationError(NetQualityError):
    """An exactness invariant was violated; signals an implementation bug."""

    exit_code = 1


class ProjectionCapError(NetQualityError):
    """No qualifying monomial within the generalized enumerator's degree cap."""

    exit_code = 3
