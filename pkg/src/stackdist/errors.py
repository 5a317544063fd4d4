"""Exception types shared across the package.

Parameter problems raise :class:`InvalidParameterError` (a ``ValueError``)
and map to CLI exit code 2; everything below signals an internal fault and
maps to exit code 3.
"""


class InvalidParameterError(ValueError):
    """Arguments outside a function's documented domain."""


class CapExceededError(InvalidParameterError):
    """Brute-force enumeration requested beyond the configured cap."""


class ConsistencyError(RuntimeError):
    """An exact identity failed internally (e.g. a negative final count)."""


class SolverError(RuntimeError):
    """Base class for singularity-solver faults."""


class NoRootError(SolverError):
    """The scan found no sign change inside the search interval."""


class AmbiguousRootError(SolverError):
    """More than one root inside the first bracket after refinement."""


class DegenerateRootError(SolverError):
    """The implicit-function denominator vanishes at the root."""
