"""Exception hierarchy shared across the package."""


class ArcbemError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(ArcbemError):
    """Invalid or degenerate curve data."""


class QuadratureError(ArcbemError):
    """A quadrature self-check failed (insufficient order or bad panel pair)."""


class AssemblyError(ArcbemError):
    """Matrix assembly was asked for an unsupported combination."""


class PreconditionerError(ArcbemError):
    """A preconditioner factorization or build step failed."""


class BenchAssertionError(ArcbemError):
    """A benchmark-level assertion (stagnation, spread, ...) was violated."""
