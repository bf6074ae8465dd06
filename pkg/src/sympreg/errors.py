"""Exception types shared across the package."""

from __future__ import annotations


class DimensionError(ValueError):
    """Shapes or lengths that do not match an operation's contract."""


class SingularMatrixError(ArithmeticError):
    """A pivot fell below the singularity floor during a solve."""

    def __init__(self, pivot_index: int, pivot: float):
        super().__init__(
            f"matrix singular to tolerance at pivot {pivot_index} "
            f"(value {pivot:.3e})"
        )
        self.pivot_index = pivot_index
        self.pivot = pivot


class ExcludedPointError(ArithmeticError):
    """The discrete map is undefined at this step size."""

    def __init__(self, z: float, message: str | None = None):
        super().__init__(message or f"discrete map undefined at z = {z!r}")
        self.z = z


class PoleError(ExcludedPointError):
    """A stability-function denominator vanished."""


class SolverError(RuntimeError):
    """The implicit stage iteration failed to converge."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"stage solver did not converge within {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations
