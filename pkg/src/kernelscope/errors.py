"""Exception types shared across the package."""


class KernelscopeError(Exception):
    """Base class for all package-specific errors."""


class OverflowSignal(KernelscopeError):
    """A map value left the representable floating-point range.

    Orbit-level callers treat this as "the orbit left every bounded set".
    """


class DegenerateParameter(KernelscopeError):
    """A closed form degenerates (division by zero / excluded parameter)."""


class EmptySet(KernelscopeError):
    """An operation that needs a nonempty set received an empty one."""


class GridMismatch(KernelscopeError):
    """Two masks on different grids were combined."""


class OutOfGrid(KernelscopeError):
    """A point lies outside the grid rectangle."""


class SeedNotHyperbolic(KernelscopeError):
    """The seed cell is not classified NonescapingHyperbolic."""
