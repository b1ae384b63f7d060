"""Exception hierarchy shared by the geometry, metric and file-format code."""


class LayoutError(ValueError):
    """Base class for every error raised by panolayout."""


class DomainError(LayoutError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(LayoutError):
    """The input is well-formed but geometrically degenerate."""


class DegenerateMassError(DegenerateError):
    """A heatmap carries no usable mass."""

    def __init__(self, message="degenerate mass: total weighted mass is zero"):
        super().__init__(message)


class FormatError(LayoutError):
    """A file could not be parsed or violates its schema."""
