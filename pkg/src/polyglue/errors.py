class PolyglueError(Exception):
    """Base class for all library errors."""


class InputError(PolyglueError):
    """Malformed document, bad dimensions, unknown references."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class NotAPolytope(PolyglueError):
    """The cone handed to the polytope builder has lines or no interior."""


class NeedsDeeperDevelopment(PolyglueError):
    """A query touched cells whose neighbourhood has not been explored yet."""


class ConeLikeCell(PolyglueError):
    """Gallery construction ran into a cell with no facet disjoint from the entry facet."""

    def __init__(self, cell, facet):
        self.cell = cell
        self.facet = facet
        super().__init__(f"cell {cell} is cone-like with respect to facet {facet}")


class ConsistencyError(PolyglueError):
    """Two routes that must agree did not; indicates a bug or an invalid spec."""
