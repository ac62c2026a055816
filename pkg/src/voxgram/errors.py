"""Exception types shared across the toolkit."""


class VoxgramError(Exception):
    """Base class for all toolkit errors."""


class FormatError(VoxgramError):
    """A JSON document does not match the expected wire format."""


class DuplicatePositionError(FormatError):
    """Two blocks occupy the same grid cell."""


class EmptyModelError(VoxgramError):
    """An example model must contain at least one block."""


class InvalidShapeError(VoxgramError):
    """A block set does not satisfy its shape specification.

    ``reason`` is one of ``"Incoherent"``, ``"NotPlanar"``, ``"NotRectangular"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class UnknownIdError(VoxgramError):
    """A shape, class, or session id does not exist."""


class DanglingReferenceError(FormatError):
    """A grammar document references a shape or class that is not defined."""


class ConflictingPlacementError(VoxgramError):
    """A rule application would write a different block type into an occupied cell."""


class NothingToUndoError(VoxgramError):
    """Undo was requested on a production with an empty history."""


class UnsupportedSpecError(VoxgramError):
    """The operation is not defined for this shape specification."""
