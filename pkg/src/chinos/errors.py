"""Exception types raised across the package."""


class ChinosError(Exception):
    """Base class for all package errors."""


class NullMove(ChinosError):
    """A move annihilated the state (zero norm), e.g. two hard-core creations."""


class DegenerateAngle(ChinosError, ValueError):
    """Angle outside the open interval where an operator family is non-degenerate."""


class RestrictionViolation(ChinosError, ValueError):
    """Bob's guess is closer than the minimal distance to Alice's guess."""


class IntelligenceViolation(ChinosError, ValueError):
    """A guess that cannot win given the player's own choice."""


class RootNotBracketed(ChinosError):
    """No sign change was found for a crossing-angle search."""


class DecompositionMismatch(ChinosError):
    """Block structure of a metric matrix differs from the expected partition."""


class ParseError(ChinosError, ValueError):
    """Malformed numeric cell in an input table."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {col})" if col is not None else ")")
        super().__init__(message + where)


class ShapeError(ChinosError, ValueError):
    """Input table does not have the expected dimensions."""
