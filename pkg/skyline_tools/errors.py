class SkylineToolsError(Exception):
    """Base exception for every error raised by skyline-tools"""

    pass


class RangeQueryError(SkylineToolsError, IndexError):
    """Raised when a position, rank or index lies outside its domain"""

    pass


class ParameterError(SkylineToolsError, ValueError):
    """Raised when a construction parameter is invalid"""

    pass


class PointValidationError(SkylineToolsError, ValueError):
    """Raised when input points or edges violate their preconditions"""

    pass


class InputParseError(SkylineToolsError, ValueError):
    """Raised when a line of a points or queries file is malformed"""

    def __init__(self, line_number: int, line: str, reason: str):
        self.line_number = line_number
        self.line = line
        self.reason = reason
        super().__init__(
            f"line {line_number}: {reason}: {line.strip()!r}"
        )


class ContainerFormatError(SkylineToolsError):
    """Raised when an index container cannot be decoded"""

    pass


class ReductionInvariantError(SkylineToolsError, AssertionError):
    """Raised when a reduction query returns fewer than d skyline points"""

    pass
