"""Exception hierarchy shared by all modules."""


class GifsError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class InvalidSystemError(GifsError):
    pass


class InvalidPathError(GifsError):
    pass


class EnumerationCapError(GifsError):
    """Raised when a path enumeration would exceed the configured cap."""


class PrecisionError(GifsError):
    pass


class AmbiguityError(GifsError):
    """The eigenvalue-1 eigenspace of M(delta) is not one-dimensional."""


class ParseError(GifsError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
