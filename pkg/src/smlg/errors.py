"""Exception hierarchy shared by all engines."""


class SmlgError(Exception):
    """Base class for every error raised by this package."""


class UsageError(SmlgError, ValueError):
    """A caller violated a documented precondition."""


class NotADag(SmlgError):
    pass


class NotLevelDag(SmlgError):
    pass


class ParseError(SmlgError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ScratchNotClean(SmlgError):
    """A gate that needs a |0> target found a 1 on some track."""


class StateCorruption(SmlgError):
    pass


class GenerationError(SmlgError):
    pass
