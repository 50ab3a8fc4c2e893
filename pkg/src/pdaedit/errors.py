"""Exception types shared across the package."""


class InputError(ValueError):
    """An automaton, grammar, word, or document fails validation."""


class PreconditionError(ValueError):
    """An operation was invoked outside its contract."""


class ParseError(ValueError):
    """A document could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
