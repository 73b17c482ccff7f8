"""Exception types shared across the package."""


class HLError(Exception):
    """Base class for all package errors."""


class InvalidArgument(HLError, ValueError):
    pass


class OutOfRange(HLError, ValueError):
    pass


class PoleError(HLError, ValueError):
    """Evaluation at a pole of the gamma function."""


class DomainError(HLError, ValueError):
    """Argument outside the domain where a representation is valid."""


class MethodFailure(HLError, RuntimeError):
    """A numerical method could not reach its accuracy target."""


class EvaluationError(HLError, RuntimeError):
    pass


class ConfigError(HLError, ValueError):
    pass


class DataError(HLError, ValueError):
    """Malformed input data; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)
