"""Error hierarchy shared by services, the API and the CLI."""


class LarchError(Exception):
    """Base class for all larchfit errors."""


class ArgumentError(LarchError, ValueError):
    """A caller-supplied argument violates a precondition."""


class DomainError(LarchError, ValueError):
    """Parameters fall outside the region where a quantity is defined."""


class DegenerateInputError(LarchError, ValueError):
    """The observed sample carries no information (e.g. all zeros)."""


class SingularMatrixError(LarchError, ArithmeticError):
    """A matrix that must be inverted is singular or too ill-conditioned."""

    def __init__(self, message: str, condition_number: float) -> None:
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.condition_number = condition_number


class ConfigError(LarchError):
    """A JSON configuration file could not be parsed or validated."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        location = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column
