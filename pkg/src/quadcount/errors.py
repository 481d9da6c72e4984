class QuadcountError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for this category."""

    exit_code = 1


class ArgumentError(QuadcountError, ValueError):
    exit_code = 2


class ParseError(QuadcountError, ValueError):
    exit_code = 3

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConsistencyError(QuadcountError, ArithmeticError):
    """An internal identity failed; signals a bug or corrupted input."""

    exit_code = 4


class SizeError(QuadcountError):
    exit_code = 5


class InputError(QuadcountError, OSError):
    exit_code = 6


class PlanError(QuadcountError):
    exit_code = 7


class ContractError(QuadcountError, ValueError):
    """A caller broke an operation's precondition."""

    exit_code = 8
