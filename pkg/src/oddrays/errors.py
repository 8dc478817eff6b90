"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
status the command-line front end should use for it.
"""


class OddRaysError(Exception):
    code = "internal-error"
    exit_code = 5


class InputError(OddRaysError, ValueError):
    """Malformed or inconsistent input (variable counts, degrees, flags)."""

    code = "invalid-input"
    exit_code = 2


class ParseError(InputError):
    code = "parse-error"
    exit_code = 3

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class MatrixSizeError(InputError):
    code = "matrix-too-large"


class DegenerateSystemError(OddRaysError):
    """The solver could not certify or process the system as given."""

    code = "solver-degenerate"
    exit_code = 4

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RootFindingError(DegenerateSystemError):
    code = "root-finding-failed"


class InvariantViolation(OddRaysError):
    """A mathematical invariant the solver relies on was observed to fail."""

    code = "invariant-violated"
    exit_code = 5
