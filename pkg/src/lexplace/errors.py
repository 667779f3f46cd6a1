"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class LexPlaceError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(LexPlaceError, ValueError):
    """Malformed input: unknown vertex, bad file, infeasible replica count."""

    exit_code = 2


class ValidationError(InputError):
    """A structural check (multitree, untangled, cubic, ...) failed.

    ``check`` names the failed predicate and ``witness`` carries the
    offending vertices so callers can report them.
    """

    def __init__(self, check, witness=None, message=None):
        self.check = check
        self.witness = witness
        if message is None:
            message = f"{check} check failed"
            if witness is not None:
                message += f"; witness: {witness!r}"
        super().__init__(message)


class InvariantViolation(LexPlaceError, RuntimeError):
    """An internal guarantee did not hold. Always a bug or a bad precondition."""

    exit_code = 3
