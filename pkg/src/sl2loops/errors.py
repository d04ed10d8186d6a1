"""Exception hierarchy.

CLI exit codes hang off these classes: verification failures map to 1,
parse/schema problems to 2, precondition rejections to 3.
"""


class ToolkitError(Exception):
    exit_code = 1


class IncompatibleRings(ToolkitError):
    exit_code = 2


class NotAUnit(ToolkitError):
    """Raised by unit inversion; ``obstruction`` says why."""

    exit_code = 3

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class NotSpecial(ToolkitError):
    exit_code = 3


class PreconditionError(ToolkitError):
    exit_code = 3

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class InternalInconsistency(ToolkitError):
    """A construction produced output its own verifier rejects."""

    exit_code = 1


class VerificationFailed(ToolkitError):
    exit_code = 1

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class LoopRejected(VerificationFailed):
    pass


class DecompositionMismatch(InternalInconsistency):
    def __init__(self, message, expected=None, got=None):
        super().__init__(message)
        self.expected = expected
        self.got = got


class NotCongruent(PreconditionError):
    """A matrix is not the identity modulo the nilradical."""


class WrongLift(PreconditionError):
    """A proposed lift does not reduce to the given matrix."""


class NotUnimodular(PreconditionError):
    pass


class UnknownUnimodular(PreconditionError):
    """No witness supplied and none could be searched for."""


class OriginHit(PreconditionError):
    """A plane loop passes through the origin."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class RefineNeeded(ToolkitError):
    exit_code = 1


class SchemaError(ToolkitError):
    exit_code = 2


class ParseError(SchemaError):
    def __init__(self, message, line=1, column=1, text=None):
        super().__init__(f"{message} at line {line}, column {column}")
        self.msg = message
        self.line = line
        self.column = column
        self.text = text
