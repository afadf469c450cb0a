"""Exception hierarchy shared by every module."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class NotAUnitError(InvalidInputError):
    """The base shares a factor with the modulus."""


class ResourceLimitError(RuntimeError):
    """A memory or time guard refused the request."""


class OrderFindingError(RuntimeError):
    """The measurement budget ran out before an order was verified."""

    def __init__(self, message, raw_outcomes=()):
        super().__init__(message)
        self.raw_outcomes = list(raw_outcomes)


class IndeterminateError(RuntimeError):
    """A verifier could not reach a decision within its resources."""


class CertificateError(ValueError):
    """Malformed or schema-violating certificate."""
