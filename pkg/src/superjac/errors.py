"""Exception hierarchy shared by every module."""


class SuperJacError(Exception):
    """Base class for all errors raised by superjac."""


class FieldMismatchError(SuperJacError, ValueError):
    pass


class ContextMismatchError(SuperJacError, ValueError):
    pass


class ParityError(SuperJacError, ValueError):
    """A generator image has the wrong parity (even variables need even
    images, odd variables odd images)."""


class PreconditionError(SuperJacError, ValueError):
    pass


class ParseError(SuperJacError, ValueError):
    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class InternalVerificationError(SuperJacError, RuntimeError):
    """A computed result failed its exact post-check. Always a bug."""
