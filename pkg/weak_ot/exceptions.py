class WeakOTError(Exception):
    pass


class DimensionMismatch(WeakOTError, ValueError):
    pass


class InvalidState(WeakOTError, ValueError):
    pass


class InvalidOperator(WeakOTError, ValueError):
    pass


class NotHermitian(InvalidOperator):
    pass


class OwnershipError(WeakOTError, PermissionError):
    pass


class StaleHandle(WeakOTError, LookupError):
    pass


class PreconditionViolation(WeakOTError, ValueError):
    pass


class DomainError(WeakOTError, ValueError):
    pass


class TranscriptParseError(WeakOTError, ValueError):
    """
    Raised on malformed transcript bytes.

    `line` and `column` are 1-based, `offset` is the 0-based byte offset of
    the offending line.
    """

    def __init__(self, message, line=None, column=None, offset=None):
        self.line = line
        self.column = column
        self.offset = offset
        if line is not None:
            message = '{message} (line {line}, column {column})'.format(
                message=message,
                line=line,
                column=column or 1,
            )
        super().__init__(message)


class ImproperlyConfigured(WeakOTError):
    pass


class AlreadyRegistered(WeakOTError):
    pass


class UnknownScenario(WeakOTError, KeyError):

    def __str__(self):
        return str(self.args[0]) if self.args else ''
